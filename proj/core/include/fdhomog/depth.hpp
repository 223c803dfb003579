#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "fdhomog/curves.hpp"
#include "fdhomog/rng.hpp"

namespace fdhomog {

enum class DepthMethod { FM, RP, FD2 };

std::string_view to_string(DepthMethod method) noexcept;
std::optional<DepthMethod> parse_depth_method(std::string_view name) noexcept;

struct RpConfig {
  std::size_t num_projections = 50;
  RngSeed direction_seed{};
};

/// How many unordered grid-point pairs (t_a, t_b), a < b, the FD2 depth averages over.
class PairBudget {
 public:
  static constexpr std::size_t kAutoLimit = 2000;

  /// Every pair if there are at most kAutoLimit of them, otherwise kAutoLimit sampled pairs.
  static PairBudget automatic() noexcept { return PairBudget(Kind::Auto, kAutoLimit); }
  static PairBudget all() noexcept { return PairBudget(Kind::All, 0); }
  /// A sample of `count` pairs; a count above the number of pairs means all of them.
  static PairBudget limit(std::size_t count);

  bool is_all() const noexcept { return kind_ == Kind::All; }
  bool is_auto() const noexcept { return kind_ == Kind::Auto; }
  std::size_t count() const noexcept { return count_; }

 private:
  enum class Kind { Auto, All, Count };
  PairBudget(Kind kind, std::size_t count) noexcept : kind_(kind), count_(count) {}

  Kind kind_;
  std::size_t count_;
};

struct Fd2Config {
  PairBudget pair_budget = PairBudget::automatic();
  RngSeed pair_seed{};
};

/// A depth method together with its configuration.
struct DepthSpec {
  DepthMethod method = DepthMethod::FM;
  RpConfig rp{};
  Fd2Config fd2{};

  static DepthSpec fm() { return {}; }
  static DepthSpec random_projection(RpConfig config) { return {DepthMethod::RP, config, {}}; }
  static DepthSpec integrated(Fd2Config config) { return {DepthMethod::FD2, {}, config}; }
};

struct DepthVector {
  std::vector<double> values;
  std::size_t reference_size = 0;
  DepthMethod method = DepthMethod::FM;
};

/// 1 - |1/2 - F(x0)| with F(x0) = #{r <= x0} / n.
double univariate_fm_depth(double x0, std::span<const double> reference);

/// Fraiman-Muniz depth: grid average of the univariate depth at each t_j.
DepthVector fm_depth(const FunctionalSample& eval, const FunctionalSample& reference);

/// Random projection depth: mean over directions v of min{F(r), 1 - F(r)}
/// with r the trapezoid-rule integral of v(t) x(t).
DepthVector rp_depth(const FunctionalSample& eval, const FunctionalSample& reference, const RpConfig& config);

/// Second-order integrated depth: mean over grid-point pairs of the bivariate
/// halfspace depth of (x(t_a), x(t_b)).
DepthVector fd2_depth(const FunctionalSample& eval, const FunctionalSample& reference, const Fd2Config& config);

DepthVector compute_depth(const FunctionalSample& eval, const FunctionalSample& reference, const DepthSpec& spec);

/// Configuration whose random parts (RP directions, FD2 pair sample) are
/// derived from `seed`: streams 1 and 2 respectively.
DepthSpec seeded_depth_spec(DepthMethod method, RngSeed seed, std::size_t num_projections = 50,
                            PairBudget pair_budget = PairBudget::automatic());

/// Unit-norm white-noise directions on the grid (trapezoid inner product).
std::vector<std::vector<double>> rp_directions(const Grid& grid, const RpConfig& config);

/// The grid-point pairs FD2 averages over, in lexicographic order.
std::vector<std::pair<std::size_t, std::size_t>> select_grid_pairs(std::size_t grid_size, const Fd2Config& config);

/// Multiplicity of every pool curve in a reference multiset.
using Multiplicity = std::vector<std::uint32_t>;

struct MultisetOptions {
  /// Treat each query curve as one extra member of every reference multiset.
  bool reference_includes_query = false;
  /// Optional, one entry per multiset: nonzero where the query is needed.
  /// Skipped entries are left as NaN.
  std::span<const std::vector<char>> needed{};
};

/// Depths of every query curve with respect to each multiset drawn from `pool`.
/// result[s][q] is the depth of query q in multiset s. For a multiset of unit
/// weights this equals compute_depth(queries, pool, spec) bit for bit.
std::vector<std::vector<double>> multiset_depths(const FunctionalSample& queries, const FunctionalSample& pool,
                                                 std::span<const Multiplicity> multisets, const DepthSpec& spec,
                                                 const MultisetOptions& options = {});

}  // namespace fdhomog
