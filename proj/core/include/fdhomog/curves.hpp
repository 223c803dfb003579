#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fdhomog/rng.hpp"

namespace fdhomog {

/// Strictly increasing, finite evaluation points shared by every curve of a sample.
class Grid {
 public:
  explicit Grid(std::vector<double> points);

  std::span<const double> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  double operator[](std::size_t j) const noexcept { return points_[j]; }
  double front() const noexcept { return points_.front(); }
  double back() const noexcept { return points_.back(); }

  /// Quadrature weights w_j with sum_j w_j f(t_j) the trapezoid rule on this grid.
  std::vector<double> trapezoid_weights() const;

 private:
  std::vector<double> points_;
};

/// Uniform grid of `count` points from a to b inclusive.
Grid make_grid(double a, double b, std::size_t count);

/// Same length and every point within `tolerance`.
bool grids_match(const Grid& lhs, const Grid& rhs, double tolerance = 1e-9);

/// n curves observed on a common grid, stored row-major (curve i, grid point j).
class FunctionalSample {
 public:
  FunctionalSample(Grid grid, std::vector<double> values, std::vector<std::string> labels = {});

  static FunctionalSample from_rows(Grid grid, const std::vector<std::vector<double>>& rows,
                                    std::vector<std::string> labels = {});

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size() / grid_.size(); }
  std::size_t grid_size() const noexcept { return grid_.size(); }

  std::span<const double> curve(std::size_t i) const noexcept {
    return {values_.data() + i * grid_.size(), grid_.size()};
  }
  double value(std::size_t i, std::size_t j) const noexcept { return values_[i * grid_.size() + j]; }
  std::span<const double> values() const noexcept { return values_; }

  bool has_labels() const noexcept { return !labels_.empty(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Curves at the given row indices (repeats allowed), labels carried along.
  FunctionalSample subset(std::span<const std::size_t> rows) const;

  /// Copy with the constant c added to every value.
  FunctionalSample shifted(double c) const;

 private:
  Grid grid_;
  std::vector<double> values_;
  std::vector<std::string> labels_;
};

/// The pooled sample: curves of a followed by curves of b. Grids must match.
FunctionalSample concatenate(const FunctionalSample& a, const FunctionalSample& b);

/// Throws GridMismatch unless the two samples share a grid (1e-9 per point).
void require_same_grid(const FunctionalSample& a, const FunctionalSample& b);

enum class MeanFunction {
  Peak32,  // 30 t^{3/2} (1 - t)
  Peak12,  // 30 t (1 - t)^2
};

double evaluate(MeanFunction mean, double t) noexcept;
std::string_view to_string(MeanFunction mean) noexcept;
std::optional<MeanFunction> parse_mean_function(std::string_view name) noexcept;

/// x(t) = mean(t) + delta + e(t), e a centred Gaussian process with
/// covariance amp * exp(-rate |s - t|).
struct ModelSpec {
  MeanFunction mean = MeanFunction::Peak32;
  double delta = 0.0;
  double amp = 0.3;
  double rate = 3.33;

  void validate() const;
  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Curve i is drawn from the substream derive_seed(seed, i), so the first k
/// curves do not depend on n.
FunctionalSample simulate_sample(const ModelSpec& spec, std::size_t n, const Grid& grid, RngSeed seed);

struct CsvSchema {
  enum class LabelColumn { Auto, Present, Absent };
  /// Auto: a first header cell that is not a number (e.g. "label") marks a label column.
  LabelColumn label_column = LabelColumn::Auto;
  char delimiter = ',';
};

FunctionalSample read_sample_csv(std::istream& in, const CsvSchema& schema = {});
FunctionalSample load_sample_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

/// Header of grid values (prefixed by "label" if the sample is labelled),
/// then one row per curve; numbers with 17 significant digits.
void write_sample_csv(std::ostream& out, const FunctionalSample& sample);
void write_sample_csv(const std::filesystem::path& path, const FunctionalSample& sample);

/// (curves labelled `label`, all other curves). Throws EmptyGroup if either is empty.
std::pair<FunctionalSample, FunctionalSample> split_by_label(const FunctionalSample& sample,
                                                             std::string_view label);

}  // namespace fdhomog
