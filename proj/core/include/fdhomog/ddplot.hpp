#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fdhomog/curves.hpp"
#include "fdhomog/depth.hpp"
#include "fdhomog/rng.hpp"

namespace fdhomog {

struct DDPoint {
  double depth_f = 0.0;  // depth w.r.t. the first sample
  double depth_g = 0.0;  // depth w.r.t. the second sample

  friend bool operator==(const DDPoint&, const DDPoint&) = default;
};

struct DDPlot {
  std::vector<DDPoint> points;  // first sample's curves, then the second's
  std::size_t n = 0;
  std::size_t m = 0;
  DepthMethod method = DepthMethod::FM;
};

/// Depth of every pooled curve w.r.t. f and w.r.t. g, same method on both axes.
DDPlot build_ddplot(const FunctionalSample& f, const FunctionalSample& g, const DepthSpec& spec);

/// Least-squares fit of depth_f = beta0 + beta1 * depth_g + u.
struct OlsFit {
  double beta0 = 0.0;
  double beta1 = 0.0;
  double se0 = 0.0;
  double se1 = 0.0;
  std::vector<double> residuals;

  /// Zero residual variance: the standard errors vanish and T is undefined.
  bool degenerate() const noexcept { return !(se0 > 0.0) || !(se1 > 0.0); }
};

/// Textbook OLS estimates with
///   se1^2 = sum u^2 / ((N - 2) sum (x - mean x)^2)
///   se0^2 = se1^2 * sum x^2 / N
/// where x = depth_g and N is the number of points. Needs N >= 3 and a
/// non-constant regressor (otherwise DegenerateRegressor).
OlsFit fit_ols(std::span<const DDPoint> points);
inline OlsFit fit_ols(const DDPlot& dd) { return fit_ols(dd.points); }

struct TStatistics {
  double t0 = 0.0;  // beta0 / se0
  double t1 = 0.0;  // (beta1 - 1) / se1
};

/// Throws DegenerateFit when a standard error is zero.
TStatistics t_statistics(const OlsFit& fit);

/// How bootstrap DD-plots are formed under the null.
enum class NullScheme {
  /// Resample the pooled curves; reference samples stay the original f and g.
  LiteralResample,
  /// Resample the pooled curves; the first n become f*, the rest g*.
  Relabel,
};

std::string_view to_string(NullScheme scheme) noexcept;
std::optional<NullScheme> parse_null_scheme(std::string_view name) noexcept;

/// 2 min{#(T* > T), #(T* < T)} / B. Ties count toward neither tail.
double bootstrap_two_sided_p(double observed, std::span<const double> replicates);

struct HolmDecision {
  double p_adjusted = 1.0;  // min{2 p_[1], p_[2]}, capped at 1
  bool reject = false;      // p_[1] < alpha/2 or p_[2] < alpha
};

HolmDecision holm_bonferroni(double p0, double p1, double alpha);

struct TestResult {
  std::string method;
  std::size_t n = 0;
  std::size_t m = 0;
  std::optional<double> t0;
  std::optional<double> t1;
  double p0 = 1.0;
  std::optional<double> p1;
  double p_adjusted = 1.0;
  bool reject = false;
  double alpha = 0.05;
  std::size_t num_boot = 0;
  RngSeed seed{};
  std::string null_scheme;
};

struct BootstrapOptions {
  DepthSpec depth{};
  double alpha = 0.05;
  std::size_t num_boot = 500;
  RngSeed seed{};
  NullScheme null_scheme = NullScheme::LiteralResample;
};

/// Bootstrap-t test of beta0 = 0 and beta1 = 1 on the DD-plot of (f, g),
/// combined by Holm-Bonferroni. Replicates whose regressor is constant or
/// whose fit is exact are redrawn, up to 10 B draws in total.
TestResult bootstrap_test(const FunctionalSample& f, const FunctionalSample& g, const BootstrapOptions& options);

/// "DD-FM", "DD-RP", "DD-FD2".
std::string dd_test_name(DepthMethod method);

}  // namespace fdhomog
