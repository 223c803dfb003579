#include "fdhomog/ddplot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fdhomog/error.hpp"
#include "fdhomog/parallel.hpp"

namespace fdhomog {

std::string_view to_string(NullScheme scheme) noexcept {
  return scheme == NullScheme::LiteralResample ? "literal-H*" : "relabel";
}

std::optional<NullScheme> parse_null_scheme(std::string_view name) noexcept {
  if (name == "literal-H*" || name == "literal") return NullScheme::LiteralResample;
  if (name == "relabel") return NullScheme::Relabel;
  return std::nullopt;
}

std::string dd_test_name(DepthMethod method) {
  switch (method) {
    case DepthMethod::FM: return "DD-FM";
    case DepthMethod::RP: return "DD-RP";
    case DepthMethod::FD2: return "DD-FD2";
  }
  return "DD";
}

namespace {

// Depths of every pooled curve w.r.t. the original f (first n) and g (rest).
std::vector<DDPoint> observed_points(const FunctionalSample& pooled, std::size_t n, const DepthSpec& spec) {
  const std::size_t total = pooled.size();
  std::vector<Multiplicity> sets(2, Multiplicity(total, 0u));
  for (std::size_t i = 0; i < total; ++i) (i < n ? sets[0] : sets[1])[i] = 1u;
  auto depths = multiset_depths(pooled, pooled, sets, spec);
  std::vector<DDPoint> points(total);
  for (std::size_t i = 0; i < total; ++i) points[i] = {depths[0][i], depths[1][i]};
  return points;
}

bool constant_regressor(std::span<const DDPoint> points) {
  return std::all_of(points.begin(), points.end(),
                     [&](const DDPoint& p) { return p.depth_g == points.front().depth_g; });
}

std::vector<std::size_t> draw_indices(RngSeed seed, std::size_t count) {
  Engine engine = make_engine(seed);
  std::uniform_int_distribution<std::size_t> pick(0, count - 1);
  std::vector<std::size_t> idx(count);
  for (auto& i : idx) i = pick(engine);
  return idx;
}

}  // namespace

DDPlot build_ddplot(const FunctionalSample& f, const FunctionalSample& g, const DepthSpec& spec) {
  FunctionalSample pooled = concatenate(f, g);
  return DDPlot{observed_points(pooled, f.size(), spec), f.size(), g.size(), spec.method};
}

OlsFit fit_ols(std::span<const DDPoint> points) {
  const std::size_t count = points.size();
  if (count < 3) throw Error(ErrorCode::InvalidArgument, "OLS fit needs at least 3 points");
  if (constant_regressor(points))
    throw Error(ErrorCode::DegenerateRegressor, "all regressor (second-sample depth) values are equal");

  const double size = static_cast<double>(count);
  double sum_x = 0.0, sum_y = 0.0, sum_xx = 0.0;
  for (const auto& p : points) {
    sum_x += p.depth_g;
    sum_y += p.depth_f;
    sum_xx += p.depth_g * p.depth_g;
  }
  const double mean_x = sum_x / size;
  const double mean_y = sum_y / size;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    const double dx = p.depth_g - mean_x;
    sxx += dx * dx;
    sxy += dx * (p.depth_f - mean_y);
  }

  OlsFit fit;
  fit.beta1 = sxy / sxx;
  fit.beta0 = mean_y - fit.beta1 * mean_x;
  fit.residuals.resize(count);
  double ssr = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double u = points[i].depth_f - fit.beta0 - fit.beta1 * points[i].depth_g;
    fit.residuals[i] = u;
    ssr += u * u;
  }
  const double var1 = ssr / ((size - 2.0) * sxx);
  fit.se1 = std::sqrt(var1);
  fit.se0 = std::sqrt(var1 * sum_xx / size);
  return fit;
}

TStatistics t_statistics(const OlsFit& fit) {
  if (fit.degenerate()) throw Error(ErrorCode::DegenerateFit, "zero residual variance: standard errors vanish");
  return {fit.beta0 / fit.se0, (fit.beta1 - 1.0) / fit.se1};
}

double bootstrap_two_sided_p(double observed, std::span<const double> replicates) {
  if (replicates.empty()) throw Error(ErrorCode::InvalidArgument, "no bootstrap replicates");
  std::size_t above = 0, below = 0;
  for (double t : replicates) {
    above += t > observed ? 1 : 0;
    below += t < observed ? 1 : 0;
  }
  const double b = static_cast<double>(replicates.size());
  return 2.0 * std::min(static_cast<double>(above) / b, static_cast<double>(below) / b);
}

HolmDecision holm_bonferroni(double p0, double p1, double alpha) {
  const double first = std::min(p0, p1);
  const double second = std::max(p0, p1);
  return {std::min({2.0 * first, second, 1.0}), first < alpha / 2.0 || second < alpha};
}

TestResult bootstrap_test(const FunctionalSample& f, const FunctionalSample& g, const BootstrapOptions& options) {
  require_same_grid(f, g);
  if (options.num_boot < 50) throw Error(ErrorCode::InvalidArgument, "bootstrap needs B >= 50");
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");

  const std::size_t n = f.size();
  const std::size_t total = n + g.size();
  const FunctionalSample pooled = concatenate(f, g);

  TestResult result;
  result.method = dd_test_name(options.depth.method);
  result.n = n;
  result.m = g.size();
  result.alpha = options.alpha;
  result.num_boot = options.num_boot;
  result.seed = options.seed;
  result.null_scheme = std::string(to_string(options.null_scheme));

  const std::vector<DDPoint> observed = observed_points(pooled, n, options.depth);
  const OlsFit fit = fit_ols(observed);

  TStatistics stat;
  if (fit.degenerate()) {
    constexpr double kDiagonalTol = 1e-12;
    if (std::abs(fit.beta0) <= kDiagonalTol && std::abs(fit.beta1 - 1.0) <= kDiagonalTol) {
      // Every point on the diagonal: T is 0/0 and the evidence for H0 is maximal.
      result.p0 = 1.0;
      result.p1 = 1.0;
      result.p_adjusted = 1.0;
      result.reject = false;
      return result;
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    stat.t0 = fit.beta0 == 0.0 ? 0.0 : std::copysign(inf, fit.beta0);
    stat.t1 = fit.beta1 == 1.0 ? 0.0 : std::copysign(inf, fit.beta1 - 1.0);
  } else {
    stat = t_statistics(fit);
  }

  const std::size_t num_boot = options.num_boot;
  const std::size_t max_draws = 10 * num_boot;
  std::vector<double> t0s(num_boot), t1s(num_boot);
  std::vector<std::uint64_t> attempt(num_boot, 0);
  std::vector<std::size_t> pending(num_boot);
  for (std::size_t b = 0; b < num_boot; ++b) pending[b] = b;
  std::size_t draws = 0;

  // Replicate b, attempt a uses the substream (seed, b, a): redraws never
  // disturb other replicates, so the outcome does not depend on scheduling.
  while (!pending.empty()) {
    if (draws + pending.size() > max_draws)
      throw Error(ErrorCode::InsufficientVariation,
                  "too many degenerate bootstrap replicates (" + std::to_string(draws) + " draws)");
    draws += pending.size();

    std::vector<std::vector<std::size_t>> indices(pending.size());
    for (std::size_t r = 0; r < pending.size(); ++r)
      indices[r] = draw_indices(derive_seed(options.seed, {pending[r], attempt[pending[r]]}), total);

    std::vector<std::vector<DDPoint>> replicate_points(pending.size(), std::vector<DDPoint>(total));
    if (options.null_scheme == NullScheme::LiteralResample) {
      for (std::size_t r = 0; r < pending.size(); ++r) {
        for (std::size_t k = 0; k < total; ++k) replicate_points[r][k] = observed[indices[r][k]];
      }
    } else {
      std::vector<Multiplicity> sets(2 * pending.size(), Multiplicity(total, 0u));
      std::vector<std::vector<char>> needed(2 * pending.size(), std::vector<char>(total, 0));
      for (std::size_t r = 0; r < pending.size(); ++r) {
        for (std::size_t k = 0; k < total; ++k) {
          const std::size_t i = indices[r][k];
          ++sets[2 * r + (k < n ? 0 : 1)][i];
          needed[2 * r][i] = needed[2 * r + 1][i] = 1;
        }
      }
      MultisetOptions mopts;
      mopts.needed = needed;
      const auto depths = multiset_depths(pooled, pooled, sets, options.depth, mopts);
      for (std::size_t r = 0; r < pending.size(); ++r) {
        for (std::size_t k = 0; k < total; ++k) {
          const std::size_t i = indices[r][k];
          replicate_points[r][k] = {depths[2 * r][i], depths[2 * r + 1][i]};
        }
      }
    }

    std::vector<char> ok(pending.size(), 0);
    parallel_for(pending.size(), [&](std::size_t r) {
      const auto& pts = replicate_points[r];
      if (constant_regressor(pts)) return;
      OlsFit rep = fit_ols(pts);
      if (rep.degenerate()) return;
      TStatistics t = t_statistics(rep);
      t0s[pending[r]] = t.t0;
      t1s[pending[r]] = t.t1;
      ok[r] = 1;
    });

    std::vector<std::size_t> still;
    for (std::size_t r = 0; r < pending.size(); ++r) {
      if (!ok[r]) {
        ++attempt[pending[r]];
        still.push_back(pending[r]);
      }
    }
    pending = std::move(still);
  }

  result.t0 = stat.t0;
  result.t1 = stat.t1;
  result.p0 = bootstrap_two_sided_p(stat.t0, t0s);
  result.p1 = bootstrap_two_sided_p(stat.t1, t1s);
  const HolmDecision decision = holm_bonferroni(result.p0, *result.p1, options.alpha);
  result.p_adjusted = decision.p_adjusted;
  result.reject = decision.reject;
  return result;
}

}  // namespace fdhomog
