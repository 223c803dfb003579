#include "fdhomog/flores.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fdhomog/error.hpp"
#include "fdhomog/parallel.hpp"

namespace fdhomog {
namespace {

std::size_t first_argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

std::vector<double> augmented_depths(const FunctionalSample& g, const FunctionalSample& f, const DepthSpec& spec) {
  require_same_grid(g, f);
  Multiplicity ones(f.size(), 1u);
  MultisetOptions options;
  options.reference_includes_query = true;
  auto rows = multiset_depths(g, f, std::span<const Multiplicity>(&ones, 1), spec, options);
  return std::move(rows.front());
}

double depth_in_augmented(std::span<const double> g_curve, const FunctionalSample& f, const DepthSpec& spec) {
  if (g_curve.size() != f.grid_size())
    throw Error(ErrorCode::GridMismatch, "curve length does not match the sample grid");
  FunctionalSample single(f.grid(), std::vector<double>(g_curve.begin(), g_curve.end()));
  return augmented_depths(single, f, spec).front();
}

FloresStats flores_statistics(const FunctionalSample& f, const FunctionalSample& g, const DepthSpec& spec) {
  require_same_grid(f, g);
  const auto f_in_f = augmented_depths(f, f, spec);
  const auto g_in_g = augmented_depths(g, g, spec);
  const auto g_in_f = augmented_depths(g, f, spec);

  FloresStats stats;
  stats.deepest_in_g = first_argmax(g_in_g);
  stats.deepest_of_g_in_f = first_argmax(g_in_f);
  const std::size_t deepest_in_f = first_argmax(f_in_f);

  const double p1_ff = f_in_f[deepest_in_f];
  const double p1_gg = g_in_g[stats.deepest_in_g];
  stats.p1 = g_in_f[stats.deepest_in_g];
  stats.p2 = p1_ff - stats.p1;
  stats.p3 = g_in_f[stats.deepest_of_g_in_f];
  stats.p4 = std::abs(stats.p3 - p1_ff) * std::abs(stats.p3 - p1_gg);
  return stats;
}

TestResult flores_test(const FunctionalSample& f, const FunctionalSample& g, const FloresOptions& options) {
  require_same_grid(f, g);
  if (options.num_boot < 50) throw Error(ErrorCode::InvalidArgument, "bootstrap needs B >= 50");
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");

  const FunctionalSample pooled = concatenate(f, g);
  const std::size_t total = pooled.size();
  const double observed = flores_statistics(f, g, options.depth).p4;

  std::vector<char> exceed(options.num_boot, 0);
  parallel_for(options.num_boot, [&](std::size_t b) {
    Engine engine = make_engine(derive_seed(options.seed, b));
    std::uniform_int_distribution<std::size_t> pick(0, total - 1);
    std::vector<std::size_t> fi(f.size()), gi(g.size());
    for (auto& i : fi) i = pick(engine);
    for (auto& i : gi) i = pick(engine);
    const double s = flores_statistics(pooled.subset(fi), pooled.subset(gi), options.depth).p4;
    exceed[b] = s >= observed ? 1 : 0;
  });

  const auto hits = static_cast<double>(std::count(exceed.begin(), exceed.end(), char{1}));
  TestResult result;
  result.method = "Flores";
  result.n = f.size();
  result.m = g.size();
  result.t0 = observed;
  result.p0 = hits / static_cast<double>(options.num_boot);
  result.p_adjusted = result.p0;
  result.reject = result.p0 < options.alpha;
  result.alpha = options.alpha;
  result.num_boot = options.num_boot;
  result.seed = options.seed;
  result.null_scheme = "pooled";
  return result;
}

}  // namespace fdhomog
