#include "fdhomog/depth.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <string>

#include "fdhomog/error.hpp"
#include "fdhomog/halfspace.hpp"
#include "fdhomog/parallel.hpp"

namespace fdhomog {

std::string_view to_string(DepthMethod method) noexcept {
  switch (method) {
    case DepthMethod::FM: return "fm";
    case DepthMethod::RP: return "rp";
    case DepthMethod::FD2: return "fd2";
  }
  return "fm";
}

std::optional<DepthMethod> parse_depth_method(std::string_view name) noexcept {
  if (name == "fm") return DepthMethod::FM;
  if (name == "rp") return DepthMethod::RP;
  if (name == "fd2") return DepthMethod::FD2;
  return std::nullopt;
}

PairBudget PairBudget::limit(std::size_t count) {
  if (count == 0) throw Error(ErrorCode::InvalidArgument, "pair budget must be at least 1");
  return PairBudget(Kind::Count, count);
}

namespace {

inline double fm_univariate(std::uint64_t at_or_below, std::uint64_t total) {
  double cdf = static_cast<double>(at_or_below) / static_cast<double>(total);
  return 1.0 - std::abs(0.5 - cdf);
}

inline double rp_univariate(std::uint64_t at_or_below, std::uint64_t total) {
  double cdf = static_cast<double>(at_or_below) / static_cast<double>(total);
  return std::min(cdf, 1.0 - cdf);
}

struct MultisetLayout {
  std::vector<std::uint64_t> totals;  // per multiset, including the query when requested
  std::uint64_t query_extra = 0;
};

MultisetLayout check_multisets(const FunctionalSample& pool, std::span<const Multiplicity> multisets,
                               const MultisetOptions& options) {
  MultisetLayout layout;
  layout.query_extra = options.reference_includes_query ? 1 : 0;
  if (!options.needed.empty() && options.needed.size() != multisets.size())
    throw Error(ErrorCode::InvalidArgument, "query mask count must match multiset count");
  for (const auto& m : multisets) {
    if (m.size() != pool.size())
      throw Error(ErrorCode::InvalidArgument, "multiplicity vector length must equal the pool size");
    std::uint64_t total = std::accumulate(m.begin(), m.end(), std::uint64_t{0}) + layout.query_extra;
    if (total == 0) throw Error(ErrorCode::InvalidArgument, "reference multiset is empty");
    layout.totals.push_back(total);
  }
  return layout;
}

bool is_needed(const MultisetOptions& options, std::size_t s, std::size_t q) {
  return options.needed.empty() || options.needed[s][q] != 0;
}

// Shared by FM (one "feature" per grid point) and RP (one per projection):
// rank queries among pool values feature by feature and average a univariate
// depth of the weighted empirical CDF.
template <class Univariate>
std::vector<std::vector<double>> ranked_feature_depths(const std::vector<std::vector<double>>& pool_features,
                                                       const std::vector<std::vector<double>>& query_features,
                                                       std::size_t num_queries, std::span<const Multiplicity> multisets,
                                                       const MultisetLayout& layout, const MultisetOptions& options,
                                                       Univariate univariate) {
  const std::size_t num_sets = multisets.size();
  const std::size_t pool_size = multisets.empty() ? 0 : multisets.front().size();
  std::vector<std::vector<double>> acc(num_sets, std::vector<double>(num_queries, 0.0));

  std::vector<std::uint32_t> order(pool_size);
  std::vector<double> sorted(pool_size);
  std::vector<std::size_t> rank(num_queries);
  std::vector<std::uint64_t> cumulative(pool_size + 1);

  for (std::size_t f = 0; f < pool_features.size(); ++f) {
    const auto& values = pool_features[f];
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return values[a] < values[b] || (values[a] == values[b] && a < b);
    });
    for (std::size_t k = 0; k < pool_size; ++k) sorted[k] = values[order[k]];
    for (std::size_t q = 0; q < num_queries; ++q) {
      rank[q] = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), query_features[f][q]) -
                                         sorted.begin());
    }
    for (std::size_t s = 0; s < num_sets; ++s) {
      const auto& w = multisets[s];
      cumulative[0] = 0;
      for (std::size_t k = 0; k < pool_size; ++k) cumulative[k + 1] = cumulative[k] + w[order[k]];
      for (std::size_t q = 0; q < num_queries; ++q) {
        if (!is_needed(options, s, q)) continue;
        acc[s][q] += univariate(cumulative[rank[q]] + layout.query_extra, layout.totals[s]);
      }
    }
  }

  const double features = static_cast<double>(pool_features.size());
  for (std::size_t s = 0; s < num_sets; ++s) {
    for (std::size_t q = 0; q < num_queries; ++q) {
      acc[s][q] = is_needed(options, s, q) ? acc[s][q] / features : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return acc;
}

std::vector<std::vector<double>> columns_of(const FunctionalSample& sample) {
  std::vector<std::vector<double>> cols(sample.grid_size(), std::vector<double>(sample.size()));
  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (std::size_t j = 0; j < sample.grid_size(); ++j) cols[j][i] = sample.value(i, j);
  }
  return cols;
}

std::vector<std::vector<double>> projections_of(const FunctionalSample& sample,
                                                const std::vector<std::vector<double>>& directions,
                                                const std::vector<double>& quad) {
  std::vector<std::vector<double>> proj(directions.size(), std::vector<double>(sample.size()));
  for (std::size_t d = 0; d < directions.size(); ++d) {
    for (std::size_t i = 0; i < sample.size(); ++i) {
      auto x = sample.curve(i);
      double r = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) r += quad[j] * directions[d][j] * x[j];
      proj[d][i] = r;
    }
  }
  return proj;
}

std::vector<std::vector<double>> fd2_multiset_depths(const FunctionalSample& queries, const FunctionalSample& pool,
                                                     std::span<const Multiplicity> multisets,
                                                     const Fd2Config& config, const MultisetLayout& layout,
                                                     const MultisetOptions& options) {
  const auto pairs = select_grid_pairs(pool.grid_size(), config);
  const std::size_t num_sets = multisets.size();
  const std::size_t num_queries = queries.size();
  const std::size_t pool_size = pool.size();

  std::vector<std::vector<Point2>> clouds(pairs.size(), std::vector<Point2>(pool_size));
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (std::size_t k = 0; k < pool_size; ++k) {
      clouds[p][k] = {pool.value(k, pairs[p].first), pool.value(k, pairs[p].second)};
    }
  }

  std::vector<std::vector<double>> acc(num_sets, std::vector<double>(num_queries, 0.0));
  parallel_for(num_queries, [&](std::size_t q) {
    std::vector<std::size_t> active;
    for (std::size_t s = 0; s < num_sets; ++s) {
      if (is_needed(options, s, q)) active.push_back(s);
    }
    if (active.empty()) return;
    AngularSweep sweep;
    std::vector<double> sums(active.size(), 0.0);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      Point2 point{queries.value(q, pairs[p].first), queries.value(q, pairs[p].second)};
      sweep.build(point, clouds[p]);
      for (std::size_t a = 0; a < active.size(); ++a) {
        const std::size_t s = active[a];
        std::uint64_t count = sweep.min_halfplane_weight(multisets[s], layout.query_extra);
        sums[a] += static_cast<double>(count) / static_cast<double>(layout.totals[s]);
      }
    }
    for (std::size_t a = 0; a < active.size(); ++a) acc[active[a]][q] = sums[a];
  });

  const double num_pairs = static_cast<double>(pairs.size());
  for (std::size_t s = 0; s < num_sets; ++s) {
    for (std::size_t q = 0; q < num_queries; ++q) {
      acc[s][q] = is_needed(options, s, q) ? acc[s][q] / num_pairs : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return acc;
}

DepthVector single_reference(const FunctionalSample& eval, const FunctionalSample& reference, const DepthSpec& spec) {
  Multiplicity ones(reference.size(), 1u);
  auto rows = multiset_depths(eval, reference, std::span<const Multiplicity>(&ones, 1), spec);
  return DepthVector{std::move(rows.front()), reference.size(), spec.method};
}

}  // namespace

double univariate_fm_depth(double x0, std::span<const double> reference) {
  if (reference.empty()) throw Error(ErrorCode::InvalidArgument, "reference sample is empty");
  auto below = static_cast<std::uint64_t>(std::count_if(reference.begin(), reference.end(), [x0](double r) { return r <= x0; }));
  return fm_univariate(below, reference.size());
}

std::vector<std::vector<double>> rp_directions(const Grid& grid, const RpConfig& config) {
  if (config.num_projections == 0) throw Error(ErrorCode::InvalidArgument, "RP depth needs at least one projection");
  const auto quad = grid.trapezoid_weights();
  Engine engine = make_engine(config.direction_seed);
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> dirs(config.num_projections, std::vector<double>(grid.size()));
  for (auto& v : dirs) {
    double norm2 = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      v[j] = normal(engine);
      norm2 += quad[j] * v[j] * v[j];
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= inv;
  }
  return dirs;
}

std::vector<std::pair<std::size_t, std::size_t>> select_grid_pairs(std::size_t grid_size, const Fd2Config& config) {
  if (grid_size < 2) throw Error(ErrorCode::InvalidArgument, "FD2 depth needs at least 2 grid points");
  std::vector<std::pair<std::size_t, std::size_t>> all;
  all.reserve(grid_size * (grid_size - 1) / 2);
  for (std::size_t a = 0; a < grid_size; ++a) {
    for (std::size_t b = a + 1; b < grid_size; ++b) all.emplace_back(a, b);
  }

  const auto& budget = config.pair_budget;
  if (budget.is_all() || budget.count() >= all.size()) {
    if (!budget.is_all() && !budget.is_auto() && budget.count() > all.size()) {
      std::clog << "warning: FD2 pair budget " << budget.count() << " exceeds the " << all.size()
                << " available grid pairs; using all pairs\n";
    }
    return all;
  }

  // Partial Fisher-Yates, then restore lexicographic order.
  Engine engine = make_engine(config.pair_seed);
  std::vector<std::size_t> idx(all.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < budget.count(); ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(engine)]);
  }
  idx.resize(budget.count());
  std::sort(idx.begin(), idx.end());
  std::vector<std::pair<std::size_t, std::size_t>> chosen;
  chosen.reserve(idx.size());
  for (std::size_t i : idx) chosen.push_back(all[i]);
  return chosen;
}

std::vector<std::vector<double>> multiset_depths(const FunctionalSample& queries, const FunctionalSample& pool,
                                                 std::span<const Multiplicity> multisets, const DepthSpec& spec,
                                                 const MultisetOptions& options) {
  require_same_grid(queries, pool);
  const MultisetLayout layout = check_multisets(pool, multisets, options);
  if (!options.needed.empty()) {
    for (const auto& mask : options.needed) {
      if (mask.size() != queries.size())
        throw Error(ErrorCode::InvalidArgument, "query mask length must equal the number of queries");
    }
  }

  switch (spec.method) {
    case DepthMethod::FM: {
      auto pool_cols = columns_of(pool);
      auto query_cols = columns_of(queries);
      return ranked_feature_depths(pool_cols, query_cols, queries.size(), multisets, layout, options, fm_univariate);
    }
    case DepthMethod::RP: {
      const auto dirs = rp_directions(pool.grid(), spec.rp);
      const auto quad = pool.grid().trapezoid_weights();
      auto pool_proj = projections_of(pool, dirs, quad);
      auto query_proj = projections_of(queries, dirs, quad);
      return ranked_feature_depths(pool_proj, query_proj, queries.size(), multisets, layout, options, rp_univariate);
    }
    case DepthMethod::FD2:
      return fd2_multiset_depths(queries, pool, multisets, spec.fd2, layout, options);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown depth method");
}

DepthVector fm_depth(const FunctionalSample& eval, const FunctionalSample& reference) {
  return single_reference(eval, reference, DepthSpec::fm());
}

DepthVector rp_depth(const FunctionalSample& eval, const FunctionalSample& reference, const RpConfig& config) {
  return single_reference(eval, reference, DepthSpec::random_projection(config));
}

DepthVector fd2_depth(const FunctionalSample& eval, const FunctionalSample& reference, const Fd2Config& config) {
  return single_reference(eval, reference, DepthSpec::integrated(config));
}

DepthVector compute_depth(const FunctionalSample& eval, const FunctionalSample& reference, const DepthSpec& spec) {
  return single_reference(eval, reference, spec);
}

DepthSpec seeded_depth_spec(DepthMethod method, RngSeed seed, std::size_t num_projections, PairBudget pair_budget) {
  DepthSpec spec;
  spec.method = method;
  spec.rp = RpConfig{num_projections, derive_seed(seed, 1)};
  spec.fd2 = Fd2Config{pair_budget, derive_seed(seed, 2)};
  return spec;
}

}  // namespace fdhomog
