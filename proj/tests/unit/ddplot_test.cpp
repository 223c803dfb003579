#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "fdhomog/ddplot.hpp"
#include "fdhomog/sim.hpp"
#include "support.hpp"

namespace fdhomog {
namespace {

using testing::constant_curves;

struct NormalEquations {
  double beta0, beta1, se0, se1;
};

// (X'X) b = X'y with X = [1, x]; Cov(b) = s^2 (X'X)^-1 with s^2 = SSR / (N - 2).
NormalEquations solve_normal_equations(const std::vector<DDPoint>& pts) {
  const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd x(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = pts[static_cast<std::size_t>(i)].depth_g;
    y(i) = pts[static_cast<std::size_t>(i)].depth_f;
  }
  const Eigen::Matrix2d xtx = x.transpose() * x;
  const Eigen::Vector2d b = xtx.ldlt().solve(x.transpose() * y);
  const double s2 = (y - x * b).squaredNorm() / double(n - 2);
  const Eigen::Matrix2d cov = s2 * xtx.inverse();
  return {b(0), b(1), std::sqrt(cov(0, 0)), std::sqrt(cov(1, 1))};
}

TEST(Ols, PerfectDiagonal) {
  std::vector<DDPoint> pts{{0.1, 0.1}, {0.5, 0.5}, {0.9, 0.9}};
  OlsFit fit = fit_ols(pts);
  EXPECT_NEAR(fit.beta0, 0.0, 1e-15);
  EXPECT_NEAR(fit.beta1, 1.0, 1e-15);
  for (double r : fit.residuals) EXPECT_NEAR(r, 0.0, 1e-15);
  EXPECT_TRUE(fit.degenerate());
  EXPECT_ERROR_CODE(t_statistics(fit), ErrorCode::DegenerateFit);
}

TEST(Ols, ConstantRegressor) {
  std::vector<DDPoint> pts{{0.0, 0.2}, {1.0, 0.2}, {0.5, 0.2}};
  EXPECT_ERROR_CODE(fit_ols(pts), ErrorCode::DegenerateRegressor);
}

TEST(Ols, TooFewPoints) {
  std::vector<DDPoint> pts{{0.0, 0.2}, {1.0, 0.3}};
  EXPECT_ERROR_CODE(fit_ols(pts), ErrorCode::InvalidArgument);
}

TEST(Ols, FourHandPickedPoints) {
  std::vector<DDPoint> pts{{0.62, 0.55}, {0.71, 0.80}, {0.50, 0.58}, {0.93, 0.77}};
  OlsFit fit = fit_ols(pts);
  NormalEquations ref = solve_normal_equations(pts);
  EXPECT_NEAR(fit.beta0, ref.beta0, 1e-12);
  EXPECT_NEAR(fit.beta1, ref.beta1, 1e-12);
  EXPECT_NEAR(fit.se0, ref.se0, 1e-12);
  EXPECT_NEAR(fit.se1, ref.se1, 1e-12);
}

TEST(OlsProperty, MatchesNormalEquationsOnRandomPlots) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<DDPoint> pts(3 + rng() % 98);
    for (auto& p : pts) p = {u(rng), u(rng)};
    OlsFit fit = fit_ols(pts);
    NormalEquations ref = solve_normal_equations(pts);
    EXPECT_NEAR(fit.beta0, ref.beta0, 1e-12);
    EXPECT_NEAR(fit.beta1, ref.beta1, 1e-12);
    EXPECT_NEAR(fit.se0, ref.se0, 1e-12);
    EXPECT_NEAR(fit.se1, ref.se1, 1e-12);
    double sum = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      EXPECT_NEAR(fit.residuals[i], pts[i].depth_f - ref.beta0 - ref.beta1 * pts[i].depth_g, 1e-12);
      sum += fit.residuals[i];
    }
    EXPECT_NEAR(sum, 0.0, 1e-12);
  }
}

TEST(OlsProperty, RecoversExactLines) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const double a = u(rng), b = u(rng) + (rng() % 2 ? 2.0 : -2.0);
    std::vector<DDPoint> pts(10);
    for (auto& p : pts) {
      p.depth_g = u(rng);
      p.depth_f = a + b * p.depth_g;
    }
    OlsFit fit = fit_ols(pts);
    EXPECT_NEAR(fit.beta0, a, 1e-12);
    EXPECT_NEAR(fit.beta1, b, 1e-12);
    for (double r : fit.residuals) EXPECT_NEAR(r, 0.0, 1e-12);
  }
}

TEST(TStatistics, Arithmetic) {
  OlsFit fit;
  fit.beta0 = 0.2;
  fit.se0 = 0.1;
  fit.beta1 = 1.5;
  fit.se1 = 0.25;
  TStatistics t = t_statistics(fit);
  EXPECT_DOUBLE_EQ(t.t0, 2.0);
  EXPECT_DOUBLE_EQ(t.t1, 2.0);
  fit.beta0 = 0.0;
  fit.beta1 = 1.0;
  t = t_statistics(fit);
  EXPECT_EQ(t.t0, 0.0);
  EXPECT_EQ(t.t1, 0.0);
}

TEST(BootstrapP, StrictTails) {
  std::vector<double> reps{-1, 1, 1, 0};
  EXPECT_DOUBLE_EQ(bootstrap_two_sided_p(0.0, reps), 0.5);
  std::vector<double> ties{2, 2, 2};
  EXPECT_EQ(bootstrap_two_sided_p(2.0, ties), 0.0);
  std::vector<double> spread{-3, -2, -1, 1, 2, 3};
  EXPECT_DOUBLE_EQ(bootstrap_two_sided_p(0.0, spread), 1.0);
  EXPECT_DOUBLE_EQ(bootstrap_two_sided_p(2.5, spread), 2.0 / 6.0);
}

TEST(Holm, HandCases) {
  auto d = holm_bonferroni(0.02, 0.5, 0.05);
  EXPECT_TRUE(d.reject);
  EXPECT_DOUBLE_EQ(d.p_adjusted, 0.04);
  d = holm_bonferroni(0.03, 0.04, 0.05);
  EXPECT_TRUE(d.reject);
  EXPECT_DOUBLE_EQ(d.p_adjusted, 0.04);
  d = holm_bonferroni(0.03, 0.2, 0.05);
  EXPECT_FALSE(d.reject);
  EXPECT_DOUBLE_EQ(d.p_adjusted, 0.06);
  EXPECT_DOUBLE_EQ(holm_bonferroni(0.9, 0.8, 0.05).p_adjusted, 0.9);
}

TEST(HolmProperty, DecisionRule) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 2000; ++rep) {
    const double p0 = std::floor(u(rng) * 40) / 40, p1 = std::floor(u(rng) * 40) / 40, alpha = 0.05;
    auto d = holm_bonferroni(p0, p1, alpha);
    const double lo = std::min(p0, p1), hi = std::max(p0, p1);
    EXPECT_EQ(d.reject, lo < alpha / 2 || hi < alpha);
    EXPECT_DOUBLE_EQ(d.p_adjusted, std::min(2 * lo, hi));
    EXPECT_GE(d.p_adjusted, 0.0);
    EXPECT_LE(d.p_adjusted, 1.0);
  }
}

TEST(DDPlot, Cardinality) {
  Grid grid = make_grid(0.0, 1.0, 5);
  auto f = constant_curves(grid, {1, 2});
  auto g = constant_curves(grid, {0, 1.5, 3});
  DDPlot dd = build_ddplot(f, g, DepthSpec::fm());
  EXPECT_EQ(dd.points.size(), 5u);
  EXPECT_EQ(dd.n, 2u);
  EXPECT_EQ(dd.m, 3u);
  // Curve at level 2 against {1, 2}: F = 1, depth 1/2; against {0, 1.5, 3}: F = 2/3, depth 5/6.
  EXPECT_DOUBLE_EQ(dd.points[1].depth_f, 0.5);
  EXPECT_DOUBLE_EQ(dd.points[1].depth_g, 5.0 / 6.0);
}

class DDPlotMethods : public ::testing::TestWithParam<DepthMethod> {
 protected:
  DepthSpec spec() const { return seeded_depth_spec(GetParam(), RngSeed{12}); }
};

TEST_P(DDPlotMethods, SwapTransposes) {
  Grid grid = make_grid(0.0, 1.0, 30);
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    auto f = simulate_sample(builtin_model(0), 20, grid, RngSeed{rep});
    auto g = simulate_sample(builtin_model(3), 15, grid, RngSeed{rep + 50});
    DDPlot fg = build_ddplot(f, g, spec());
    DDPlot gf = build_ddplot(g, f, spec());
    ASSERT_EQ(fg.points.size(), gf.points.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      EXPECT_EQ(fg.points[i].depth_f, gf.points[g.size() + i].depth_g);
      EXPECT_EQ(fg.points[i].depth_g, gf.points[g.size() + i].depth_f);
    }
    for (std::size_t j = 0; j < g.size(); ++j) {
      EXPECT_EQ(fg.points[f.size() + j].depth_f, gf.points[j].depth_g);
      EXPECT_EQ(fg.points[f.size() + j].depth_g, gf.points[j].depth_f);
    }
  }
}

TEST_P(DDPlotMethods, IdenticalSamplesLieOnTheDiagonal) {
  Grid grid = make_grid(0.0, 1.0, 30);
  auto f = simulate_sample(builtin_model(2), 20, grid, RngSeed{4});
  DDPlot dd = build_ddplot(f, f, spec());
  for (const auto& p : dd.points) EXPECT_EQ(p.depth_f, p.depth_g);

  BootstrapOptions opts;
  opts.depth = spec();
  opts.num_boot = 50;
  for (NullScheme scheme : {NullScheme::LiteralResample, NullScheme::Relabel}) {
    opts.null_scheme = scheme;
    TestResult r = bootstrap_test(f, f, opts);
    EXPECT_EQ(r.p_adjusted, 1.0);
    EXPECT_FALSE(r.reject);
  }
}

INSTANTIATE_TEST_SUITE_P(Methods, DDPlotMethods, ::testing::Values(DepthMethod::FM, DepthMethod::RP, DepthMethod::FD2),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(BootstrapTest, ReproducibleAndWellFormed) {
  Grid grid = make_grid(0.0, 1.0, 30);
  auto f = simulate_sample(builtin_model(0), 30, grid, RngSeed{1});
  auto g = simulate_sample(builtin_model(0), 30, grid, RngSeed{2});
  BootstrapOptions opts;
  opts.depth = DepthSpec::fm();
  opts.num_boot = 200;
  opts.seed = RngSeed{77};
  for (NullScheme scheme : {NullScheme::LiteralResample, NullScheme::Relabel}) {
    opts.null_scheme = scheme;
    TestResult a = bootstrap_test(f, g, opts);
    TestResult b = bootstrap_test(f, g, opts);
    EXPECT_EQ(a.p0, b.p0);
    EXPECT_EQ(a.p1, b.p1);
    EXPECT_EQ(a.t0, b.t0);
    EXPECT_EQ(a.method, "DD-FM");
    EXPECT_EQ(a.null_scheme, to_string(scheme));
    EXPECT_EQ(a.n, 30u);
    for (double p : {a.p0, *a.p1, a.p_adjusted}) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
    const double lo = std::min(a.p0, *a.p1), hi = std::max(a.p0, *a.p1);
    EXPECT_EQ(a.reject, lo < 0.025 || hi < 0.05);
  }
}

TEST(BootstrapTest, RelabelDetectsAMeanShift) {
  Grid grid = make_grid(0.0, 1.0, 30);
  auto f = simulate_sample(builtin_model(0), 50, grid, RngSeed{10});
  auto g = simulate_sample(builtin_model(1), 50, grid, RngSeed{11});
  BootstrapOptions opts;
  opts.depth = DepthSpec::fm();
  opts.num_boot = 200;
  opts.null_scheme = NullScheme::Relabel;
  TestResult r = bootstrap_test(f, g, opts);
  EXPECT_TRUE(r.reject);
  EXPECT_LT(r.p_adjusted, 0.01);
}

TEST(BootstrapTest, Validation) {
  Grid grid = make_grid(0.0, 1.0, 5);
  auto f = constant_curves(grid, {1, 2, 3});
  BootstrapOptions opts;
  opts.num_boot = 49;
  EXPECT_ERROR_CODE(bootstrap_test(f, f, opts), ErrorCode::InvalidArgument);
  opts.num_boot = 50;
  auto other = constant_curves(make_grid(0.0, 2.0, 5), {1, 2});
  EXPECT_ERROR_CODE(bootstrap_test(f, other, opts), ErrorCode::GridMismatch);
}

TEST(NullSchemeNames, RoundTrip) {
  EXPECT_EQ(to_string(NullScheme::LiteralResample), "literal-H*");
  EXPECT_EQ(to_string(NullScheme::Relabel), "relabel");
  EXPECT_EQ(parse_null_scheme("relabel"), NullScheme::Relabel);
  EXPECT_EQ(parse_null_scheme("literal-H*"), NullScheme::LiteralResample);
  EXPECT_FALSE(parse_null_scheme("permute").has_value());
  EXPECT_EQ(dd_test_name(DepthMethod::FD2), "DD-FD2");
}

}  // namespace
}  // namespace fdhomog
