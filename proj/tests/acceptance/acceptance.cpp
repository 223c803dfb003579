// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: fdhomog_acceptance [criterion numbers...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "commands.hpp"
#include "fdhomog/curves.hpp"
#include "fdhomog/ddplot.hpp"
#include "fdhomog/depth.hpp"
#include "fdhomog/flores.hpp"
#include "fdhomog/halfspace.hpp"
#include "fdhomog/parallel.hpp"
#include "fdhomog/serialize.hpp"
#include "fdhomog/sim.hpp"

using namespace fdhomog;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "failed: ";
      else detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double v) { return format_double(v); }

std::vector<ExperimentSpec> load_plan(const std::string& name) {
  return parse_experiment_plan(read_file(fs::path(FDHOMOG_CONFIG_DIR) / name));
}

const PowerRow& row(const PowerTable& t, const std::string& pair, const std::string& test) {
  const PowerRow* r = t.find(pair, test);
  if (!r) throw std::runtime_error("missing row " + pair + " / " + test);
  return *r;
}

std::string describe_row(const PowerRow& r) {
  return r.pair + " " + r.test + " rate=" + fmt(r.rate) + " (" + std::to_string(r.rejections) + "/" +
         std::to_string(r.replications) + ")";
}

// Criterion 1
void halfspace_oracle(Outcome& out) {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> size(1, 50);
  std::uniform_int_distribution<int> lattice(-3, 3);
  std::normal_distribution<double> z;
  std::size_t instances = 0, degenerate = 0, queries = 0, mismatches = 0;
  for (int k = 0; k < 600; ++k) {
    const bool grid_like = k % 4 == 0;
    std::vector<Point2> cloud(size(rng));
    for (auto& p : cloud) {
      p = grid_like ? Point2{double(lattice(rng)), double(lattice(rng))} : Point2{z(rng), z(rng)};
    }
    if (k % 4 == 1) {
      // All points on one line through the origin, with repeats.
      const double slope = lattice(rng);
      for (auto& p : cloud) {
        p.x = lattice(rng);
        p.y = slope * p.x;
      }
    }
    std::vector<Point2> qs{cloud[rng() % cloud.size()], {z(rng), z(rng)}};
    if (grid_like) qs.push_back({double(lattice(rng)), double(lattice(rng))});
    if (k % 4 == 1) qs.push_back(cloud[0]);
    for (Point2 q : qs) {
      ++queries;
      if (halfspace_depth_2d(q, cloud) != halfspace_depth_2d_oracle(q, cloud)) ++mismatches;
    }
    ++instances;
    if (grid_like || k % 4 == 1) ++degenerate;
  }
  const double elapsed = seconds_since(start);
  out.check(mismatches == 0, std::to_string(mismatches) + " mismatches");
  out.check(elapsed < 10.0, "runtime " + fmt(elapsed) + " s");
  out.detail << (out.pass ? "" : " | ") << instances << " instances (" << degenerate << " collinear/duplicate), "
             << queries << " queries, " << mismatches << " mismatches, " << fmt(std::round(elapsed * 1000) / 1000)
             << " s";
}

// Criterion 2
void ols_oracle(Outcome& out) {
  const auto start = Clock::now();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    std::vector<DDPoint> pts(3 + rng() % 198);
    for (auto& p : pts) p = {u(rng), u(rng)};
    OlsFit fit = fit_ols(pts);
    const Eigen::Index n = Eigen::Index(pts.size());
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      x(i, 0) = 1.0;
      x(i, 1) = pts[std::size_t(i)].depth_g;
      y(i) = pts[std::size_t(i)].depth_f;
    }
    const Eigen::Matrix2d xtx = x.transpose() * x;
    const Eigen::Vector2d b = xtx.ldlt().solve(x.transpose() * y);
    const Eigen::Matrix2d cov = (y - x * b).squaredNorm() / double(n - 2) * xtx.inverse();
    worst = std::max({worst, std::abs(fit.beta0 - b(0)), std::abs(fit.beta1 - b(1)),
                      std::abs(fit.se0 - std::sqrt(cov(0, 0))), std::abs(fit.se1 - std::sqrt(cov(1, 1)))});
  }
  const double elapsed = seconds_since(start);
  out.check(worst <= 1e-12, "max deviation " + fmt(worst));
  out.check(elapsed < 1.0, "runtime " + fmt(elapsed) + " s");
  out.detail << (out.pass ? "" : " | ") << "100 plots, max |diff| " << worst << ", " << elapsed << " s";
}

// Criteria 3-5 share one run of the Table-1 protocol.
struct TableRun {
  PowerTable table;
  double seconds = 0;
  bool done = false;
};

TableRun& table_run() {
  static TableRun run;
  if (!run.done) {
    const auto start = Clock::now();
    for (const auto& spec : load_plan("table1.json")) {
      if (spec.label != "0v0" && spec.label != "0v1" && spec.label != "3v4") continue;
      std::cerr << "  running " << spec.label << " (" << spec.replications << " replications)\n";
      run.table.append(run_experiment(spec));
    }
    run.seconds = seconds_since(start);
    run.done = true;
  }
  return run;
}

const std::vector<std::string> kTests{"DD-FM", "DD-RP", "DD-FD2", "Flores"};

void size_control(Outcome& out) {
  auto& run = table_run();
  for (const auto& t : kTests) {
    const PowerRow& r = row(run.table, "0v0", t);
    out.check(r.replications == 100, t + " completed " + std::to_string(r.replications));
    out.check(r.rate <= 0.10, describe_row(r));
    out.detail << (out.pass ? "" : " | ") << t << "=" << fmt(r.rate) << " ";
  }
}

void mean_shift_power(Outcome& out) {
  auto& run = table_run();
  for (const auto& t : kTests) {
    const PowerRow& r = row(run.table, "0v1", t);
    out.check(r.replications == 100, t + " completed " + std::to_string(r.replications));
    out.check(r.rate >= 0.90, describe_row(r));
    out.detail << (out.pass ? "" : " | ") << t << "=" << fmt(r.rate) << " ";
  }
}

void covariance_only(Outcome& out) {
  auto& run = table_run();
  const PowerRow& fd2 = row(run.table, "3v4", "DD-FD2");
  const PowerRow& flores = row(run.table, "3v4", "Flores");
  out.check(fd2.rate >= 0.6, describe_row(fd2));
  out.check(flores.rate <= 0.3, describe_row(flores));
  out.detail << (out.pass ? "" : " | ") << "DD-FD2=" << fmt(fd2.rate) << " Flores=" << fmt(flores.rate)
             << " (DD-FM=" << fmt(row(run.table, "3v4", "DD-FM").rate)
             << ", DD-RP=" << fmt(row(run.table, "3v4", "DD-RP").rate) << "); criteria 3-5 took "
             << std::lround(run.seconds) << " s";
}

// Criterion 6
void delta_monotone(Outcome& out) {
  const auto start = Clock::now();
  PowerTable table;
  for (const auto& spec : load_plan("delta_sweep.json")) {
    std::cerr << "  running " << spec.label << "\n";
    table.append(run_experiment(spec));
  }
  std::vector<double> mean_p;
  std::vector<std::size_t> reps;
  for (const auto& r : table.rows) {
    if (r.test != "DD-FD2") continue;
    mean_p.push_back(r.mean_p_adjusted);
    reps.push_back(r.replications);
    out.detail << r.pair << ":" << fmt(std::round(r.mean_p_adjusted * 1e4) / 1e4) << " ";
  }
  out.check(mean_p.size() == 6, "expected 6 delta values");
  for (std::size_t k = 0; k + 1 < mean_p.size(); ++k) {
    const double var = std::max(mean_p[k] * (1 - mean_p[k]), mean_p[k + 1] * (1 - mean_p[k + 1]));
    const double se = std::sqrt(var / double(std::min(reps[k], reps[k + 1])));
    out.check(mean_p[k + 1] <= mean_p[k] + se, "increase between step " + std::to_string(k) + " and " +
                                                     std::to_string(k + 1) + " beyond one SE (" + fmt(se) + ")");
  }
  out.detail << "(" << std::lround(seconds_since(start)) << " s)";
}

// Criterion 7
void m_asymmetry(Outcome& out) {
  const auto start = Clock::now();
  PowerTable table;
  for (auto spec : load_plan("m_sweep.json")) {
    if (spec.label != "m=0.25" && spec.label != "m=1" && spec.label != "m=4") continue;
    std::cerr << "  running " << spec.label << "\n";
    table.append(run_experiment(spec));
  }
  for (const char* pair : {"m=0.25", "m=4"}) {
    const PowerRow& r = row(table, pair, "DD-FD2");
    out.check(r.rate >= 0.8, describe_row(r));
  }
  const PowerRow& control = row(table, "m=1", "DD-FD2");
  out.check(control.rate <= 0.10, describe_row(control));
  for (const auto& r : table.rows) out.detail << (out.pass ? "" : " | ") << r.pair << " " << r.test << "=" << fmt(r.rate) << " ";
  out.detail << "(" << std::lround(seconds_since(start)) << " s)";
}

// Criterion 8
void flores_identity(Outcome& out) {
  const Grid grid = make_grid(0.0, 1.0, 30);
  std::size_t checked = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    FunctionalSample f = simulate_sample(builtin_model(int(s % 6)), 30, grid, RngSeed{1000 + s});
    for (DepthMethod m : {DepthMethod::FM, DepthMethod::RP, DepthMethod::FD2}) {
      FloresStats st = flores_statistics(f, f, seeded_depth_spec(m, RngSeed{s}));
      out.check(st.p2 == 0.0 && st.p4 == 0.0, "sample " + std::to_string(s) + " " + std::string(to_string(m)) +
                                                  ": P2=" + fmt(st.p2) + " P4=" + fmt(st.p4));
      ++checked;
    }
  }
  out.detail << (out.pass ? "" : " | ") << checked << " (sample, method) cases";
}

// Criterion 9
void ddplot_symmetry(Outcome& out) {
  const Grid grid = make_grid(0.0, 1.0, 30);
  std::size_t points = 0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    FunctionalSample f = simulate_sample(builtin_model(0), 25, grid, RngSeed{s});
    FunctionalSample g = simulate_sample(builtin_model(int(1 + s)), 20, grid, RngSeed{s + 100});
    for (DepthMethod m : {DepthMethod::FM, DepthMethod::RP, DepthMethod::FD2}) {
      const DepthSpec spec = seeded_depth_spec(m, RngSeed{s});
      DDPlot fg = build_ddplot(f, g, spec), gf = build_ddplot(g, f, spec);
      for (std::size_t i = 0; i < f.size(); ++i) {
        const DDPoint a = fg.points[i], b = gf.points[g.size() + i];
        out.check(a.depth_f == b.depth_g && a.depth_g == b.depth_f, "swap mismatch");
        ++points;
      }
      for (std::size_t j = 0; j < g.size(); ++j) {
        const DDPoint a = fg.points[f.size() + j], b = gf.points[j];
        out.check(a.depth_f == b.depth_g && a.depth_g == b.depth_f, "swap mismatch");
        ++points;
      }
      DDPlot same = build_ddplot(f, f, spec);
      for (const auto& p : same.points) out.check(p.depth_f == p.depth_g, "identical samples off the diagonal");
      BootstrapOptions opts;
      opts.depth = spec;
      opts.num_boot = 50;
      opts.null_scheme = NullScheme::Relabel;
      TestResult r = bootstrap_test(f, f, opts);
      out.check(r.p_adjusted == 1.0 && !r.reject, "identical samples: p_adjusted=" + fmt(r.p_adjusted));
    }
  }
  out.detail << (out.pass ? "" : " | ") << points << " transposed points checked, 15 identical-sample tests";
}

// Criterion 10
void depth_invariants(Outcome& out) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> lattice(-256, 256);
  auto dyadic = [&](std::size_t n, std::size_t g) {
    std::vector<double> v(n * g);
    for (double& x : v) x = lattice(rng) / 64.0;
    return FunctionalSample(make_grid(0.0, 1.0, g), std::move(v));
  };
  std::size_t checks = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Grid grid = make_grid(0.0, 1.0, 30);
    FunctionalSample ref = simulate_sample(builtin_model(int(s % 6)), 40, grid, RngSeed{s});
    FunctionalSample eval = simulate_sample(builtin_model(int((s + 3) % 6)), 15, grid, RngSeed{s + 50});
    std::vector<std::size_t> perm(ref.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    FunctionalSample dref = dyadic(30, 12), deval = dyadic(10, 12);
    for (DepthMethod m : {DepthMethod::FM, DepthMethod::RP, DepthMethod::FD2}) {
      const DepthSpec spec = seeded_depth_spec(m, RngSeed{s});
      const std::string tag = std::string(to_string(m)) + " seed " + std::to_string(s);
      auto base = compute_depth(eval, ref, spec).values;
      for (double v : base) {
        out.check(v >= 0.0 && v <= 1.0, tag + " value outside [0,1]");
        if (m == DepthMethod::FM) out.check(v >= 0.5, tag + " FM below 1/2");
      }
      out.check(compute_depth(eval, ref.subset(perm), spec).values == base, tag + " reference permutation");
      if (m == DepthMethod::RP) {
        out.check(compute_depth(eval.shifted(0.731), ref.shifted(0.731), spec).values == base, tag + " shift");
      } else {
        out.check(compute_depth(deval.shifted(2.5), dref.shifted(2.5), spec).values ==
                      compute_depth(deval, dref, spec).values,
                  tag + " shift");
      }
      checks += 3;
    }
  }
  out.detail << (out.pass ? "" : " | ") << checks << " invariant checks across FM/RP/FD2";
}

// Criterion 11
void determinism(Outcome& out) {
  const auto start = Clock::now();
  const fs::path root = fs::temp_directory_path() / "fdhomog_acceptance_c11";
  fs::remove_all(root);
  const std::string spec = (fs::path(FDHOMOG_CONFIG_DIR) / "table1.json").string();
  auto run_cli = [&](const std::string& dir, std::size_t threads) {
    set_worker_count(threads);
    std::ostringstream sink_out, sink_err;
    int code = cli::run({"experiment", "--spec", spec, "--out", (root / dir).string(), "--replications", "2"}, sink_out,
                        sink_err);
    set_worker_count(0);
    out.check(code == 0, dir + " exited " + std::to_string(code) + ": " + sink_err.str());
    return read_file(root / dir / "power_table.csv");
  };
  const std::string first = run_cli("first", 0);
  const std::string second = run_cli("second", 0);
  const std::string serial = run_cli("serial", 1);
  const std::string parallel = run_cli("parallel", 4);
  out.check(!first.empty(), "no CSV written");
  out.check(first == second, "repeated runs differ");
  out.check(serial == parallel, "1-thread and 4-thread runs differ");
  out.check(first == serial, "default-thread and 1-thread runs differ");
  out.detail << (out.pass ? "" : " | ") << "table1.json at 2 replications, 4 runs byte-identical ("
             << std::count(first.begin(), first.end(), '\n') - 1 << " rows, " << std::lround(seconds_since(start))
             << " s)";
  fs::remove_all(root);
}

// Not a criterion: documents the power of the literal resampling null.
void literal_scheme_note() {
  ExperimentSpec spec;
  spec.label = "0v1";
  spec.model_a = builtin_model(0);
  spec.model_b = builtin_model(1);
  spec.replications = 20;
  spec.master_seed = RngSeed{99};
  TestConfig fm;
  fm.method = DepthMethod::FM;
  spec.tests = {fm, fm};
  spec.tests[0].null_scheme = NullScheme::LiteralResample;
  PowerTable t = run_experiment(spec);
  std::cout << "NOTE    0v1 DD-FM power over 20 replications: literal-H* " << fmt(t.rows[0].rate) << " (mean p "
            << fmt(std::round(t.rows[0].mean_p_adjusted * 1000) / 1000) << "), relabel " << fmt(t.rows[1].rate)
            << "\n";
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Outcome&)> body;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "halfspace depth: angular sweep equals brute-force oracle", halfspace_oracle},
      {2, "OLS fit equals normal-equations oracle", ols_oracle},
      {3, "size control, Model 0 vs Model 0", size_control},
      {4, "mean-shift power, Model 0 vs Model 1", mean_shift_power},
      {5, "covariance-only discrimination, Model 3 vs Model 4", covariance_only},
      {6, "delta sweep: DD-FD2 mean adjusted p weakly decreasing", delta_monotone},
      {7, "m sweep: DD-FD2 power at m=0.25 and m=4, size at m=1", m_asymmetry},
      {8, "Flores identities P2(F,F) = P4(F,F) = 0", flores_identity},
      {9, "DD-plot symmetry and diagonal short-circuit", ddplot_symmetry},
      {10, "depth invariants", depth_invariants},
      {11, "experiment determinism (repeat, thread count)", determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    std::cerr << "criterion " << c.id << ": " << c.name << "\n";
    Outcome o;
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s C%-2d %s :: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str());
    std::fflush(stdout);
  }
  if (selected.empty()) literal_scheme_note();
  std::printf("%d of %zu criteria failed\n", failures, selected.empty() ? criteria.size() : selected.size());
  return failures == 0 ? 0 : 1;
}
