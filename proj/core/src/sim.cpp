#include "fdhomog/sim.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <sstream>

#include "fdhomog/error.hpp"
#include "fdhomog/flores.hpp"
#include "fdhomog/parallel.hpp"
#include "fdhomog/serialize.hpp"

namespace fdhomog {

ModelSpec builtin_model(int id) {
  constexpr double kSmoothAmp = 0.3, kSmoothRate = 3.33;
  constexpr double kRoughAmp = 0.5, kRoughRate = 5.0;
  switch (id) {
    case 0: return {MeanFunction::Peak32, 0.0, kSmoothAmp, kSmoothRate};
    case 1: return {MeanFunction::Peak32, 1.0, kSmoothAmp, kSmoothRate};
    case 2: return {MeanFunction::Peak32, 0.5, kSmoothAmp, kSmoothRate};
    case 3: return {MeanFunction::Peak12, 0.0, kSmoothAmp, kSmoothRate};
    case 4: return {MeanFunction::Peak12, 0.0, kRoughAmp, kRoughRate};
    case 5: return {MeanFunction::Peak32, 0.0, kRoughAmp, kRoughRate};
    default: break;
  }
  throw Error(ErrorCode::UnknownModel, "unknown model " + std::to_string(id) + " (expected 0-5)");
}

std::string TestConfig::name() const {
  if (kind == TestKind::Flores) return method == DepthMethod::FM ? "Flores" : "Flores-" + std::string(to_string(method));
  return dd_test_name(method);
}

void TestConfig::validate() const {
  if (num_boot < 50) throw Error(ErrorCode::InvalidArgument, "tests[].num_boot must be >= 50");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "tests[].alpha must lie in (0, 1)");
  if (rp_projections == 0) throw Error(ErrorCode::InvalidArgument, "tests[].rp_projections must be >= 1");
}

std::vector<TestConfig> standard_tests(std::size_t num_boot) {
  std::vector<TestConfig> tests;
  for (DepthMethod m : {DepthMethod::FM, DepthMethod::RP, DepthMethod::FD2}) {
    TestConfig t;
    t.method = m;
    t.num_boot = num_boot;
    tests.push_back(t);
  }
  TestConfig flores;
  flores.kind = TestKind::Flores;
  flores.method = DepthMethod::FM;
  flores.num_boot = num_boot;
  tests.push_back(flores);
  return tests;
}

void ExperimentSpec::validate() const {
  try {
    model_a.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("model_a: ") + e.what());
  }
  try {
    model_b.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("model_b: ") + e.what());
  }
  if (replications < 1) throw Error(ErrorCode::InvalidArgument, "replications: must be >= 1");
  if (n_per_sample < 2) throw Error(ErrorCode::InvalidArgument, "n_per_sample: must be >= 2");
  if (grid_size < 2) throw Error(ErrorCode::InvalidArgument, "grid_size: must be >= 2");
  if (tests.empty()) throw Error(ErrorCode::InvalidArgument, "tests: at least one test is required");
  for (const auto& t : tests) t.validate();
}

const PowerRow* PowerTable::find(std::string_view pair, std::string_view test) const {
  for (const auto& row : rows) {
    if (row.pair == pair && row.test == test) return &row;
  }
  return nullptr;
}

void PowerTable::append(const PowerTable& other) { rows.insert(rows.end(), other.rows.begin(), other.rows.end()); }

namespace {

struct Outcome {
  bool completed = false;
  bool reject = false;
  double p_adjusted = 0.0;
};

std::string describe(const ModelSpec& m) {
  std::ostringstream os;
  os << to_string(m.mean) << "(delta=" << m.delta << ",k=" << m.amp << ",c=" << m.rate << ")";
  return os.str();
}

TestResult run_one(const TestConfig& test, const FunctionalSample& a, const FunctionalSample& b, RngSeed seed) {
  const DepthSpec depth = seeded_depth_spec(test.method, seed, test.rp_projections, test.pair_budget);
  if (test.kind == TestKind::Flores) {
    return flores_test(a, b, FloresOptions{depth, test.alpha, test.num_boot, seed});
  }
  return bootstrap_test(a, b, BootstrapOptions{depth, test.alpha, test.num_boot, seed, test.null_scheme});
}

}  // namespace

PowerTable run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const Grid grid = make_grid(0.0, 1.0, spec.grid_size);
  const std::size_t reps = spec.replications;
  const std::size_t num_tests = spec.tests.size();
  const std::string pair = spec.label.empty() ? describe(spec.model_a) + " v " + describe(spec.model_b) : spec.label;

  std::vector<Outcome> outcomes(reps * num_tests);
  parallel_for(reps, [&](std::size_t r) {
    std::optional<FunctionalSample> a, b;
    try {
      a.emplace(simulate_sample(spec.model_a, spec.n_per_sample, grid, derive_seed(spec.master_seed, {r, 0})));
      b.emplace(simulate_sample(spec.model_b, spec.n_per_sample, grid, derive_seed(spec.master_seed, {r, 1})));
    } catch (const Error& e) {
      std::clog << "replication " << r << " of " << pair << " aborted: " << e.what() << '\n';
      return;
    }
    for (std::size_t t = 0; t < num_tests; ++t) {
      try {
        TestResult res = run_one(spec.tests[t], *a, *b, derive_seed(spec.master_seed, {r, 2, t}));
        outcomes[r * num_tests + t] = {true, res.reject, res.p_adjusted};
      } catch (const Error& e) {
        std::clog << "replication " << r << " of " << pair << ", test " << spec.tests[t].name()
                  << " failed: " << e.what() << '\n';
      }
    }
  });

  PowerTable table;
  for (std::size_t t = 0; t < num_tests; ++t) {
    PowerRow row;
    row.pair = pair;
    row.test = spec.tests[t].name();
    row.attempted = reps;
    row.homogeneous = spec.model_a == spec.model_b;
    double p_sum = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const Outcome& o = outcomes[r * num_tests + t];
      if (!o.completed) continue;
      ++row.replications;
      row.rejections += o.reject ? 1 : 0;
      p_sum += o.p_adjusted;
    }
    if (row.replications > 0) {
      row.rate = static_cast<double>(row.rejections) / static_cast<double>(row.replications);
      row.mean_p_adjusted = p_sum / static_cast<double>(row.replications);
    }
    table.rows.push_back(row);
  }
  return table;
}

PowerTable delta_sweep(const ModelSpec& base, std::span<const double> deltas, const ExperimentSpec& protocol) {
  if (deltas.empty()) throw Error(ErrorCode::InvalidArgument, "deltas: at least one value is required");
  PowerTable table;
  for (double delta : deltas) {
    ExperimentSpec spec = protocol;
    spec.model_a = base;
    spec.model_a.delta = 0.0;
    spec.model_b = base;
    spec.model_b.delta = delta;
    spec.label = "delta=" + format_double(delta);
    table.append(run_experiment(spec));
  }
  return table;
}

PowerTable m_sweep(double base_k, std::span<const double> m_values, const ExperimentSpec& protocol) {
  if (m_values.empty()) throw Error(ErrorCode::InvalidArgument, "m_values: at least one value is required");
  PowerTable table;
  for (double m : m_values) {
    if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "m_values: every m must be > 0");
    ExperimentSpec spec = protocol;
    spec.model_a.amp = base_k;
    spec.model_b = spec.model_a;
    spec.model_b.amp = base_k * m;
    spec.label = "m=" + format_double(m);
    table.append(run_experiment(spec));
  }
  return table;
}

std::vector<TestSummary> summarize(const PowerTable& table) {
  std::vector<TestSummary> out;
  std::map<std::string, std::size_t> slot;
  for (const auto& row : table.rows) {
    auto [it, inserted] = slot.try_emplace(row.test, out.size());
    if (inserted) {
      TestSummary s;
      s.test = row.test;
      s.minimum_power = 1.0;
      out.push_back(s);
    }
    TestSummary& s = out[it->second];
    if (row.replications == 0) continue;
    if (row.homogeneous) {
      s.average_size += row.rate;
      s.maximum_size = std::max(s.maximum_size, row.rate);
      ++s.size_rows;
    } else {
      s.average_power += row.rate;
      if (s.power_rows == 0 || row.rate < s.minimum_power) {
        s.minimum_power = row.rate;
        s.minimum_power_pair = row.pair;
      }
      ++s.power_rows;
    }
  }
  for (auto& s : out) {
    if (s.size_rows > 0) s.average_size /= static_cast<double>(s.size_rows);
    if (s.power_rows > 0) {
      s.average_power /= static_cast<double>(s.power_rows);
    } else {
      s.minimum_power = 0.0;
    }
  }
  return out;
}

}  // namespace fdhomog
