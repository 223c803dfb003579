#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fdhomog/ddplot.hpp"
#include "fdhomog/sim.hpp"

namespace fdhomog {

/// {method, n, m, t0, t1, p0, p1, p_adjusted, reject, alpha, num_boot, seed, null_scheme};
/// absent or non-finite statistics are written as null.
std::string to_json(const TestResult& result);

/// Header `pair,test,replications,rejections,rate,mean_p_adjusted`, one line per row.
std::string power_table_csv(const PowerTable& table);
std::string power_table_json(const PowerTable& table);
std::string summary_json(const std::vector<TestSummary>& summary);

/// Experiments described by a JSON document. Shared protocol fields at the
/// top level (n_per_sample, grid_size, replications, master_seed, tests);
/// comparisons given by any of
///   "model_a"/"model_b"                 a single comparison
///   "pairs": [{"a": 0, "b": 3}, ...]    models by id or as {mean, delta, amp, rate}
///   "delta_sweep": {"base": 0, "deltas": [...]}
///   "m_sweep": {"base_k": 0.3, "m_values": [...], "base": 0}
/// Errors name the offending field.
std::vector<ExperimentSpec> parse_experiment_plan(std::string_view json_text);

std::string format_double(double value);

}  // namespace fdhomog
