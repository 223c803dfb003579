#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fdhomog/curves.hpp"
#include "fdhomog/ddplot.hpp"
#include "fdhomog/depth.hpp"
#include "fdhomog/rng.hpp"

namespace fdhomog {

/// Models 0-5 of the benchmark simulation:
///   0: peak32, delta 0,   (k, c) = (0.3, 3.33)
///   1: peak32, delta 1,   (0.3, 3.33)
///   2: peak32, delta 0.5, (0.3, 3.33)
///   3: peak12, delta 0,   (0.3, 3.33)
///   4: peak12, delta 0,   (0.5, 5)
///   5: peak32, delta 0,   (0.5, 5)
ModelSpec builtin_model(int id);

enum class TestKind { DD, Flores };

struct TestConfig {
  TestKind kind = TestKind::DD;
  DepthMethod method = DepthMethod::FD2;  // Flores is run with FM unless set otherwise
  std::size_t num_boot = 250;
  double alpha = 0.05;
  NullScheme null_scheme = NullScheme::Relabel;
  std::size_t rp_projections = 50;
  PairBudget pair_budget = PairBudget::automatic();

  std::string name() const;
  void validate() const;
};

/// DD-FM, DD-RP, DD-FD2 and Flores (P4 with FM depth).
std::vector<TestConfig> standard_tests(std::size_t num_boot = 250);

struct ExperimentSpec {
  std::string label;  // e.g. "0v3"; derived from the models when empty
  ModelSpec model_a{};
  ModelSpec model_b{};
  std::size_t n_per_sample = 50;
  std::size_t grid_size = 30;
  std::size_t replications = 100;
  std::vector<TestConfig> tests = standard_tests();
  RngSeed master_seed{};

  /// Throws InvalidArgument naming the offending field.
  void validate() const;
};

struct PowerRow {
  std::string pair;
  std::string test;
  std::size_t attempted = 0;
  std::size_t replications = 0;  // completed
  std::size_t rejections = 0;
  double rate = 0.0;
  double mean_p_adjusted = 0.0;
  bool homogeneous = false;

  friend bool operator==(const PowerRow&, const PowerRow&) = default;
};

struct PowerTable {
  std::vector<PowerRow> rows;

  const PowerRow* find(std::string_view pair, std::string_view test) const;
  void append(const PowerTable& other);
};

/// Replication r draws its samples from derive_seed(master, {r, 0}) and
/// {r, 1}; every test in that replication sees the same pair of samples.
PowerTable run_experiment(const ExperimentSpec& spec);

/// Base model with delta 0 against the base model shifted by each delta.
PowerTable delta_sweep(const ModelSpec& base, std::span<const double> deltas, const ExperimentSpec& protocol);

/// protocol.model_a with amplitude base_k against the same model with amplitude base_k * m.
PowerTable m_sweep(double base_k, std::span<const double> m_values, const ExperimentSpec& protocol);

struct TestSummary {
  std::string test;
  double average_size = 0.0;
  double maximum_size = 0.0;
  double average_power = 0.0;
  double minimum_power = 0.0;
  std::string minimum_power_pair;
  std::size_t size_rows = 0;
  std::size_t power_rows = 0;
};

/// Per test: sizes from homogeneous rows, powers from heterogeneous rows.
std::vector<TestSummary> summarize(const PowerTable& table);

}  // namespace fdhomog
