#include "fdhomog/serialize.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "fdhomog/error.hpp"

namespace fdhomog {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json number_or_null(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, field + ": " + what);
}

template <class T>
T get_field(const json& obj, const std::string& key, const std::string& path, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    field_error(path + key, std::string("wrong type (") + e.what() + ")");
  }
}

std::size_t get_count(const json& obj, const std::string& key, const std::string& path, std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) field_error(path + key, "must be a non-negative integer");
  return v.get<std::size_t>();
}

ModelSpec parse_model(const json& node, const std::string& path) {
  if (node.is_number_integer()) {
    try {
      return builtin_model(node.get<int>());
    } catch (const Error& e) {
      field_error(path, e.what());
    }
  }
  if (!node.is_object()) field_error(path, "expected a model id (0-5) or an object {mean, delta, amp, rate}");
  ModelSpec m;
  if (node.contains("model")) m = parse_model(node.at("model"), path + ".model");
  if (node.contains("mean")) {
    auto name = get_field<std::string>(node, "mean", path + ".", "");
    auto mean = parse_mean_function(name);
    if (!mean) field_error(path + ".mean", "unknown mean function '" + name + "' (peak32 | peak12)");
    m.mean = *mean;
  }
  m.delta = get_field<double>(node, "delta", path + ".", m.delta);
  m.amp = get_field<double>(node, "amp", path + ".", m.amp);
  m.rate = get_field<double>(node, "rate", path + ".", m.rate);
  try {
    m.validate();
  } catch (const Error& e) {
    field_error(path, e.what());
  }
  return m;
}

TestConfig parse_test(const json& node, const std::string& path) {
  if (!node.is_object()) field_error(path, "expected an object");
  TestConfig t;
  auto kind = get_field<std::string>(node, "kind", path + ".", "dd");
  if (kind == "dd") {
    t.kind = TestKind::DD;
  } else if (kind == "flores") {
    t.kind = TestKind::Flores;
    t.method = DepthMethod::FM;
  } else {
    field_error(path + ".kind", "unknown test kind '" + kind + "' (dd | flores)");
  }
  if (node.contains("method")) {
    auto name = get_field<std::string>(node, "method", path + ".", "");
    auto method = parse_depth_method(name);
    if (!method) field_error(path + ".method", "unknown depth method '" + name + "' (fm | rp | fd2)");
    t.method = *method;
  }
  t.num_boot = get_count(node, "num_boot", path + ".", t.num_boot);
  t.alpha = get_field<double>(node, "alpha", path + ".", t.alpha);
  if (node.contains("null_scheme")) {
    auto name = get_field<std::string>(node, "null_scheme", path + ".", "");
    auto scheme = parse_null_scheme(name);
    if (!scheme) field_error(path + ".null_scheme", "unknown null scheme '" + name + "' (literal-H* | relabel)");
    t.null_scheme = *scheme;
  }
  t.rp_projections = get_count(node, "rp_projections", path + ".", t.rp_projections);
  if (node.contains("pair_budget")) {
    const json& b = node.at("pair_budget");
    if (b.is_string() && b.get<std::string>() == "all") {
      t.pair_budget = PairBudget::all();
    } else if (b.is_string() && b.get<std::string>() == "auto") {
      t.pair_budget = PairBudget::automatic();
    } else if (b.is_number_integer() && b.get<long long>() >= 1) {
      t.pair_budget = PairBudget::limit(b.get<std::size_t>());
    } else {
      field_error(path + ".pair_budget", "expected \"all\", \"auto\" or a positive integer");
    }
  }
  try {
    t.validate();
  } catch (const Error& e) {
    std::string msg = e.what();
    field_error(path, msg.substr(msg.find("tests[].") == std::string::npos ? 0 : msg.find("tests[].") + 8));
  }
  return t;
}

std::string pair_label(const json& a, const json& b) {
  if (a.is_number_integer() && b.is_number_integer())
    return std::to_string(a.get<int>()) + "v" + std::to_string(b.get<int>());
  return "";
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string to_json(const TestResult& r) {
  ordered_json j;
  j["method"] = r.method;
  j["n"] = r.n;
  j["m"] = r.m;
  j["t0"] = number_or_null(r.t0);
  j["t1"] = number_or_null(r.t1);
  j["p0"] = r.p0;
  j["p1"] = number_or_null(r.p1);
  j["p_adjusted"] = r.p_adjusted;
  j["reject"] = r.reject;
  j["alpha"] = r.alpha;
  j["num_boot"] = r.num_boot;
  j["seed"] = r.seed.value;
  j["null_scheme"] = r.null_scheme;
  return j.dump(2) + "\n";
}

std::string power_table_csv(const PowerTable& table) {
  std::ostringstream os;
  os << "pair,test,replications,rejections,rate,mean_p_adjusted\n";
  for (const auto& row : table.rows) {
    os << row.pair << ',' << row.test << ',' << row.replications << ',' << row.rejections << ','
       << format_double(row.rate) << ',' << format_double(row.mean_p_adjusted) << '\n';
  }
  return os.str();
}

std::string power_table_json(const PowerTable& table) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json j;
    j["pair"] = row.pair;
    j["test"] = row.test;
    j["attempted"] = row.attempted;
    j["replications"] = row.replications;
    j["rejections"] = row.rejections;
    j["rate"] = row.rate;
    j["mean_p_adjusted"] = row.mean_p_adjusted;
    j["homogeneous"] = row.homogeneous;
    rows.push_back(j);
  }
  ordered_json doc;
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

std::string summary_json(const std::vector<TestSummary>& summary) {
  ordered_json tests = ordered_json::array();
  for (const auto& s : summary) {
    ordered_json j;
    j["test"] = s.test;
    j["average_size"] = s.size_rows > 0 ? ordered_json(s.average_size) : ordered_json(nullptr);
    j["maximum_size"] = s.size_rows > 0 ? ordered_json(s.maximum_size) : ordered_json(nullptr);
    j["average_power"] = s.power_rows > 0 ? ordered_json(s.average_power) : ordered_json(nullptr);
    j["minimum_power"] = s.power_rows > 0 ? ordered_json(s.minimum_power) : ordered_json(nullptr);
    j["minimum_power_pair"] = s.minimum_power_pair;
    tests.push_back(j);
  }
  ordered_json doc;
  doc["summary"] = tests;
  return doc.dump(2) + "\n";
}

std::vector<ExperimentSpec> parse_experiment_plan(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("experiment spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::Parse, "experiment spec must be a JSON object");

  ExperimentSpec protocol;
  protocol.n_per_sample = get_count(doc, "n_per_sample", "", protocol.n_per_sample);
  protocol.grid_size = get_count(doc, "grid_size", "", protocol.grid_size);
  protocol.replications = get_count(doc, "replications", "", protocol.replications);
  if (doc.contains("master_seed")) {
    const json& s = doc.at("master_seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      field_error("master_seed", "must be a non-negative integer");
    protocol.master_seed = RngSeed{s.get<std::uint64_t>()};
  }
  if (doc.contains("tests")) {
    const json& tests = doc.at("tests");
    if (!tests.is_array()) field_error("tests", "expected an array");
    protocol.tests.clear();
    for (std::size_t i = 0; i < tests.size(); ++i)
      protocol.tests.push_back(parse_test(tests[i], "tests[" + std::to_string(i) + "]"));
  }

  std::vector<ExperimentSpec> plan;
  if (doc.contains("model_a") || doc.contains("model_b")) {
    if (!doc.contains("model_a") || !doc.contains("model_b")) field_error("model_a/model_b", "both are required");
    ExperimentSpec spec = protocol;
    spec.model_a = parse_model(doc.at("model_a"), "model_a");
    spec.model_b = parse_model(doc.at("model_b"), "model_b");
    spec.label = get_field<std::string>(doc, "label", "", pair_label(doc.at("model_a"), doc.at("model_b")));
    plan.push_back(spec);
  }
  if (doc.contains("pairs")) {
    const json& pairs = doc.at("pairs");
    if (!pairs.is_array()) field_error("pairs", "expected an array");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const std::string path = "pairs[" + std::to_string(i) + "]";
      const json& p = pairs[i];
      if (!p.is_object() || !p.contains("a") || !p.contains("b")) field_error(path, "expected {\"a\": ..., \"b\": ...}");
      ExperimentSpec spec = protocol;
      spec.model_a = parse_model(p.at("a"), path + ".a");
      spec.model_b = parse_model(p.at("b"), path + ".b");
      spec.label = get_field<std::string>(p, "label", path + ".", pair_label(p.at("a"), p.at("b")));
      plan.push_back(spec);
    }
  }
  if (doc.contains("delta_sweep")) {
    const json& sw = doc.at("delta_sweep");
    if (!sw.is_object() || !sw.contains("deltas") || !sw.at("deltas").is_array() || sw.at("deltas").empty())
      field_error("delta_sweep.deltas", "expected a nonempty array of numbers");
    ModelSpec base = sw.contains("base") ? parse_model(sw.at("base"), "delta_sweep.base") : builtin_model(0);
    for (const json& d : sw.at("deltas")) {
      if (!d.is_number()) field_error("delta_sweep.deltas", "expected numbers");
      ExperimentSpec spec = protocol;
      spec.model_a = base;
      spec.model_a.delta = 0.0;
      spec.model_b = base;
      spec.model_b.delta = d.get<double>();
      spec.label = "delta=" + format_double(d.get<double>());
      plan.push_back(spec);
    }
  }
  if (doc.contains("m_sweep")) {
    const json& sw = doc.at("m_sweep");
    if (!sw.is_object() || !sw.contains("m_values") || !sw.at("m_values").is_array() || sw.at("m_values").empty())
      field_error("m_sweep.m_values", "expected a nonempty array of positive numbers");
    ModelSpec base = sw.contains("base") ? parse_model(sw.at("base"), "m_sweep.base") : builtin_model(0);
    base.amp = get_field<double>(sw, "base_k", "m_sweep.", base.amp);
    for (const json& mv : sw.at("m_values")) {
      if (!mv.is_number() || !(mv.get<double>() > 0.0)) field_error("m_sweep.m_values", "every m must be a number > 0");
      ExperimentSpec spec = protocol;
      spec.model_a = base;
      spec.model_b = base;
      spec.model_b.amp = base.amp * mv.get<double>();
      spec.label = "m=" + format_double(mv.get<double>());
      plan.push_back(spec);
    }
  }
  if (plan.empty()) field_error("pairs", "no comparison given (model_a/model_b, pairs, delta_sweep or m_sweep)");
  for (const auto& spec : plan) spec.validate();
  return plan;
}

}  // namespace fdhomog
