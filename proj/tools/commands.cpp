#include "commands.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "fdhomog/curves.hpp"
#include "fdhomog/ddplot.hpp"
#include "fdhomog/depth.hpp"
#include "fdhomog/error.hpp"
#include "fdhomog/flores.hpp"
#include "fdhomog/serialize.hpp"
#include "fdhomog/sim.hpp"
#include "svg.hpp"

namespace fdhomog::cli {
namespace {

namespace fs = std::filesystem;

struct DepthFlags {
  std::string method = "fd2";
  std::size_t projections = 50;
  std::string pairs = "auto";
  std::uint64_t seed = 0;
};

void add_depth_flags(CLI::App* cmd, DepthFlags& flags, bool allow_flores) {
  cmd->add_option("--method", flags.method, allow_flores ? "fm | rp | fd2 | flores" : "fm | rp | fd2")
      ->check(allow_flores ? CLI::IsMember({"fm", "rp", "fd2", "flores"}) : CLI::IsMember({"fm", "rp", "fd2"}))
      ->capture_default_str();
  cmd->add_option("--projections", flags.projections, "random projections for RP depth")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--pairs", flags.pairs, "FD2 grid-pair budget: auto | all | <count>")->capture_default_str();
  cmd->add_option("--seed", flags.seed, "seed for every random choice")->capture_default_str();
}

PairBudget parse_budget(const std::string& text) {
  if (text == "auto") return PairBudget::automatic();
  if (text == "all") return PairBudget::all();
  std::size_t count = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), count);
  if (ec != std::errc() || ptr != text.data() + text.size() || count == 0)
    throw Error(ErrorCode::InvalidArgument, "--pairs expects auto, all or a positive integer, got '" + text + "'");
  return PairBudget::limit(count);
}

DepthSpec depth_spec_from(const DepthFlags& flags, DepthMethod method) {
  return seeded_depth_spec(method, RngSeed{flags.seed}, flags.projections, parse_budget(flags.pairs));
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write to '" + path.string() + "' failed");
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Two samples either from two files or from one labelled file split on a label.
struct SamplePair {
  FunctionalSample f;
  FunctionalSample g;
  std::string name_f;
  std::string name_g;
};

struct SampleInputs {
  std::string file_a;
  std::string file_b;
  std::string label;
};

void add_sample_inputs(CLI::App* cmd, SampleInputs& in) {
  cmd->add_option("--a", in.file_a, "CSV file of the first sample")->required();
  cmd->add_option("--b", in.file_b, "CSV file of the second sample");
  cmd->add_option("--label", in.label, "split --a on this label instead of reading --b");
}

SamplePair load_pair(const SampleInputs& in) {
  if (!in.label.empty()) {
    if (!in.file_b.empty()) throw Error(ErrorCode::InvalidArgument, "give either --b or --label, not both");
    auto [f, g] = split_by_label(load_sample_csv(in.file_a), in.label);
    return {std::move(f), std::move(g), in.label, "not " + in.label};
  }
  if (in.file_b.empty()) throw Error(ErrorCode::InvalidArgument, "--b is required unless --label is given");
  FunctionalSample f = load_sample_csv(in.file_a);
  FunctionalSample g = load_sample_csv(in.file_b);
  require_same_grid(f, g);
  return {std::move(f), std::move(g), fs::path(in.file_a).filename().string(), fs::path(in.file_b).filename().string()};
}

std::string test_result_csv(const TestResult& r) {
  auto opt = [](std::optional<double> v) { return v && std::isfinite(*v) ? format_double(*v) : std::string(); };
  std::ostringstream os;
  os << "method,n,m,t0,t1,p0,p1,p_adjusted,reject,alpha,num_boot,seed,null_scheme\n"
     << r.method << ',' << r.n << ',' << r.m << ',' << opt(r.t0) << ',' << opt(r.t1) << ',' << format_double(r.p0)
     << ',' << opt(r.p1) << ',' << format_double(r.p_adjusted) << ',' << (r.reject ? "true" : "false") << ','
     << format_double(r.alpha) << ',' << r.num_boot << ',' << r.seed.value << ',' << r.null_scheme << '\n';
  return os.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Depth-based homogeneity tests for functional data"};
  app.name("fdhomog");
  app.require_subcommand(1);
  std::string format = "json";
  app.add_option("--format", format, "output format for tables and test results: csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "simulate curves from a Gaussian-process model");
  std::optional<int> model_id;
  std::string mean_name = "peak32";
  double delta = 0.0, amp = 0.3, rate = 3.33;
  std::size_t n = 0, grid_count = 30;
  std::uint64_t sim_seed = 0;
  std::string sim_out, sim_label;
  simulate->add_option("--model", model_id, "built-in model id 0-5 (overrides --mean/--delta/--amp/--rate)");
  simulate->add_option("--mean", mean_name, "peak32 | peak12")->capture_default_str();
  simulate->add_option("--delta", delta, "constant shift")->capture_default_str();
  simulate->add_option("--amp", amp, "covariance amplitude k")->capture_default_str();
  simulate->add_option("--rate", rate, "covariance rate c")->capture_default_str();
  simulate->add_option("--n", n, "number of curves")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--grid", grid_count, "equispaced grid points on [0, 1]")->capture_default_str();
  simulate->add_option("--seed", sim_seed, "random seed")->capture_default_str();
  simulate->add_option("--label", sim_label, "write this label in a leading label column");
  simulate->add_option("--out", sim_out, "output CSV path")->required();

  // depth
  auto* depth_cmd = app.add_subcommand("depth", "depth of every curve of --eval w.r.t. --ref");
  std::string eval_file, ref_file, depth_out;
  DepthFlags depth_flags;
  depth_cmd->add_option("--eval", eval_file, "curves to evaluate")->required();
  depth_cmd->add_option("--ref", ref_file, "reference sample")->required();
  add_depth_flags(depth_cmd, depth_flags, false);
  depth_cmd->add_option("--out", depth_out, "output path (stdout when omitted)");

  // test
  auto* test_cmd = app.add_subcommand("test", "homogeneity test of two samples");
  SampleInputs test_inputs;
  DepthFlags test_flags;
  double alpha = 0.05;
  std::size_t num_boot = 500;
  std::string null_scheme = "relabel";
  std::string test_out;
  add_sample_inputs(test_cmd, test_inputs);
  add_depth_flags(test_cmd, test_flags, true);
  test_cmd->add_option("--alpha", alpha, "significance level")->capture_default_str();
  test_cmd->add_option("--boot", num_boot, "bootstrap replicates B")->capture_default_str();
  test_cmd->add_option("--null-scheme", null_scheme, "relabel | literal-H*")
      ->check(CLI::IsMember({"relabel", "literal-H*", "literal"}))
      ->capture_default_str();
  test_cmd->add_option("--out", test_out, "write the TestResult here");

  // ddplot
  auto* dd_cmd = app.add_subcommand("ddplot", "render the DD-plot of two samples as SVG");
  SampleInputs dd_inputs;
  DepthFlags dd_flags;
  std::string dd_out;
  add_sample_inputs(dd_cmd, dd_inputs);
  add_depth_flags(dd_cmd, dd_flags, false);
  dd_cmd->add_option("--out", dd_out, "output SVG path")->required();

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "run a Monte-Carlo size/power experiment");
  std::string spec_file, exp_out;
  std::optional<std::size_t> replications;
  exp_cmd->add_option("--spec", spec_file, "JSON experiment specification")->required();
  exp_cmd->add_option("--out", exp_out, "output directory")->required();
  exp_cmd->add_option("--replications", replications, "override the replication count of every experiment");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*simulate) {
      ModelSpec spec;
      if (model_id) {
        spec = builtin_model(*model_id);
      } else {
        auto mean = parse_mean_function(mean_name);
        if (!mean) throw Error(ErrorCode::InvalidArgument, "unknown mean function '" + mean_name + "'");
        spec = ModelSpec{*mean, delta, amp, rate};
      }
      FunctionalSample sample = simulate_sample(spec, n, make_grid(0.0, 1.0, grid_count), RngSeed{sim_seed});
      if (!sim_label.empty()) {
        sample = FunctionalSample(sample.grid(), std::vector<double>(sample.values().begin(), sample.values().end()),
                                  std::vector<std::string>(sample.size(), sim_label));
      }
      write_sample_csv(fs::path(sim_out), sample);
      return 0;
    }

    if (*depth_cmd) {
      FunctionalSample eval = load_sample_csv(eval_file);
      FunctionalSample ref = load_sample_csv(ref_file);
      const DepthSpec spec = depth_spec_from(depth_flags, *parse_depth_method(depth_flags.method));
      DepthVector dv = compute_depth(eval, ref, spec);
      std::ostringstream os;
      if (format == "csv") {
        os << "index,depth\n";
        for (std::size_t i = 0; i < dv.values.size(); ++i) os << i << ',' << format_double(dv.values[i]) << '\n';
      } else {
        os << "{\n  \"method\": \"" << to_string(dv.method) << "\",\n  \"reference_size\": " << dv.reference_size
           << ",\n  \"values\": [";
        for (std::size_t i = 0; i < dv.values.size(); ++i) os << (i ? ", " : "") << format_double(dv.values[i]);
        os << "]\n}\n";
      }
      if (depth_out.empty()) {
        out << os.str();
      } else {
        write_text(depth_out, os.str());
      }
      return 0;
    }

    if (*test_cmd) {
      SamplePair samples = load_pair(test_inputs);
      TestResult result;
      if (test_flags.method == "flores") {
        FloresOptions options{depth_spec_from(test_flags, DepthMethod::FM), alpha, num_boot, RngSeed{test_flags.seed}};
        result = flores_test(samples.f, samples.g, options);
      } else {
        BootstrapOptions options;
        options.depth = depth_spec_from(test_flags, *parse_depth_method(test_flags.method));
        options.alpha = alpha;
        options.num_boot = num_boot;
        options.seed = RngSeed{test_flags.seed};
        options.null_scheme = *parse_null_scheme(null_scheme);
        result = bootstrap_test(samples.f, samples.g, options);
      }
      if (!test_out.empty()) write_text(test_out, format == "csv" ? test_result_csv(result) : to_json(result));
      out << (result.reject ? "REJECT" : "FAIL-TO-REJECT") << " p=" << format_double(result.p_adjusted) << '\n';
      return 0;
    }

    if (*dd_cmd) {
      SamplePair samples = load_pair(dd_inputs);
      const DepthSpec spec = depth_spec_from(dd_flags, *parse_depth_method(dd_flags.method));
      DDPlot dd = build_ddplot(samples.f, samples.g, spec);
      write_text(dd_out, render_ddplot_svg(dd, samples.name_f, samples.name_g));
      return 0;
    }

    if (*exp_cmd) {
      std::vector<ExperimentSpec> plan = parse_experiment_plan(read_text(spec_file));
      if (replications) {
        if (*replications < 1) throw Error(ErrorCode::InvalidArgument, "replications: must be >= 1");
        for (auto& e : plan) e.replications = *replications;
      }
      PowerTable table;
      for (const auto& e : plan) {
        err << "running " << e.label << " (" << e.replications << " replications)\n";
        table.append(run_experiment(e));
      }
      fs::create_directories(exp_out);
      const fs::path dir(exp_out);
      write_text(dir / "power_table.csv", power_table_csv(table));
      if (format == "json") write_text(dir / "power_table.json", power_table_json(table));
      write_text(dir / "summary.json", summary_json(summarize(table)));
      out << power_table_csv(table);
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace fdhomog::cli
