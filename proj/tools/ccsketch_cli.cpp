// ccsketch command-line front end.
//
//   ccsketch plan --n 1000000 --delta 0.01 --alpha 0.5 --k 10
//   ccsketch encode --signal x.txt --n 1000 --m 200 --alpha 0.05 --out y.json
//   ccsketch decode --measurements y.json --k 10
//   ccsketch experiment recovery --config fig3.cfg --trials 5
//
// Failures print {"error": {...}} on stderr and exit nonzero.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ccsketch/decoder.hpp"
#include "ccsketch/experiment.hpp"
#include "ccsketch/io.hpp"
#include "ccsketch/planner.hpp"
#include "ccsketch/ratio_law.hpp"
#include "ccsketch/sketch.hpp"

namespace {

using namespace ccsketch;

AlphaParam parse_alpha(const std::string& text) {
  if (text == "0" || text == "zero") return AlphaParam::zero_limit();
  std::size_t used = 0;
  const double value = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("cannot parse alpha '" + text + "'");
  return AlphaParam(value);
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<AlphaParam> parse_alpha_list(const std::string& text) {
  std::vector<AlphaParam> out;
  if (text == "default") return ExperimentConfig::default_alpha_grid();
  for (const auto& item : split(text)) out.push_back(parse_alpha(item));
  if (out.empty()) throw std::invalid_argument("empty alpha list");
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  return read_file(path);
}

void print_error(const std::string& type, const std::string& message) {
  nlohmann::ordered_json err;
  err["error"] = {{"type", type}, {"message", message}};
  std::cerr << err.dump() << '\n';
}

struct CommonOptions {
  std::string format = "csv";
  std::string out;
};

void add_output_options(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--format", common.format, "Output table format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", common.out, "Output path (default stdout)");
}

// ---- plan ----

struct PlanArgs {
  std::uint64_t n = 0;
  double delta = 0.01;
  std::string alpha;
  double eps = 1.0;
  std::optional<double> theta;
  std::optional<std::uint64_t> k;
};

void run_plan(const PlanArgs& a, const CommonOptions& common) {
  if (a.theta.has_value() == a.k.has_value()) {
    throw std::invalid_argument("plan needs exactly one of --theta and --k");
  }
  PlannerQuery query{a.n, a.delta, parse_alpha(a.alpha), a.eps, Theta{0.0}};
  if (a.theta) {
    query.scale = Theta{*a.theta};
  } else {
    query.scale = UnitSpikes{*a.k};
  }
  Table table{{"path", "applicable", "m", "bound", "failure_bound", "note"}, {}};
  for (const auto& row : plan_all(query)) {
    table.rows.push_back({to_string(row.path), std::string(row.applicable ? "true" : "false"),
                          row.m, row.bound, row.failure_bound, row.note});
  }
  std::map<std::string, std::string> echo{{"command", "plan"},
                                          {"n", std::to_string(a.n)},
                                          {"delta", format_double(a.delta)},
                                          {"alpha", a.alpha},
                                          {"eps", format_double(a.eps)}};
  if (a.theta) echo["theta"] = format_double(*a.theta);
  if (a.k) echo["k"] = std::to_string(*a.k);
  emit(emit_tables(table, parse_table_format(common.format), echo), common.out);
}

// ---- encode / stream / decode ----

struct EncodeArgs {
  std::string signal_path;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::string alpha;
  std::uint64_t seed = 1;
  double sigma0 = 0.0;
  std::uint64_t noise_seed = 2;
};

void run_encode(const EncodeArgs& a, const CommonOptions& common) {
  const DesignSpec design{a.n, a.m, parse_alpha(a.alpha), a.seed};
  design.validate();
  std::istringstream in(read_input(a.signal_path));
  MeasurementVector y = encode(read_signal(in, a.n), design);
  if (a.sigma0 > 0.0) add_noise(y, NoiseSpec{a.sigma0, a.noise_seed});
  emit(measurements_to_json(y), common.out);
}

struct StreamArgs {
  std::string measurements_path;
  std::string updates_path;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::string alpha;
  std::uint64_t seed = 1;
};

void run_stream(const StreamArgs& a, const CommonOptions& common) {
  std::optional<MeasurementVector> y;
  if (!a.measurements_path.empty()) {
    y.emplace(measurements_from_json(read_input(a.measurements_path)));
  } else {
    if (a.n == 0 || a.m == 0 || a.alpha.empty()) {
      throw std::invalid_argument("stream needs --measurements or all of --n, --m, --alpha");
    }
    const DesignSpec design{a.n, a.m, parse_alpha(a.alpha), a.seed};
    design.validate();
    y.emplace(design);
  }
  std::istringstream in(read_input(a.updates_path));
  const auto updates = read_stream(in, y->design().n);
  stream_updates(*y, updates);
  emit(measurements_to_json(*y), common.out);
}

struct DecodeArgs {
  std::string measurements_path;
  std::uint64_t k = 10;
  std::string truth_path;
  bool correct = false;
  bool timing = false;
  std::size_t max_estimates = 100000;
};

void run_decode(const DecodeArgs& a, const CommonOptions& common) {
  const MeasurementVector y = measurements_from_json(read_input(a.measurements_path));
  RecoveryReport report = decode_all(y);
  if (a.correct) report = bias_correct_half(std::move(report), y);
  report.support = top_k(report.raw_estimates, a.k);
  if (!a.truth_path.empty()) {
    std::istringstream in(read_input(a.truth_path));
    const SignalVector truth = read_signal(in, y.design().n);
    report.normalized_error =
        normalized_error(truth, restrict_to_support(report.estimates, report.support));
  }
  if (!a.timing) report.decode_seconds = 0.0;
  const DesignSpec& d = y.design();
  ReportJsonOptions options{a.max_estimates,
                            {{"command", "decode"},
                             {"n", std::to_string(d.n)},
                             {"m", std::to_string(d.m)},
                             {"alpha", format_double(d.alpha.value())},
                             {"seed", std::to_string(d.seed)},
                             {"k", std::to_string(a.k)}}};
  emit(report_to_json(report, options), common.out);
}

// ---- distributional quantities ----

struct RatioCdfArgs {
  std::string alpha = "0.5";
  std::vector<double> t;
  std::size_t grid = 0;
};

void run_ratio_cdf(const RatioCdfArgs& a, const CommonOptions& common) {
  std::vector<double> points = a.t;
  for (std::size_t g = 1; g <= a.grid; ++g) points.push_back(static_cast<double>(g) / a.grid);
  if (points.empty()) throw std::invalid_argument("ratio-cdf needs --t or --grid");
  Table table{{"alpha", "t", "cdf", "lower_bound", "upper_bound"}, {}};
  for (const auto& alpha : parse_alpha_list(a.alpha)) {
    for (double t : points) {
      table.rows.push_back({alpha.value(), t, ratio_cdf(alpha, t), t / (1.0 + t),
                            2.0 / std::numbers::pi * std::atan(std::sqrt(t))});
    }
  }
  emit(emit_tables(table, parse_table_format(common.format), {{"command", "ratio-cdf"}}), common.out);
}

void run_c_alpha(const std::string& alphas, const CommonOptions& common) {
  Table table{{"alpha", "c_alpha", "spread"}, {}};
  for (const auto& alpha : parse_alpha_list(alphas)) {
    const auto c = c_alpha(alpha);
    table.rows.push_back({alpha.value(), c.value, c.spread});
  }
  emit(emit_tables(table, parse_table_format(common.format), {{"command", "c-alpha"}}), common.out);
}

void run_bias_constant(const std::vector<std::uint64_t>& ms, const std::string& alphas,
                       const CommonOptions& common) {
  Table table{{"m", "alpha", "bias_constant"}, {}};
  for (const auto& alpha : parse_alpha_list(alphas)) {
    for (auto m : ms) table.rows.push_back({m, alpha.value(), bias_constant(m, alpha)});
  }
  emit(emit_tables(table, parse_table_format(common.format), {{"command", "bias-constant"}}),
       common.out);
}

// ---- experiments ----

struct ExperimentArgs {
  std::string config_path;
  std::uint64_t n = 0, k = 0, m = 0, trials = 0, seed = 0;
  std::string alpha, m_rule, n_list;
  double delta = 0.0, sigma0 = 0.0;
  bool timing = false;
};

ExperimentConfig build_config(const ExperimentArgs& a, CLI::App* cmd, const std::string& kind,
                              const CommonOptions& common) {
  ExperimentConfig config;
  if (kind == "bias") {
    config.alpha_grid = {AlphaParam(0.5)};
    config.m_rule = MRule::factor_1_6;
    config.trials = 100;
  }
  if (kind == "noise") {
    config.alpha_grid = {AlphaParam(0.05), AlphaParam(0.2)};
    config.sigma0 = 0.1;
  }
  if (!a.config_path.empty()) apply_config_file(config, a.config_path);
  auto given = [&](const char* name) { return cmd->count(name) > 0; };
  if (given("--n")) config.n = a.n;
  if (given("--k")) config.k = a.k;
  if (given("--alpha")) config.alpha_grid = parse_alpha_list(a.alpha);
  if (given("--m-rule")) config.m_rule = parse_m_rule(a.m_rule);
  if (given("--m")) {
    config.explicit_m = a.m;
    config.m_rule = MRule::explicit_m;
  }
  if (given("--delta")) config.delta = a.delta;
  if (given("--trials")) config.trials = a.trials;
  if (given("--seed")) config.master_seed = a.seed;
  if (given("--sigma0")) config.sigma0 = a.sigma0;
  if (given("--n-list")) {
    config.n_list.clear();
    for (const auto& item : split(a.n_list)) config.n_list.push_back(std::stoull(item));
  }
  if (given("--timing")) config.timing = a.timing;
  if (given("--out")) config.output_path = common.out;
  if (kind == "bias" && !(config.alpha_grid.size() == 1 && config.alpha_grid[0].is_half())) {
    throw std::invalid_argument("the bias experiment runs at alpha = 0.5 only");
  }
  config.validate();
  return config;
}

void run_experiment(const std::string& kind, const ExperimentConfig& config,
                    const CommonOptions& common) {
  Table table;
  if (kind == "recovery") {
    table = to_table(run_recovery_experiment(config));
  } else if (kind == "bias") {
    table = to_table(run_bias_experiment(config));
  } else {
    table = to_table(run_noise_experiment(config));
  }
  emit(emit_tables(table, parse_table_format(common.format), config_echo(config, kind)),
       config.output_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse recovery of nonnegative signals with skewed stable projections"};
  app.require_subcommand(1);
  CommonOptions common;

  PlanArgs plan_args;
  auto* plan = app.add_subcommand("plan", "Measurements needed for a recovery guarantee");
  plan->add_option("--n", plan_args.n, "Signal dimension N")->required();
  plan->add_option("--delta", plan_args.delta, "Failure probability");
  plan->add_option("--alpha", plan_args.alpha, "alpha in (0, 0.5], or 0 for the limit")->required();
  plan->add_option("--eps", plan_args.eps, "Additive accuracy");
  plan->add_option("--theta", plan_args.theta, "alpha-norm theta of the signal");
  plan->add_option("--k", plan_args.k, "Number of unit spikes (theta^alpha = K)");
  add_output_options(plan, common);

  EncodeArgs encode_args;
  auto* enc = app.add_subcommand("encode", "Measure a signal file");
  enc->add_option("--signal", encode_args.signal_path, "Signal file ('-' for stdin)")->required();
  enc->add_option("--n", encode_args.n, "Signal dimension")->required();
  enc->add_option("--m", encode_args.m, "Number of measurements")->required();
  enc->add_option("--alpha", encode_args.alpha, "Stability index")->required();
  enc->add_option("--seed", encode_args.seed, "Design seed");
  enc->add_option("--sigma0", encode_args.sigma0, "Noise scale; variance is n * sigma0^2");
  enc->add_option("--noise-seed", encode_args.noise_seed, "Noise seed");
  add_output_options(enc, common);

  StreamArgs stream_args;
  auto* str = app.add_subcommand("stream", "Apply turnstile updates to measurements");
  str->add_option("--updates", stream_args.updates_path, "Update file ('-' for stdin)")->required();
  str->add_option("--measurements", stream_args.measurements_path, "Existing measurement file");
  str->add_option("--n", stream_args.n, "Signal dimension (fresh sketch)");
  str->add_option("--m", stream_args.m, "Number of measurements (fresh sketch)");
  str->add_option("--alpha", stream_args.alpha, "Stability index (fresh sketch)");
  str->add_option("--seed", stream_args.seed, "Design seed (fresh sketch)");
  add_output_options(str, common);

  DecodeArgs decode_args;
  auto* dec = app.add_subcommand("decode", "Recover a signal from measurements");
  dec->add_option("--measurements", decode_args.measurements_path, "Measurement file")->required();
  dec->add_option("--k", decode_args.k, "Size of the reported support");
  dec->add_option("--truth", decode_args.truth_path, "True signal, enables normalized_error");
  dec->add_flag("--correct", decode_args.correct, "Apply the alpha = 0.5 bias correction");
  dec->add_flag("--timing", decode_args.timing, "Record decode time");
  dec->add_option("--max-estimates", decode_args.max_estimates,
                  "Leave estimates out of the report above this length");
  add_output_options(dec, common);

  RatioCdfArgs cdf_args;
  auto* cdf = app.add_subcommand("ratio-cdf", "F_alpha(t), the law of the ratio statistic");
  cdf->add_option("--alpha", cdf_args.alpha, "Comma-separated alphas, 0 for the limit");
  cdf->add_option("--t", cdf_args.t, "Evaluation points")->delimiter(',');
  cdf->add_option("--grid", cdf_args.grid, "Add the points g/grid for g = 1..grid");
  add_output_options(cdf, common);

  std::string c_alphas = "0.1,0.25,0.4,0.5";
  auto* cal = app.add_subcommand("c-alpha", "Constant of the sharp sample-complexity bound");
  cal->add_option("--alpha", c_alphas, "Comma-separated alphas");
  add_output_options(cal, common);

  std::vector<std::uint64_t> bias_ms{10, 50, 200};
  std::string bias_alphas = "0.5";
  auto* bc = app.add_subcommand("bias-constant", "D_{M,alpha}, the bias of the minimum estimator");
  bc->add_option("--m", bias_ms, "Comma-separated M values")->delimiter(',');
  bc->add_option("--alpha", bias_alphas, "Comma-separated alphas");
  add_output_options(bc, common);

  ExperimentArgs exp_args;
  auto* exp = app.add_subcommand("experiment", "Desk-scale simulations");
  exp->require_subcommand(1);
  std::vector<std::pair<std::string, CLI::App*>> kinds;
  for (const char* kind : {"recovery", "bias", "noise"}) {
    auto* sub = exp->add_subcommand(kind, std::string(kind) + " experiment");
    sub->add_option("--config", exp_args.config_path, "key=value config file");
    sub->add_option("--n", exp_args.n, "Signal dimension");
    sub->add_option("--k", exp_args.k, "Number of unit spikes");
    sub->add_option("--alpha", exp_args.alpha, "Comma-separated alphas or 'default'");
    sub->add_option("--m", exp_args.m, "Explicit number of measurements");
    sub->add_option("--m-rule", exp_args.m_rule, "K_LOG_N_DELTA, FACTOR_1_6 or EXPLICIT");
    sub->add_option("--delta", exp_args.delta, "Failure probability used by the M rule");
    sub->add_option("--trials", exp_args.trials, "Trials per row");
    sub->add_option("--seed", exp_args.seed, "Master seed");
    sub->add_option("--sigma0", exp_args.sigma0, "Noise scale");
    sub->add_option("--n-list", exp_args.n_list, "Comma-separated signal sizes (bias)");
    sub->add_flag("--timing", exp_args.timing, "Record decode times");
    add_output_options(sub, common);
    kinds.emplace_back(kind, sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (plan->parsed()) run_plan(plan_args, common);
    if (enc->parsed()) run_encode(encode_args, common);
    if (str->parsed()) run_stream(stream_args, common);
    if (dec->parsed()) run_decode(decode_args, common);
    if (cdf->parsed()) run_ratio_cdf(cdf_args, common);
    if (cal->parsed()) run_c_alpha(c_alphas, common);
    if (bc->parsed()) run_bias_constant(bias_ms, bias_alphas, common);
    for (const auto& [kind, sub] : kinds) {
      if (sub->parsed()) run_experiment(kind, build_config(exp_args, sub, kind, common), common);
    }
  } catch (const std::invalid_argument& e) {
    print_error("invalid_argument", e.what());
    return 1;
  } catch (const std::domain_error& e) {
    print_error("domain_error", e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("runtime_error", e.what());
    return 1;
  }
  return 0;
}
