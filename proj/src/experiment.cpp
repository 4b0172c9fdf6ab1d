#include "ccsketch/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

#include "ccsketch/counter_rng.hpp"
#include "ccsketch/decoder.hpp"
#include "ccsketch/planner.hpp"
#include "ccsketch/ratio_law.hpp"

namespace ccsketch {

namespace {

double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t parse_count(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  const double v = std::stod(value, &used);
  if (used != value.size() || !(v >= 0.0) || v != std::floor(v) || v > 1.8e19) {
    throw std::invalid_argument("config key '" + key + "' expects a nonnegative integer, got '" +
                                value + "'");
  }
  return static_cast<std::uint64_t>(v);
}

double parse_real(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  const double v = std::stod(value, &used);
  if (used != value.size()) {
    throw std::invalid_argument("config key '" + key + "' expects a number, got '" + value + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw std::invalid_argument("config key '" + key + "' expects a boolean, got '" + value + "'");
}

bool same_support(std::vector<std::uint64_t> found, const std::vector<std::uint64_t>& planted) {
  std::sort(found.begin(), found.end());
  return found == planted;
}

std::uint64_t count_underestimates(const SignalVector& truth, std::span<const double> raw) {
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) count += raw[i] < truth[i] ? 1 : 0;
  return count;
}

double elapsed_or_zero(const ExperimentConfig& config, double seconds) {
  return config.timing ? seconds : 0.0;
}

}  // namespace

std::string to_string(MRule rule) {
  switch (rule) {
    case MRule::k_log_n_delta: return "K_LOG_N_DELTA";
    case MRule::factor_1_6: return "FACTOR_1_6";
    case MRule::explicit_m: return "EXPLICIT";
  }
  return "unknown";
}

MRule parse_m_rule(const std::string& text) {
  std::string upper = text;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  std::replace(upper.begin(), upper.end(), '-', '_');
  if (upper == "K_LOG_N_DELTA") return MRule::k_log_n_delta;
  if (upper == "FACTOR_1_6") return MRule::factor_1_6;
  if (upper == "EXPLICIT") return MRule::explicit_m;
  throw std::invalid_argument("unknown m-rule '" + text +
                              "' (expected K_LOG_N_DELTA, FACTOR_1_6 or EXPLICIT)");
}

std::vector<AlphaParam> ExperimentConfig::default_alpha_grid() {
  std::vector<AlphaParam> grid;
  for (int hundredths = 4; hundredths <= 50; ++hundredths) grid.emplace_back(hundredths / 100.0);
  return grid;
}

void ExperimentConfig::validate() const {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (k < 1 || k > n) throw std::invalid_argument("k must satisfy 1 <= k <= n");
  if (alpha_grid.empty()) throw std::invalid_argument("alpha grid is empty");
  for (const auto& a : alpha_grid) a.require_finite("an experiment");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  if (trials > 0xffffffffu) throw std::invalid_argument("trials must fit in 32 bits");
  if (m_rule == MRule::explicit_m && explicit_m < 1) {
    throw std::invalid_argument("an explicit m-rule needs m >= 1");
  }
  if (sigma0 && !(*sigma0 >= 0.0)) throw std::invalid_argument("sigma0 must be nonnegative");
  for (auto size : n_list) {
    if (size < k) throw std::invalid_argument("every entry of n_list must be at least k");
  }
}

void apply_config_text(ExperimentConfig& config, const std::string& text) {
  std::stringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + " lacks '='");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "n") {
      config.n = parse_count(key, value);
    } else if (key == "k") {
      config.k = parse_count(key, value);
    } else if (key == "alpha") {
      std::vector<AlphaParam> grid;
      if (value == "default") {
        grid = ExperimentConfig::default_alpha_grid();
      } else {
        for (const auto& item : split_list(value)) grid.emplace_back(parse_real(key, item));
      }
      config.alpha_grid = std::move(grid);
    } else if (key == "m_rule") {
      config.m_rule = parse_m_rule(value);
    } else if (key == "m") {
      config.explicit_m = parse_count(key, value);
      config.m_rule = MRule::explicit_m;
    } else if (key == "delta") {
      config.delta = parse_real(key, value);
    } else if (key == "trials") {
      config.trials = parse_count(key, value);
    } else if (key == "sigma0") {
      config.sigma0 = parse_real(key, value);
    } else if (key == "seed") {
      config.master_seed = std::stoull(value);
    } else if (key == "out") {
      config.output_path = value;
    } else if (key == "n_list") {
      config.n_list.clear();
      for (const auto& item : split_list(value)) config.n_list.push_back(parse_count(key, item));
    } else if (key == "timing") {
      config.timing = parse_bool(key, value);
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
}

void apply_config_file(ExperimentConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  apply_config_text(config, buffer.str());
}

MPlan plan_measurements(const ExperimentConfig& config, std::uint64_t n) {
  if (config.m_rule == MRule::explicit_m) return {config.explicit_m, "explicit"};
  const PlannerQuery query{n, config.delta, AlphaParam::zero_limit(), 1.0, UnitSpikes{config.k}};
  const double bound = measurements_order_bound(query);
  const double factor = config.m_rule == MRule::factor_1_6 ? 1.6 : 1.0;
  return {static_cast<std::uint64_t>(std::max(1.0, std::ceil(factor * bound))), "order"};
}

std::uint64_t trial_design_seed(std::uint64_t master_seed, std::uint64_t trial) {
  return derive_seed(master_seed, Domain::design, static_cast<std::uint32_t>(trial));
}

std::uint64_t trial_noise_seed(std::uint64_t master_seed, std::uint64_t trial) {
  return derive_seed(master_seed, Domain::noise, static_cast<std::uint32_t>(trial));
}

std::vector<std::uint64_t> workload_support(std::uint64_t n, std::uint64_t k,
                                            std::uint64_t master_seed, std::uint64_t trial) {
  if (k > n) throw std::invalid_argument("workload needs k <= n");
  // Floyd's algorithm: k draws, each from a growing range.
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(k) * 2);
  std::uint32_t step = 0;
  for (std::uint64_t j = n - k; j < n; ++j, ++step) {
    const auto word = counter_words(master_seed, Domain::workload,
                                    static_cast<std::uint32_t>(trial), step).first;
    const std::uint64_t t = bounded(word, j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> support(chosen.begin(), chosen.end());
  std::sort(support.begin(), support.end());
  return support;
}

std::vector<StreamUpdate> generate_turnstile_stream(std::uint64_t n, std::uint64_t count,
                                                    std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("turnstile stream needs n >= 1");
  if (count >= 0xffffffffu) throw std::invalid_argument("turnstile stream is limited to 2^32 - 1 updates");
  std::vector<double> running(n, 0.0);
  std::vector<StreamUpdate> updates;
  updates.reserve(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    const auto words = counter_words(seed, Domain::workload, k, 0xffffffffu);
    const std::uint64_t i = bounded(words.first, n);
    const double draw = unit_open(words.second);
    // Low bits choose insertion vs deletion; the high bits set the size.
    const bool remove = running[i] > 0.0 && (words.second & 3u) == 0u;
    const double increment = remove ? -(draw * running[i]) : 10.0 * draw;
    running[i] += increment;
    updates.push_back({i, increment});
  }
  return updates;
}

SignalVector net_signal(std::uint64_t n, const std::vector<StreamUpdate>& updates) {
  std::vector<double> x(n, 0.0);
  for (const auto& u : updates) x.at(u.index) += u.increment;
  return SignalVector(std::move(x));
}

SignalVector generate_workload(std::uint64_t n, std::uint64_t k, std::uint64_t master_seed,
                               std::uint64_t trial) {
  std::vector<double> x(n, 0.0);
  for (auto i : workload_support(n, k, master_seed, trial)) x[i] = 1.0;
  return SignalVector(std::move(x));
}

SignalVector generate_workload(const ExperimentConfig& config, std::uint64_t trial) {
  return generate_workload(config.n, config.k, config.master_seed, trial);
}

std::vector<RecoveryRow> run_recovery_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<RecoveryRow> rows;
  for (const auto& alpha : config.alpha_grid) {
    RecoveryRow row{.alpha = alpha.value(), .m_rule = to_string(config.m_rule)};
    try {
      const MPlan plan = plan_measurements(config, config.n);
      row.m = plan.m;
      row.planner_path = plan.path;
      std::vector<double> seconds;
      std::uint64_t exact = 0;
      for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
        const auto planted = workload_support(config.n, config.k, config.master_seed, trial);
        const SignalVector x = generate_workload(config, trial);
        const DesignSpec design{config.n, plan.m, alpha, trial_design_seed(config.master_seed, trial)};
        const RecoveryReport report = decode_all(encode(x, design));
        const auto support = top_k(report.estimates, config.k);
        row.errors.push_back(normalized_error(x, restrict_to_support(report.estimates, support)));
        seconds.push_back(report.decode_seconds);
        exact += same_support(support, planted) ? 1 : 0;
        row.overestimate_violations += count_underestimates(x, report.raw_estimates);
      }
      row.trials = config.trials;
      row.median_error = median(row.errors);
      row.median_seconds = elapsed_or_zero(config, median(seconds));
      row.support_rate = static_cast<double>(exact) / static_cast<double>(config.trials);
    } catch (const std::exception& e) {
      row.status = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<BiasRow> run_bias_experiment(const ExperimentConfig& config) {
  config.validate();
  const AlphaParam half(0.5);
  std::vector<BiasRow> rows;
  for (auto n : config.n_list) {
    BiasRow row{.n = n};
    try {
      const MPlan plan = plan_measurements(config, n);
      row.m = plan.m;
      row.planner_path = plan.path;
      row.bias_constant = bias_constant(plan.m, half);
      std::vector<double> uncorrected, corrected;
      for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
        const SignalVector x = generate_workload(n, config.k, config.master_seed, trial);
        const DesignSpec design{n, plan.m, half, trial_design_seed(config.master_seed, trial)};
        const MeasurementVector y = encode(x, design);
        const RecoveryReport report = bias_correct_half(decode_all(y), y);
        const auto support = top_k(report.estimates, config.k);
        uncorrected.push_back(normalized_error(x, restrict_to_support(report.estimates, support)));
        corrected.push_back(
            normalized_error(x, restrict_to_support(*report.corrected_estimates, support)));
        row.overestimate_violations += count_underestimates(x, report.raw_estimates);
      }
      row.trials = config.trials;
      row.median_error_uncorrected = median(uncorrected);
      row.median_error_corrected = median(corrected);
    } catch (const std::exception& e) {
      row.status = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<NoiseRow> run_noise_experiment(const ExperimentConfig& config) {
  config.validate();
  if (!config.sigma0) throw std::invalid_argument("the noise experiment needs sigma0");
  std::vector<NoiseRow> rows;
  for (const auto& alpha : config.alpha_grid) {
    NoiseRow row{.alpha = alpha.value(), .m_rule = to_string(config.m_rule), .sigma0 = *config.sigma0};
    try {
      const MPlan plan = plan_measurements(config, config.n);
      row.m = plan.m;
      row.planner_path = plan.path;
      std::vector<double> errors, seconds;
      std::uint64_t exact = 0;
      for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
        const auto planted = workload_support(config.n, config.k, config.master_seed, trial);
        const SignalVector x = generate_workload(config, trial);
        const DesignSpec design{config.n, plan.m, alpha, trial_design_seed(config.master_seed, trial)};
        MeasurementVector y = encode(x, design);
        add_noise(y, NoiseSpec{*config.sigma0, trial_noise_seed(config.master_seed, trial)});
        const RecoveryReport report = decode_all(y);
        // Ranked on raw minima: clamping would tie every negative estimate at 0.
        const auto support = top_k(report.raw_estimates, config.k);
        errors.push_back(normalized_error(x, restrict_to_support(report.estimates, support)));
        seconds.push_back(report.decode_seconds);
        exact += same_support(support, planted) ? 1 : 0;
      }
      row.trials = config.trials;
      row.support_rate = static_cast<double>(exact) / static_cast<double>(config.trials);
      row.median_error = median(errors);
      row.median_seconds = elapsed_or_zero(config, median(seconds));
    } catch (const std::exception& e) {
      row.status = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Table to_table(const std::vector<RecoveryRow>& rows) {
  Table table{{"alpha", "m", "m_rule", "planner_path", "trials", "median_error", "median_seconds",
               "support_rate", "overestimate_violations", "status"},
              {}};
  for (const auto& r : rows) {
    table.rows.push_back({r.alpha, r.m, r.m_rule, r.planner_path, r.trials, r.median_error,
                          r.median_seconds, r.support_rate, r.overestimate_violations, r.status});
  }
  return table;
}

Table to_table(const std::vector<BiasRow>& rows) {
  Table table{{"n", "alpha", "m", "planner_path", "trials", "bias_constant",
               "median_error_uncorrected", "median_error_corrected", "overestimate_violations",
               "status"},
              {}};
  for (const auto& r : rows) {
    table.rows.push_back({r.n, 0.5, r.m, r.planner_path, r.trials, r.bias_constant,
                          r.median_error_uncorrected, r.median_error_corrected,
                          r.overestimate_violations, r.status});
  }
  return table;
}

Table to_table(const std::vector<NoiseRow>& rows) {
  Table table{{"alpha", "m", "m_rule", "planner_path", "sigma0", "trials", "support_rate",
               "median_error", "median_seconds", "status"},
              {}};
  for (const auto& r : rows) {
    table.rows.push_back({r.alpha, r.m, r.m_rule, r.planner_path, r.sigma0, r.trials,
                          r.support_rate, r.median_error, r.median_seconds, r.status});
  }
  return table;
}

TableFormat parse_table_format(const std::string& text) {
  if (text == "csv") return TableFormat::csv;
  if (text == "json") return TableFormat::json;
  throw std::invalid_argument("unknown format '" + text + "' (expected csv or json)");
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.9g", value);
  return buffer;
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

std::string cell_text(const Cell& cell) {
  if (const auto* u = std::get_if<std::uint64_t>(&cell)) return std::to_string(*u);
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  return std::get<std::string>(cell);
}

nlohmann::json cell_json(const Cell& cell) {
  if (const auto* u = std::get_if<std::uint64_t>(&cell)) return *u;
  if (const auto* d = std::get_if<double>(&cell)) {
    if (!std::isfinite(*d)) return nullptr;
    // Round through the CSV text so both formats carry the same value.
    return std::stod(format_double(*d));
  }
  return std::get<std::string>(cell);
}

}  // namespace

std::string emit_tables(const Table& table, TableFormat format,
                        const std::map<std::string, std::string>& config_echo) {
  if (format == TableFormat::csv) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out += (c ? "," : "") + csv_field(table.columns[c]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + csv_field(cell_text(row[c]));
      out += '\n';
    }
    return out;
  }
  nlohmann::ordered_json doc;
  doc["config"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : config_echo) doc["config"][key] = value;
  doc["columns"] = table.columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = cell_json(row[c]);
    doc["rows"].push_back(std::move(obj));
  }
  return doc.dump(2) + '\n';
}

std::map<std::string, std::string> config_echo(const ExperimentConfig& config,
                                               const std::string& experiment) {
  std::string alphas;
  for (const auto& a : config.alpha_grid) alphas += (alphas.empty() ? "" : ",") + format_double(a.value());
  std::string sizes;
  for (auto n : config.n_list) sizes += (sizes.empty() ? "" : ",") + std::to_string(n);
  std::map<std::string, std::string> echo{
      {"experiment", experiment},
      {"n", std::to_string(config.n)},
      {"k", std::to_string(config.k)},
      {"alpha", alphas},
      {"m_rule", to_string(config.m_rule)},
      {"delta", format_double(config.delta)},
      {"trials", std::to_string(config.trials)},
      {"seed", std::to_string(config.master_seed)},
      {"timing", config.timing ? "true" : "false"},
  };
  if (config.m_rule == MRule::explicit_m) echo["m"] = std::to_string(config.explicit_m);
  if (config.sigma0) echo["sigma0"] = format_double(*config.sigma0);
  if (experiment == "bias") echo["n_list"] = sizes;
  return echo;
}

}  // namespace ccsketch
