#pragma once

// Desk-scale experiment drivers: workloads of K unit spikes, recovery,
// bias-correction and measurement-noise runs, and their tabular output.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ccsketch/alpha.hpp"
#include "ccsketch/sketch.hpp"

namespace ccsketch {

enum class MRule { k_log_n_delta, factor_1_6, explicit_m };

std::string to_string(MRule rule);
MRule parse_m_rule(const std::string& text);

struct ExperimentConfig {
  std::uint64_t n = 100000;
  std::uint64_t k = 10;
  std::vector<AlphaParam> alpha_grid = default_alpha_grid();
  MRule m_rule = MRule::k_log_n_delta;
  std::uint64_t explicit_m = 0;
  double delta = 0.01;
  std::uint64_t trials = 50;
  std::optional<double> sigma0;
  std::uint64_t master_seed = 20110101;
  std::string output_path;
  /// Signal sizes for the bias experiment.
  std::vector<std::uint64_t> n_list = {10000, 100000};
  /// Record decode time; off by default so output bytes are reproducible.
  bool timing = false;

  void validate() const;

  /// 0.04, 0.05, ..., 0.50.
  static std::vector<AlphaParam> default_alpha_grid();
};

/// Applies `key=value` lines (# comments, blank lines allowed) on top of `config`.
/// Keys: n, k, alpha (comma list), m_rule, m, delta, trials, sigma0, seed, out,
/// n_list (comma list), timing.
void apply_config_text(ExperimentConfig& config, const std::string& text);
void apply_config_file(ExperimentConfig& config, const std::string& path);

struct MPlan {
  std::uint64_t m;
  std::string path;  // planner path the value came from
};

/// M for signal size n under the configured rule, unit spikes, eps = 1.
MPlan plan_measurements(const ExperimentConfig& config, std::uint64_t n);

/// K unit spikes on a support drawn by Floyd's algorithm from (master_seed, trial).
SignalVector generate_workload(const ExperimentConfig& config, std::uint64_t trial);
SignalVector generate_workload(std::uint64_t n, std::uint64_t k, std::uint64_t master_seed,
                               std::uint64_t trial);
/// Planted support of generate_workload, ascending 0-based indices.
std::vector<std::uint64_t> workload_support(std::uint64_t n, std::uint64_t k,
                                            std::uint64_t master_seed, std::uint64_t trial);

/// `count` strict-turnstile updates over n coordinates: every running value
/// stays nonnegative. Increments are reals; decrements never exceed the
/// current value.
std::vector<StreamUpdate> generate_turnstile_stream(std::uint64_t n, std::uint64_t count,
                                                    std::uint64_t seed);

/// Net signal of a stream, each coordinate summed in stream order.
SignalVector net_signal(std::uint64_t n, const std::vector<StreamUpdate>& updates);

/// Seed of the design matrix used in `trial`.
std::uint64_t trial_design_seed(std::uint64_t master_seed, std::uint64_t trial);
std::uint64_t trial_noise_seed(std::uint64_t master_seed, std::uint64_t trial);

struct RecoveryRow {
  double alpha;
  std::uint64_t m = 0;
  std::string m_rule;
  std::string planner_path{};
  std::uint64_t trials = 0;
  double median_error = 0.0;
  double median_seconds = 0.0;
  double support_rate = 0.0;
  std::uint64_t overestimate_violations = 0;
  std::vector<double> errors{};  // per trial, not emitted
  std::string status = "ok";
};

struct BiasRow {
  std::uint64_t n;
  std::uint64_t m = 0;
  std::string planner_path{};
  std::uint64_t trials = 0;
  double bias_constant = 0.0;
  double median_error_uncorrected = 0.0;
  double median_error_corrected = 0.0;
  std::uint64_t overestimate_violations = 0;
  std::string status = "ok";
};

struct NoiseRow {
  double alpha;
  std::uint64_t m = 0;
  std::string m_rule;
  std::string planner_path{};
  double sigma0 = 0.0;
  std::uint64_t trials = 0;
  double support_rate = 0.0;
  double median_error = 0.0;
  double median_seconds = 0.0;
  std::string status = "ok";
};

std::vector<RecoveryRow> run_recovery_experiment(const ExperimentConfig& config);
/// alpha = 0.5 at every n in config.n_list. The error of both estimates is
/// measured on the top-K support of the uncorrected estimates.
std::vector<BiasRow> run_bias_experiment(const ExperimentConfig& config);
/// Requires config.sigma0.
std::vector<NoiseRow> run_noise_experiment(const ExperimentConfig& config);

using Cell = std::variant<std::uint64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

Table to_table(const std::vector<RecoveryRow>& rows);
Table to_table(const std::vector<BiasRow>& rows);
Table to_table(const std::vector<NoiseRow>& rows);

enum class TableFormat { csv, json };

TableFormat parse_table_format(const std::string& text);

/// %.9g floats, fixed column order. JSON carries {"config": ..., "columns": ...,
/// "rows": [...]} with one object per row.
std::string emit_tables(const Table& table, TableFormat format,
                        const std::map<std::string, std::string>& config_echo = {});

/// Flat echo of a config for JSON output.
std::map<std::string, std::string> config_echo(const ExperimentConfig& config,
                                               const std::string& experiment);

std::string format_double(double value);

}  // namespace ccsketch
