#include "ccsketch/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ccsketch {

namespace {

using json = nlohmann::json;

struct IndexedValue {
  std::uint64_t index;  // 0-based
  double value;
};

// Parses "index value" records, converting 1-based indices to 0-based.
std::vector<IndexedValue> read_pairs(std::istream& in, std::uint64_t n, const char* what) {
  std::vector<IndexedValue> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    long long index = 0;
    double value = 0.0;
    std::string extra;
    if (!(fields >> index >> value) || (fields >> extra)) {
      throw std::runtime_error(std::string(what) + " line " + std::to_string(line_no) +
                               ": expected 'index value'");
    }
    if (index < 1 || static_cast<std::uint64_t>(index) > n) {
      throw std::runtime_error(std::string(what) + " line " + std::to_string(line_no) +
                               ": index " + std::to_string(index) + " outside 1.." +
                               std::to_string(n));
    }
    out.push_back({static_cast<std::uint64_t>(index - 1), value});
  }
  return out;
}

}  // namespace

SignalVector read_signal(std::istream& in, std::uint64_t n) {
  std::vector<double> x(n, 0.0);
  std::vector<bool> seen(n, false);
  for (const auto& [i, v] : read_pairs(in, n, "signal")) {
    if (seen[i]) throw std::runtime_error("signal repeats index " + std::to_string(i + 1));
    seen[i] = true;
    x[i] = v;
  }
  return SignalVector(std::move(x));
}

void write_signal(std::ostream& out, const SignalVector& signal) {
  out.precision(17);
  for (std::size_t i = 0; i < signal.size(); ++i) {
    if (signal[i] != 0.0) out << i + 1 << ' ' << signal[i] << '\n';
  }
}

std::vector<StreamUpdate> read_stream(std::istream& in, std::uint64_t n) {
  std::vector<StreamUpdate> updates;
  for (const auto& [i, v] : read_pairs(in, n, "stream")) updates.push_back({i, v});
  return updates;
}

void write_stream(std::ostream& out, const std::vector<StreamUpdate>& updates) {
  out.precision(17);
  for (const auto& u : updates) out << u.index + 1 << ' ' << u.increment << '\n';
}

std::string measurements_to_json(const MeasurementVector& measurements) {
  const DesignSpec& d = measurements.design();
  d.alpha.require_finite("a serialized design");
  nlohmann::ordered_json doc;
  doc["design"] = {{"n", d.n}, {"m", d.m}, {"alpha", d.alpha.value()}, {"seed", d.seed}};
  doc["values"] = std::vector<double>(measurements.values().begin(), measurements.values().end());
  return doc.dump() + '\n';
}

MeasurementVector measurements_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    const json& d = doc.at("design");
    const DesignSpec spec{d.at("n").get<std::uint64_t>(), d.at("m").get<std::uint64_t>(),
                          AlphaParam(d.at("alpha").get<double>()), d.at("seed").get<std::uint64_t>()};
    return MeasurementVector(spec, doc.at("values").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed measurement file: ") + e.what());
  }
}

std::string report_to_json(const RecoveryReport& report, const ReportJsonOptions& options) {
  nlohmann::ordered_json doc;
  doc["config"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : options.config) doc["config"][key] = value;
  std::vector<std::uint64_t> support;
  for (auto i : report.support) support.push_back(i + 1);
  doc["support"] = support;
  doc["normalized_error"] =
      report.normalized_error ? nlohmann::ordered_json(*report.normalized_error) : nullptr;
  doc["decode_seconds"] = report.decode_seconds;
  const bool suppressed = report.estimates.size() > options.max_estimates;
  doc["estimates_suppressed"] = suppressed;
  if (!suppressed) {
    doc["estimates"] = report.estimates;
    if (report.corrected_estimates) doc["corrected_estimates"] = *report.corrected_estimates;
  }
  return doc.dump(2) + '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << contents;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace ccsketch
