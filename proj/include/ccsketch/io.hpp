#pragma once

// Flat-file formats. Files use 1-based coordinate indices, the in-memory
// types are 0-based.
//
//   signal:  one "index value" pair per line
//   stream:  one "index increment" pair per line
//   measurements: {"design": {"n", "m", "alpha", "seed"}, "values": [...]}
//
// Blank lines and lines starting with '#' are ignored.

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "ccsketch/decoder.hpp"
#include "ccsketch/sketch.hpp"

namespace ccsketch {

/// Throws std::runtime_error with the line number on malformed input.
SignalVector read_signal(std::istream& in, std::uint64_t n);
void write_signal(std::ostream& out, const SignalVector& signal);

std::vector<StreamUpdate> read_stream(std::istream& in, std::uint64_t n);
void write_stream(std::ostream& out, const std::vector<StreamUpdate>& updates);

std::string measurements_to_json(const MeasurementVector& measurements);
MeasurementVector measurements_from_json(const std::string& text);

struct ReportJsonOptions {
  /// Estimate arrays longer than this are left out of the document.
  std::size_t max_estimates = 100000;
  std::map<std::string, std::string> config;
};

std::string report_to_json(const RecoveryReport& report, const ReportJsonOptions& options = {});

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace ccsketch
