#pragma once

// Experiment reports: config echo, results, assertions and plot-ready CSV
// blocks. Serialization is byte-stable for identical inputs.

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

namespace dirlab::replicate {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;

struct Assertion {
  std::string claim;
  bool passed = false;
  Json numbers = Json::object();  // the computed values the claim was judged on
  std::string tolerance;
};

struct CsvBlock {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

/// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double v);

struct Report {
  std::string experiment;
  Json config = Json::object();
  Json results = Json::object();
  std::vector<Assertion> assertions;
  std::vector<CsvBlock> series;

  /// Records an assertion and returns `passed`.
  bool check(std::string claim, bool passed, Json numbers, std::string tolerance);
  bool all_passed() const;
};

enum class Format { json, csv };
Format parse_format(const std::string& name);

std::string to_json(const std::vector<Report>& reports);
std::string to_csv(const std::vector<Report>& reports);

/// Writes the serialized reports to `path`; throws std::runtime_error on I/O failure.
void emit_report(const std::vector<Report>& reports, Format format, const std::filesystem::path& path);

}  // namespace dirlab::replicate
