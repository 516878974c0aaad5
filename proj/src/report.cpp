#include "dirlab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace dirlab::replicate {

void CsvBlock::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("CsvBlock " + name + ": row width mismatch");
  rows.push_back(std::move(row));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, ptr);
}

bool Report::check(std::string claim, bool passed, Json numbers, std::string tolerance) {
  assertions.push_back({std::move(claim), passed, std::move(numbers), std::move(tolerance)});
  return passed;
}

bool Report::all_passed() const {
  for (const auto& a : assertions)
    if (!a.passed) return false;
  return true;
}

Format parse_format(const std::string& name) {
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  throw std::invalid_argument("unknown format '" + name + "' (json or csv)");
}

namespace {

// JSON cannot hold inf/nan; write them as strings so nothing is lost.
Json sanitize(const Json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) return format_number(v);
    return j;
  }
  if (j.is_array() || j.is_object()) {
    Json out = j.is_array() ? Json::array() : Json::object();
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (j.is_array())
        out.push_back(sanitize(*it));
      else
        out[it.key()] = sanitize(it.value());
    }
    return out;
  }
  return j;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_json(const std::vector<Report>& reports) {
  Json root;
  root["schema"] = kReportSchema;
  root["all_passed"] = std::all_of(reports.begin(), reports.end(), [](const Report& r) { return r.all_passed(); });
  Json list = Json::array();
  for (const auto& r : reports) {
    Json j;
    j["experiment"] = r.experiment;
    j["config"] = sanitize(r.config);
    j["results"] = sanitize(r.results);
    Json asserts = Json::array();
    for (const auto& a : r.assertions)
      asserts.push_back({{"claim", a.claim}, {"passed", a.passed}, {"numbers", sanitize(a.numbers)},
                         {"tolerance", a.tolerance}});
    j["assertions"] = std::move(asserts);
    Json series = Json::array();
    for (const auto& b : r.series) series.push_back({{"name", b.name}, {"columns", b.columns}, {"rows", b.rows}});
    j["series"] = std::move(series);
    j["passed"] = r.all_passed();
    list.push_back(std::move(j));
  }
  root["reports"] = std::move(list);
  return root.dump(2) + "\n";
}

std::string to_csv(const std::vector<Report>& reports) {
  std::string out = "# schema," + std::to_string(kReportSchema) + "\n";
  for (const auto& r : reports) {
    out += "# experiment," + csv_cell(r.experiment) + "\n";
    out += "## assertions\nclaim,passed,tolerance\n";
    for (const auto& a : r.assertions)
      out += csv_cell(a.claim) + "," + (a.passed ? "true" : "false") + "," + csv_cell(a.tolerance) + "\n";
    for (const auto& b : r.series) {
      out += "## " + b.name + "\n";
      for (std::size_t i = 0; i < b.columns.size(); ++i) out += (i ? "," : "") + csv_cell(b.columns[i]);
      out += "\n";
      for (const auto& row : b.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
        out += "\n";
      }
    }
  }
  return out;
}

void emit_report(const std::vector<Report>& reports, Format format, const std::filesystem::path& path) {
  const std::string text = format == Format::json ? to_json(reports) : to_csv(reports);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << text;
  os.flush();
  if (!os) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace dirlab::replicate
