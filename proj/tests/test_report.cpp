#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "dirlab/experiments.hpp"
#include "dirlab/report.hpp"

using namespace dirlab::replicate;

namespace {
std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("empty report list is valid") {
  const auto j = Json::parse(to_json({}));
  CHECK(j["schema"] == kReportSchema);
  CHECK(j["all_passed"] == true);
  CHECK(j["reports"].empty());
  CHECK(to_csv({}) == "# schema,1\n");
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 2.5e-300, -7.0, 1e21}) CHECK(std::stod(format_number(v)) == v);
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("serialization") {
  Report r;
  r.experiment = "X";
  r.config = {{"alpha", 0.5}};
  r.results = {{"value", std::numeric_limits<double>::infinity()}};
  r.check("a claim, with a comma", true, {{"n", 1}}, "exact");
  r.check("a failing claim", false, Json::object(), "none");
  CsvBlock b{"series", {"x", "y"}, {}};
  b.add_row({"1", "2"});
  CHECK_THROWS_AS(b.add_row({"1"}), std::invalid_argument);
  r.series.push_back(b);

  const auto j = Json::parse(to_json({r}));
  CHECK(j["all_passed"] == false);
  CHECK(j["reports"][0]["results"]["value"] == "inf");
  CHECK(j["reports"][0]["assertions"].size() == 2);
  CHECK(j["reports"][0]["assertions"][0]["tolerance"] == "exact");
  const auto csv = to_csv({r});
  CHECK(csv.find("\"a claim, with a comma\",true,exact\n") != std::string::npos);
  CHECK(csv.find("## series\nx,y\n1,2\n") != std::string::npos);
  CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
}

TEST_CASE("same seed gives byte-identical files") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto p1 = dir / "dirlab_report_a.json", p2 = dir / "dirlab_report_b.json";
  for (const auto& path : {p1, p2}) {
    auto cfg = default_config("E9");
    cfg.seed = 5;
    emit_report({run_experiment(cfg)}, Format::json, path);
  }
  CHECK(slurp(p1) == slurp(p2));
  CHECK_FALSE(slurp(p1).empty());
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
  CHECK_THROWS_AS(emit_report({}, Format::csv, dir / "no_such_dir" / "x.csv"), std::runtime_error);
}

TEST_CASE("experiment configuration") {
  CHECK(experiment_ids().size() == 10);
  CHECK_THROWS_AS(default_config("E11"), ConfigError);
  auto cfg = default_config("E4");
  cfg.p = 2.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = default_config("E4");
  cfg.epsilon = 0.6;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = default_config("E7");
  cfg.mc_samples = 10;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("assertions carry numbers and tolerances") {
  const auto r = run_experiment(default_config("E3"));
  CHECK_FALSE(r.assertions.empty());
  for (const auto& a : r.assertions) {
    CHECK_FALSE(a.claim.empty());
    CHECK_FALSE(a.tolerance.empty());
  }
}
