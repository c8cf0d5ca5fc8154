#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "growthlab/scenario.hpp"

using namespace growthlab;
namespace fs = std::filesystem;

namespace {

json one(json scenario) { return json{{"scenarios", json::array({std::move(scenario)})}}; }

std::string config_error(const json& j) {
  try {
    parse_suite(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, EmptySuiteIsRejected) {
  EXPECT_NE(config_error(json{{"scenarios", json::array()}}).find("empty"), std::string::npos);
  EXPECT_NE(config_error(json::object()).find("scenarios"), std::string::npos);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_NE(config_error(one({{"kind", "identity-oracle"}})).find("id"), std::string::npos);
  EXPECT_NE(config_error(one({{"id", "a"}, {"kind", "no-such-kind"}})).find("kind"), std::string::npos);
  const auto msg = config_error(one({{"id", "a"}, {"kind", "order-chains"}, {"params", {{"functions", {{{"zoo", "nope"}}}}}}}));
  EXPECT_NE(msg.find("nope"), std::string::npos) << msg;
  EXPECT_NE(config_error(one({{"id", "a"}, {"kind", "identity-oracle"}, {"sector", {2.0, 1.0}}})), "");
}

TEST(Config, DuplicateIdsRejected) {
  json j{{"scenarios", {{{"id", "a"}, {"kind", "identity-oracle"}}, {{"id", "a"}, {"kind", "map-inclusions"}}}}};
  EXPECT_NE(config_error(j).find("duplicate"), std::string::npos);
}

TEST(Config, ShippedSuiteParses) {
  const auto cfg = load_suite(std::string(GROWTHLAB_SOURCE_DIR) + "/configs/default_suite.json");
  EXPECT_GE(cfg.scenarios.size(), 10u);
  for (const auto& s : cfg.scenarios) EXPECT_TRUE(recipe_registry().count(s.kind)) << s.kind;
}

TEST(Zoo, UnknownIdsAndLabels) {
  EXPECT_THROW(zoo_function({{"zoo", "nothing"}}), ConfigError);
  EXPECT_THROW(zoo_equation({{"zoo", "nothing"}}), ConfigError);
  EXPECT_NEAR(zoo_function({{"zoo", "h"}, {"mu", 2.0}}).sample(0.5).log_abs, 4.0, 1e-12);
  EXPECT_FALSE(zoo_label({{"zoo", "h"}, {"mu", 2.0}}).empty());
}

TEST(Runner, StatusesAndReport) {
  const auto dir = fs::temp_directory_path() / "growthlab_scenario_test";
  fs::remove_all(dir);
  auto cfg = parse_suite(one({{"id", "oracle"}, {"kind", "identity-oracle"}}));
  const auto rep = run_suite(cfg, dir.string());
  ASSERT_EQ(rep.reports.size(), 1u);
  EXPECT_EQ(rep.reports[0].status, ScenarioStatus::pass);
  EXPECT_EQ(rep.exit_code(), 0);
  std::ifstream is(dir / "report.json");
  const json j = json::parse(is);
  EXPECT_EQ(j.at("schema_version"), kReportSchemaVersion);
  EXPECT_EQ(j.at("summary").at("pass"), 1);
  EXPECT_FALSE(j.at("scenarios")[0].at("checks").empty());
}

TEST(Runner, FailuresBecomeInconclusive) {
  // A coefficient that is not lower order than A_0 breaks the hypothesis.
  Scenario sc;
  sc.id = "bad";
  sc.kind = "dominant-coefficient-lower-order";
  sc.params = {{"equation", {{"zoo", "exp-equation"}}}};
  const auto rep = run_scenario(sc);
  EXPECT_EQ(rep.status, ScenarioStatus::inconclusive);
  EXPECT_FALSE(rep.message.empty());
}

TEST(PlotData, RunningExtremumIsTailSup) {
  OrderEstimate e;
  e.mode = EstimateMode::limsup;
  e.r = {0.5, 0.6, 0.7, 0.8};
  e.ratios = {1.0, 3.0, 2.0, 2.5};
  const auto path = (fs::temp_directory_path() / "growthlab_plot.csv").string();
  emit_plot_data(e, path);
  std::ifstream is(path);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "r,ratio,running_extremum");
  std::vector<double> run;
  while (std::getline(is, line)) run.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  EXPECT_EQ(run, (std::vector<double>{3.0, 3.0, 2.5, 2.5}));
}
