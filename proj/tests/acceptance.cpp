// Runs the shipped scenario suite and prints one verdict per acceptance
// criterion.  Exit status is nonzero if any criterion fails.

#include <cstdio>
#include <map>

#include "growthlab/scenario.hpp"

using namespace growthlab;

namespace {

struct Criterion {
  int number;
  std::string text;
  std::vector<std::string> scenarios;
};

}  // namespace

int main(int argc, char** argv) {
  const std::string config = argc > 1 ? argv[1] : std::string(GROWTHLAB_SOURCE_DIR) + "/configs/default_suite.json";
  const std::string out = argc > 2 ? argv[2] : std::string{};
  SuiteConfig cfg;
  try {
    cfg = load_suite(config);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance: %s\n", e.what());
    return 2;
  }
  const auto suite = run_suite(cfg, out);
  std::map<std::string, const ScenarioReport*> by_id;
  for (const auto& r : suite.reports) by_id[r.id] = &r;

  const std::vector<Criterion> criteria = {
      {1, "h-family orders from M and T, under 60 s per mu", {"remark-1-1-mu-1.5", "remark-1-1-mu-2"}},
      {2, "identity T0 closed form and S additivity", {"identity-oracle"}},
      {3, "conformal map round trip, inclusions, derivatives", {"map-inclusions"}},
      {4, "conjugated equation residual and chain rule", {"conjugacy"}},
      {5, "T0 transfer inequalities after calibration", {"characteristic-transfer"}},
      {6, "order chains for every zoo function", {"order-chains"}},
      {7, "dominant-coefficient scenarios, suite under 10 min",
       {"dominant-coefficient-lower-order", "regular-dominant-coefficient", "dominant-coefficient-lower-type"}},
      {8, "ODE solver accuracy and convergence order", {"ray-solver"}},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    bool ok = true;
    std::string why;
    for (const auto& id : c.scenarios) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) {
        ok = false;
        why += " " + id + " missing;";
        continue;
      }
      const auto& r = *it->second;
      if (r.status != ScenarioStatus::pass) {
        ok = false;
        why += " " + id + " " + std::string(to_string(r.status)) + (r.message.empty() ? "" : " (" + r.message + ")") + ";";
      }
      if (c.number == 1 && r.seconds >= 60.0) {
        ok = false;
        why += " " + id + " took " + std::to_string(r.seconds) + " s;";
      }
    }
    if (c.number == 7 && suite.seconds >= 600.0) {
      ok = false;
      why += " suite took " + std::to_string(suite.seconds) + " s;";
    }
    std::printf("criterion %d: %s  %s%s\n", c.number, ok ? "PASS" : "FAIL", c.text.c_str(), why.c_str());
    if (!ok) ++failed;
  }
  std::printf("suite runtime %.1f s, %d of %zu criteria failed\n", suite.seconds, failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
