#include "fapres/error.hpp"
#include "fapres/verify.hpp"

#include <doctest.h>

using namespace fapres;
using namespace fapres::verify;

TEST_CASE("every suite passes at reduced sizes") {
  VerifyOptions opt;
  opt.walk_budget = 200000;
  opt.samples = 3000;
  for (const auto& name : suite_names()) {
    const SuiteReport r = run_suite(name, opt);
    INFO(format_report(r));
    CHECK(r.passed());
    CHECK_FALSE(r.checks.empty());
  }
  CHECK_THROWS_AS(run_suite("nope"), Error);
}

TEST_CASE("report lines") {
  SuiteReport r{"x", {{"a", true, "fine"}, {"b", false, "broken at 3"}}};
  CHECK_FALSE(r.passed());
  CHECK(format_report(r) == "PASS x/a: fine\nFAIL x/b: broken at 3\n");
}

TEST_CASE("checks report failures instead of throwing") {
  const unsigned not_tower[] = {3};
  const CheckResult c = check_power_to_level(not_tower);
  CHECK_FALSE(c.passed);
  CHECK(c.detail.find("not a tower value") != std::string::npos);
  // 2^4 = T(3)
  const unsigned ok[] = {4};
  CHECK(check_power_to_level(ok).passed);
}
