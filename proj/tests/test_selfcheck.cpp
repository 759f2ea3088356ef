#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "its/errors.hpp"
#include "its/selfcheck.hpp"

using namespace its;

TEST_CASE("default run is green") {
  const auto results = run_selfcheck();
  CHECK(results.size() == selfcheck_names().size());
  for (const auto& r : results) {
    CAPTURE(r.name);
    CAPTURE(r.detail);
    CHECK(r.passed);
  }
}

TEST_CASE("selection") {
  SelfcheckOptions o;
  o.only = "its_density.normalization";
  const auto one = run_selfcheck(o);
  REQUIRE(one.size() == 1);
  CHECK(one[0].name == "its_density.normalization");

  SelfcheckOptions g;
  g.group = "pde";
  const auto pde = run_selfcheck(g);
  CHECK(pde.size() == 3);
  CHECK(std::all_of(pde.begin(), pde.end(), [](const CheckResult& r) { return r.name.rfind("pde", 0) == 0; }));

  SelfcheckOptions bad;
  bad.only = "no.such.check";
  CHECK_THROWS_AS(run_selfcheck(bad), ConfigError);
}

TEST_CASE("negative control") {
  SelfcheckOptions o;
  o.only = "pde_check.residual";
  o.beta = 0.45;
  const auto r = run_selfcheck(o);
  REQUIRE(r.size() == 1);
  CHECK(r[0].passed);
  CHECK(r[0].detail.find("negative control") != std::string::npos);
}
