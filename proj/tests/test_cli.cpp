#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "its/its_density.hpp"
#include "its/special_fn.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(ITS_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::vector<double>> rows(const std::string& s) {
  std::vector<std::vector<double>> out;
  for (const auto& l : lines(s)) {
    if (l.empty() || l[0] == '#' || !(std::isdigit(static_cast<unsigned char>(l[0])) || l[0] == '-')) continue;
    std::vector<double> r;
    std::istringstream in(l);
    for (std::string cell; std::getline(in, cell, ',');) {
      try {
        r.push_back(std::stod(cell));
      } catch (...) {
        r.push_back(NAN);
      }
    }
    out.push_back(r);
  }
  return out;
}

std::map<std::string, double> summary(const std::string& s) {
  std::map<std::string, double> out;
  for (const auto& l : lines(s)) {
    if (l.rfind("# ", 0) != 0) continue;
    const auto eq = l.find('=');
    const std::string v = l.substr(eq + 1);
    out[l.substr(2, eq - 2)] = v == "true" ? 1.0 : v == "false" ? 0.0 : std::stod(v);
  }
  return out;
}

} // namespace

TEST_CASE("density grid") {
  const auto r = run("density --beta 0.4 --lambda 1 --t 1 --x 0:4:0.01");
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  CHECK(ls.front() == "x,h,err,method");
  const auto data = rows(r.out);
  REQUIRE(data.size() == 401);
  CHECK(data.back()[0] == doctest::Approx(4.0));
  // unimodal: rises to one peak then falls
  std::size_t peak = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i][1] > data[peak][1]) peak = i;
  }
  for (std::size_t i = 1; i <= peak; ++i) CHECK(data[i][1] >= data[i - 1][1]);
  for (std::size_t i = peak + 1; i < data.size(); ++i) CHECK(data[i][1] <= data[i - 1][1]);
  CHECK(peak > 0);
  CHECK(peak < data.size() - 1);
}

TEST_CASE("density values round-trip exactly") {
  const auto r = run("density --beta 0.6 --lambda 2 --t 1.5 --x 0.1:2:0.3");
  const auto data = rows(r.out);
  REQUIRE(data.size() == 7);
  for (const auto& row : data) {
    CHECK(row[1] == its::eval({row[0], 1.5}, {0.6, 2.0}).value);
  }
}

TEST_CASE("untempered density") {
  const auto r = run("density --beta 0.5 --lambda 0 --t 1 --x 0:4:0.5");
  CHECK(r.code == 0);
  const auto data = rows(r.out);
  REQUIRE(data.size() == 9);
  CHECK(data[0][1] == doctest::Approx(0.5641895835477563).epsilon(1e-12));
}

TEST_CASE("empty grid") {
  const auto r = run("density --x 1:1:0.5");
  CHECK(r.code == 0);
  CHECK(r.out == "x,h,err,method\n");
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("density --beta 1.5 --x 0:1:0.5").code == 2);
  CHECK(run("density --x 2:1:0.5").code == 2);
  CHECK(run("density --x 0:1:0").code == 2);
  CHECK(run("density --x 0:1e9:1e-3").code == 2);
  CHECK(run("density --t 0 --x 0:1:0.5").code == 2);
  CHECK(run("density --lambda -1").code == 2);
  CHECK(run("density --bogus").code == 2);
  CHECK(run("density --format xml").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("moments --q 0").code == 2);
  CHECK(run("simulate --paths 0").code == 2);
  CHECK(run("selfcheck --only no.such.check").code == 2);
}

TEST_CASE("scientific notation") {
  const auto r = run("density --beta 5e-1 --lambda 1e0 --t 1E0 --x 1e-1:2e-1:1e-1");
  CHECK(r.code == 0);
  CHECK(rows(r.out).size() == 2);
}

TEST_CASE("json mirrors csv") {
  const auto c = rows(run("density --beta 0.5 --lambda 1 --x 0.5:1.5:0.5").out);
  const auto j = nlohmann::json::parse(run("density --beta 0.5 --lambda 1 --x 0.5:1.5:0.5 --format json").out);
  REQUIRE(j.size() == c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(j[i]["x"].get<double>() == c[i][0]);
    CHECK(j[i]["h"].get<double>() == c[i][1]);
    CHECK(j[i]["method"] == "series");
  }
}

TEST_CASE("output file") {
  const auto path = std::filesystem::temp_directory_path() / "its_cli_test.csv";
  std::filesystem::remove(path);
  const auto r = run("density --x 0:1:0.5 --out " + path.string());
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(rows(ss.str()).size() == 3);
  std::filesystem::remove(path);
  CHECK(run("density --x 0:1:0.5 --out stdout").out == run("density --x 0:1:0.5").out);
}

TEST_CASE("moments table") {
  const auto r = run("moments --q 1 --beta 0.5 --lambda 1 --t log:1e-4:1e4:9");
  CHECK(r.code == 0);
  CHECK(lines(r.out).front() == "t,exact,small_t_asym,large_t_asym,ratio_small,ratio_large");
  const auto data = rows(r.out);
  REQUIRE(data.size() == 9);
  CHECK(data.front()[0] == doctest::Approx(1e-4));
  CHECK(data.back()[0] == doctest::Approx(1e4));
  CHECK(std::fabs(data.front()[4] - 1.0) < 0.02);
  CHECK(std::fabs(data.back()[5] - 1.0) < 0.02);
  CHECK(std::fabs(data.front()[4] - 1.0) < std::fabs(data[2][4] - 1.0));
  CHECK(std::fabs(data.back()[5] - 1.0) < std::fabs(data[6][5] - 1.0));

  const auto single = rows(run("moments --q 1 --t 2").out);
  CHECK(single.size() == 1);
}

TEST_CASE("untempered moments match the closed form") {
  const auto data = rows(run("moments --q 2 --beta 0.3 --lambda 0 --t log:0.01:100:5").out);
  REQUIRE(data.size() == 5);
  const double c = its::special_fn::gamma(3.0) / its::special_fn::gamma(1.6);
  for (const auto& row : data) CHECK(row[1] == doctest::Approx(c * std::pow(row[0], 0.6)).epsilon(1e-8));
}

TEST_CASE("simulation is reproducible") {
  const auto a = run("simulate --beta 0.5 --lambda 1 --t 1 --paths 1000 --seed 42");
  const auto b = run("simulate --beta 0.5 --lambda 1 --t 1 --paths 1000 --seed 42");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(lines(a.out).front() == "path_id,t,E_lambda");
  CHECK(rows(a.out).size() == 1000);
  CHECK(run("simulate --paths 1000 --seed 43").out != a.out);
}

TEST_CASE("simulation summary") {
  const auto r = run("simulate --beta 0.5 --lambda 1 --t 1 --paths 10000 --seed 7");
  CHECK(r.code == 0);
  const auto s = summary(r.out);
  CHECK(s.at("paths") == 10000);
  CHECK(s.at("ks") < 0.02);
  CHECK(std::fabs(s.at("mean") - s.at("exact_mean")) < 3.0 * s.at("mean_se"));
  CHECK(s.at("var") > 0.0);
}

TEST_CASE("pde-check") {
  const auto r = run("pde-check --m 2 --lambda 1");
  CHECK(r.code == 0);
  CHECK(summary(r.out).at("relative") < 1e-3);
  CHECK(run("pde-check --m 3 --beta 0.45").code == 3);
  CHECK(run("pde-check --m 1").code == 2);
}

TEST_CASE("selfcheck") {
  const auto all = run("selfcheck");
  CHECK(all.code == 0);
  CHECK(all.out.find("FAIL") == std::string::npos);
  const auto one = run("selfcheck --only its_density.normalization");
  CHECK(one.code == 0);
  CHECK(lines(one.out).size() == 1);
  const auto neg = run("selfcheck --beta 0.45 --check pde");
  CHECK(neg.code == 0);
  CHECK(neg.out.find("negative control") != std::string::npos);
  const auto j = nlohmann::json::parse(run("selfcheck --check special_fn --format json").out);
  CHECK(j.size() == 2);
  CHECK(j[0]["passed"] == true);
}
