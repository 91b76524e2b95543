#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "knlb/experiments/config.hpp"
#include "knlb/experiments/fit.hpp"
#include "knlb/experiments/identities.hpp"
#include "knlb/experiments/run.hpp"
#include "knlb/sampling/rng.hpp"

using namespace knlb;
using namespace knlb::experiments;
using nlohmann::json;

TEST_CASE("log-log fits") {
  std::vector<std::pair<double, double>> pw, flat, noisy;
  RandomStream rng(1, 1);
  for (double d : {100.0, 200.0, 400.0, 800.0, 1600.0}) {
    pw.emplace_back(d, std::pow(d, -0.5));
    flat.emplace_back(d, 4.2);
    noisy.emplace_back(d, 3 * std::pow(d, -2.0) * (1 + 0.01 * rng.gaussian()));
  }
  const auto a = fit_loglog(pw);
  CHECK(a.slope == doctest::Approx(-0.5));
  CHECK(a.r2 == doctest::Approx(1.0));
  CHECK(a.points == 5);
  CHECK(a.stderr_slope >= 0.0);
  CHECK(std::abs(fit_loglog(flat).slope) < 1e-12);
  const auto c = fit_loglog(noisy);
  CHECK(std::abs(c.slope + 2.0) <= 0.05);
  CHECK(c.intercept == doctest::Approx(std::log(3.0)).epsilon(0.05));
  CHECK_THROWS_AS(fit_loglog(std::span(pw).first(2)), std::invalid_argument);
  pw[1].second = 0.0;
  CHECK_THROWS_AS(fit_loglog(pw), std::invalid_argument);
}

TEST_CASE("lag-1 autocorrelation") {
  CHECK(lag1_autocorrelation(std::vector<double>{1, 1, 1, 1}) == 0.0);
  CHECK(lag1_autocorrelation(std::vector<double>{1, -1, 1, -1, 1, -1}) < -0.5);
  CHECK(lag1_autocorrelation(std::vector<double>{1, 2, 3, 4, 5, 6}) > 0.3);
}

TEST_CASE("config parsing and validation") {
  const json ok = {{"kind", "hermite-scaling"}, {"grid", {{{"d", 50}, {"n", 50}}}}, {"degree", 3}, {"seed", 5}};
  const auto c = ExperimentConfig::from_json(ok);
  CHECK(c.kind == ExperimentKind::hermite_scaling);
  CHECK(c.trials == 20);
  CHECK(c.degree == 3);
  const auto back = ExperimentConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());

  auto expect_field = [](json j, const std::string& field) {
    try {
      ExperimentConfig::from_json(j);
      FAIL("no error for " << field);
    } catch (const ConfigError& e) {
      CHECK(e.field().find(field) != std::string::npos);
    }
  };
  json bad = ok;
  bad["grid"] = json::array();
  expect_field(bad, "grid");
  bad = ok;
  bad["trials"] = 1;
  expect_field(bad, "trials");
  bad = ok;
  bad["kind"] = "nope";
  expect_field(bad, "kind");
  bad = ok;
  bad["kind"] = "approx-decay";
  expect_field(bad, "kernel");
  bad["kernel"] = {{"type", "exp"}};
  expect_field(bad, "q");
  bad = ok;
  bad["kind"] = "decoupling";
  bad["trials"] = 5;
  expect_field(bad, "trials");
  bad = ok;
  bad["kind"] = "gegenbauer-scaling";
  bad["covariance"] = {{"type", "power"}, {"exponent", -0.5}};
  expect_field(bad, "covariance");
  bad = ok;
  bad["grid"] = {{{"d", 5000}, {"n", 10}}};
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigError);
  bad["allow_large"] = true;
  CHECK(ExperimentConfig::from_json(bad).resolve_grid().size() == 1);
  CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("grid entries with an exponent") {
  const json j = {{"kind", "approx-decay"},
                  {"grid", {{{"d", 100}, {"q", "1"}}, {{"d", 100}, {"q", "3/2"}}, {{"d", 64}, {"n", 30}}}},
                  {"kernel", {{"type", "exp"}}},
                  {"q", "1"}};
  const auto pts = ExperimentConfig::from_json(j).resolve_grid();
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].n == 100);
  CHECK(pts[1].n == 1000);
  CHECK(*pts[1].q == Rational(3, 2));
  CHECK(pts[2].n == 30);
  CHECK(*pts[2].q == Rational(1));
}

TEST_CASE("linear kernel equals its approximation") {
  const json j = {{"kind", "approx-decay"},
                  {"grid", {{{"d", 20}}, {{"d", 40}}, {{"d", 60}}}},
                  {"kernel", {{"type", "linear"}}},
                  {"q", "1"},
                  {"trials", 3},
                  {"seed", 2}};
  const auto r = run(ExperimentConfig::from_json(j));
  for (const auto& rec : r.records)
    if (rec.statistic == "op_norm_error") CHECK(rec.value <= 1e-10);
  // Grid entries without n resolve through q: n = tau1^q = d.
  CHECK(r.summary["points"][1]["n"] == 40);
}

TEST_CASE("runs are deterministic and carry their config") {
  const json j = {{"kind", "hermite-scaling"},
                  {"grid", {{{"d", 30}, {"n", 30}}, {{"d", 60}, {"n", 60}}, {{"d", 90}, {"n", 90}}}},
                  {"degree", 3},
                  {"trials", 12},
                  {"seed", 9}};
  const auto c = ExperimentConfig::from_json(j);
  const auto a = run(c), b = run(c, {4, {}});
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].value == b.records[i].value);
    CHECK(a.records[i].trial == b.records[i].trial);
  }
  // Re-running from the embedded config reproduces the records.
  const auto again = run(ExperimentConfig::from_json(a.summary["config"]));
  for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(again.records[i].value == a.records[i].value);
  CHECK(a.summary["fit"]["points"] == 3);
  for (const auto& p : a.summary["points"]) {
    const double rho = p["statistics"]["op_norm_delta"]["lag1_autocorr"];
    CHECK(std::abs(rho) <= 5.0 / std::sqrt(12.0));
  }

  std::ostringstream os;
  write_records_csv(os, a.records);
  CHECK(os.str().rfind("point,n,d,trial,statistic,value,wall_time\n", 0) == 0);
  const auto dir = std::filesystem::temp_directory_path() / "knlb_test_outputs";
  std::filesystem::remove_all(dir);
  write_outputs(a, dir.string());
  CHECK(std::filesystem::exists(dir / "records.csv"));
  std::ifstream is(dir / "summary.json");
  CHECK(json::parse(is)["kind"] == "hermite-scaling");
  std::filesystem::remove_all(dir);
}

TEST_CASE("every experiment kind runs at small scale") {
  const std::vector<json> configs = {
      {{"kind", "gegenbauer-scaling"}, {"grid", {{{"d", 20}, {"n", 20}}}}, {"trials", 2}},
      {{"kind", "bound-terms"}, {"grid", {{{"d", 20}, {"n", 20}}}}, {"degree", 3}, {"trials", 2}},
      {{"kind", "decoupling"}, {"grid", {{{"d", 20}, {"n", 20}}}}, {"trials", 10}},
      {{"kind", "approx-decay"},
       {"grid", {{{"d", 20}}}},
       {"kernel", {{"type", "exp"}}},
       {"approx", "iso"},
       {"q", "1"},
       {"trials", 2}},
      {{"kind", "krr-bias"},
       {"grid", {{{"d", 20}}}},
       {"kernel", {{"type", "exp"}}},
       {"q", "1"},
       {"trials", 2},
       {"mc_samples", 2000},
       {"target", {{"terms", {{{"direction", "e1"}, {"hermite", {0, 0, 0, 1}}}}}}}}};
  for (const auto& j : configs) {
    const auto r = run(ExperimentConfig::from_json(j));
    INFO(j.dump());
    CHECK_FALSE(r.records.empty());
    CHECK(r.summary["points"][0]["failures"].empty());
  }
}

TEST_CASE("quick identity suites pass") {
  IdentityOptions o;
  o.quick = true;
  for (const auto& s : run_identity_suites(o)) CHECK_MESSAGE(s.passed, s.suite << " worst " << s.worst_case);
}
