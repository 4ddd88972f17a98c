#include <doctest.h>

#include <set>

#include "hsl/checks.hpp"
#include "hsl/config.hpp"
#include "hsl/errors.hpp"

using namespace hsl;

namespace {

int parse_error_line(const std::string& text) {
  try {
    Config::parse_string(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("config parses sections, comments and values") {
  const auto cfg = Config::parse_string(
      "# top\n"
      "[suite]\n"
      "seed = 7   # trailing\n"
      "checks = reproducing, whitney\n"
      "\n"
      "[whitney]\n"
      "samples = 200\n");
  CHECK(*cfg.get("suite", "seed") == "7");
  CHECK(split_list(*cfg.get("suite", "checks")) == std::vector<std::string>{"reproducing", "whitney"});
  CHECK(cfg.section("whitney").at("samples") == "200");
  CHECK_FALSE(cfg.get("whitney", "missing"));
  CHECK(parse_real("inf") > 1e308);
  CHECK(parse_bool("true"));
  CHECK_FALSE(parse_bool("0"));
}

TEST_CASE("config parse errors carry the line number") {
  CHECK(parse_error_line("[suite]\nseed 7\n") == 2);
  CHECK(parse_error_line("[suite\n") == 1);
  CHECK(parse_error_line("[a]\nx = 1\n\nx = 2\n") == 4);
  CHECK(parse_error_line("[a]\nx =\n") == 2);
  CHECK(parse_error_line("[a]\n= 3\n") == 2);
}

TEST_CASE("params record what was read") {
  Params p({{"a", "2.5"}, {"b", "3"}, {"c", "1,2,4"}});
  CHECK(p.real("a", 0.0) == 2.5);
  CHECK(p.integer("b", 0) == 3);
  CHECK(p.reals("c", {}) == std::vector<double>{1, 2, 4});
  CHECK(p.integer("d", 9) == 9);
  CHECK(p.used().size() == 4);
  CHECK(p.used().at("d") == "9");
}

TEST_CASE("registry ids are unique and grouped") {
  std::set<std::string> ids;
  int ball = 0;
  for (const auto& c : check_registry()) {
    CHECK(ids.insert(c.id).second);
    CHECK_FALSE(c.anchor.empty());
    CHECK((c.group == "halfspace" || c.group == "ball"));
    if (c.group == "ball") ++ball;
  }
  CHECK(ids.size() == 13);
  CHECK(ball == 2);
  CHECK(find_check("nope") == nullptr);
  CHECK_THROWS_AS(run_check({"nope", {}, {}, {}}, 1), UsageError);
}

TEST_CASE("seeds differ per check and are reproducible") {
  CHECK(check_seed(1, "whitney") == check_seed(1, "whitney"));
  CHECK(check_seed(1, "whitney") != check_seed(2, "whitney"));
  CHECK(check_seed(1, "whitney") != check_seed(1, "reproducing"));
}

TEST_CASE("cheap checks report their expected status") {
  const auto es = run_check({"elementary-sum", {}, {}, {}}, 5);
  CHECK(es.status == Status::Pass);
  CHECK(es.values["violations"] == 0);
  const auto ce = run_check({"carleson-counterexample", {}, {}, {}}, 5);
  CHECK(ce.status == Status::DivergenceAsExpected);
  CHECK_FALSE(is_failure(ce.status));
  CHECK(ce.values["global_min_step"].get<double>() >= 0.5);
}

TEST_CASE("reports echo parameters and repeat exactly") {
  CheckSpec spec{"elementary-sum", {{"trials", "50"}}, {}, {}};
  const auto a = run_check(spec, 11), b = run_check(spec, 11);
  CHECK(a.config["trials"] == "50");
  CHECK(a.values["trials"] == 50);
  CHECK(a.to_json(false).dump() == b.to_json(false).dump());
  CHECK_FALSE(a.to_json(false).contains("runtime_s"));
  CHECK(a.to_json(true).contains("runtime_s"));
}

TEST_CASE("a reproducing check at k = 0 is flagged, not failed") {
  const auto r = run_check({"reproducing", {{"k", "0"}, {"p", "1"}, {"alpha", "0.5"}, {"points", "1"}}, {}, {}}, 3);
  CHECK(r.status == Status::FlaggedPrecondition);
  CHECK_FALSE(is_failure(r.status));
}

TEST_CASE("budget overrun becomes a timeout") {
  CheckSpec spec{"mh-weight", {}, {}, 1e-9};
  const auto r = run_check(spec, 3);
  CHECK(r.status == Status::Timeout);
  CHECK(is_failure(r.status));
}

TEST_CASE("suite options from config") {
  const auto cfg = Config::parse_string(
      "[suite]\nseed = 42\nworkers = 2\nskip = ball\n"
      "checks = elementary-sum, carleson-counterexample, ball-algebra\n"
      "[elementary-sum]\ntrials = 20\n");
  const auto opt = SuiteOptions::from_config(cfg);
  CHECK(opt.seed == 42);
  CHECK(opt.workers == 2);
  CHECK(opt.selected() == std::vector<std::string>{"carleson-counterexample", "elementary-sum"});
  const auto reports = run_suite(opt);
  REQUIRE(reports.size() == 2);
  CHECK(reports[1].config["trials"] == "20");
  const auto j = suite_json(reports, opt, false);
  CHECK(j["checks_failed"] == 0);
  CHECK(j["all_passed"] == true);

  CHECK_THROWS_AS(SuiteOptions::from_config(Config::parse_string("[suite]\nchecks = bogus\n")), UsageError);
  CHECK_THROWS_AS(SuiteOptions::from_config(Config::parse_string("[bogus]\nx = 1\n")), UsageError);
  CHECK_NOTHROW(SuiteOptions::from_config(Config::parse_string("[quad]\nlevels = 2\n[sphere]\npolar = 16\n")));
}

TEST_CASE("suite output does not depend on worker count") {
  SuiteOptions a;
  a.ids = {"elementary-sum", "carleson-counterexample", "whitney"};
  a.params["whitney"] = {{"samples", "300"}};
  SuiteOptions b = a;
  b.workers = 3;
  const auto ja = suite_json(run_suite(a), a, false);
  auto jb = suite_json(run_suite(b), b, false);
  jb["workers"] = a.workers;
  CHECK(ja.dump() == jb.dump());
}
