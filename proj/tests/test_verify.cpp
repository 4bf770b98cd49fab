#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "qpadic/verify.hpp"

using namespace qpadic;

TEST_CASE("registry enumerates the finite-level checks") {
  std::set<std::string> ids;
  for (const auto& e : lemma_registry()) ids.insert(e.id);
  std::set<std::string> expect = {
      "lem:cyc-ext",       "cor:roots-of-unity",    "lem:representation",
      "lem:p-over-pi",     "cor:high-unit-powers",  "lem:u-kpowers",
      "cor:powers-converse", "cor:power-quotient-dim", "cor:kummer-basis",
      "lem:sigma-action",  "lem:base-case",         "lem:squares-q2i",
      "lem:q2i-no-c4",     "lem:half-cyclotomic",   "cor:tame-identity",
      "thm:conductor",
  };
  CHECK(ids == expect);
}

TEST_CASE("single-lemma run produces one verified report per prime") {
  VerifyOptions opts;
  opts.ids = {"lem:p-over-pi"};
  opts.primes = {3, 5, 7};
  opts.precision = 32;
  std::vector<LemmaReport> reports = run_verification(opts);
  REQUIRE(reports.size() == 3);
  for (const auto& r : reports) {
    CHECK(r.status == CheckStatus::verified);
    CHECK(r.lemma_id == "lem:p-over-pi");
  }
  CHECK(reports[0].p == 3);
  CHECK(reports[2].p == 7);
}

TEST_CASE("base case at p = 2 reports the -1, 2, 5 generators") {
  VerifyOptions opts;
  opts.ids = {"lem:base-case"};
  opts.primes = {2};
  opts.precision = 32;
  std::vector<LemmaReport> reports = run_verification(opts);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].status == CheckStatus::verified);
  bool found = false;
  for (const auto& [name, value] : reports[0].witnesses)
    if (name == "generators") {
      found = true;
      CHECK(value == "(0,1,1) (1,0,0) (0,0,1)");
    }
  CHECK(found);
}

TEST_CASE("inapplicable primes are skipped, unknown ids rejected") {
  VerifyOptions opts;
  opts.ids = {"cor:tame-identity"};
  opts.primes = {2, 3};
  opts.precision = 24;
  std::vector<LemmaReport> reports = run_verification(opts);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].status == CheckStatus::skipped);
  CHECK(reports[1].status == CheckStatus::verified);

  VerifyOptions bad;
  bad.ids = {"lem:no-such-thing"};
  CHECK_THROWS_AS(run_verification(bad), Error);
}

TEST_CASE("falsified checks report counterexamples instead of aborting") {
  // Starving the working precision makes the chain identities unprovable;
  // the harness must degrade to a failed report, not an abort.
  VerifyOptions opts;
  opts.ids = {"lem:half-cyclotomic"};
  opts.primes = {2};
  opts.precision = 3;
  std::vector<LemmaReport> reports = run_verification(opts);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].status == CheckStatus::failed);
  CHECK_FALSE(reports[0].notes.empty());
  CHECK_FALSE(all_verified(reports));
}

TEST_CASE("json rendering is byte-identical across runs") {
  VerifyOptions opts;
  opts.ids = {"thm:conductor", "lem:half-cyclotomic"};
  opts.primes = {2, 3};
  opts.precision = 24;
  std::string a = reports_to_json(run_verification(opts));
  std::string b = reports_to_json(run_verification(opts));
  CHECK(a == b);
  CHECK(a.find("\"elapsed_ms\": 0") != std::string::npos);
}
