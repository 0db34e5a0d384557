#include "doctest.h"

#include "alforge/chart_parser.hpp"
#include "alforge/grammar.hpp"
#include "oracle.hpp"

using namespace alforge;

namespace {
Category P(const char* s) { return parse_category(s); }
Template T(const char* s) { return parse_template(s); }
}  // namespace

TEST_CASE("simple sentences") {
  const auto& en = find_grammar("0101101");
  CHECK(en.parses(T("NP SUBJ VT NP OBJ")));
  CHECK(en.parses(T("NP SUBJ VI")));
  CHECK_FALSE(en.parses(T("NP OBJ VI")));
  CHECK_FALSE(en.parses(T("NP SUBJ VT")));
  CHECK_FALSE(en.parses(T("VI")));
  const auto& sov = find_grammar("0000000");
  CHECK(sov.parses(T("NP SUBJ NP OBJ VT")));
  CHECK_FALSE(sov.parses(T("NP SUBJ VT NP OBJ")));
}

TEST_CASE("invalid input") {
  ParserPolicy p;
  CHECK_THROWS_AS(parse(std::vector<Category>{}, p), std::invalid_argument);
  std::vector<Category> bad{P("X/NP"), P("NP")};
  CHECK_THROWS_AS(parse(bad, p), std::invalid_argument);
}

TEST_CASE("derivations replay") {
  const auto& en = find_grammar("0101101");
  auto seq = en.categories(T("ADJ NP SUBJ REL NP SUBJ VT VI CONJ VI"));
  auto res = parse(seq, en.policy, {.derivations = true, .max_derivations = 16});
  REQUIRE(res.grammatical);
  REQUIRE_FALSE(res.derivations.empty());
  for (const auto& d : res.derivations) {
    CHECK(derivation_check(d));
    CHECK(d.start == 0);
    CHECK(d.end == seq.size());
  }
  Derivation broken = res.derivations.front();
  broken.category = P("NP");
  CHECK_FALSE(derivation_check(broken));
}

TEST_CASE("permutation needs the trigger in WithTrigger mode") {
  // An SOV grammar can only build an object gap S/NP_OBJ-style via permutation.
  const auto& sov = find_grammar("0000000");
  CHECK(sov.policy.permutation == ParserPolicy::Permutation::WithTrigger);
  REQUIRE(sov.policy.trigger);
  CHECK(*sov.policy.trigger == sov.category(LexClass::REL));
  auto seq = sov.categories(T("NP SUBJ NP OBJ VT"));
  CHECK_FALSE(sov.policy.permutation_active(seq));
  CHECK(sov.policy.permutation_active(sov.categories(T("NP SUBJ VT REL NP SUBJ VI"))));
}

TEST_CASE("chart agrees with exhaustive reduction search") {
  const Category s = P("S");
  for (const char* id : {"0000000", "0101101", "1111111", "1000110"}) {
    const auto& g = find_grammar(id);
    CAPTURE(id);
    for (std::size_t n = 1; n <= 4; ++n)
      oracle::for_each_sequence(n, [&](const Template& t) {
        auto seq = g.categories(t);
        CAPTURE(to_string(t));
        CHECK(derives(seq, g.policy, s) == oracle::derives(seq, g.policy, s));
      });
  }
}

TEST_CASE("chart is incremental") {
  const auto& g = find_grammar("0101101");
  RuleCache rules(g.policy);
  Chart chart(rules, true);
  auto seq = g.categories(T("NP SUBJ VT NP OBJ"));
  for (const auto& c : seq) chart.push(rules.intern(c));
  CHECK(chart.accepts());
  chart.pop();
  CHECK_FALSE(chart.accepts());
  chart.push(rules.intern(g.category(LexClass::OBJ)));
  CHECK(chart.accepts());
  chart.clear();
  CHECK(chart.size() == 0);
}
