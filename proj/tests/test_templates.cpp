#include "doctest.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "alforge/templates.hpp"
#include "oracle.hpp"

using namespace alforge;

namespace {
Template T(const char* s) { return parse_template(s); }

std::vector<Template> brute_force(const Grammar& g, std::size_t max_len) {
  std::vector<Template> out;
  for (std::size_t n = 3; n <= max_len; ++n)
    oracle::for_each_sequence(n, [&](const Template& t) {
      if (heuristic_filter(t) && g.parses(t)) out.push_back(t);
    });
  std::sort(out.begin(), out.end(), [](const Template& a, const Template& b) { return template_less(a, b); });
  return out;
}
}  // namespace

TEST_CASE("template text") {
  CHECK(to_string(T("NP SUBJ VT NP OBJ")) == "NP SUBJ VT NP OBJ");
  CHECK(T("  NP\tSUBJ  VI ").size() == 3);
  CHECK_THROWS_AS(T("NP FOO"), std::invalid_argument);
  std::vector<Template> ts{T("NP SUBJ VI"), T("ADJ NP SUBJ VI")};
  std::stringstream ss;
  write_templates(ss, ts);
  CHECK(read_templates(ss) == ts);
}

TEST_CASE("heuristic filter") {
  CHECK(heuristic_filter(T("NP SUBJ VI")));
  CHECK_FALSE(heuristic_filter(T("NP VI")));                       // too short
  CHECK_FALSE(heuristic_filter(T("CONJ NP SUBJ VI")));             // starts with CONJ
  CHECK_FALSE(heuristic_filter(T("NP SUBJ VI CONJ")));             // ends with CONJ
  CHECK_FALSE(heuristic_filter(T("NP CONJ CONJ NP SUBJ VI")));     // CONJ CONJ
  CHECK_FALSE(heuristic_filter(T("NP PREP PREP NP SUBJ VI")));     // PREP PREP
  CHECK_FALSE(heuristic_filter(T("SUBJ NP VI")));                  // starts with a marker
  CHECK_FALSE(heuristic_filter(T("NP SUBJ OBJ VT")));              // more markers than NPs
  CHECK_FALSE(heuristic_filter(T("NP SUBJ COMP VI")));             // COMP without VCOMP
  CHECK(heuristic_filter(T("NP SUBJ VCOMP COMP NP SUBJ VI")));
}

TEST_CASE("prefix pruning never cuts an admissible completion") {
  // Every template passing the filter has only admissible prefixes.
  for (std::size_t n = 3; n <= 5; ++n)
    oracle::for_each_sequence(n, [&](const Template& t) {
      if (!heuristic_filter(t)) return;
      for (std::size_t k = 1; k <= n; ++k) CHECK(prefix_admissible(std::span(t).first(k), 5));
    });
}

TEST_CASE("enumeration equals brute force up to length 5") {
  for (const char* id : {"0000000", "0101101", "1111111", "0010011", "1100100"}) {
    CAPTURE(id);
    const auto& g = find_grammar(id);
    CHECK(enumerate_templates(g, 5) == brute_force(g, 5));
  }
}

TEST_CASE("enumeration equals the prefix search up to length 7") {
  for (const char* id : {"0000000", "0101101", "1111111", "1001010"}) {
    CAPTURE(id);
    const auto& g = find_grammar(id);
    CHECK(enumerate_templates(g, 7) == enumerate_templates_dfs(g, 7));
    CHECK(enumerate_templates(g, 7, 6) == enumerate_templates_dfs(g, 7, 6));
  }
}

TEST_CASE("enumeration examples") {
  auto en = enumerate_templates(find_grammar("0101101"), 8);
  CHECK(std::binary_search(en.begin(), en.end(), T("NP SUBJ VT NP OBJ"), [](const Template& a, const Template& b) {
    return template_less(a, b);
  }));
  auto ten = enumerate_templates(find_grammar("0101101"), 10, 10);
  CHECK(std::find(ten.begin(), ten.end(), T("ADJ NP SUBJ REL NP SUBJ VT VI CONJ VI")) != ten.end());
  auto sov = enumerate_templates(find_grammar("0000000"), 5);
  CHECK(std::find(sov.begin(), sov.end(), T("NP SUBJ NP OBJ VT")) != sov.end());
  CHECK(enumerate_templates(find_grammar("0000000"), 2).empty());
  CHECK_THROWS(enumerate_templates(find_grammar("0000000"), 17));
  for (const auto& t : en) {
    CHECK(t.size() >= 3);
    CHECK(t.size() <= 8);
    CHECK(find_grammar("0101101").parses(t));
  }
  CHECK(std::is_sorted(en.begin(), en.end(), [](const Template& a, const Template& b) { return template_less(a, b); }));
}

TEST_CASE("augmentation operators") {
  auto a = T("NP SUBJ VI"), b = T("NP SUBJ VT NP OBJ");
  CHECK(augment_candidate(a, a, AugmentOp::AppendConj) == T("NP SUBJ VI CONJ NP SUBJ VI"));
  CHECK(augment_candidate(a, b, AugmentOp::Concat) == T("NP SUBJ VI NP SUBJ VT NP OBJ"));
  CHECK(augment_candidate(a, b, AugmentOp::InsertConj, 2) == T("NP SUBJ CONJ NP SUBJ VT NP OBJ VI"));
  // A conjoined VI after a relative clause template.
  CHECK(augment_candidate(T("ADJ NP SUBJ REL NP SUBJ VT VI"), T("VI"), AugmentOp::AppendConj) ==
        T("ADJ NP SUBJ REL NP SUBJ VT VI CONJ VI"));
  CHECK_THROWS(augment_candidate(a, b, AugmentOp::InsertConj, 0));
  CHECK_THROWS(augment_candidate(a, b, AugmentOp::InsertConj, 3));
}

TEST_CASE("exhaustive augmentation") {
  const auto& g = find_grammar("0101101");
  auto src = enumerate_templates(g, 6);
  AugmentOptions o;
  o.min_len = 11;
  o.max_len = 12;
  auto longs = augment_long(src, g, o);
  REQUIRE_FALSE(longs.empty());
  std::set<Template> expected;
  for (const auto& t1 : src)
    for (const auto& t2 : src) {
      std::vector<Template> cand{augment_candidate(t1, t2, AugmentOp::Concat),
                                 augment_candidate(t1, t2, AugmentOp::AppendConj)};
      for (std::size_t i = 1; i < t1.size(); ++i) cand.push_back(augment_candidate(t1, t2, AugmentOp::InsertConj, i));
      for (auto& c : cand)
        if (c.size() >= 11 && c.size() <= 12 && heuristic_filter(c) && g.parses(c)) expected.insert(c);
    }
  CHECK(longs == std::vector<Template>(expected.begin(), expected.end()));
  // A too-short range yields nothing.
  o.min_len = o.max_len = 2;
  CHECK(augment_long(src, g, o).empty());
}

TEST_CASE("sampled augmentation") {
  const auto& g = find_grammar("0101101");
  auto src = enumerate_templates(g, 10);
  AugmentOptions o;
  o.sample = 20;
  o.seed = 7;
  auto a = augment_long(src, g, o);
  CHECK(a == augment_long(src, g, o));
  std::set<Template> uniq(a.begin(), a.end());
  CHECK(uniq.size() == a.size());
  for (std::size_t n = 11; n <= 20; ++n)
    CHECK(std::count_if(a.begin(), a.end(), [&](const Template& t) { return t.size() == n; }) == 20);
  for (const auto& t : a) CHECK(g.parses(t));
  o.seed = 8;
  CHECK(augment_long(src, g, o) != a);
}
