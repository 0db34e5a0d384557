#include "doctest.h"

#include <stdexcept>

#include "alforge/category.hpp"
#include "alforge/grammar.hpp"

using namespace alforge;

namespace {
Category P(const char* s) { return parse_category(s); }
}  // namespace

TEST_CASE("parse and print round trip") {
  for (const char* s : {"S", "NP", "NP_SUBJ\\,NP", "(S\\NP_SUBJ)/NP_OBJ", "(NP/NP)\\NP",
                        "(NP_SUBJ\\NP_SUBJ)/(S/NP_OBJ)", "(X\\.,@X)/.,@X", "SCOMP/S", "NP/,NP"}) {
    CAPTURE(s);
    CHECK(to_string(P(s)) == s);
    CHECK(P(to_string(P(s)).c_str()) == P(s));
  }
  // Unparenthesised chains associate to the left.
  CHECK(P("S\\NP_SUBJ/NP_OBJ") == P("(S\\NP_SUBJ)/NP_OBJ"));
  CHECK_THROWS_AS(P("(S/NP"), std::invalid_argument);
  CHECK_THROWS_AS(P("S/"), std::invalid_argument);
  CHECK_THROWS_AS(P("FOO"), std::invalid_argument);
}

TEST_CASE("restrictions are parsed per argument") {
  auto c = P("(X\\.,@X)/.,@X");
  CHECK(c.restrictions().no_crossing);
  CHECK(c.restrictions().no_composition);
  CHECK(c.restrictions().no_permutation);
  CHECK_FALSE(c.restrictions().no_substitution);
  CHECK(c.result().restrictions() == c.restrictions());
  CHECK_FALSE(P("(S\\NP_SUBJ)/NP_OBJ").restrictions().any());
  CHECK(P("NP/_NP").restrictions().no_substitution);
}

TEST_CASE("arity and innermost result") {
  CHECK(arity(P("NP")) == 0);
  CHECK(arity(P("S\\NP_SUBJ")) == 1);
  CHECK(arity(P("(S\\NP_SUBJ)/NP_OBJ")) == 2);
  CHECK(arity(P("((S\\NP_SUBJ)/NP_OBJ)/NP")) == 3);
  CHECK(arity(P("(NP_SUBJ\\NP_SUBJ)/(S/NP_OBJ)")) == 2);
  CHECK(innermost_result(P("((S\\NP_SUBJ)/NP_OBJ)/NP")) == P("S"));
  CHECK(innermost_result(P("(NP/NP)\\NP")) == P("NP"));
}

TEST_CASE("cyclic permutation") {
  // The outermost argument moves innermost, keeping its slash.
  CHECK(permute_cyclic(P("(S\\NP_SUBJ)/NP_OBJ")) == P("(S/NP_OBJ)\\NP_SUBJ"));
  CHECK(permute_cyclic(P("(S/NP_OBJ)\\NP_SUBJ")) == P("(S\\NP_SUBJ)/NP_OBJ"));
  CHECK(permute_cyclic(P("((S\\NP_SUBJ)/NP_OBJ)/SCOMP")) == P("((S/SCOMP)\\NP_SUBJ)/NP_OBJ"));
  CHECK(permute_cyclic(P("(S\\NP_SUBJ)/,NP_OBJ")) == P("(S/,NP_OBJ)\\NP_SUBJ"));
  CHECK(permute_cyclic(P("S\\NP_SUBJ")) == P("S\\NP_SUBJ"));
  CHECK_THROWS_AS(permute_cyclic(P("NP")), std::invalid_argument);
  CHECK_THROWS_AS(permute_cyclic(P("(S\\NP_SUBJ)/@NP_OBJ")), std::invalid_argument);
}

TEST_CASE("permutation orbits close after arity steps") {
  for (const auto& g : all_grammars())
    for (const auto& c : g.lexicon) {
      if (!c.is_functor() || c.restrictions().no_permutation) continue;
      Category x = c;
      bool restricted = false;
      for (std::size_t i = 0; i < arity(c); ++i) {
        if (x.restrictions().no_permutation) { restricted = true; break; }
        x = permute_cyclic(x);
        CHECK(arity(x) == arity(c));
        CHECK(innermost_result(x) == innermost_result(c));
      }
      if (!restricted) CHECK(x == c);
    }
}

TEST_CASE("unification") {
  auto x = Category::variable(0);
  auto s = unify(x, P("S\\NP_SUBJ"));
  REQUIRE(s);
  CHECK(substitute(P("(X\\X)/X"), *s) == P("((S\\NP_SUBJ)\\(S\\NP_SUBJ))/(S\\NP_SUBJ)"));
  CHECK_FALSE(unify(P("S"), P("NP")));
  CHECK_FALSE(unify(P("S/NP"), P("S\\NP")));
  // Occurs check.
  CHECK_FALSE(unify(x, Category::forward(x, P("NP"))));
  auto t = unify(P("X/NP"), P("S/NP"));
  REQUIRE(t);
  CHECK(substitute(x, *t) == P("S"));
}

TEST_CASE("structural equality and hashing") {
  CHECK(P("(S\\NP_SUBJ)/NP_OBJ") == P("(S\\NP_SUBJ)/NP_OBJ"));
  CHECK(P("(S\\NP_SUBJ)/NP_OBJ").hash() == P("(S\\NP_SUBJ)/NP_OBJ").hash());
  CHECK(P("NP/,NP") != P("NP/NP"));
  CHECK(P("NP/NP") != P("NP\\NP"));
  CHECK(P("(X\\X)/X").is_ground() == false);
  CHECK(P("(S\\NP_SUBJ)/NP_OBJ").is_ground());
}
