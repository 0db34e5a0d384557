#include "doctest.h"

#include "alforge/combinators.hpp"

using namespace alforge;

namespace {
Category P(const char* s) { return parse_category(s); }
}  // namespace

TEST_CASE("application") {
  CHECK(apply_forward(P("(S\\NP_SUBJ)/NP_OBJ"), P("NP_OBJ")) == P("S\\NP_SUBJ"));
  CHECK(apply_backward(P("NP_SUBJ"), P("S\\NP_SUBJ")) == P("S"));
  CHECK(apply_backward(P("NP"), P("NP_SUBJ\\,NP")) == P("NP_SUBJ"));
  CHECK(apply_forward(P("NP/,NP"), P("NP")) == P("NP"));
  CHECK_FALSE(apply_forward(P("S\\NP_SUBJ"), P("NP_SUBJ")));
  CHECK_FALSE(apply_backward(P("NP_OBJ"), P("S\\NP_SUBJ")));
  CHECK_FALSE(apply_forward(P("NP"), P("NP")));
}

TEST_CASE("composition") {
  CHECK(compose_forward(P("S/NP_OBJ"), P("NP_OBJ/NP")) == P("S/NP"));
  CHECK(compose_backward(P("NP_SUBJ\\NP"), P("S\\NP_SUBJ")) == P("S\\NP"));
  CHECK(compose_forward(P("SCOMP/S"), P("(S\\NP_SUBJ)/NP_OBJ")) == std::nullopt);
  CHECK(compose_forward(P("SCOMP/S"), P("S/NP_OBJ")) == P("SCOMP/NP_OBJ"));
  // "," on either functor's outer argument blocks composition.
  CHECK_FALSE(compose_forward(P("NP/,NP"), P("NP/NP")));
  CHECK_FALSE(compose_forward(P("NP/NP"), P("NP/,NP")));
  CHECK_FALSE(compose_backward(P("NP_SUBJ\\,NP"), P("S\\NP_SUBJ")));
  CHECK(compose_backward(P("NP_SUBJ\\NP"), P("S\\,NP_SUBJ")) == std::nullopt);
  CHECK_FALSE(compose_forward(P("S\\NP_SUBJ"), P("NP_SUBJ/NP")));
}

TEST_CASE("coordination") {
  auto conj = P("(X\\.,@X)/.,@X");
  CHECK(is_conjunction_category(conj));
  CHECK(is_conjunction_category(P("(X\\X)/X")));
  CHECK_FALSE(is_conjunction_category(P("(NP\\NP)/NP")));
  CHECK_FALSE(is_conjunction_category(P("(X\\X)/NP")));
  CHECK(coordinate(P("S\\NP_SUBJ"), conj, P("S\\NP_SUBJ")) == P("S\\NP_SUBJ"));
  CHECK(coordinate(P("NP"), conj, P("NP")) == P("NP"));
  CHECK_FALSE(coordinate(P("NP"), conj, P("S")));
  CHECK_FALSE(coordinate(P("NP"), P("(NP\\NP)/NP"), P("NP")));
}

TEST_CASE("rule names") {
  for (auto r : {RuleId::FwdApp, RuleId::BwdApp, RuleId::FwdComp, RuleId::BwdComp, RuleId::Coord, RuleId::Permute})
    CHECK(rule_from_string(to_string(r)) == r);
  CHECK_FALSE(rule_from_string("Nope"));
}
