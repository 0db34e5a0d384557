#include "alforge/combinators.hpp"

#include <array>

namespace alforge {

namespace {

constexpr std::array<std::string_view, kRuleCount> kRuleNames = {"FwdApp", "BwdApp", "FwdComp",
                                                                 "BwdComp", "Coord", "Permute"};

std::optional<Category> ground_or_absent(Category c) {
  if (!c.is_ground()) return std::nullopt;
  return c;
}

std::optional<Category> apply(const Category& f, const Category& a, Slash dir) {
  if (!f.is_functor() || f.slash() != dir) return std::nullopt;
  auto s = unify(f.argument(), a);
  if (!s) return std::nullopt;
  return ground_or_absent(substitute(f.result(), *s));
}

// primary = a|b, secondary = b|c, both slashes in direction dir.
std::optional<Category> compose(const Category& primary, const Category& secondary, Slash dir) {
  if (!primary.is_functor() || !secondary.is_functor()) return std::nullopt;
  if (primary.slash() != dir || secondary.slash() != dir) return std::nullopt;
  if (primary.restrictions().no_composition || secondary.restrictions().no_composition) return std::nullopt;
  auto s = unify(primary.argument(), secondary.result());
  if (!s) return std::nullopt;
  return ground_or_absent(Category::functor(substitute(primary.result(), *s), dir,
                                            substitute(secondary.argument(), *s), secondary.restrictions()));
}

}  // namespace

std::string to_string(RuleId r) { return std::string(kRuleNames[static_cast<std::size_t>(r)]); }

std::optional<RuleId> rule_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kRuleNames.size(); ++i)
    if (kRuleNames[i] == s) return static_cast<RuleId>(i);
  return std::nullopt;
}

std::optional<Category> apply_forward(const Category& f, const Category& a) { return apply(f, a, Slash::Forward); }

std::optional<Category> apply_backward(const Category& a, const Category& f) {
  return apply(f, a, Slash::Backward);
}

std::optional<Category> compose_forward(const Category& f, const Category& g) {
  return compose(f, g, Slash::Forward);
}

std::optional<Category> compose_backward(const Category& g, const Category& f) {
  return compose(f, g, Slash::Backward);
}

bool is_conjunction_category(const Category& c) {
  if (!c.is_functor() || c.slash() != Slash::Forward) return false;
  const Category& inner = c.result();
  if (!inner.is_functor() || inner.slash() != Slash::Backward) return false;
  const Category& a = c.argument();
  const Category& b = inner.result();
  const Category& d = inner.argument();
  return a.is_variable() && b.is_variable() && d.is_variable() && a.var() == b.var() && a.var() == d.var();
}

std::optional<Category> coordinate(const Category& left, const Category& conj, const Category& right) {
  if (!is_conjunction_category(conj)) return std::nullopt;
  // Conjuncts with free variables would mean two adjacent conjunctions.
  if (!left.is_ground() || !right.is_ground()) return std::nullopt;
  if (left != right) return std::nullopt;
  auto s = unify(conj.argument(), right);
  if (!s) return std::nullopt;
  return substitute(conj.argument(), *s);
}

}  // namespace alforge
