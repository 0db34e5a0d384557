#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "alforge/category.hpp"

namespace alforge {

enum class RuleId : std::uint8_t { FwdApp, BwdApp, FwdComp, BwdComp, Coord, Permute };

inline constexpr int kRuleCount = 6;

std::string to_string(RuleId r);
std::optional<RuleId> rule_from_string(std::string_view s);

// a/b  b  => a
std::optional<Category> apply_forward(const Category& f, const Category& a);
// b  a\b  => a
std::optional<Category> apply_backward(const Category& a, const Category& f);

// a/b  b/c  => a/c. Blocked when either slash being cancelled or kept carries
// the no_composition annotation on the functors' outer argument positions.
std::optional<Category> compose_forward(const Category& f, const Category& g);
// b\c  a\b  => a\c
std::optional<Category> compose_backward(const Category& g, const Category& f);

// x CONJ x => x, with conj the variable functor (X\X)/X. Both conjuncts must be ground.
std::optional<Category> coordinate(const Category& left, const Category& conj, const Category& right);

// True for the shape (V\V)/V with a single variable V, annotations ignored.
bool is_conjunction_category(const Category& c);

}  // namespace alforge
