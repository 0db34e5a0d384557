#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace alforge {

// The only primitive categories an artificial language uses.
enum class Primitive : std::uint8_t { S, NP, NP_SUBJ, NP_OBJ, SCOMP };

enum class Slash : std::uint8_t { Forward, Backward };

// Annotations attached to a functor's argument position. Only no_composition
// and no_permutation are consulted by the rules; the other two are kept so
// grammar files round-trip.
struct Restrictions {
  bool no_composition = false;   // ","
  bool no_permutation = false;   // "@"
  bool no_crossing = false;      // "."
  bool no_substitution = false;  // "_"

  bool any() const { return no_composition || no_permutation || no_crossing || no_substitution; }
  friend bool operator==(const Restrictions&, const Restrictions&) = default;
};

using VarId = std::uint32_t;

// Immutable, structurally compared category. Copies share the underlying tree.
class Category {
 public:
  enum class Kind : std::uint8_t { Primitive, Variable, Functor };

  Category();  // S
  static Category primitive(Primitive p);
  static Category variable(VarId id = 0);
  static Category functor(Category result, Slash slash, Category argument, Restrictions restrictions = {});
  static Category forward(Category result, Category argument, Restrictions r = {}) {
    return functor(std::move(result), Slash::Forward, std::move(argument), r);
  }
  static Category backward(Category result, Category argument, Restrictions r = {}) {
    return functor(std::move(result), Slash::Backward, std::move(argument), r);
  }

  Kind kind() const;
  bool is_primitive() const { return kind() == Kind::Primitive; }
  bool is_variable() const { return kind() == Kind::Variable; }
  bool is_functor() const { return kind() == Kind::Functor; }

  // Accessors below require the matching kind.
  Primitive prim() const;
  VarId var() const;
  const Category& result() const;
  const Category& argument() const;
  Slash slash() const;
  const Restrictions& restrictions() const;

  std::size_t hash() const;
  std::size_t depth() const;
  bool is_ground() const;
  bool contains_var(VarId id) const;

  friend bool operator==(const Category& a, const Category& b);
  friend bool operator!=(const Category& a, const Category& b) { return !(a == b); }
  // Total order used for canonical output; not linguistically meaningful.
  friend bool operator<(const Category& a, const Category& b);

 private:
  struct Node;
  explicit Category(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct CategoryHash {
  std::size_t operator()(const Category& c) const { return c.hash(); }
};

using Substitution = std::map<VarId, Category>;

// Number of argument positions on the spine: functor -> 1 + arity(result).
std::size_t arity(const Category& c);

// Innermost result on the spine (S for every verb category).
const Category& innermost_result(const Category& c);

// Rotates the spine's argument list by one: the outermost argument becomes the
// innermost, every argument keeping its slash and restrictions.
// Throws std::invalid_argument for non-functors or an "@"-restricted outer argument.
Category permute_cyclic(const Category& c);

// Most general unifier of a and b, with occurs check.
std::optional<Substitution> unify(const Category& a, const Category& b);
Category substitute(const Category& c, const Substitution& s);

std::string to_string(const Category& c);
std::string to_string(Primitive p);
std::ostream& operator<<(std::ostream& os, const Category& c);

// Parses the textual syntax, e.g. "(S\NP_SUBJ)/NP_OBJ", "NP/,NP", "X\.,@X/.,@X".
// Unparenthesised chains associate to the left. Throws std::invalid_argument.
Category parse_category(std::string_view text);

}  // namespace alforge
