#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "alforge/category.hpp"
#include "alforge/combinators.hpp"

namespace alforge {

// Grammar-specific parser configuration. Permutation is only ever applied to
// categories whose innermost result is S.
struct ParserPolicy {
  enum class Permutation : std::uint8_t { Never, Always, WithTrigger };

  Permutation permutation = Permutation::Always;
  // In WithTrigger mode permutation is enabled only for inputs containing this category.
  std::optional<Category> trigger;
  std::size_t max_permutations_per_item = 8;
  // Categories that may not act as conjuncts (the case markers).
  std::vector<Category> non_coordinable;

  static bool in_scope(const Category& c);
  bool permutation_active(std::span<const Category> seq) const;

  friend bool operator==(const ParserPolicy&, const ParserPolicy&) = default;
};

struct Derivation {
  Category category;
  std::optional<RuleId> rule;  // empty for a lexical leaf
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<Derivation> children;
};

struct ParseOptions {
  bool derivations = false;
  std::size_t max_derivations = 64;
};

struct ParseResult {
  bool grammatical = false;
  std::vector<Derivation> derivations;
};

// Interned categories plus memoised rule applications, shared by every chart
// built against one policy. Not thread-safe; each worker owns its own.
class RuleCache {
 public:
  using Id = std::uint32_t;

  struct Result {
    Id category;
    RuleId rule;
  };

  explicit RuleCache(ParserPolicy policy);

  Id intern(const Category& c);
  const Category& category(Id id) const { return categories_[id]; }
  std::size_t size() const { return categories_.size(); }
  const ParserPolicy& policy() const { return policy_; }

  const std::vector<Result>& combine(Id left, Id right);
  // P(c), P(P(c)), ... bounded by arity - 1 and the policy limit; empty when out of scope.
  const std::vector<Id>& rotations(Id id);
  bool is_conj(Id id) const { return info_[id].conj; }
  bool coordinable(Id id) const { return info_[id].coordinable; }
  bool is_s(Id id) const { return info_[id].is_s; }

 private:
  struct Info {
    bool conj = false;
    bool coordinable = false;
    bool is_s = false;
    bool rotations_ready = false;
    std::vector<Id> rotations;
  };

  ParserPolicy policy_;
  std::vector<Category> categories_;
  std::vector<Info> info_;
  std::unordered_map<Category, Id, CategoryHash> ids_;
  std::unordered_map<std::uint64_t, std::vector<Result>> binary_;
};

// CKY chart that grows one token at a time. Cells are sets of interned categories.
class Chart {
 public:
  using Id = RuleCache::Id;

  struct Back {
    RuleId rule;
    std::uint16_t split;  // first token of the right child (for Coord: the conjunction position)
    Id left;
    Id right;  // unused for Permute
  };

  struct Item {
    Id category;
    std::vector<Back> backs;
  };

  Chart(RuleCache& rules, bool permute, bool backpointers = false);

  void push(Id lexical);
  void pop();
  void clear();
  std::size_t size() const { return tokens_.size(); }

  const std::vector<Item>& cell(std::size_t start, std::size_t end) const { return cells_[index(start, end)]; }
  bool contains(std::size_t start, std::size_t end, Id id) const;
  bool accepts() const;  // S over the whole input

  std::vector<Derivation> derivations(Id root, std::size_t limit) const;

 private:
  RuleCache& rules_;
  bool permute_;
  bool backpointers_;
  std::vector<Id> tokens_;
  std::vector<std::vector<Item>> cells_;
  std::size_t capacity_ = 0;

  std::size_t index(std::size_t start, std::size_t end) const { return end * capacity_ + start; }
  void reserve(std::size_t n);
  void add(std::vector<Item>& cell, Id id, const Back* back);
  void close_permutations(std::vector<Item>& cell);
  void fill(std::size_t start, std::size_t end);

  std::vector<Derivation> expand(std::size_t start, std::size_t end, Id id, std::vector<Id>& unary_path,
                                 std::size_t limit) const;
};

// Recognises (and optionally extracts derivations for) a sequence of lexical
// categories. Throws std::invalid_argument on an empty sequence or a
// non-conjunction category with free variables.
ParseResult parse(std::span<const Category> seq, const ParserPolicy& policy, ParseOptions options = {});

// True iff some derivation spans the whole input with the given root.
bool derives(std::span<const Category> seq, const ParserPolicy& policy, const Category& root);

// Replays every rule in the tree. Throws std::invalid_argument on a malformed tree.
bool derivation_valid(const Derivation& tree);
// derivation_valid and the root is exactly S.
bool derivation_check(const Derivation& tree);

bool uses_rule(const Derivation& tree, RuleId rule);

}  // namespace alforge
