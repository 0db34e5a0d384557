#include "alforge/chart_parser.hpp"

#include <algorithm>
#include <stdexcept>

namespace alforge {

bool ParserPolicy::in_scope(const Category& c) {
  const Category& core = innermost_result(c);
  return c.is_functor() && core.is_primitive() && core.prim() == Primitive::S;
}

bool ParserPolicy::permutation_active(std::span<const Category> seq) const {
  switch (permutation) {
    case Permutation::Never: return false;
    case Permutation::Always: return true;
    case Permutation::WithTrigger:
      return trigger && std::find(seq.begin(), seq.end(), *trigger) != seq.end();
  }
  return false;
}

// ---------------------------------------------------------------------------
// RuleCache

RuleCache::RuleCache(ParserPolicy policy) : policy_(std::move(policy)) {}

RuleCache::Id RuleCache::intern(const Category& c) {
  auto it = ids_.find(c);
  if (it != ids_.end()) return it->second;
  Id id = static_cast<Id>(categories_.size());
  Info info;
  info.conj = is_conjunction_category(c);
  info.coordinable = c.is_ground() && !info.conj &&
                     std::find(policy_.non_coordinable.begin(), policy_.non_coordinable.end(), c) ==
                         policy_.non_coordinable.end();
  info.is_s = c.is_primitive() && c.prim() == Primitive::S;
  categories_.push_back(c);
  info_.push_back(std::move(info));
  ids_.emplace(c, id);
  return id;
}

const std::vector<RuleCache::Result>& RuleCache::combine(Id left, Id right) {
  const std::uint64_t key = (static_cast<std::uint64_t>(left) << 32) | right;
  auto it = binary_.find(key);
  if (it != binary_.end()) return it->second;

  std::vector<Result> out;
  if (!info_[left].conj && !info_[right].conj) {
    const Category a = categories_[left];
    const Category b = categories_[right];
    auto push = [&](const std::optional<Category>& c, RuleId rule) {
      if (c) out.push_back({intern(*c), rule});
    };
    push(apply_forward(a, b), RuleId::FwdApp);
    push(apply_backward(a, b), RuleId::BwdApp);
    push(compose_forward(a, b), RuleId::FwdComp);
    push(compose_backward(a, b), RuleId::BwdComp);
  }
  return binary_.emplace(key, std::move(out)).first->second;
}

const std::vector<RuleCache::Id>& RuleCache::rotations(Id id) {
  if (info_[id].rotations_ready) return info_[id].rotations;
  std::vector<Id> chain;
  const Category c = categories_[id];
  if (ParserPolicy::in_scope(c)) {
    const std::size_t steps = std::min(arity(c) - 1, policy_.max_permutations_per_item);
    Category cur = c;
    for (std::size_t i = 0; i < steps && !cur.restrictions().no_permutation; ++i) {
      cur = permute_cyclic(cur);
      chain.push_back(intern(cur));
    }
  }
  info_[id].rotations = std::move(chain);
  info_[id].rotations_ready = true;
  return info_[id].rotations;
}

// ---------------------------------------------------------------------------
// Chart

Chart::Chart(RuleCache& rules, bool permute, bool backpointers)
    : rules_(rules), permute_(permute), backpointers_(backpointers) {}

void Chart::reserve(std::size_t n) {
  if (n <= capacity_) return;
  std::size_t cap = std::max<std::size_t>(n, capacity_ * 2);
  std::vector<std::vector<Item>> cells(cap * cap);
  for (std::size_t e = 0; e <= tokens_.size() && e < capacity_; ++e)
    for (std::size_t s = 0; s < e; ++s) cells[e * cap + s] = std::move(cells_[index(s, e)]);
  cells_ = std::move(cells);
  capacity_ = cap;
}

void Chart::clear() {
  while (!tokens_.empty()) pop();
}

bool Chart::contains(std::size_t start, std::size_t end, Id id) const {
  const auto& c = cell(start, end);
  return std::any_of(c.begin(), c.end(), [id](const Item& it) { return it.category == id; });
}

bool Chart::accepts() const {
  if (tokens_.empty()) return false;
  const auto& c = cell(0, tokens_.size());
  return std::any_of(c.begin(), c.end(), [this](const Item& it) { return rules_.is_s(it.category); });
}

void Chart::add(std::vector<Item>& cell, Id id, const Back* back) {
  for (auto& item : cell) {
    if (item.category == id) {
      if (backpointers_ && back) item.backs.push_back(*back);
      return;
    }
  }
  Item item{id, {}};
  if (backpointers_ && back) item.backs.push_back(*back);
  cell.push_back(std::move(item));
}

void Chart::close_permutations(std::vector<Item>& cell) {
  if (!permute_) return;
  for (std::size_t idx = 0; idx < cell.size(); ++idx) {
    Id prev = cell[idx].category;
    const auto& chain = rules_.rotations(prev);
    for (Id next : chain) {
      Back back{RuleId::Permute, 0, prev, 0};
      add(cell, next, &back);
      prev = next;
    }
  }
}

void Chart::fill(std::size_t start, std::size_t end) {
  auto& out = cells_[index(start, end)];
  for (std::size_t k = start + 1; k < end; ++k) {
    const auto& lefts = cell(start, k);
    const auto& rights = cell(k, end);
    for (std::size_t li = 0; li < lefts.size(); ++li) {
      const Id a = lefts[li].category;
      for (std::size_t ri = 0; ri < rights.size(); ++ri) {
        const Id b = rights[ri].category;
        for (const auto& r : rules_.combine(a, b)) {
          Back back{r.rule, static_cast<std::uint16_t>(k), a, b};
          add(out, r.category, &back);
        }
      }
    }
  }
  // Coordination: [start, m) CONJ [m + 1, end)
  for (std::size_t m = start + 1; m + 1 < end; ++m) {
    if (!rules_.is_conj(tokens_[m])) continue;
    for (const auto& item : cell(start, m)) {
      if (!rules_.coordinable(item.category) || !contains(m + 1, end, item.category)) continue;
      Back back{RuleId::Coord, static_cast<std::uint16_t>(m), item.category, item.category};
      add(out, item.category, &back);
    }
  }
  close_permutations(out);
}

void Chart::push(Id lexical) {
  const std::size_t n = tokens_.size();
  reserve(n + 2);
  tokens_.push_back(lexical);
  auto& lex = cells_[index(n, n + 1)];
  lex.clear();
  lex.push_back({lexical, {}});
  close_permutations(lex);
  for (std::size_t start = n; start-- > 0;) {
    cells_[index(start, n + 1)].clear();
    fill(start, n + 1);
  }
}

void Chart::pop() {
  if (tokens_.empty()) return;
  const std::size_t n = tokens_.size();
  for (std::size_t start = 0; start < n; ++start) cells_[index(start, n)].clear();
  tokens_.pop_back();
}

std::vector<Derivation> Chart::expand(std::size_t start, std::size_t end, Id id, std::vector<Id>& unary_path,
                                      std::size_t limit) const {
  std::vector<Derivation> out;
  const auto& items = cell(start, end);
  auto it = std::find_if(items.begin(), items.end(), [id](const Item& i) { return i.category == id; });
  if (it == items.end()) return out;
  const Category& cat = rules_.category(id);

  if (end - start == 1 && tokens_[start] == id) out.push_back({cat, std::nullopt, start, end, {}});

  unary_path.push_back(id);
  for (const Back& back : it->backs) {
    if (out.size() >= limit) break;
    if (back.rule == RuleId::Permute) {
      if (std::find(unary_path.begin(), unary_path.end(), back.left) != unary_path.end()) continue;
      for (auto& child : expand(start, end, back.left, unary_path, limit - out.size()))
        out.push_back({cat, RuleId::Permute, start, end, {std::move(child)}});
      continue;
    }
    std::vector<Id> fresh;
    if (back.rule == RuleId::Coord) {
      const std::size_t m = back.split;
      auto lefts = expand(start, m, back.left, fresh, limit);
      fresh.clear();
      auto rights = expand(m + 1, end, back.right, fresh, limit);
      Derivation conj{rules_.category(tokens_[m]), std::nullopt, m, m + 1, {}};
      for (const auto& l : lefts)
        for (const auto& r : rights) {
          if (out.size() >= limit) break;
          out.push_back({cat, RuleId::Coord, start, end, {l, conj, r}});
        }
      continue;
    }
    auto lefts = expand(start, back.split, back.left, fresh, limit);
    fresh.clear();
    auto rights = expand(back.split, end, back.right, fresh, limit);
    for (const auto& l : lefts)
      for (const auto& r : rights) {
        if (out.size() >= limit) break;
        out.push_back({cat, back.rule, start, end, {l, r}});
      }
  }
  unary_path.pop_back();
  return out;
}

std::vector<Derivation> Chart::derivations(Id root, std::size_t limit) const {
  if (tokens_.empty() || limit == 0) return {};
  std::vector<Id> path;
  return expand(0, tokens_.size(), root, path, limit);
}

// ---------------------------------------------------------------------------

namespace {

void validate_input(std::span<const Category> seq) {
  if (seq.empty()) throw std::invalid_argument("cannot parse an empty sequence");
  for (const auto& c : seq)
    if (!c.is_ground() && !is_conjunction_category(c))
      throw std::invalid_argument("lexical category has free variables: " + to_string(c));
}

}  // namespace

ParseResult parse(std::span<const Category> seq, const ParserPolicy& policy, ParseOptions options) {
  validate_input(seq);
  RuleCache rules(policy);
  Chart chart(rules, policy.permutation_active(seq), options.derivations);
  for (const auto& c : seq) chart.push(rules.intern(c));
  ParseResult result;
  result.grammatical = chart.accepts();
  if (options.derivations && result.grammatical)
    result.derivations = chart.derivations(rules.intern(Category::primitive(Primitive::S)), options.max_derivations);
  return result;
}

bool derives(std::span<const Category> seq, const ParserPolicy& policy, const Category& root) {
  validate_input(seq);
  RuleCache rules(policy);
  Chart chart(rules, policy.permutation_active(seq));
  for (const auto& c : seq) chart.push(rules.intern(c));
  return chart.contains(0, seq.size(), rules.intern(root));
}

bool derivation_valid(const Derivation& tree) {
  if (tree.end <= tree.start) throw std::invalid_argument("derivation node with empty span");
  if (!tree.rule) {
    if (!tree.children.empty()) throw std::invalid_argument("lexical leaf with children");
    if (tree.end != tree.start + 1) throw std::invalid_argument("lexical leaf spanning several tokens");
    return true;
  }
  const auto& kids = tree.children;
  auto expect_children = [&](std::size_t n) {
    if (kids.size() != n)
      throw std::invalid_argument(to_string(*tree.rule) + " node needs " + std::to_string(n) + " children");
    if (kids.front().start != tree.start || kids.back().end != tree.end)
      throw std::invalid_argument("children do not cover the parent span");
    for (std::size_t i = 1; i < n; ++i)
      if (kids[i - 1].end != kids[i].start) throw std::invalid_argument("children are not contiguous");
  };

  std::optional<Category> replay;
  switch (*tree.rule) {
    case RuleId::FwdApp:
    case RuleId::BwdApp:
    case RuleId::FwdComp:
    case RuleId::BwdComp: {
      expect_children(2);
      const Category& l = kids[0].category;
      const Category& r = kids[1].category;
      if (*tree.rule == RuleId::FwdApp) replay = apply_forward(l, r);
      else if (*tree.rule == RuleId::BwdApp) replay = apply_backward(l, r);
      else if (*tree.rule == RuleId::FwdComp) replay = compose_forward(l, r);
      else replay = compose_backward(l, r);
      break;
    }
    case RuleId::Coord:
      expect_children(3);
      if (kids[1].rule || kids[1].end != kids[1].start + 1)
        throw std::invalid_argument("conjunction must be a single lexical token");
      replay = coordinate(kids[0].category, kids[1].category, kids[2].category);
      break;
    case RuleId::Permute:
      expect_children(1);
      if (ParserPolicy::in_scope(kids[0].category) && !kids[0].category.restrictions().no_permutation)
        replay = permute_cyclic(kids[0].category);
      break;
  }
  if (!replay || *replay != tree.category) return false;
  return std::all_of(kids.begin(), kids.end(), [](const Derivation& d) { return derivation_valid(d); });
}

bool derivation_check(const Derivation& tree) {
  const bool root_is_s = tree.category.is_primitive() && tree.category.prim() == Primitive::S;
  return derivation_valid(tree) && root_is_s;
}

bool uses_rule(const Derivation& tree, RuleId rule) {
  if (tree.rule == rule) return true;
  return std::any_of(tree.children.begin(), tree.children.end(),
                     [rule](const Derivation& d) { return uses_rule(d, rule); });
}

}  // namespace alforge
