#include "alforge/templates.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "alforge/random.hpp"

namespace alforge {

namespace {

constexpr std::size_t kMaxGeneratedLength = 16;  // 4 bits per class in a 64-bit code

bool is(LexClass a, LexClass b) { return a == b; }

std::size_t count(std::span<const LexClass> t, LexClass c) {
  return static_cast<std::size_t>(std::count(t.begin(), t.end(), c));
}

bool contains(std::span<const LexClass> t, LexClass c) { return std::find(t.begin(), t.end(), c) != t.end(); }

// ---------------------------------------------------------------------------
// Templates packed 4 bits per class, first class in the low bits. Only
// meaningful together with a known length.

using Code = std::uint64_t;

Code concat(Code a, std::size_t len_a, Code b) { return a | (b << (4 * len_a)); }

Template decode(Code c, std::size_t len) {
  Template t(len);
  for (std::size_t i = 0; i < len; ++i) t[i] = static_cast<LexClass>((c >> (4 * i)) & 0xf);
  return t;
}

// Rules 4 and 5 also hold for every substring, so violating substrings never
// need to be built.
bool has_forbidden_pair(Code c, std::size_t len) {
  const Code conj = static_cast<Code>(LexClass::CONJ), prep = static_cast<Code>(LexClass::PREP);
  for (std::size_t i = 0; i + 1 < len; ++i) {
    const Code a = (c >> (4 * i)) & 0xf, b = (c >> (4 * i + 4)) & 0xf;
    if (a == b && (a == conj || a == prep)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// The finite set of categories reachable under a policy, with every rule
// instance among them. Recognition over this table is exactly the chart's.

struct RuleTable {
  using Id = RuleCache::Id;
  struct Binary {
    std::size_t left, right;  // dense member indices
    std::vector<std::size_t> out;
  };

  RuleCache rules;
  std::vector<Id> members;                 // dense index -> category id
  std::map<Id, std::size_t> index;         // category id -> dense index
  std::array<std::optional<std::size_t>, kLexClassCount> lexical;  // none for CONJ
  std::vector<Binary> binary;
  std::vector<std::size_t> coordinable;
  std::vector<std::vector<std::size_t>> rotations;
  std::optional<std::size_t> s;

  RuleTable(const Grammar& g, bool permute) : rules(g.policy) {
    constexpr std::size_t kLimit = 20000;
    std::vector<Id> queue;
    auto add = [&](Id id) -> std::size_t {
      auto it = index.find(id);
      if (it != index.end()) return it->second;
      if (members.size() >= kLimit) throw std::logic_error("category closure does not terminate");
      const std::size_t k = members.size();
      members.push_back(id);
      index.emplace(id, k);
      queue.push_back(id);
      return k;
    };
    for (LexClass c : kAllLexClasses) {
      if (c == LexClass::CONJ) continue;
      lexical[static_cast<std::size_t>(c)] = add(rules.intern(g.category(c)));
    }
    // Close under rotation and binary rules. Coordination never yields a new category.
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> pairs;
    for (std::size_t done = 0; done < queue.size(); ++done) {
      const Id x = queue[done];
      if (permute)
        for (Id r : rules.rotations(x)) add(r);
      const std::size_t xi = index.at(x);
      for (std::size_t yi = 0; yi <= xi; ++yi) {
        const Id y = members[yi];
        for (auto [l, r] : {std::pair{x, y}, std::pair{y, x}}) {
          const auto results = rules.combine(l, r);  // copy: add() may grow the cache
          if (results.empty()) continue;
          auto& out = pairs[{index.at(l), index.at(r)}];
          for (const auto& res : results) out.push_back(add(res.category));
          if (xi == yi) break;
        }
      }
    }
    for (auto& [key, out] : pairs) {
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      binary.push_back({key.first, key.second, std::move(out)});
    }
    rotations.resize(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
      const Id id = members[i];
      if (rules.coordinable(id)) coordinable.push_back(i);
      if (rules.is_s(id)) s = i;
      if (permute)
        for (Id r : rules.rotations(id)) rotations[i].push_back(index.at(r));
    }
  }
};

using Bucket = std::vector<Code>;

void normalize(Bucket& b) {
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
}

// sets[n][m]: every admissible class sequence of length n deriving member m.
std::vector<std::vector<Bucket>> generate(const RuleTable& table, std::size_t max_len) {
  const std::size_t m = table.members.size();
  std::vector<std::vector<Bucket>> sets(max_len + 1, std::vector<Bucket>(m));
  const Code conj = static_cast<Code>(LexClass::CONJ);

  auto close_rotations = [&](std::vector<Bucket>& level) {
    // Orbits are short; iterate to a fixpoint so rotations of rotations are covered.
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < m; ++i) {
        if (level[i].empty()) continue;
        for (std::size_t r : table.rotations[i]) {
          const std::size_t before = level[r].size();
          level[r].insert(level[r].end(), level[i].begin(), level[i].end());
          normalize(level[r]);
          changed |= level[r].size() != before;
        }
      }
    }
  };

  if (max_len >= 1) {
    for (LexClass c : kAllLexClasses)
      if (auto k = table.lexical[static_cast<std::size_t>(c)]) sets[1][*k].push_back(static_cast<Code>(c));
    close_rotations(sets[1]);
  }

  Bucket product;
  for (std::size_t n = 2; n <= max_len; ++n) {
    auto& level = sets[n];
    for (const auto& rule : table.binary) {
      for (std::size_t i = 1; i < n; ++i) {
        const Bucket& left = sets[i][rule.left];
        const Bucket& right = sets[n - i][rule.right];
        if (left.empty() || right.empty()) continue;
        product.clear();
        for (Code a : left)
          for (Code b : right) {
            const Code c = concat(a, i, b);
            if (!has_forbidden_pair(c, n)) product.push_back(c);
          }
        for (std::size_t out : rule.out) level[out].insert(level[out].end(), product.begin(), product.end());
      }
    }
    for (std::size_t x : table.coordinable) {
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const Bucket& left = sets[i][x];
        const Bucket& right = sets[n - 1 - i][x];
        if (left.empty() || right.empty()) continue;
        for (Code a : left)
          for (Code b : right) {
            const Code c = concat(concat(a, i, conj), i + 1, b);
            if (!has_forbidden_pair(c, n)) level[x].push_back(c);
          }
      }
    }
    for (auto& b : level) normalize(b);
    close_rotations(level);
  }
  return sets;
}

void check_length(std::size_t max_len) {
  if (max_len > kMaxGeneratedLength)
    throw std::invalid_argument("template length is limited to " + std::to_string(kMaxGeneratedLength));
}

// A recogniser that reuses the chart for the longest common prefix with the
// previous input; permutation-conditional grammars keep one chart per mode.
class PrefixParser {
 public:
  explicit PrefixParser(const Grammar& g)
      : g_(g), rules_(g.policy), with_(rules_, true), without_(rules_, false) {
    for (LexClass c : kAllLexClasses) ids_[static_cast<std::size_t>(c)] = rules_.intern(g.category(c));
  }

  bool accepts(std::span<const LexClass> t) {
    const bool permute = permutes(t);
    Chart& chart = permute ? with_ : without_;
    auto& held = permute ? held_with_ : held_without_;
    std::size_t common = 0;
    while (common < held.size() && common < t.size() && held[common] == t[common]) ++common;
    while (held.size() > common) {
      chart.pop();
      held.pop_back();
    }
    for (std::size_t i = common; i < t.size(); ++i) {
      chart.push(ids_[static_cast<std::size_t>(t[i])]);
      held.push_back(t[i]);
    }
    return chart.accepts();
  }

  bool permutes(std::span<const LexClass> t) const {
    switch (g_.policy.permutation) {
      case ParserPolicy::Permutation::Never: return false;
      case ParserPolicy::Permutation::Always: return true;
      case ParserPolicy::Permutation::WithTrigger: break;
    }
    for (LexClass c : t)
      if (g_.policy.trigger && g_.category(c) == *g_.policy.trigger) return true;
    return false;
  }

 private:
  const Grammar& g_;
  RuleCache rules_;
  Chart with_, without_;
  Template held_with_, held_without_;
  std::array<RuleCache::Id, kLexClassCount> ids_{};
};

}  // namespace

std::string to_string(std::span<const LexClass> t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out.push_back(' ');
    out += to_string(t[i]);
  }
  return out;
}

Template parse_template(std::string_view text) {
  Template t;
  std::istringstream in{std::string(text)};
  std::string word;
  while (in >> word) {
    auto c = lex_class_from_string(word);
    if (!c) throw std::invalid_argument("unknown lexical class '" + word + "'");
    t.push_back(*c);
  }
  return t;
}

std::vector<Template> read_templates(std::istream& in) {
  std::vector<Template> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    out.push_back(parse_template(line));
  }
  return out;
}

void write_templates(std::ostream& out, std::span<const Template> templates) {
  for (const auto& t : templates) out << to_string(t) << '\n';
}

bool heuristic_filter(std::span<const LexClass> t) {
  if (t.size() < 3) return false;
  if (is(t.front(), LexClass::CONJ) || is(t.back(), LexClass::CONJ)) return false;
  if (is(t.front(), LexClass::SUBJ) || is(t.front(), LexClass::OBJ)) return false;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (t[i] == t[i + 1] && (t[i] == LexClass::CONJ || t[i] == LexClass::PREP)) return false;
  }
  if (count(t, LexClass::SUBJ) + count(t, LexClass::OBJ) > count(t, LexClass::NP)) return false;
  if (contains(t, LexClass::COMP) && !contains(t, LexClass::VCOMP)) return false;
  return true;
}

bool prefix_admissible(std::span<const LexClass> prefix, std::size_t max_len) {
  if (prefix.empty()) return true;
  if (prefix.size() > max_len) return false;
  if (is(prefix.front(), LexClass::CONJ) || is(prefix.front(), LexClass::SUBJ) || is(prefix.front(), LexClass::OBJ))
    return false;
  for (std::size_t i = 0; i + 1 < prefix.size(); ++i) {
    if (prefix[i] == prefix[i + 1] && (prefix[i] == LexClass::CONJ || prefix[i] == LexClass::PREP)) return false;
  }
  const std::size_t markers = count(prefix, LexClass::SUBJ) + count(prefix, LexClass::OBJ);
  return markers <= count(prefix, LexClass::NP) + (max_len - prefix.size());
}

bool template_less(std::span<const LexClass> a, std::span<const LexClass> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<Template> enumerate_templates(const Grammar& g, std::size_t max_len, std::size_t min_len) {
  check_length(max_len);
  std::vector<Template> out;
  if (max_len < 3) return out;
  min_len = std::max<std::size_t>(min_len, 3);

  auto collect = [&](bool permute, bool need_trigger) {
    RuleTable table(g, permute);
    if (!table.s) return;
    const auto sets = generate(table, max_len);
    for (std::size_t n = min_len; n <= max_len; ++n) {
      for (Code c : sets[n][*table.s]) {
        Template t = decode(c, n);
        if (!heuristic_filter(t)) continue;
        if (need_trigger) {
          bool triggered = false;
          for (LexClass k : t) triggered |= g.category(k) == *g.policy.trigger;
          if (!triggered) continue;
        }
        out.push_back(std::move(t));
      }
    }
  };

  switch (g.policy.permutation) {
    case ParserPolicy::Permutation::Never: collect(false, false); break;
    case ParserPolicy::Permutation::Always: collect(true, false); break;
    case ParserPolicy::Permutation::WithTrigger:
      // Inputs without the trigger parse without permutation; the rest with it.
      // Templates lacking the trigger are only taken from the plain table.
      collect(false, false);
      if (g.policy.trigger) {
        std::vector<Template> plain = std::move(out);
        out.clear();
        collect(true, true);
        for (auto& t : plain) {
          bool triggered = false;
          for (LexClass k : t) triggered |= g.category(k) == *g.policy.trigger;
          if (!triggered) out.push_back(std::move(t));
        }
      }
      break;
  }
  std::sort(out.begin(), out.end(), [](const Template& a, const Template& b) { return template_less(a, b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Template> enumerate_templates_dfs(const Grammar& g, std::size_t max_len, std::size_t min_len) {
  std::vector<Template> out;
  if (max_len < 3) return out;
  min_len = std::max<std::size_t>(min_len, 3);
  PrefixParser parser(g);
  Template prefix;
  // Iterative DFS in lexicographic order, so the output is already canonical.
  auto visit = [&](auto&& self) -> void {
    if (prefix.size() >= min_len && heuristic_filter(prefix) && parser.accepts(prefix)) out.push_back(prefix);
    if (prefix.size() == max_len) return;
    for (LexClass c : kAllLexClasses) {
      prefix.push_back(c);
      if (prefix_admissible(prefix, max_len)) self(self);
      prefix.pop_back();
    }
  };
  visit(visit);
  return out;
}

Template augment_candidate(std::span<const LexClass> t1, std::span<const LexClass> t2, AugmentOp op,
                           std::size_t insert_at) {
  Template out;
  out.reserve(t1.size() + t2.size() + 1);
  switch (op) {
    case AugmentOp::Concat:
      out.assign(t1.begin(), t1.end());
      out.insert(out.end(), t2.begin(), t2.end());
      break;
    case AugmentOp::InsertConj:
      if (insert_at < 1 || insert_at >= t1.size()) throw std::invalid_argument("insertion point out of range");
      out.assign(t1.begin(), t1.begin() + static_cast<std::ptrdiff_t>(insert_at));
      out.push_back(LexClass::CONJ);
      out.insert(out.end(), t2.begin(), t2.end());
      out.insert(out.end(), t1.begin() + static_cast<std::ptrdiff_t>(insert_at), t1.end());
      break;
    case AugmentOp::AppendConj:
      out.assign(t1.begin(), t1.end());
      out.push_back(LexClass::CONJ);
      out.insert(out.end(), t2.begin(), t2.end());
      break;
  }
  return out;
}

std::vector<Template> augment_long(std::span<const Template> sources, const Grammar& g,
                                   const AugmentOptions& options) {
  if (options.min_len > options.max_len) throw std::invalid_argument("empty length range");
  PrefixParser parser(g);
  std::unordered_set<std::string> seen;
  auto key = [](const Template& t) {
    std::string k(t.size(), '\0');
    for (std::size_t i = 0; i < t.size(); ++i) k[i] = static_cast<char>(t[i]);
    return k;
  };
  auto in_range = [&](std::size_t n) { return n >= options.min_len && n <= options.max_len; };

  std::vector<Template> out;
  if (!options.sample) {
    std::vector<Template> candidates;
    for (const auto& t1 : sources)
      for (const auto& t2 : sources) {
        const std::size_t n = t1.size() + t2.size();
        if (in_range(n)) candidates.push_back(augment_candidate(t1, t2, AugmentOp::Concat));
        if (in_range(n + 1)) {
          for (std::size_t i = 1; i < t1.size(); ++i)
            candidates.push_back(augment_candidate(t1, t2, AugmentOp::InsertConj, i));
          candidates.push_back(augment_candidate(t1, t2, AugmentOp::AppendConj));
        }
      }
    std::sort(candidates.begin(), candidates.end(),
              [](const Template& a, const Template& b) { return template_less(a, b); });
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (auto& c : candidates)
      if (heuristic_filter(c) && parser.accepts(c)) out.push_back(std::move(c));
    return out;
  }

  // Sampled: a quota of distinct templates per length. Each draw picks an open
  // length and an operator, then a source pair uniformly among the pairs that
  // produce exactly that length.
  const std::size_t quota = *options.sample;
  if (quota == 0 || sources.empty()) return out;
  std::vector<std::vector<const Template*>> by_len;
  for (const auto& t : sources) {
    if (t.size() >= by_len.size()) by_len.resize(t.size() + 1);
    by_len[t.size()].push_back(&t);
  }
  auto bucket = [&](std::size_t n) { return n < by_len.size() ? by_len[n].size() : std::size_t{0}; };
  std::vector<std::size_t> per_length(options.max_len + 1, 0);
  std::vector<std::size_t> open;
  for (std::size_t n = options.min_len; n <= options.max_len; ++n) open.push_back(n);
  Rng rng(options.seed);
  const std::size_t attempts = quota * open.size() * options.max_attempts_factor;
  std::vector<std::uint64_t> weight;
  for (std::size_t a = 0; a < attempts && !open.empty(); ++a) {
    const std::size_t slot = rng.below(open.size());
    const std::size_t n = open[slot];
    const auto op = static_cast<AugmentOp>(rng.below(3));
    const std::size_t extra = op == AugmentOp::Concat ? 0 : 1;
    if (n < extra) continue;
    const std::size_t body = n - extra;
    // weight[l] = number of (t1, t2) pairs with |t1| = l and |t1| + |t2| = body
    weight.assign(body + 1, 0);
    std::uint64_t total = 0;
    for (std::size_t l = (op == AugmentOp::InsertConj ? 2 : 1); l < body; ++l) {
      weight[l] = static_cast<std::uint64_t>(bucket(l)) * bucket(body - l);
      total += weight[l];
    }
    if (total == 0) continue;
    std::uint64_t pick = rng.below(total);
    std::size_t l = 0;
    while (pick >= weight[l]) pick -= weight[l++];
    const Template& t1 = *by_len[l][pick / bucket(body - l)];
    const Template& t2 = *by_len[body - l][pick % bucket(body - l)];
    const std::size_t at = op == AugmentOp::InsertConj ? 1 + rng.below(t1.size() - 1) : 0;
    Template c = augment_candidate(t1, t2, op, at);
    if (!seen.insert(key(c)).second) continue;
    if (!heuristic_filter(c) || !parser.accepts(c)) continue;
    out.push_back(std::move(c));
    if (++per_length[n] == quota) open.erase(open.begin() + static_cast<std::ptrdiff_t>(slot));
  }
  for (std::size_t n = options.min_len; n <= options.max_len; ++n)
    if (per_length[n] == 0)
      throw std::runtime_error("no Long template of length " + std::to_string(n) + " found for grammar " + g.id);
  return out;
}

}  // namespace alforge
