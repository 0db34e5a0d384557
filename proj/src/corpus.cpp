#include "alforge/corpus.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace alforge {

using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Lexicon

Lexicon::Lexicon(std::array<std::vector<std::string>, kLexClassCount> words) : words_(std::move(words)) {
  std::unordered_map<std::string, LexClass> owner;
  for (LexClass c : kAllLexClasses) {
    const auto& list = this->words(c);
    if (list.empty()) throw std::invalid_argument("lexicon class " + std::string(to_string(c)) + " is empty");
    for (const auto& w : list) {
      if (w.empty() || w.find_first_of(" \t\n") != std::string::npos)
        throw std::invalid_argument("invalid word '" + w + "'");
      auto [it, fresh] = owner.emplace(w, c);
      if (!fresh)
        throw std::invalid_argument("word '" + w + "' listed under " + std::string(to_string(it->second)) +
                                    " and " + std::string(to_string(c)));
    }
  }
}

std::optional<LexClass> Lexicon::class_of(std::string_view word) const {
  for (LexClass c : kAllLexClasses)
    for (const auto& w : words(c))
      if (w == word) return c;
  return std::nullopt;
}

std::size_t Lexicon::size() const {
  std::size_t n = 0;
  for (const auto& list : words_) n += list.size();
  return n;
}

Lexicon Lexicon::restricted_to(const std::unordered_set<std::string>& vocab) const {
  std::array<std::vector<std::string>, kLexClassCount> kept;
  for (LexClass c : kAllLexClasses) {
    auto& out = kept[static_cast<std::size_t>(c)];
    for (const auto& w : words(c))
      if (vocab.count(w)) out.push_back(w);
    if (out.empty())
      throw std::runtime_error("no training vocabulary for class " + std::string(to_string(c)));
  }
  return Lexicon(std::move(kept));
}

Lexicon Lexicon::from_json(std::string_view text) {
  const json doc = json::parse(text);
  if (!doc.is_object()) throw std::invalid_argument("lexicon must be a JSON object");
  std::array<std::vector<std::string>, kLexClassCount> words;
  for (const auto& [key, value] : doc.items()) {
    auto c = lex_class_from_string(key);
    if (!c) throw std::invalid_argument("unknown lexical class '" + key + "' in lexicon");
    words[static_cast<std::size_t>(*c)] = value.get<std::vector<std::string>>();
  }
  return Lexicon(std::move(words));
}

std::string Lexicon::to_json() const {
  ordered_json doc = ordered_json::object();
  for (LexClass c : kAllLexClasses) doc[std::string(to_string(c))] = words(c);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::array<std::string_view, 8> kSplitNames = {"ShortTrain", "ShortTest",       "MediumTest",
                                                         "LongTest",   "Recursive",       "Embedded",
                                                         "PairGrammatical", "PairUngrammatical"};

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

const std::string& draw(const std::vector<std::string>& list, Rng& rng) { return list[rng.below(list.size())]; }

Template cat(std::initializer_list<Template> parts) {
  Template out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// Class skeletons of the two constructions, linearized by g's parameters.
struct Linearizer {
  const Grammar& g;

  bool bit(Param p) const { return g.params[p]; }

  Template subject() const { return {LexClass::NP, LexClass::SUBJ}; }
  Template object() const { return {LexClass::NP, LexClass::OBJ}; }

  // A subject NP modified by an object-gapped clause.
  Template relativized(const Template& clause) const {
    return bit(Param::REL) ? cat({subject(), {LexClass::REL}, clause}) : cat({clause, {LexClass::REL}, subject()});
  }
  // Transitive clause missing its object: subject and verb ordered by S.
  Template gapped(const Template& subj) const {
    return bit(Param::S) ? cat({{LexClass::VT}, subj}) : cat({subj, {LexClass::VT}});
  }
  Template transitive(const Template& subj, const Template& obj) const {
    Template out;
    for (char role : to_string(g.base_order)) {
      if (role == 'S') out = cat({out, subj});
      else if (role == 'O') out = cat({out, obj});
      else out.push_back(LexClass::VT);
    }
    return out;
  }
  Template complement(const Template& clause) const {
    return bit(Param::COMP) ? cat({{LexClass::COMP}, clause}) : cat({clause, {LexClass::COMP}});
  }
  // The complement is VCOMP's first argument, so it stays adjacent to the verb.
  Template vcomp(const Template& subj, const Template& comp) const {
    Template core = bit(Param::VP) ? cat({{LexClass::VCOMP}, comp}) : cat({comp, {LexClass::VCOMP}});
    return bit(Param::S) ? cat({core, subj}) : cat({subj, core});
  }
};

}  // namespace

std::string_view to_string(Split s) { return kSplitNames[static_cast<std::size_t>(s)]; }

std::optional<Split> split_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kSplitNames.size(); ++i)
    if (kSplitNames[i] == s) return static_cast<Split>(i);
  return std::nullopt;
}

std::string Sentence::text() const { return join(tokens); }

Sentence instantiate(std::span<const LexClass> t, const Lexicon& lex, Rng& rng) {
  Sentence s;
  s.classes.assign(t.begin(), t.end());
  s.tokens.reserve(t.size());
  for (LexClass c : t) s.tokens.push_back(draw(lex.words(c), rng));
  return s;
}

std::vector<Sentence> sample_split(const Grammar& g, std::span<const Template> templates, const Lexicon& lex,
                                   std::size_t per_length_count, LengthBand band, Split split, Rng& rng,
                                   std::unordered_set<std::string>& seen) {
  std::vector<Sentence> out;
  if (per_length_count == 0) return out;
  std::map<std::size_t, std::vector<const Template*>> by_length;
  for (const auto& t : templates)
    if (t.size() >= band.min && t.size() <= band.max) by_length[t.size()].push_back(&t);

  for (std::size_t n = band.min; n <= band.max; ++n) {
    const auto& pool = by_length[n];
    if (pool.empty()) throw std::runtime_error("no templates of length " + std::to_string(n) + " for grammar " + g.id);
    const std::size_t attempts = per_length_count * 200 + 1000;
    std::size_t got = 0;
    for (std::size_t a = 0; a < attempts && got < per_length_count; ++a) {
      Sentence s = instantiate(*pool[rng.below(pool.size())], lex, rng);
      if (!seen.insert(s.text()).second) continue;
      s.grammar_id = g.id;
      s.split = split;
      out.push_back(std::move(s));
      ++got;
    }
    if (got < per_length_count)
      throw std::runtime_error("only " + std::to_string(got) + " unique sentences of length " + std::to_string(n) +
                               " for grammar " + g.id + " (" + std::string(to_string(split)) + ")");
  }
  return out;
}

std::unordered_set<std::string> vocabulary(std::span<const Sentence> sentences) {
  std::unordered_set<std::string> v;
  for (const auto& s : sentences) v.insert(s.tokens.begin(), s.tokens.end());
  return v;
}

bool coverage_check(std::span<const Sentence> train, std::span<const Sentence> test) {
  std::unordered_set<std::string> texts;
  for (const auto& s : train) texts.insert(s.text());
  const auto vocab = vocabulary(train);
  for (const auto& s : test) {
    if (texts.count(s.text())) return false;
    for (const auto& w : s.tokens)
      if (!vocab.count(w)) return false;
  }
  return true;
}

std::string_view to_string(TargetedKind k) { return k == TargetedKind::Recursive ? "recursive" : "embedded"; }

Template targeted_template(const Grammar& g, TargetedKind kind) {
  const Linearizer lin{g};
  Template t;
  if (kind == TargetedKind::Recursive) {
    const Template inner = lin.relativized(lin.gapped(lin.subject()));
    t = lin.transitive(lin.relativized(lin.gapped(inner)), lin.object());
  } else {
    // A relative clause extracting out of a complement clause. When COMP and
    // VP point in opposite directions that extraction would need crossed
    // composition, so the relative clause sits inside the complement instead.
    const Template clause = lin.vcomp(lin.subject(), lin.complement(lin.gapped(lin.subject())));
    t = lin.transitive(lin.relativized(clause), lin.object());
    if (!g.parses(t)) {
      const Template inner = lin.transitive(lin.relativized(lin.gapped(lin.subject())), lin.object());
      t = lin.vcomp(lin.subject(), lin.complement(inner));
    }
  }
  if (!g.parses(t))
    throw std::runtime_error(std::string(to_string(kind)) + " construction does not parse under grammar " + g.id +
                             ": " + to_string(t));
  return t;
}

std::vector<Sentence> gen_targeted(const Grammar& g, TargetedKind kind, const Lexicon& lex, std::size_t n,
                                   Rng& rng) {
  const Template t = targeted_template(g, kind);
  const Split split = kind == TargetedKind::Recursive ? Split::Recursive : Split::Embedded;
  std::unordered_set<std::string> seen;
  std::vector<Sentence> out;
  const std::size_t attempts = n * 200 + 1000;
  for (std::size_t a = 0; a < attempts && out.size() < n; ++a) {
    Sentence s = instantiate(t, lex, rng);
    if (!seen.insert(s.text()).second) continue;
    s.grammar_id = g.id;
    s.split = split;
    out.push_back(std::move(s));
  }
  if (out.size() < n)
    throw std::runtime_error("only " + std::to_string(out.size()) + " unique " + std::string(to_string(kind)) +
                             " sentences for grammar " + g.id);
  return out;
}

std::string_view to_string(PairKind k) { return k == PairKind::CaseType ? "case" : "verb"; }

std::vector<MinimalPair> gen_minimal_pairs(const Grammar& g, PairKind kind, std::span<const Sentence> source,
                                           const Lexicon& lex, std::size_t n, Rng& rng) {
  std::vector<MinimalPair> out;
  if (n == 0) return out;
  if (source.empty()) throw std::runtime_error("no source sentences for minimal pairs");
  std::unordered_set<std::string> seen;
  std::unordered_map<std::string, bool> grammatical;  // memoised parse verdicts by class sequence
  auto parses = [&](const Template& t) {
    const std::string key = to_string(t);
    auto it = grammatical.find(key);
    if (it != grammatical.end()) return it->second;
    return grammatical[key] = g.parses(t);
  };

  constexpr std::size_t kRetries = 100;
  while (out.size() < n) {
    bool made = false;
    for (std::size_t attempt = 0; attempt < kRetries && !made; ++attempt) {
      const Sentence& src = source[rng.below(source.size())];
      std::vector<std::size_t> targets;
      for (std::size_t i = 0; i < src.classes.size(); ++i) {
        const LexClass c = src.classes[i];
        if (kind == PairKind::CaseType ? (c == LexClass::SUBJ || c == LexClass::OBJ) : c == LexClass::VT)
          targets.push_back(i);
      }
      if (targets.empty()) continue;
      const std::size_t at = targets[rng.below(targets.size())];
      LexClass replacement = LexClass::VI;
      if (kind == PairKind::CaseType) replacement = src.classes[at] == LexClass::SUBJ ? LexClass::OBJ : LexClass::SUBJ;

      Sentence bad = src;
      bad.classes[at] = replacement;
      bad.tokens[at] = draw(lex.words(replacement), rng);
      bad.split = Split::PairUngrammatical;
      if (!seen.insert(src.text() + '\n' + bad.text()).second) continue;
      if (!parses(src.classes) || parses(bad.classes)) continue;

      Sentence good = src;
      good.grammar_id = bad.grammar_id = g.id;
      good.split = Split::PairGrammatical;
      out.push_back({std::move(good), std::move(bad)});
      made = true;
    }
    if (!made)
      throw std::runtime_error("minimal-pair generation (" + std::string(to_string(kind)) + ") exhausted " +
                               std::to_string(kRetries) + " attempts for grammar " + g.id + " after " +
                               std::to_string(out.size()) + " pairs");
  }
  return out;
}

void write_sentences(std::ostream& out, std::span<const Sentence> sentences) {
  for (const auto& s : sentences) {
    ordered_json j;
    j["grammar_id"] = s.grammar_id;
    j["split"] = std::string(to_string(s.split));
    j["length"] = s.length();
    j["tokens"] = s.tokens;
    std::vector<std::string> classes;
    for (LexClass c : s.classes) classes.emplace_back(to_string(c));
    j["classes"] = classes;
    out << j.dump() << '\n';
  }
}

std::vector<Sentence> read_sentences(std::istream& in) {
  std::vector<Sentence> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      Sentence s;
      s.grammar_id = j.at("grammar_id").get<std::string>();
      auto split = split_from_string(j.at("split").get<std::string>());
      if (!split) throw std::invalid_argument("unknown split");
      s.split = *split;
      s.tokens = j.at("tokens").get<std::vector<std::string>>();
      for (const auto& c : j.at("classes").get<std::vector<std::string>>()) {
        auto lc = lex_class_from_string(c);
        if (!lc) throw std::invalid_argument("unknown class '" + c + "'");
        s.classes.push_back(*lc);
      }
      if (s.classes.size() != s.tokens.size() || j.at("length").get<std::size_t>() != s.tokens.size())
        throw std::invalid_argument("length mismatch");
      out.push_back(std::move(s));
    } catch (const std::exception& e) {
      throw std::runtime_error("sentence file line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace alforge
