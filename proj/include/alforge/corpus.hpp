#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "alforge/grammar.hpp"
#include "alforge/random.hpp"
#include "alforge/templates.hpp"

namespace alforge {

// Word lists per lexical class; every word belongs to exactly one class.
class Lexicon {
 public:
  Lexicon() = default;
  // Throws std::invalid_argument on an empty class or a word listed twice.
  explicit Lexicon(std::array<std::vector<std::string>, kLexClassCount> words);

  const std::vector<std::string>& words(LexClass c) const { return words_[static_cast<std::size_t>(c)]; }
  std::optional<LexClass> class_of(std::string_view word) const;
  std::size_t size() const;

  // Restricts every class to the given vocabulary. Throws if a class becomes empty.
  Lexicon restricted_to(const std::unordered_set<std::string>& vocab) const;

  static Lexicon from_json(std::string_view text);
  std::string to_json() const;

 private:
  std::array<std::vector<std::string>, kLexClassCount> words_;
};

// The bundled word lists (data/lexicon.json, compiled in).
const Lexicon& default_lexicon();

enum class Split : std::uint8_t {
  ShortTrain,
  ShortTest,
  MediumTest,
  LongTest,
  Recursive,
  Embedded,
  PairGrammatical,
  PairUngrammatical
};
std::string_view to_string(Split s);
std::optional<Split> split_from_string(std::string_view s);

struct Sentence {
  std::vector<std::string> tokens;
  Template classes;
  std::string grammar_id;
  Split split = Split::ShortTrain;

  std::size_t length() const { return tokens.size(); }
  std::string text() const;  // tokens joined by single spaces
};

struct LengthBand {
  std::size_t min = 3;
  std::size_t max = 8;
};

inline constexpr LengthBand kShortBand{3, 8};
inline constexpr LengthBand kMediumBand{9, 10};
inline constexpr LengthBand kLongBand{11, 20};

// Fills each slot with a uniformly drawn word of its class.
Sentence instantiate(std::span<const LexClass> t, const Lexicon& lex, Rng& rng);

// Exactly per_length_count sentences per length of the band, each from a
// uniformly drawn template of that length. Sentences already in `seen`
// (token text) are skipped and accepted ones are added, so successive calls
// sharing `seen` produce disjoint splits. Throws std::runtime_error naming the
// length when unique sentences run out.
std::vector<Sentence> sample_split(const Grammar& g, std::span<const Template> templates, const Lexicon& lex,
                                   std::size_t per_length_count, LengthBand band, Split split, Rng& rng,
                                   std::unordered_set<std::string>& seen);

std::unordered_set<std::string> vocabulary(std::span<const Sentence> sentences);

// No shared token sequence and every test word occurs in training.
bool coverage_check(std::span<const Sentence> train, std::span<const Sentence> test);

enum class TargetedKind : std::uint8_t { Recursive, Embedded };
std::string_view to_string(TargetedKind k);

// The class sequence of the construction linearized for g's word order.
// Throws std::runtime_error if it does not parse under g.
Template targeted_template(const Grammar& g, TargetedKind kind);

// n distinct sentences of the construction.
std::vector<Sentence> gen_targeted(const Grammar& g, TargetedKind kind, const Lexicon& lex, std::size_t n, Rng& rng);

enum class PairKind : std::uint8_t { CaseType, VerbType };
std::string_view to_string(PairKind k);

struct MinimalPair {
  Sentence grammatical;
  Sentence ungrammatical;
};

// n distinct pairs. The grammatical member is a source sentence; the other
// swaps one case marker (CaseType) or replaces one VT word with a VI word
// (VerbType), chosen at random, and is kept only if it fails to parse.
// Each pair gets up to 100 draws; throws std::runtime_error when they run out.
std::vector<MinimalPair> gen_minimal_pairs(const Grammar& g, PairKind kind, std::span<const Sentence> source,
                                           const Lexicon& lex, std::size_t n, Rng& rng);

// JSON lines: {"grammar_id", "split", "length", "tokens", "classes"}.
void write_sentences(std::ostream& out, std::span<const Sentence> sentences);
std::vector<Sentence> read_sentences(std::istream& in);

}  // namespace alforge
