#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "alforge/corpus.hpp"
#include "alforge/grammar.hpp"

namespace alforge {

// Natural-log probabilities of every token plus the end-of-sentence token.
struct ScoreRecord {
  std::string grammar_id;
  std::vector<std::string> tokens;
  std::vector<double> logprobs;

  double total() const;
  // Throws std::invalid_argument unless |logprobs| = |tokens| + 1 and every value is <= 0.
  void validate() const;
};

enum class PplMode : std::uint8_t {
  Corpus,        // exp of the token-weighted mean negative log-probability
  SentenceMean,  // arithmetic mean of per-sentence perplexities
};

// Throws std::invalid_argument on empty input or an invalid record.
double perplexity(std::span<const ScoreRecord> records, PplMode mode = PplMode::Corpus);

struct TypologyTable {
  std::map<BaseOrder, double> base_order_freq;
  // p(bit = 0), p(bit = 1) for COMP, PP, ADJ and REL. May be empty, in which
  // case plausibility is the base-order frequency alone.
  std::map<Param, std::pair<double, double>> param_freq;

  // Base-order row of the natural-language typology (six orders).
  static TypologyTable bundled();
  static TypologyTable from_json(std::string_view text);
  std::string to_json() const;
  // 16 hex digits identifying the table contents.
  std::string provenance_hash() const;
  // Throws std::invalid_argument on a missing base order, a partial parameter
  // set, or a distribution not summing to one. Parameter rows must sum to 1
  // within 1e-9; the base-order row within 0.03, since the published row is
  // six values rounded to two decimals (it sums to 0.99).
  void validate() const;
};

double plausibility(const Grammar& g, const TypologyTable& t);

struct Correlation {
  double r = 0;
  double p_value = 1;
  std::size_t n = 0;
  bool significant() const { return p_value < 0.05; }
};

// Pearson r with a two-sided t-test on n - 2 degrees of freedom. Throws
// std::invalid_argument on size mismatch, n < 3 or zero variance ("degenerate input").
Correlation pearson(std::span<const double> x, std::span<const double> y);

// Correlation between PPL and plausibility over every grammar in `grammars`
// (all 96 by default). Throws std::invalid_argument listing missing ids.
Correlation ta_score(const std::map<std::string, double>& ppl_by_grammar, const TypologyTable& t);
Correlation ta_score(const std::map<std::string, double>& ppl_by_grammar, const TypologyTable& t,
                     std::span<const Grammar> grammars);

// Fraction of pairs whose grammatical member has the strictly larger total
// log-probability. Throws std::invalid_argument on a length mismatch.
double judge_pairs(std::span<const std::pair<ScoreRecord, ScoreRecord>> pairs);

// Word-level add-k n-gram model with begin padding, a scored end token and
// backoff to shorter contexts when a context was never seen.
class NgramModel {
 public:
  // Throws std::invalid_argument on empty training data, order < 1 or k <= 0.
  NgramModel(std::span<const std::vector<std::string>> sentences, std::size_t order, double k);

  std::size_t order() const { return order_; }
  double k() const { return k_; }
  // Training word types plus the end token.
  std::size_t vocabulary_size() const { return vocab_.size(); }
  std::vector<std::string> vocabulary() const;  // includes the end token "</s>"

  // Probability of `word` after `history` (full sentence prefix).
  double prob(std::span<const std::string> history, std::string_view word) const;
  ScoreRecord score(std::span<const std::string> tokens) const;

  static constexpr std::string_view kEnd = "</s>";

 private:
  using Id = std::uint32_t;
  struct Counts {
    std::uint64_t total = 0;
    std::unordered_map<Id, std::uint64_t> next;
  };

  std::size_t order_;
  double k_;
  std::unordered_map<std::string, Id> vocab_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, Counts> contexts_;  // key: packed ids, oldest first

  std::optional<Id> id(std::string_view w) const;
  double prob_ids(std::span<const Id> history, std::optional<Id> word) const;
};

NgramModel ngram_train(std::span<const Sentence> train, std::size_t order, double k);
std::vector<ScoreRecord> ngram_score(const NgramModel& model, std::span<const Sentence> sentences);

// JSON lines: {"grammar_id", "tokens", "logprobs"}.
void write_scores(std::ostream& out, std::span<const ScoreRecord> records);
std::vector<ScoreRecord> read_scores(std::istream& in);

}  // namespace alforge
