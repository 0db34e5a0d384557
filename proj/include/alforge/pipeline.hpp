#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "alforge/corpus.hpp"
#include "alforge/eval.hpp"
#include "alforge/grammar.hpp"
#include "alforge/templates.hpp"

namespace alforge {

struct PipelineConfig {
  std::uint64_t seed = 0;
  double scale = 1.0;  // multiplies every count below
  std::size_t train_per_length = 1000;
  std::size_t test_per_length = 1000;
  std::size_t long_per_length = 2000;
  std::size_t targeted = 500;
  std::size_t pairs = 500;
  std::size_t max_template_length = 10;
  std::size_t ngram_order = 3;
  double ngram_k = 0.1;
  PplMode ppl_mode = PplMode::Corpus;
  std::string lexicon_path;   // empty: bundled lexicon
  std::string typology_path;  // empty: bundled base-order table
  unsigned threads = 1;

  std::size_t scaled(std::size_t n) const;
};

// Splits of one grammar, as written by the pipeline.
struct Dataset {
  std::vector<Template> templates;       // lengths 3..max_template_length
  std::vector<Template> long_templates;  // lengths 11..20
  std::vector<Sentence> short_train, short_test, medium_test, long_test, recursive, embedded;
  std::vector<MinimalPair> case_pairs, verb_pairs;
};

// Deterministic in (config, g.id): every artifact draws from its own stream
// derived from the master seed and the grammar id.
Dataset build_dataset(const Grammar& g, const Lexicon& lex, const PipelineConfig& config);

// grammar.gcg, templates.txt, long_templates.txt and one .jsonl per split
// (pairs_case / pairs_verb hold pair members on consecutive lines).
void write_dataset(const std::filesystem::path& dir, const Grammar& g, const Dataset& d);

struct GrammarReport {
  std::string grammar_id;
  BaseOrder base_order = BaseOrder::SOV;
  double plausibility = 0;
  std::vector<std::pair<std::string, double>> ppl;  // split name -> perplexity
  double case_accuracy = 0;
  double verb_accuracy = 0;
};

struct PipelineReport {
  std::vector<GrammarReport> grammars;  // sorted by id
  // Per test split, PPL vs plausibility across grammars (needs >= 3 grammars
  // with varying values).
  std::vector<std::pair<std::string, std::optional<Correlation>>> correlations;
  std::string typology_hash;
};

// Runs everything for the given grammar ids (canonical or alias) and writes
// under out_dir: one directory per grammar plus report.csv and judge.csv.
// Throws std::invalid_argument on an unknown id.
PipelineReport run_pipeline(const std::vector<std::string>& grammar_ids, const PipelineConfig& config,
                            const std::filesystem::path& out_dir);

// Runs fn(i) for i in [0, n) on up to `threads` workers. Exceptions are rethrown
// (the one with the lowest index wins).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

// GCG_ALFORGE_THREADS if set and positive, else `fallback`.
unsigned thread_count(unsigned fallback);

Lexicon load_lexicon(const std::string& path);
TypologyTable load_typology(const std::string& path);

// Pair files store the grammatical then the ungrammatical member on consecutive lines.
std::vector<Sentence> flatten_pairs(std::span<const MinimalPair> pairs);

}  // namespace alforge
