#include "alforge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace alforge {

namespace fs = std::filesystem;

std::size_t PipelineConfig::scaled(std::size_t n) const {
  if (!(scale >= 0.0)) throw std::invalid_argument("scale must be >= 0");
  return static_cast<std::size_t>(std::llround(static_cast<double>(n) * scale));
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

unsigned thread_count(unsigned fallback) {
  if (const char* env = std::getenv("GCG_ALFORGE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, fallback);
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Rng stream(const PipelineConfig& c, const Grammar& g, std::string_view name) {
  return Rng(derive_seed(c.seed, g.id + "/" + std::string(name)));
}

void write_split(const fs::path& p, std::span<const Sentence> s) {
  auto out = open_out(p);
  write_sentences(out, s);
}

constexpr std::array<std::string_view, 5> kScoredSplits = {"short_test", "medium_test", "long_test", "recursive",
                                                           "embedded"};

}  // namespace

Lexicon load_lexicon(const std::string& path) {
  if (path.empty()) return default_lexicon();
  return Lexicon::from_json(read_file(path));
}

TypologyTable load_typology(const std::string& path) {
  if (path.empty()) return TypologyTable::bundled();
  return TypologyTable::from_json(read_file(path));
}

std::vector<Sentence> flatten_pairs(std::span<const MinimalPair> pairs) {
  std::vector<Sentence> out;
  out.reserve(pairs.size() * 2);
  for (const auto& p : pairs) {
    out.push_back(p.grammatical);
    out.push_back(p.ungrammatical);
  }
  return out;
}

Dataset build_dataset(const Grammar& g, const Lexicon& lex, const PipelineConfig& c) {
  Dataset d;
  d.templates = enumerate_templates(g, c.max_template_length);

  const std::size_t long_quota = c.scaled(c.long_per_length);
  if (long_quota > 0) {
    AugmentOptions opts;
    opts.min_len = kLongBand.min;
    opts.max_len = kLongBand.max;
    opts.sample = long_quota;
    opts.seed = derive_seed(c.seed, g.id + "/long_templates");
    d.long_templates = augment_long(d.templates, g, opts);
    std::sort(d.long_templates.begin(), d.long_templates.end(),
              [](const Template& a, const Template& b) { return template_less(a, b); });
  }

  // Splits share one dedup set so no sentence appears twice across them.
  std::unordered_set<std::string> seen;
  Rng train_rng = stream(c, g, "short_train");
  d.short_train = sample_split(g, d.templates, lex, c.scaled(c.train_per_length), kShortBand, Split::ShortTrain,
                               train_rng, seen);
  // Test material only uses words seen in training.
  const Lexicon test_lex = d.short_train.empty() ? lex : lex.restricted_to(vocabulary(d.short_train));

  Rng test_rng = stream(c, g, "short_test");
  d.short_test = sample_split(g, d.templates, test_lex, c.scaled(c.test_per_length), kShortBand, Split::ShortTest,
                              test_rng, seen);
  Rng medium_rng = stream(c, g, "medium_test");
  d.medium_test = sample_split(g, d.templates, test_lex, c.scaled(c.test_per_length), kMediumBand,
                               Split::MediumTest, medium_rng, seen);

  // One sentence per Long template when every length met its quota.
  Rng long_rng = stream(c, g, "long_test");
  std::map<std::size_t, std::size_t> per_length;
  for (const auto& t : d.long_templates) ++per_length[t.size()];
  bool exact = long_quota > 0;
  for (std::size_t n = kLongBand.min; n <= kLongBand.max; ++n) exact &= per_length[n] == long_quota;
  if (exact) {
    for (const auto& t : d.long_templates) {
      Sentence s;
      do s = instantiate(t, test_lex, long_rng);
      while (!seen.insert(s.text()).second);
      s.grammar_id = g.id;
      s.split = Split::LongTest;
      d.long_test.push_back(std::move(s));
    }
  } else if (long_quota > 0) {
    d.long_test = sample_split(g, d.long_templates, test_lex, long_quota, kLongBand, Split::LongTest, long_rng, seen);
  }

  const std::size_t targeted = c.scaled(c.targeted);
  if (targeted > 0) {
    Rng rec_rng = stream(c, g, "recursive");
    d.recursive = gen_targeted(g, TargetedKind::Recursive, test_lex, targeted, rec_rng);
    Rng emb_rng = stream(c, g, "embedded");
    d.embedded = gen_targeted(g, TargetedKind::Embedded, test_lex, targeted, emb_rng);
  }
  const std::size_t pairs = c.scaled(c.pairs);
  if (pairs > 0) {
    Rng case_rng = stream(c, g, "pairs_case");
    d.case_pairs = gen_minimal_pairs(g, PairKind::CaseType, d.medium_test, test_lex, pairs, case_rng);
    Rng verb_rng = stream(c, g, "pairs_verb");
    d.verb_pairs = gen_minimal_pairs(g, PairKind::VerbType, d.medium_test, test_lex, pairs, verb_rng);
  }
  return d;
}

void write_dataset(const fs::path& dir, const Grammar& g, const Dataset& d) {
  fs::create_directories(dir);
  open_out(dir / "grammar.gcg") << to_gcg_text(g);
  {
    auto out = open_out(dir / "templates.txt");
    write_templates(out, d.templates);
  }
  {
    auto out = open_out(dir / "long_templates.txt");
    write_templates(out, d.long_templates);
  }
  write_split(dir / "short_train.jsonl", d.short_train);
  write_split(dir / "short_test.jsonl", d.short_test);
  write_split(dir / "medium_test.jsonl", d.medium_test);
  write_split(dir / "long_test.jsonl", d.long_test);
  write_split(dir / "recursive.jsonl", d.recursive);
  write_split(dir / "embedded.jsonl", d.embedded);
  write_split(dir / "pairs_case.jsonl", flatten_pairs(d.case_pairs));
  write_split(dir / "pairs_verb.jsonl", flatten_pairs(d.verb_pairs));
}

PipelineReport run_pipeline(const std::vector<std::string>& grammar_ids, const PipelineConfig& config,
                            const fs::path& out_dir) {
  std::vector<const Grammar*> grammars;
  for (const auto& id : grammar_ids) grammars.push_back(&find_grammar(id));
  std::sort(grammars.begin(), grammars.end(), [](const Grammar* a, const Grammar* b) { return a->id < b->id; });
  grammars.erase(std::unique(grammars.begin(), grammars.end()), grammars.end());
  if (grammars.empty()) throw std::invalid_argument("no grammars selected");

  const Lexicon lex = load_lexicon(config.lexicon_path);
  const TypologyTable typology = load_typology(config.typology_path);
  fs::create_directories(out_dir);

  PipelineReport report;
  report.typology_hash = typology.provenance_hash();
  report.grammars.resize(grammars.size());

  parallel_for(grammars.size(), config.threads, [&](std::size_t i) {
    const Grammar& g = *grammars[i];
    const fs::path dir = out_dir / g.id;
    fs::create_directories(dir / "scores");
    const Dataset d = build_dataset(g, lex, config);

    write_dataset(dir, g, d);
    const std::vector<Sentence> case_flat = flatten_pairs(d.case_pairs), verb_flat = flatten_pairs(d.verb_pairs);
    const std::map<std::string_view, const std::vector<Sentence>*> splits = {
        {"short_test", &d.short_test}, {"medium_test", &d.medium_test}, {"long_test", &d.long_test},
        {"recursive", &d.recursive},   {"embedded", &d.embedded}};

    GrammarReport& r = report.grammars[i];
    r.grammar_id = g.id;
    r.base_order = g.base_order;
    r.plausibility = plausibility(g, typology);
    if (d.short_train.empty()) return;

    const NgramModel model = ngram_train(d.short_train, config.ngram_order, config.ngram_k);
    auto score = [&](std::string_view name, std::span<const Sentence> s) {
      auto records = ngram_score(model, s);
      auto out = open_out(dir / "scores" / (std::string(name) + ".jsonl"));
      write_scores(out, records);
      return records;
    };
    for (std::string_view name : kScoredSplits) {
      const auto& s = *splits.at(name);
      if (s.empty()) continue;
      r.ppl.emplace_back(std::string(name), perplexity(score(name, s), config.ppl_mode));
    }
    auto judge = [&](std::string_view name, const std::vector<Sentence>& flat) {
      if (flat.empty()) return 0.0;
      const auto records = score(name, flat);
      std::vector<std::pair<ScoreRecord, ScoreRecord>> pairs;
      for (std::size_t k = 0; k + 1 < records.size(); k += 2) pairs.emplace_back(records[k], records[k + 1]);
      return judge_pairs(pairs);
    };
    r.case_accuracy = judge("pairs_case", case_flat);
    r.verb_accuracy = judge("pairs_verb", verb_flat);
  });

  for (std::string_view split : kScoredSplits) {
    std::vector<double> ppl, plaus;
    for (const auto& g : report.grammars)
      for (const auto& [name, v] : g.ppl)
        if (name == split) {
          ppl.push_back(v);
          plaus.push_back(g.plausibility);
        }
    std::optional<Correlation> corr;
    if (ppl.size() >= 3) {
      try {
        corr = pearson(ppl, plaus);
      } catch (const std::invalid_argument&) {
        // Constant vectors: no correlation to report.
      }
    }
    report.correlations.emplace_back(std::string(split), corr);
  }

  {
    auto out = open_out(out_dir / "report.csv");
    out << "grammar_id,base_order,split,ppl,plausibility\n";
    for (const auto& g : report.grammars)
      for (const auto& [name, v] : g.ppl)
        out << g.grammar_id << ',' << to_string(g.base_order) << ',' << name << ',' << fmt(v) << ','
            << fmt(g.plausibility) << '\n';
    out << "\nsplit,r,p_value,n,significant,typology_hash\n";
    for (const auto& [split, corr] : report.correlations) {
      out << split << ',';
      if (corr)
        out << fmt(corr->r) << ',' << fmt(corr->p_value) << ',' << corr->n << ',' << (corr->significant() ? 1 : 0);
      else
        out << "NA,NA," << report.grammars.size() << ",NA";
      out << ',' << report.typology_hash << '\n';
    }
  }
  {
    auto out = open_out(out_dir / "judge.csv");
    out << "grammar_id,kind,accuracy\n";
    for (const auto& g : report.grammars) {
      out << g.grammar_id << ",case," << fmt(g.case_accuracy) << '\n';
      out << g.grammar_id << ",verb," << fmt(g.verb_accuracy) << '\n';
    }
  }
  return report;
}

}  // namespace alforge
