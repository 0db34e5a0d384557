// alforge: command-line front end for grammar generation, template
// enumeration, corpus building and evaluation.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "alforge/chart_parser.hpp"
#include "alforge/corpus.hpp"
#include "alforge/eval.hpp"
#include "alforge/grammar.hpp"
#include "alforge/pipeline.hpp"
#include "alforge/templates.hpp"

using namespace alforge;

namespace {

// Writes to the file or, for an empty path or "-", to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::vector<Sentence> load_sentences(const std::string& path) {
  auto in = open_in(path);
  return read_sentences(in);
}

std::vector<ScoreRecord> load_scores(const std::string& path) {
  auto in = open_in(path);
  return read_scores(in);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<std::string> expand_ids(const std::vector<std::string>& raw) {
  std::vector<std::string> ids;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string id;
    while (std::getline(ss, id, ',')) {
      if (id == "all") {
        for (const auto& g : all_grammars()) ids.push_back(g.id);
      } else if (!id.empty()) {
        ids.push_back(id);
      }
    }
  }
  return ids;
}

std::string render(const Derivation& d) {
  if (!d.rule) return to_string(d.category);
  std::string out = "(" + to_string(*d.rule) + " " + to_string(d.category);
  for (const auto& c : d.children) out += " " + render(c);
  return out + ")";
}

// A flat key=value file becomes "--key=value" arguments placed right after the
// subcommand name, so flags given on the command line (which come later) win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    std::size_t width = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      width = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      width = 1;
    } else {
      continue;
    }
    auto in = open_in(path);
    std::vector<std::string> injected;
    std::string line;
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#' || line[first] == ';') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw std::runtime_error("config line without '=': " + line);
      auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
      };
      injected.push_back("--" + trim(line.substr(0, eq)) + "=" + trim(line.substr(eq + 1)));
    }
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + width));
    // Insert right after the subcommand (args[0] is the program, args[1] the subcommand).
    const std::size_t at = std::min<std::size_t>(2, args.size());
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), injected.begin(), injected.end());
    break;
  }
  return args;
}

void add_counts(CLI::App* sub, PipelineConfig& c) {
  sub->add_option("--seed", c.seed, "Master seed");
  sub->add_option("--scale", c.scale, "Multiplier for every count")->check(CLI::NonNegativeNumber);
  sub->add_option("--train-per-length", c.train_per_length, "Short training sentences per length");
  sub->add_option("--test-per-length", c.test_per_length, "Short/Medium test sentences per length");
  sub->add_option("--long-per-length", c.long_per_length, "Long templates (one sentence each) per length");
  sub->add_option("--targeted", c.targeted, "Sentences per targeted construction");
  sub->add_option("--pairs", c.pairs, "Minimal pairs per kind");
  sub->add_option("--max-len", c.max_template_length, "Longest enumerated template")->check(CLI::Range(3, 16));
  sub->add_option("--lexicon", c.lexicon_path, "Lexicon JSON (default: bundled)")->check(CLI::ExistingFile);
  sub->add_option("--threads", c.threads, "Worker threads (GCG_ALFORGE_THREADS overrides)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameterized categorial-grammar languages: generation, parsing, corpora and evaluation", "alforge"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::string params, out, in, kind = "recursive";
  std::vector<std::string> score_files;
  std::size_t max_len = 10, min_len = 3, lo = 11, hi = 20, n = 500, order = 3;
  std::size_t sample = 0;
  std::uint64_t seed = 0;
  double k = 0.1;
  std::string train_path, source_path, model = "ngram", typology_path, ppl_mode = "corpus";
  bool allow_subset = false, derivations = false, words = false;
  PipelineConfig config;

  auto config_flag = [](CLI::App* sub) {
    sub->add_option("--config", "Flat key=value file; command-line flags override it");
  };

  auto* list = app.add_subcommand("list-grammars", "One line per distinct grammar: id, base order, aliases");
  list->add_option("-o,--out", out, "Output file (default stdout)");

  auto* gen_grammar = app.add_subcommand("gen-grammar", "Write a grammar's lexicon file");
  gen_grammar->add_option("--params", params, "7-bit parameter vector")->required();
  gen_grammar->add_option("-o,--out", out, "Output file (default stdout)");

  auto* enum_t = app.add_subcommand("enum-templates", "Enumerate grammatical templates");
  enum_t->add_option("--params", params, "7-bit parameter vector")->required();
  enum_t->add_option("--max-len", max_len, "Longest template")->check(CLI::Range(3, 16));
  enum_t->add_option("--min-len", min_len, "Shortest template");
  enum_t->add_option("-o,--out", out, "Output file (default stdout)");

  auto* augment = app.add_subcommand("augment-long", "Build Long templates from shorter ones");
  augment->add_option("--params", params, "7-bit parameter vector")->required();
  augment->add_option("--in", in, "Template file")->required()->check(CLI::ExistingFile);
  augment->add_option("--min", lo, "Shortest Long template");
  augment->add_option("--max", hi, "Longest Long template");
  augment->add_option("--sample", sample, "Draw this many templates per length instead of exhaustive search");
  augment->add_option("--seed", seed, "Seed for --sample");
  augment->add_option("-o,--out", out, "Output file (default stdout)");

  auto* dataset = app.add_subcommand("gen-dataset", "Write every split for one grammar");
  dataset->add_option("--params", params, "7-bit parameter vector")->required();
  dataset->add_option("--out-dir", out, "Output directory")->required();
  add_counts(dataset, config);
  config_flag(dataset);

  auto* targeted = app.add_subcommand("gen-targeted", "Recursive or embedded relative-clause test sentences");
  targeted->add_option("--params", params, "7-bit parameter vector")->required();
  targeted->add_option("--kind", kind, "recursive | embedded")->check(CLI::IsMember({"recursive", "embedded"}));
  targeted->add_option("--n", n, "Number of sentences");
  targeted->add_option("--train", train_path, "Restrict words to this training split")->check(CLI::ExistingFile);
  targeted->add_option("--lexicon", config.lexicon_path, "Lexicon JSON")->check(CLI::ExistingFile);
  targeted->add_option("--seed", seed, "Seed");
  targeted->add_option("-o,--out", out, "Output file (default stdout)");

  auto* pairs = app.add_subcommand("gen-pairs", "Case-type or verb-type minimal pairs");
  pairs->add_option("--params", params, "7-bit parameter vector")->required();
  pairs->add_option("--kind", kind, "case | verb")->check(CLI::IsMember({"case", "verb"}));
  pairs->add_option("--source", source_path, "Sentences to perturb (Medium split)")->required()->check(
      CLI::ExistingFile);
  pairs->add_option("--train", train_path, "Restrict replacement words to this training split")
      ->check(CLI::ExistingFile);
  pairs->add_option("--lexicon", config.lexicon_path, "Lexicon JSON")->check(CLI::ExistingFile);
  pairs->add_option("--n", n, "Number of pairs");
  pairs->add_option("--seed", seed, "Seed");
  pairs->add_option("-o,--out", out, "Output file (default stdout)");

  auto* score = app.add_subcommand("score", "Train the n-gram baseline and score sentences");
  score->add_option("--model", model, "Scorer")->check(CLI::IsMember({"ngram"}));
  score->add_option("--order", order, "N-gram order")->check(CLI::PositiveNumber);
  score->add_option("--k", k, "Add-k constant")->check(CLI::PositiveNumber);
  score->add_option("--train", train_path, "Training split")->required()->check(CLI::ExistingFile);
  score->add_option("--in", in, "Sentences to score")->required()->check(CLI::ExistingFile);
  score->add_option("--ppl-mode", ppl_mode, "corpus | sentence-mean")->check(
      CLI::IsMember({"corpus", "sentence-mean"}));
  score->add_option("-o,--out", out, "Score file (default stdout)");

  auto* ta = app.add_subcommand("ta-corr", "Correlate per-grammar PPL with typological plausibility");
  ta->add_option("--scores", score_files, "Score files")
      ->required()
      ->check(CLI::ExistingFile)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  ta->add_option("--typology", typology_path, "Typology JSON (default: bundled)")->check(CLI::ExistingFile);
  ta->add_option("--ppl-mode", ppl_mode, "corpus | sentence-mean")->check(
      CLI::IsMember({"corpus", "sentence-mean"}));
  ta->add_flag("--allow-subset", allow_subset, "Correlate over the grammars present instead of requiring all 96");

  auto* judge = app.add_subcommand("judge", "Minimal-pair accuracy from a score file of consecutive pairs");
  judge->add_option("--scores", in, "Score file: grammatical then ungrammatical member per pair")
      ->required()
      ->check(CLI::ExistingFile);

  auto* parse_cmd = app.add_subcommand("parse", "Parse class sequences (or sentences with --words), one per line");
  parse_cmd->add_option("--params", params, "7-bit parameter vector")->required();
  parse_cmd->add_option("--in", in, "Input file (default stdin)");
  parse_cmd->add_flag("--words", words, "Input lines are words, mapped to classes through the lexicon");
  parse_cmd->add_option("--lexicon", config.lexicon_path, "Lexicon JSON")->check(CLI::ExistingFile);
  parse_cmd->add_flag("--derivations", derivations, "Print derivations of grammatical inputs");

  auto* pipeline = app.add_subcommand("pipeline", "Datasets, baseline scores and reports for a set of grammars");
  pipeline->add_option("--params", params, "Grammar ids, comma separated; 'all' for every grammar")->required();
  pipeline->add_option("--out-dir", out, "Output directory")->required();
  add_counts(pipeline, config);
  pipeline->add_option("--order", config.ngram_order, "N-gram order")->check(CLI::PositiveNumber);
  pipeline->add_option("--k", config.ngram_k, "Add-k constant")->check(CLI::PositiveNumber);
  pipeline->add_option("--typology", config.typology_path, "Typology JSON")->check(CLI::ExistingFile);
  pipeline->add_option("--ppl-mode", ppl_mode, "corpus | sentence-mean")->check(
      CLI::IsMember({"corpus", "sentence-mean"}));
  config_flag(pipeline);

  auto* dump = app.add_subcommand("dump-lexicon", "Write the bundled lexicon as JSON");
  dump->add_option("-o,--out", out, "Output file (default stdout)");

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = expand_config(std::move(args));
    std::vector<const char*> cargs;
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "alforge: error: " << e.what() << '\n';
    return 2;
  }

  try {
    const PplMode mode = ppl_mode == "corpus" ? PplMode::Corpus : PplMode::SentenceMean;
    config.ppl_mode = mode;
    config.threads = thread_count(config.threads);

    if (*list) {
      Output o(out);
      for (const auto& g : all_grammars()) {
        o.stream() << g.id << '\t' << to_string(g.base_order) << '\t';
        for (std::size_t i = 0; i < g.aliases.size(); ++i) o.stream() << (i ? "," : "") << g.aliases[i];
        o.stream() << '\n';
      }
    } else if (*gen_grammar) {
      Output o(out);
      o.stream() << to_gcg_text(find_grammar(params));
    } else if (*enum_t) {
      Output o(out);
      write_templates(o.stream(), enumerate_templates(find_grammar(params), max_len, min_len));
    } else if (*augment) {
      auto file = open_in(in);
      const auto sources = read_templates(file);
      AugmentOptions opts;
      opts.min_len = lo;
      opts.max_len = hi;
      if (sample > 0) opts.sample = sample;
      opts.seed = seed;
      Output o(out);
      write_templates(o.stream(), augment_long(sources, find_grammar(params), opts));
    } else if (*dataset) {
      const Grammar& g = find_grammar(params);
      write_dataset(out, g, build_dataset(g, load_lexicon(config.lexicon_path), config));
    } else if (*targeted) {
      const Grammar& g = find_grammar(params);
      Lexicon lex = load_lexicon(config.lexicon_path);
      if (!train_path.empty()) lex = lex.restricted_to(vocabulary(load_sentences(train_path)));
      Rng rng(derive_seed(seed, g.id + "/" + kind));
      const auto k_ = kind == "recursive" ? TargetedKind::Recursive : TargetedKind::Embedded;
      Output o(out);
      write_sentences(o.stream(), gen_targeted(g, k_, lex, n, rng));
    } else if (*pairs) {
      const Grammar& g = find_grammar(params);
      Lexicon lex = load_lexicon(config.lexicon_path);
      if (!train_path.empty()) lex = lex.restricted_to(vocabulary(load_sentences(train_path)));
      Rng rng(derive_seed(seed, g.id + "/pairs_" + kind));
      const auto k_ = kind == "case" ? PairKind::CaseType : PairKind::VerbType;
      Output o(out);
      write_sentences(o.stream(), flatten_pairs(gen_minimal_pairs(g, k_, load_sentences(source_path), lex, n, rng)));
    } else if (*score) {
      const NgramModel m = ngram_train(load_sentences(train_path), order, k);
      const auto records = ngram_score(m, load_sentences(in));
      {
        Output o(out);
        write_scores(o.stream(), records);
      }
      (out.empty() || out == "-" ? std::cerr : std::cout) << "ppl\t" << fmt(perplexity(records, mode)) << '\n';
    } else if (*ta) {
      std::map<std::string, std::vector<ScoreRecord>> by_grammar;
      for (const auto& path : score_files)
        for (auto& r : load_scores(path)) by_grammar[r.grammar_id].push_back(std::move(r));
      std::map<std::string, double> ppl;
      for (const auto& [id, records] : by_grammar) ppl[find_grammar(id).id] = perplexity(records, mode);
      const TypologyTable table = load_typology(typology_path);
      Correlation c;
      if (allow_subset) {
        std::vector<Grammar> present;
        for (const auto& [id, v] : ppl) present.push_back(find_grammar(id));
        c = ta_score(ppl, table, present);
      } else {
        c = ta_score(ppl, table);
      }
      std::cout << "r\t" << fmt(c.r) << "\nr_x100\t" << fmt(100.0 * c.r) << "\np_value\t" << fmt(c.p_value)
                << "\nn\t" << c.n << "\nsignificant\t" << (c.significant() ? "yes" : "no") << "\ntypology_hash\t"
                << table.provenance_hash() << '\n';
    } else if (*judge) {
      const auto records = load_scores(in);
      if (records.size() % 2) throw std::runtime_error("pair score file has an odd number of records");
      std::vector<std::pair<ScoreRecord, ScoreRecord>> p;
      for (std::size_t i = 0; i < records.size(); i += 2) p.emplace_back(records[i], records[i + 1]);
      std::cout << "accuracy\t" << fmt(judge_pairs(p)) << "\npairs\t" << p.size() << '\n';
    } else if (*parse_cmd) {
      const Grammar& g = find_grammar(params);
      const Lexicon lex = load_lexicon(config.lexicon_path);
      std::ifstream file;
      if (!in.empty()) file = open_in(in);
      std::istream& src = in.empty() ? std::cin : file;
      std::string line;
      while (std::getline(src, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Template t;
        if (words) {
          std::istringstream ws(line);
          std::string w;
          while (ws >> w) {
            auto c = lex.class_of(w);
            if (!c) throw std::runtime_error("word not in lexicon: " + w);
            t.push_back(*c);
          }
        } else {
          t = parse_template(line);
        }
        ParseOptions po;
        po.derivations = derivations;
        const auto cats = g.categories(t);
        const auto result = parse(cats, g.policy, po);
        std::cout << (result.grammatical ? "1" : "0") << '\t' << to_string(t) << '\n';
        for (const auto& d : result.derivations) std::cout << "  " << render(d) << '\n';
      }
    } else if (*pipeline) {
      const auto report = run_pipeline(expand_ids({params}), config, out);
      for (const auto& g : report.grammars) {
        std::cout << g.grammar_id << '\t' << to_string(g.base_order);
        for (const auto& [split, v] : g.ppl) std::cout << '\t' << split << '=' << fmt(v);
        std::cout << "\tcase_acc=" << fmt(g.case_accuracy) << "\tverb_acc=" << fmt(g.verb_accuracy) << '\n';
      }
    } else if (*dump) {
      Output o(out);
      o.stream() << default_lexicon().to_json();
    }
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "alforge: error: " << msg << '\n';
    return 1;
  }
  return 0;
}
