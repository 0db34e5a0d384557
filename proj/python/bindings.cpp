#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "alforge/chart_parser.hpp"
#include "alforge/corpus.hpp"
#include "alforge/eval.hpp"
#include "alforge/grammar.hpp"
#include "alforge/pipeline.hpp"
#include "alforge/templates.hpp"

namespace py = pybind11;
using namespace alforge;

namespace {

using Names = std::vector<std::string>;

Template to_template(const Names& names) {
  std::string text;
  for (const auto& n : names) text += n + " ";
  return parse_template(text);
}

Names to_names(std::span<const LexClass> t) {
  Names out;
  for (LexClass c : t) out.emplace_back(to_string(c));
  return out;
}

std::vector<Names> to_names(const std::vector<Template>& ts) {
  std::vector<Names> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(to_names(t));
  return out;
}

std::vector<Template> to_templates(const std::vector<Names>& ts) {
  std::vector<Template> out;
  for (const auto& t : ts) out.push_back(to_template(t));
  return out;
}

PplMode ppl_mode(const std::string& s) {
  if (s == "corpus") return PplMode::Corpus;
  if (s == "sentence-mean") return PplMode::SentenceMean;
  throw std::invalid_argument("unknown perplexity mode '" + s + "'");
}

TypologyTable typology(const std::optional<std::string>& json) {
  return json ? TypologyTable::from_json(*json) : TypologyTable::bundled();
}

std::vector<ScoreRecord> records(const std::vector<std::vector<double>>& logprobs) {
  std::vector<ScoreRecord> out;
  for (const auto& lp : logprobs) {
    ScoreRecord r;
    r.tokens.assign(lp.empty() ? 0 : lp.size() - 1, "");
    r.logprobs = lp;
    out.push_back(std::move(r));
  }
  return out;
}

py::dict as_dict(const Correlation& c) {
  py::dict d;
  d["r"] = c.r;
  d["p_value"] = c.p_value;
  d["n"] = c.n;
  d["significant"] = c.significant();
  return d;
}

}  // namespace

PYBIND11_MODULE(_alforge, m) {
  m.doc() = "Artificial languages from generalized categorial grammars: parsing, templates, corpora, metrics.";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const std::invalid_argument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<Grammar>(m, "Grammar")
      .def_readonly("id", &Grammar::id)
      .def_readonly("aliases", &Grammar::aliases)
      .def_property_readonly("base_order", [](const Grammar& g) { return std::string(to_string(g.base_order)); })
      .def("category",
           [](const Grammar& g, const std::string& cls) {
             return to_string(g.category(to_template({cls}).front()));
           })
      .def("parses", [](const Grammar& g, const Names& classes) { return g.parses(to_template(classes)); })
      .def("gcg_text", [](const Grammar& g) { return to_gcg_text(g); })
      .def("__repr__", [](const Grammar& g) { return "<Grammar " + g.id + " " + std::string(to_string(g.base_order)) + ">"; });

  m.def("grammars", []() { return all_grammars(); }, "The 96 distinct grammars, sorted by id.");
  m.def("grammar", [](const std::string& id) { return find_grammar(id); }, py::arg("params"),
        "Grammar for a canonical id or any alias.");

  m.def("permute", [](const std::string& cat) { return to_string(permute_cyclic(parse_category(cat))); },
        "Cyclic permutation of a category given in text form.");
  m.def(
      "derives",
      [](const std::vector<std::string>& cats, const std::string& root, bool permute) {
        std::vector<Category> seq;
        for (const auto& c : cats) seq.push_back(parse_category(c));
        ParserPolicy p;
        p.permutation = permute ? ParserPolicy::Permutation::Always : ParserPolicy::Permutation::Never;
        return derives(seq, p, parse_category(root));
      },
      py::arg("categories"), py::arg("root") = "S", py::arg("permute") = true);

  m.def("heuristic_filter", [](const Names& t) { return heuristic_filter(to_template(t)); });
  m.def(
      "enumerate_templates",
      [](const std::string& params, std::size_t max_len, std::size_t min_len) {
        const auto& g = find_grammar(params);
        py::gil_scoped_release unlocked;
        return to_names(enumerate_templates(g, max_len, min_len));
      },
      py::arg("params"), py::arg("max_len") = 10, py::arg("min_len") = 3);
  m.def(
      "augment_long",
      [](const std::vector<Names>& sources, const std::string& params, std::size_t min_len, std::size_t max_len,
         std::optional<std::size_t> sample, std::uint64_t seed) {
        AugmentOptions o;
        o.min_len = min_len;
        o.max_len = max_len;
        o.sample = sample;
        o.seed = seed;
        auto src = to_templates(sources);
        const auto& g = find_grammar(params);
        py::gil_scoped_release unlocked;
        return to_names(augment_long(src, g, o));
      },
      py::arg("sources"), py::arg("params"), py::arg("min_len") = 11, py::arg("max_len") = 20,
      py::arg("sample") = std::nullopt, py::arg("seed") = 0);

  m.def("perplexity",
        [](const std::vector<std::vector<double>>& logprobs, const std::string& mode) {
          return perplexity(records(logprobs), ppl_mode(mode));
        },
        py::arg("logprobs"), py::arg("mode") = "corpus",
        "Each entry holds one sentence's log-probabilities, end token included.");
  m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return as_dict(pearson(x, y)); });
  m.def(
      "plausibility",
      [](const std::string& params, const std::optional<std::string>& table) {
        return plausibility(find_grammar(params), typology(table));
      },
      py::arg("params"), py::arg("typology_json") = std::nullopt);
  m.def(
      "ta_score",
      [](const std::map<std::string, double>& ppl, const std::optional<std::string>& table) {
        return as_dict(ta_score(ppl, typology(table)));
      },
      py::arg("ppl_by_grammar"), py::arg("typology_json") = std::nullopt);
  m.def("judge_pairs", [](const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs) {
    std::vector<std::pair<ScoreRecord, ScoreRecord>> rs;
    for (const auto& [a, b] : pairs) rs.emplace_back(records({a}).front(), records({b}).front());
    return judge_pairs(rs);
  });

  py::class_<NgramModel>(m, "NgramModel")
      .def(py::init([](const std::vector<std::vector<std::string>>& sentences, std::size_t order, double k) {
             return NgramModel(sentences, order, k);
           }),
           py::arg("sentences"), py::arg("order") = 3, py::arg("k") = 0.1)
      .def_property_readonly("order", &NgramModel::order)
      .def_property_readonly("vocabulary", &NgramModel::vocabulary)
      .def("prob", [](const NgramModel& n, const std::vector<std::string>& history,
                      const std::string& word) { return n.prob(history, word); })
      .def("score", [](const NgramModel& n, const std::vector<std::string>& tokens) { return n.score(tokens).logprobs; });

  m.def(
      "run_pipeline",
      [](const std::vector<std::string>& ids, const std::filesystem::path& out_dir, std::uint64_t seed, double scale,
         unsigned threads) {
        PipelineConfig c;
        c.seed = seed;
        c.scale = scale;
        c.threads = threads;
        PipelineReport r;
        {
          py::gil_scoped_release unlocked;
          r = run_pipeline(ids, c, out_dir);
        }
        py::list grammars;
        for (const auto& g : r.grammars) {
          py::dict d;
          d["grammar_id"] = g.grammar_id;
          d["base_order"] = std::string(to_string(g.base_order));
          d["plausibility"] = g.plausibility;
          d["ppl"] = std::map<std::string, double>(g.ppl.begin(), g.ppl.end());
          d["case_accuracy"] = g.case_accuracy;
          d["verb_accuracy"] = g.verb_accuracy;
          grammars.append(d);
        }
        py::dict out;
        out["grammars"] = grammars;
        out["typology_hash"] = r.typology_hash;
        return out;
      },
      py::arg("grammar_ids"), py::arg("out_dir"), py::arg("seed") = 0, py::arg("scale") = 1.0,
      py::arg("threads") = 1);
}
