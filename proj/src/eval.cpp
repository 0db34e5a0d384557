#include "alforge/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

namespace alforge {

using nlohmann::json;
using nlohmann::ordered_json;

double ScoreRecord::total() const { return std::accumulate(logprobs.begin(), logprobs.end(), 0.0); }

void ScoreRecord::validate() const {
  if (logprobs.size() != tokens.size() + 1)
    throw std::invalid_argument("score record has " + std::to_string(logprobs.size()) + " log-probabilities for " +
                                std::to_string(tokens.size()) + " tokens (expected one more for the end token)");
  for (double lp : logprobs)
    if (!(lp <= 0.0)) throw std::invalid_argument("log-probability must be <= 0");
}

double perplexity(std::span<const ScoreRecord> records, PplMode mode) {
  if (records.empty()) throw std::invalid_argument("perplexity of an empty record set");
  double mass = 0.0, tokens = 0.0, sum_ppl = 0.0;
  for (const auto& r : records) {
    r.validate();
    const double t = r.total();
    mass += t;
    tokens += static_cast<double>(r.logprobs.size());
    sum_ppl += std::exp(-t / static_cast<double>(r.logprobs.size()));
  }
  if (mode == PplMode::SentenceMean) return sum_ppl / static_cast<double>(records.size());
  return std::exp(-mass / tokens);
}

// ---------------------------------------------------------------------------
// Typology

namespace {

constexpr std::array<Param, 4> kScoredParams = {Param::COMP, Param::PP, Param::ADJ, Param::REL};

std::string_view param_name(Param p) {
  switch (p) {
    case Param::S: return "S";
    case Param::VP: return "VP";
    case Param::O: return "O";
    case Param::COMP: return "COMP";
    case Param::PP: return "PP";
    case Param::ADJ: return "ADJ";
    case Param::REL: return "REL";
  }
  return "?";
}

std::optional<Param> scored_param_from_string(std::string_view s) {
  for (Param p : kScoredParams)
    if (param_name(p) == s) return p;
  return std::nullopt;
}

}  // namespace

TypologyTable TypologyTable::bundled() {
  TypologyTable t;
  t.base_order_freq = {{BaseOrder::SOV, 0.54}, {BaseOrder::OSV, 0.04}, {BaseOrder::SVO, 0.23},
                       {BaseOrder::OVS, 0.01}, {BaseOrder::VSO, 0.12}, {BaseOrder::VOS, 0.05}};
  return t;
}

TypologyTable TypologyTable::from_json(std::string_view text) {
  const json doc = json::parse(text);
  TypologyTable t;
  for (const auto& [key, value] : doc.at("base_order").items()) {
    auto b = base_order_from_string(key);
    if (!b) throw std::invalid_argument("unknown base order '" + key + "'");
    t.base_order_freq[*b] = value.get<double>();
  }
  if (doc.contains("params")) {
    for (const auto& [key, value] : doc.at("params").items()) {
      auto p = scored_param_from_string(key);
      if (!p) throw std::invalid_argument("unknown typology parameter '" + key + "'");
      auto pair = value.get<std::vector<double>>();
      if (pair.size() != 2) throw std::invalid_argument("parameter '" + key + "' needs [p0, p1]");
      t.param_freq[*p] = {pair[0], pair[1]};
    }
  }
  t.validate();
  return t;
}

std::string TypologyTable::to_json() const {
  ordered_json doc;
  ordered_json orders = ordered_json::object();
  for (BaseOrder b : kAllBaseOrders)
    if (auto it = base_order_freq.find(b); it != base_order_freq.end()) orders[std::string(to_string(b))] = it->second;
  doc["base_order"] = orders;
  ordered_json params = ordered_json::object();
  for (Param p : kScoredParams)
    if (auto it = param_freq.find(p); it != param_freq.end())
      params[std::string(param_name(p))] = {it->second.first, it->second.second};
  doc["params"] = params;
  return doc.dump(2) + "\n";
}

std::string TypologyTable::provenance_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : to_json()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void TypologyTable::validate() const {
  double sum = 0.0;
  for (BaseOrder b : kAllBaseOrders) {
    auto it = base_order_freq.find(b);
    if (it == base_order_freq.end())
      throw std::invalid_argument("typology table lacks base order " + std::string(to_string(b)));
    if (it->second < 0.0) throw std::invalid_argument("negative frequency");
    sum += it->second;
  }
  if (std::abs(sum - 1.0) > 0.03) throw std::invalid_argument("base-order frequencies do not sum to 1");
  if (param_freq.empty()) return;
  for (Param p : kScoredParams) {
    auto it = param_freq.find(p);
    if (it == param_freq.end())
      throw std::invalid_argument("typology table lacks parameter " + std::string(param_name(p)));
    const auto [p0, p1] = it->second;
    if (p0 < 0.0 || p1 < 0.0 || std::abs(p0 + p1 - 1.0) > 1e-9)
      throw std::invalid_argument("parameter " + std::string(param_name(p)) + " frequencies do not sum to 1");
  }
}

double plausibility(const Grammar& g, const TypologyTable& t) {
  t.validate();
  double p = t.base_order_freq.at(g.base_order);
  if (t.param_freq.empty()) return p;
  for (Param param : kScoredParams) {
    const auto& [p0, p1] = t.param_freq.at(param);
    p *= g.params[param] ? p1 : p0;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Statistics

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: vectors differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw std::invalid_argument("pearson: need at least 3 points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("pearson: degenerate input (zero variance)");
  Correlation c;
  c.n = n;
  c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(n - 2);
  if (std::abs(c.r) >= 1.0) {
    c.p_value = 0.0;
  } else {
    const double t = c.r * std::sqrt(df / (1.0 - c.r * c.r));
    boost::math::students_t dist(df);
    c.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  }
  return c;
}

Correlation ta_score(const std::map<std::string, double>& ppl_by_grammar, const TypologyTable& t) {
  return ta_score(ppl_by_grammar, t, all_grammars());
}

Correlation ta_score(const std::map<std::string, double>& ppl_by_grammar, const TypologyTable& t,
                     std::span<const Grammar> grammars) {
  std::vector<double> ppl, plaus;
  std::string missing;
  for (const auto& g : grammars) {
    auto it = ppl_by_grammar.find(g.id);
    if (it == ppl_by_grammar.end()) {
      // Accept any alias of the canonical id.
      for (const auto& alias : g.aliases)
        if ((it = ppl_by_grammar.find(alias)) != ppl_by_grammar.end()) break;
    }
    if (it == ppl_by_grammar.end()) {
      missing += (missing.empty() ? "" : " ") + g.id;
      continue;
    }
    ppl.push_back(it->second);
    plaus.push_back(plausibility(g, t));
  }
  if (!missing.empty()) throw std::invalid_argument("missing perplexities for grammars: " + missing);
  return pearson(ppl, plaus);
}

double judge_pairs(std::span<const std::pair<ScoreRecord, ScoreRecord>> pairs) {
  if (pairs.empty()) throw std::invalid_argument("judge_pairs: no pairs");
  std::size_t correct = 0;
  for (const auto& [good, bad] : pairs) {
    good.validate();
    bad.validate();
    if (good.tokens.size() != bad.tokens.size())
      throw std::invalid_argument("judge_pairs: pair members differ in length");
    if (good.total() > bad.total()) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

// ---------------------------------------------------------------------------
// N-gram baseline

namespace {

constexpr std::uint32_t kBegin = 0xffffffffu;

std::string pack(std::span<const std::uint32_t> ids) {
  std::string key(ids.size() * 4, '\0');
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t b = 0; b < 4; ++b) key[i * 4 + b] = static_cast<char>((ids[i] >> (8 * b)) & 0xff);
  return key;
}

}  // namespace

NgramModel::NgramModel(std::span<const std::vector<std::string>> sentences, std::size_t order, double k)
    : order_(order), k_(k) {
  if (sentences.empty()) throw std::invalid_argument("n-gram training set is empty");
  if (order < 1) throw std::invalid_argument("n-gram order must be >= 1");
  if (!(k > 0.0)) throw std::invalid_argument("add-k smoothing needs k > 0");

  auto intern = [this](const std::string& w) {
    auto [it, fresh] = vocab_.emplace(w, static_cast<Id>(words_.size()));
    if (fresh) words_.push_back(w);
    return it->second;
  };
  const Id end = intern(std::string(kEnd));
  std::vector<Id> seq;
  for (const auto& s : sentences) {
    seq.assign(order_ - 1, kBegin);
    for (const auto& w : s) seq.push_back(intern(w));
    seq.push_back(end);
    for (std::size_t i = order_ - 1; i < seq.size(); ++i) {
      // Every context length 0 .. order-1 ending just before position i.
      for (std::size_t len = 0; len < order_; ++len) {
        auto& c = contexts_[pack(std::span(seq).subspan(i - len, len))];
        ++c.total;
        ++c.next[seq[i]];
      }
    }
  }
}

std::vector<std::string> NgramModel::vocabulary() const { return words_; }

std::optional<NgramModel::Id> NgramModel::id(std::string_view w) const {
  auto it = vocab_.find(std::string(w));
  if (it == vocab_.end()) return std::nullopt;
  return it->second;
}

double NgramModel::prob_ids(std::span<const Id> history, std::optional<Id> word) const {
  const double v = static_cast<double>(vocab_.size());
  for (std::size_t len = std::min(history.size(), order_ - 1);; --len) {
    auto it = contexts_.find(pack(history.subspan(history.size() - len, len)));
    if (it != contexts_.end() && it->second.total > 0) {
      const Counts& c = it->second;
      std::uint64_t joint = 0;
      if (word)
        if (auto jt = c.next.find(*word); jt != c.next.end()) joint = jt->second;
      return (static_cast<double>(joint) + k_) / (static_cast<double>(c.total) + k_ * v);
    }
    if (len == 0) break;
  }
  throw std::logic_error("n-gram model has no unigram counts");
}

double NgramModel::prob(std::span<const std::string> history, std::string_view word) const {
  std::vector<Id> h(order_ - 1, kBegin);
  for (const auto& w : history) h.push_back(id(w).value_or(kBegin - 1));
  return prob_ids(h, id(word));
}

ScoreRecord NgramModel::score(std::span<const std::string> tokens) const {
  ScoreRecord r;
  r.tokens.assign(tokens.begin(), tokens.end());
  std::vector<Id> h(order_ - 1, kBegin);
  // Unknown words condition as an id that never occurs in training.
  constexpr Id kUnknown = kBegin - 1;
  for (const auto& w : tokens) {
    const auto wid = id(w);
    r.logprobs.push_back(std::log(prob_ids(h, wid)));
    h.push_back(wid.value_or(kUnknown));
  }
  r.logprobs.push_back(std::log(prob_ids(h, id(kEnd))));
  return r;
}

NgramModel ngram_train(std::span<const Sentence> train, std::size_t order, double k) {
  std::vector<std::vector<std::string>> sentences;
  sentences.reserve(train.size());
  for (const auto& s : train) sentences.push_back(s.tokens);
  return NgramModel(sentences, order, k);
}

std::vector<ScoreRecord> ngram_score(const NgramModel& model, std::span<const Sentence> sentences) {
  std::vector<ScoreRecord> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) {
    ScoreRecord r = model.score(s.tokens);
    r.grammar_id = s.grammar_id;
    out.push_back(std::move(r));
  }
  return out;
}

void write_scores(std::ostream& out, std::span<const ScoreRecord> records) {
  for (const auto& r : records) {
    ordered_json j;
    j["grammar_id"] = r.grammar_id;
    j["tokens"] = r.tokens;
    j["logprobs"] = r.logprobs;
    out << j.dump(-1, ' ', false, json::error_handler_t::strict) << '\n';
  }
}

std::vector<ScoreRecord> read_scores(std::istream& in) {
  std::vector<ScoreRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      ScoreRecord r;
      r.grammar_id = j.at("grammar_id").get<std::string>();
      r.tokens = j.at("tokens").get<std::vector<std::string>>();
      r.logprobs = j.at("logprobs").get<std::vector<double>>();
      r.validate();
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error("score file line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace alforge
