#include "alforge/grammar.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace alforge {

namespace {

constexpr std::array<std::string_view, kLexClassCount> kClassNames = {
    "NP", "SUBJ", "OBJ", "ADJ", "VT", "VI", "VCOMP", "COMP", "PREP", "REL", "CONJ"};
constexpr std::array<std::string_view, 6> kOrderNames = {"SOV", "OSV", "SVO", "OVS", "VSO", "VOS"};

Category prim(Primitive p) { return Category::primitive(p); }

Restrictions no_comp() {
  Restrictions r;
  r.no_composition = true;
  return r;
}

Category conjunction() {
  Restrictions r;
  r.no_crossing = true;
  r.no_composition = true;
  r.no_permutation = true;
  Category x = Category::variable(0);
  return Category::forward(Category::backward(x, x, r), x, r);
}

std::string_view permutation_name(ParserPolicy::Permutation p) {
  switch (p) {
    case ParserPolicy::Permutation::Never: return "never";
    case ParserPolicy::Permutation::Always: return "always";
    case ParserPolicy::Permutation::WithTrigger: return "with-trigger";
  }
  return "?";
}

// Base order, lexicon text with VT replaced by the smallest member of its
// rotation orbit, and the policy. Only verb-medial vectors differing in O share
// a signature: there O does not change the surface order.
std::string signature(const Grammar& g) {
  std::ostringstream os;
  os << to_string(g.base_order) << ';';
  for (LexClass c : kAllLexClasses) {
    Category cat = g.category(c);
    std::string text = to_string(cat);
    if (c == LexClass::VT) {
      Category cur = cat;
      for (std::size_t i = 1; i < arity(cat); ++i) {
        cur = permute_cyclic(cur);
        text = std::min(text, to_string(cur));
      }
    }
    os << text << ';';
  }
  os << permutation_name(g.policy.permutation) << ';';
  if (g.policy.trigger) os << to_string(*g.policy.trigger);
  for (const auto& c : g.policy.non_coordinable) os << ';' << to_string(c);
  return os.str();
}

}  // namespace

std::string_view to_string(LexClass c) { return kClassNames[static_cast<std::size_t>(c)]; }

std::optional<LexClass> lex_class_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kClassNames.size(); ++i)
    if (kClassNames[i] == s) return static_cast<LexClass>(i);
  return std::nullopt;
}

std::string_view to_string(BaseOrder b) { return kOrderNames[static_cast<std::size_t>(b)]; }

std::optional<BaseOrder> base_order_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kOrderNames.size(); ++i)
    if (kOrderNames[i] == s) return static_cast<BaseOrder>(i);
  return std::nullopt;
}

ParamVector ParamVector::parse(std::string_view text) {
  if (text.size() != 7) throw std::invalid_argument("parameter vector must have 7 bits: '" + std::string(text) + "'");
  std::array<bool, 7> bits{};
  for (std::size_t i = 0; i < 7; ++i) {
    if (text[i] != '0' && text[i] != '1')
      throw std::invalid_argument("parameter vector must be binary: '" + std::string(text) + "'");
    bits[i] = text[i] == '1';
  }
  return ParamVector(bits);
}

ParamVector ParamVector::from_index(unsigned index) {
  if (index >= 128) throw std::invalid_argument("parameter index out of range");
  std::array<bool, 7> bits{};
  for (std::size_t i = 0; i < 7; ++i) bits[i] = (index >> (6 - i)) & 1u;
  return ParamVector(bits);
}

std::string ParamVector::str() const {
  std::string s;
  for (bool b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

BaseOrder base_order_of(bool s, bool vp, bool o) {
  if (!s && !vp) return o ? BaseOrder::OSV : BaseOrder::SOV;  // verb-final
  if (s && vp) return o ? BaseOrder::VOS : BaseOrder::VSO;    // verb-initial
  return s ? BaseOrder::OVS : BaseOrder::SVO;                 // verb-medial; O is vacuous
}

std::vector<Category> Grammar::categories(std::span<const LexClass> classes) const {
  std::vector<Category> out;
  out.reserve(classes.size());
  for (LexClass c : classes) out.push_back(category(c));
  return out;
}

bool Grammar::parses(std::span<const LexClass> classes) const {
  if (classes.empty()) return false;
  auto cats = categories(classes);
  return parse(cats, policy).grammatical;
}

Grammar build_grammar(const ParamVector& p) {
  const bool s = p[Param::S], vp = p[Param::VP], o = p[Param::O];
  const Slash subj_slash = s ? Slash::Forward : Slash::Backward;
  const Slash obj_slash = vp ? Slash::Forward : Slash::Backward;
  const Category S = prim(Primitive::S), NP = prim(Primitive::NP), SUBJ = prim(Primitive::NP_SUBJ),
                 OBJ = prim(Primitive::NP_OBJ), SCOMP = prim(Primitive::SCOMP);

  Grammar g;
  g.params = p;
  g.id = p.str();
  g.base_order = base_order_of(s, vp, o);
  g.aliases = {g.id};

  auto set = [&g](LexClass c, Category cat) { g.lexicon[static_cast<std::size_t>(c)] = std::move(cat); };

  set(LexClass::NP, NP);
  set(LexClass::SUBJ, Category::backward(SUBJ, NP, no_comp()));
  set(LexClass::OBJ, Category::backward(OBJ, NP, no_comp()));
  set(LexClass::ADJ, Category::functor(NP, p[Param::ADJ] ? Slash::Backward : Slash::Forward, NP, no_comp()));
  set(LexClass::VI, Category::functor(S, subj_slash, SUBJ));

  // The argument adjacent to the verb is consumed first. Verb-initial orders
  // put the subject next to the verb when O = 0, every other order the object.
  const bool verb_initial = s && vp;
  const bool object_outer = verb_initial ? o : !o;
  if (object_outer)
    set(LexClass::VT, Category::functor(Category::functor(S, subj_slash, SUBJ), obj_slash, OBJ));
  else
    set(LexClass::VT, Category::functor(Category::functor(S, obj_slash, OBJ), subj_slash, SUBJ));

  set(LexClass::VCOMP, Category::functor(Category::functor(S, subj_slash, SUBJ), obj_slash, SCOMP));
  set(LexClass::COMP, Category::functor(SCOMP, p[Param::COMP] ? Slash::Forward : Slash::Backward, S));
  set(LexClass::PREP, p[Param::PP] ? Category::backward(Category::forward(NP, NP), NP)
                                   : Category::forward(Category::backward(NP, NP), NP));
  const Category gapped = Category::functor(S, obj_slash, OBJ);
  set(LexClass::REL, p[Param::REL] ? Category::forward(Category::backward(SUBJ, SUBJ), gapped)
                                   : Category::backward(Category::forward(SUBJ, SUBJ), gapped));
  set(LexClass::CONJ, conjunction());

  switch (g.base_order) {
    case BaseOrder::SVO:
    case BaseOrder::VSO:
      g.policy.permutation = ParserPolicy::Permutation::Always;
      break;
    default:
      g.policy.permutation = ParserPolicy::Permutation::WithTrigger;
      g.policy.trigger = g.category(LexClass::REL);
      break;
  }
  g.policy.non_coordinable = {g.category(LexClass::SUBJ), g.category(LexClass::OBJ)};
  return g;
}

std::vector<Grammar> enumerate_grammars() {
  std::map<std::string, std::vector<std::string>> groups;
  for (unsigned i = 0; i < 128; ++i) {
    ParamVector p = ParamVector::from_index(i);
    groups[signature(build_grammar(p))].push_back(p.str());
  }
  std::vector<Grammar> out;
  out.reserve(groups.size());
  for (auto& [sig, ids] : groups) {
    std::sort(ids.begin(), ids.end());
    Grammar g = build_grammar(ParamVector::parse(ids.front()));
    g.aliases = ids;
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end(), [](const Grammar& a, const Grammar& b) { return a.id < b.id; });
  if (out.size() != 96)
    throw std::logic_error("expected 96 distinct grammars, found " + std::to_string(out.size()));
  return out;
}

const std::vector<Grammar>& all_grammars() {
  static const std::vector<Grammar> grammars = enumerate_grammars();
  return grammars;
}

const Grammar& find_grammar(std::string_view id) {
  for (const auto& g : all_grammars()) {
    if (g.id == id) return g;
    if (std::find(g.aliases.begin(), g.aliases.end(), id) != g.aliases.end()) return g;
  }
  throw std::invalid_argument("unknown grammar id '" + std::string(id) + "'");
}

std::string to_gcg_text(const Grammar& g) {
  std::ostringstream os;
  os << "# id: " << g.id << '\n';
  os << "# base_order: " << to_string(g.base_order) << '\n';
  os << "# aliases:";
  for (const auto& a : g.aliases) os << ' ' << a;
  os << '\n';
  os << "# permutation: " << permutation_name(g.policy.permutation);
  if (g.policy.trigger) os << ' ' << to_string(*g.policy.trigger);
  os << '\n';
  os << "# non_coordinable:";
  for (const auto& c : g.policy.non_coordinable) os << ' ' << to_string(c);
  os << '\n';
  for (LexClass c : kAllLexClasses) os << to_string(c) << " => " << to_string(g.category(c)) << '\n';
  return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> words(std::string_view s) {
  std::istringstream is{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

}  // namespace

Grammar parse_gcg_text(std::string_view text) {
  std::map<std::string, std::string, std::less<>> header;
  std::array<std::optional<Category>, kLexClassCount> lex;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      line.remove_prefix(1);
      auto colon = line.find(':');
      if (colon != std::string_view::npos)
        header[std::string(trim(line.substr(0, colon)))] = std::string(trim(line.substr(colon + 1)));
      continue;
    }
    auto arrow = line.find("=>");
    if (arrow == std::string_view::npos)
      throw std::invalid_argument("grammar line " + std::to_string(line_no) + ": expected 'CLASS => category'");
    auto cls = lex_class_from_string(trim(line.substr(0, arrow)));
    if (!cls) throw std::invalid_argument("grammar line " + std::to_string(line_no) + ": unknown class");
    lex[static_cast<std::size_t>(*cls)] = parse_category(trim(line.substr(arrow + 2)));
  }

  Grammar g;
  auto id = header.find("id");
  if (id == header.end()) throw std::invalid_argument("grammar file lacks an '# id:' header");
  g.id = id->second;
  g.params = ParamVector::parse(g.id);
  g.base_order = base_order_of(g.params[Param::S], g.params[Param::VP], g.params[Param::O]);
  if (auto it = header.find("base_order"); it != header.end()) {
    auto b = base_order_from_string(it->second);
    if (!b) throw std::invalid_argument("unknown base order '" + it->second + "'");
    g.base_order = *b;
  }
  for (std::size_t i = 0; i < kLexClassCount; ++i) {
    if (!lex[i]) throw std::invalid_argument("grammar file lacks class " + std::string(kClassNames[i]));
    g.lexicon[i] = *lex[i];
  }
  g.aliases = {g.id};
  if (auto it = header.find("aliases"); it != header.end()) g.aliases = words(it->second);

  g.policy = ParserPolicy{};
  if (auto it = header.find("permutation"); it != header.end()) {
    auto w = words(it->second);
    if (w.empty()) throw std::invalid_argument("empty permutation header");
    if (w[0] == "never") g.policy.permutation = ParserPolicy::Permutation::Never;
    else if (w[0] == "always") g.policy.permutation = ParserPolicy::Permutation::Always;
    else if (w[0] == "with-trigger" && w.size() == 2) {
      g.policy.permutation = ParserPolicy::Permutation::WithTrigger;
      g.policy.trigger = parse_category(w[1]);
    } else {
      throw std::invalid_argument("bad permutation header '" + it->second + "'");
    }
  }
  if (auto it = header.find("non_coordinable"); it != header.end())
    for (const auto& w : words(it->second)) g.policy.non_coordinable.push_back(parse_category(w));
  return g;
}

}  // namespace alforge
