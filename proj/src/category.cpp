#include "alforge/category.hpp"

#include <cctype>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace alforge {

struct Category::Node {
  Kind kind;
  Primitive prim = Primitive::S;
  VarId var = 0;
  Slash slash = Slash::Forward;
  Restrictions restrictions;
  std::optional<Category> result;
  std::optional<Category> argument;
  std::size_t hash = 0;
  std::size_t depth = 0;
  bool ground = true;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t restriction_bits(const Restrictions& r) {
  return (r.no_composition ? 1u : 0u) | (r.no_permutation ? 2u : 0u) | (r.no_crossing ? 4u : 0u) |
         (r.no_substitution ? 8u : 0u);
}

}  // namespace

Category::Category() : Category(primitive(Primitive::S)) {}

Category Category::primitive(Primitive p) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Primitive;
  n->prim = p;
  n->hash = mix(0x51, static_cast<std::size_t>(p));
  return Category(std::move(n));
}

Category Category::variable(VarId id) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->var = id;
  n->ground = false;
  n->hash = mix(0xa7, id);
  return Category(std::move(n));
}

Category Category::functor(Category result, Slash slash, Category argument, Restrictions restrictions) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Functor;
  n->slash = slash;
  n->restrictions = restrictions;
  std::size_t h = mix(0xf3, static_cast<std::size_t>(slash));
  h = mix(h, restriction_bits(restrictions));
  h = mix(h, result.hash());
  h = mix(h, argument.hash());
  n->hash = h;
  n->depth = 1 + std::max(result.depth(), argument.depth());
  n->ground = result.is_ground() && argument.is_ground();
  n->result = std::move(result);
  n->argument = std::move(argument);
  return Category(std::move(n));
}

Category::Kind Category::kind() const { return node_->kind; }
Primitive Category::prim() const { return node_->prim; }
VarId Category::var() const { return node_->var; }
const Category& Category::result() const { return *node_->result; }
const Category& Category::argument() const { return *node_->argument; }
Slash Category::slash() const { return node_->slash; }
const Restrictions& Category::restrictions() const { return node_->restrictions; }
std::size_t Category::hash() const { return node_->hash; }
std::size_t Category::depth() const { return node_->depth; }
bool Category::is_ground() const { return node_->ground; }

bool Category::contains_var(VarId id) const {
  switch (kind()) {
    case Kind::Primitive: return false;
    case Kind::Variable: return var() == id;
    case Kind::Functor: return !is_ground() && (result().contains_var(id) || argument().contains_var(id));
  }
  return false;
}

bool operator==(const Category& a, const Category& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Category::Kind::Primitive: return a.prim() == b.prim();
    case Category::Kind::Variable: return a.var() == b.var();
    case Category::Kind::Functor:
      return a.slash() == b.slash() && a.restrictions() == b.restrictions() && a.result() == b.result() &&
             a.argument() == b.argument();
  }
  return false;
}

bool operator<(const Category& a, const Category& b) {
  if (a.node_ == b.node_) return false;
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  switch (a.kind()) {
    case Category::Kind::Primitive: return a.prim() < b.prim();
    case Category::Kind::Variable: return a.var() < b.var();
    case Category::Kind::Functor: {
      if (a.result() != b.result()) return a.result() < b.result();
      if (a.slash() != b.slash()) return a.slash() < b.slash();
      auto ra = restriction_bits(a.restrictions()), rb = restriction_bits(b.restrictions());
      if (ra != rb) return ra < rb;
      return a.argument() < b.argument();
    }
  }
  return false;
}

std::size_t arity(const Category& c) {
  std::size_t n = 0;
  const Category* cur = &c;
  while (cur->is_functor()) {
    ++n;
    cur = &cur->result();
  }
  return n;
}

const Category& innermost_result(const Category& c) {
  const Category* cur = &c;
  while (cur->is_functor()) cur = &cur->result();
  return *cur;
}

Category permute_cyclic(const Category& c) {
  if (!c.is_functor()) throw std::invalid_argument("not a functor: " + to_string(c));
  if (c.restrictions().no_permutation)
    throw std::invalid_argument("outer argument blocks permutation: " + to_string(c));

  struct Arg {
    Slash slash;
    Restrictions restrictions;
    const Category* category;
  };
  // Outside-in: args[0] is the outermost argument.
  std::vector<Arg> args;
  const Category* cur = &c;
  while (cur->is_functor()) {
    args.push_back({cur->slash(), cur->restrictions(), &cur->argument()});
    cur = &cur->result();
  }
  Category out = *cur;
  // The outermost argument goes innermost; the rest keep their relative order.
  out = Category::functor(out, args.front().slash, *args.front().category, args.front().restrictions);
  for (std::size_t i = args.size(); i-- > 1;)
    out = Category::functor(out, args[i].slash, *args[i].category, args[i].restrictions);
  return out;
}

namespace {

Category resolve(const Category& c, const Substitution& s) {
  const Category* cur = &c;
  while (cur->is_variable()) {
    auto it = s.find(cur->var());
    if (it == s.end()) break;
    cur = &it->second;
  }
  return *cur;
}

bool occurs(VarId v, const Category& c, const Substitution& s) {
  Category r = resolve(c, s);
  switch (r.kind()) {
    case Category::Kind::Primitive: return false;
    case Category::Kind::Variable: return r.var() == v;
    case Category::Kind::Functor: return occurs(v, r.result(), s) || occurs(v, r.argument(), s);
  }
  return false;
}

bool unify_into(const Category& a0, const Category& b0, Substitution& s) {
  Category a = resolve(a0, s);
  Category b = resolve(b0, s);
  if (a.is_variable() && b.is_variable() && a.var() == b.var()) return true;
  if (a.is_variable()) {
    if (occurs(a.var(), b, s)) return false;
    s.emplace(a.var(), b);
    return true;
  }
  if (b.is_variable()) {
    if (occurs(b.var(), a, s)) return false;
    s.emplace(b.var(), a);
    return true;
  }
  if (a.kind() != b.kind()) return false;
  if (a.is_primitive()) return a.prim() == b.prim();
  if (a.slash() != b.slash() || !(a.restrictions() == b.restrictions())) return false;
  return unify_into(a.result(), b.result(), s) && unify_into(a.argument(), b.argument(), s);
}

}  // namespace

std::optional<Substitution> unify(const Category& a, const Category& b) {
  if (a.is_ground() && b.is_ground()) {
    if (a == b) return Substitution{};
    return std::nullopt;
  }
  Substitution s;
  if (!unify_into(a, b, s)) return std::nullopt;
  // Fully resolve bindings so callers can substitute in one pass.
  Substitution out;
  for (const auto& [v, _] : s) out.emplace(v, substitute(Category::variable(v), s));
  return out;
}

Category substitute(const Category& c, const Substitution& s) {
  if (c.is_ground() || s.empty()) return c;
  if (c.is_variable()) {
    auto it = s.find(c.var());
    if (it == s.end()) return c;
    return substitute(it->second, s);
  }
  return Category::functor(substitute(c.result(), s), c.slash(), substitute(c.argument(), s), c.restrictions());
}

std::string to_string(Primitive p) {
  switch (p) {
    case Primitive::S: return "S";
    case Primitive::NP: return "NP";
    case Primitive::NP_SUBJ: return "NP_SUBJ";
    case Primitive::NP_OBJ: return "NP_OBJ";
    case Primitive::SCOMP: return "SCOMP";
  }
  return "?";
}

namespace {

void print(std::ostream& os, const Category& c, bool nested) {
  switch (c.kind()) {
    case Category::Kind::Primitive: os << to_string(c.prim()); return;
    case Category::Kind::Variable:
      os << 'X';
      if (c.var() != 0) os << c.var();
      return;
    case Category::Kind::Functor: {
      if (nested) os << '(';
      print(os, c.result(), true);
      os << (c.slash() == Slash::Forward ? '/' : '\\');
      const auto& r = c.restrictions();
      if (r.no_crossing) os << '.';
      if (r.no_composition) os << ',';
      if (r.no_substitution) os << '_';
      if (r.no_permutation) os << '@';
      print(os, c.argument(), true);
      if (nested) os << ')';
      return;
    }
  }
}

class CategoryReader {
 public:
  explicit CategoryReader(std::string_view text) : text_(text) {}

  Category read() {
    Category c = chain();
    skip_space();
    if (pos_ != text_.size()) fail("trailing input");
    return c;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("bad category '" + std::string(text_) + "': " + what + " at " +
                                std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Category chain() {
    Category c = atom();
    for (;;) {
      skip_space();
      if (pos_ >= text_.size() || (text_[pos_] != '/' && text_[pos_] != '\\')) return c;
      Slash slash = text_[pos_] == '/' ? Slash::Forward : Slash::Backward;
      ++pos_;
      Restrictions r;
      for (; pos_ < text_.size(); ++pos_) {
        char ch = text_[pos_];
        if (ch == ',') r.no_composition = true;
        else if (ch == '@') r.no_permutation = true;
        else if (ch == '.') r.no_crossing = true;
        else if (ch == '_') r.no_substitution = true;
        else if (ch == ' ') continue;
        else break;
      }
      Category arg = atom();
      c = Category::functor(std::move(c), slash, std::move(arg), r);
    }
  }

  Category atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end");
    if (text_[pos_] == '(') {
      ++pos_;
      Category c = chain();
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return c;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);
    if (name == "S") return Category::primitive(Primitive::S);
    if (name == "NP") return Category::primitive(Primitive::NP);
    if (name == "NP_SUBJ" || name == "NPSUBJ") return Category::primitive(Primitive::NP_SUBJ);
    if (name == "NP_OBJ" || name == "NPOBJ") return Category::primitive(Primitive::NP_OBJ);
    if (name == "SCOMP") return Category::primitive(Primitive::SCOMP);
    if (name == "var" || name == "Var" || name == "X") return Category::variable(0);
    if (name.size() > 1 && name[0] == 'X') {
      VarId id = 0;
      for (char ch : name.substr(1)) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) fail("unknown symbol '" + std::string(name) + "'");
        id = id * 10 + static_cast<VarId>(ch - '0');
      }
      return Category::variable(id);
    }
    pos_ = start;
    fail(name.empty() ? "expected category" : "unknown symbol '" + std::string(name) + "'");
  }
};

}  // namespace

std::string to_string(const Category& c) {
  std::ostringstream os;
  print(os, c, false);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Category& c) {
  print(os, c, false);
  return os;
}

Category parse_category(std::string_view text) { return CategoryReader(text).read(); }

}  // namespace alforge
