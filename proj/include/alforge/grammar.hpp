#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alforge/category.hpp"
#include "alforge/chart_parser.hpp"

namespace alforge {

// The eleven lexical syntactic classes, in canonical order.
enum class LexClass : std::uint8_t { NP, SUBJ, OBJ, ADJ, VT, VI, VCOMP, COMP, PREP, REL, CONJ };

inline constexpr std::size_t kLexClassCount = 11;
inline constexpr std::array<LexClass, kLexClassCount> kAllLexClasses = {
    LexClass::NP, LexClass::SUBJ,  LexClass::OBJ,  LexClass::ADJ,  LexClass::VT,  LexClass::VI,
    LexClass::VCOMP, LexClass::COMP, LexClass::PREP, LexClass::REL, LexClass::CONJ};

std::string_view to_string(LexClass c);
std::optional<LexClass> lex_class_from_string(std::string_view s);

enum class BaseOrder : std::uint8_t { SOV, OSV, SVO, OVS, VSO, VOS };
inline constexpr std::array<BaseOrder, 6> kAllBaseOrders = {BaseOrder::SOV, BaseOrder::OSV, BaseOrder::SVO,
                                                            BaseOrder::OVS, BaseOrder::VSO, BaseOrder::VOS};
std::string_view to_string(BaseOrder b);
std::optional<BaseOrder> base_order_from_string(std::string_view s);

// Seven word-order switches, 0 = head-final column, 1 = head-initial column.
enum class Param : std::uint8_t { S, VP, O, COMP, PP, ADJ, REL };

class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(std::array<bool, 7> bits) : bits_(bits) {}
  // Seven characters of '0'/'1' in the order S, VP, O, COMP, PP, ADJ, REL.
  static ParamVector parse(std::string_view text);
  static ParamVector from_index(unsigned index);  // bit 6 = S ... bit 0 = REL

  bool operator[](Param p) const { return bits_[static_cast<std::size_t>(p)]; }
  void set(Param p, bool v) { bits_[static_cast<std::size_t>(p)] = v; }
  std::string str() const;

  friend bool operator==(const ParamVector&, const ParamVector&) = default;

 private:
  std::array<bool, 7> bits_{};
};

BaseOrder base_order_of(bool s, bool vp, bool o);

struct Grammar {
  std::string id;  // canonical parameter text
  ParamVector params;
  BaseOrder base_order = BaseOrder::SOV;
  std::array<Category, kLexClassCount> lexicon;
  ParserPolicy policy;
  std::vector<std::string> aliases;  // every parameter vector collapsing onto this grammar

  const Category& category(LexClass c) const { return lexicon[static_cast<std::size_t>(c)]; }
  std::vector<Category> categories(std::span<const LexClass> classes) const;
  bool parses(std::span<const LexClass> classes) const;
};

Grammar build_grammar(const ParamVector& p);
inline Grammar build_grammar(std::string_view params) { return build_grammar(ParamVector::parse(params)); }

// The 96 distinct languages, sorted by id. Throws std::logic_error if the
// deduplicated count is not 96.
const std::vector<Grammar>& all_grammars();
std::vector<Grammar> enumerate_grammars();

// Looks up a canonical id or any alias.
const Grammar& find_grammar(std::string_view id);

// Lexicon file: header comments plus lines "CLASS => category".
std::string to_gcg_text(const Grammar& g);
Grammar parse_gcg_text(std::string_view text);

}  // namespace alforge
