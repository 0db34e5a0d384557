#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alforge/grammar.hpp"

namespace alforge {

using Template = std::vector<LexClass>;

std::string to_string(std::span<const LexClass> t);
// Whitespace-separated class names. Throws std::invalid_argument on an unknown name.
Template parse_template(std::string_view text);

std::vector<Template> read_templates(std::istream& in);
void write_templates(std::ostream& out, std::span<const Template> templates);

// The eight discard rules. Returns false iff the template is discarded.
bool heuristic_filter(std::span<const LexClass> t);
// The subset of the rules that can only get worse as a prefix grows
// (2, 4, 5, 6 and the marker bound against the room left for NPs).
bool prefix_admissible(std::span<const LexClass> prefix, std::size_t max_len);

// Lexicographic on class indices, shorter first at equal prefix.
bool template_less(std::span<const LexClass> a, std::span<const LexClass> b);

// Every class sequence of length min_len..max_len that passes heuristic_filter
// and parses to S under g, in canonical order. max_len is limited to 16.
std::vector<Template> enumerate_templates(const Grammar& g, std::size_t max_len, std::size_t min_len = 3);

// Reference implementation: depth-first search over prefixes with an
// incremental chart. Exact but exponential; meant for small max_len.
std::vector<Template> enumerate_templates_dfs(const Grammar& g, std::size_t max_len, std::size_t min_len = 3);

struct AugmentOptions {
  std::size_t min_len = 11;
  std::size_t max_len = 20;
  // Exhaustive when empty; otherwise draw candidates at random until this many
  // distinct grammatical Long templates are found.
  std::optional<std::size_t> sample;
  std::uint64_t seed = 0;
  // Sampled mode gives up after sample * max_attempts_factor candidate draws.
  std::size_t max_attempts_factor = 200;
};

enum class AugmentOp : std::uint8_t { Concat, InsertConj, AppendConj };

// Candidate t1 ++ t2, t1[:i] ++ CONJ ++ t2 ++ t1[i:] (1 <= i < |t1|), or t1 ++ CONJ ++ t2.
Template augment_candidate(std::span<const LexClass> t1, std::span<const LexClass> t2, AugmentOp op,
                           std::size_t insert_at = 0);

// Long templates built from pairs of source templates, filtered by heuristics
// and by parsing under g. Output is canonical order in exhaustive mode and
// draw order in sampled mode. Throws std::runtime_error if sampling runs out
// of attempts.
std::vector<Template> augment_long(std::span<const Template> sources, const Grammar& g,
                                   const AugmentOptions& options = {});

}  // namespace alforge
