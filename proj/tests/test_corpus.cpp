#include "doctest.h"

#include <set>
#include <sstream>

#include "alforge/corpus.hpp"
#include "alforge/random.hpp"

using namespace alforge;

namespace {
Template T(const char* s) { return parse_template(s); }

Lexicon tiny() {
  std::array<std::vector<std::string>, kLexClassCount> w;
  w[0] = {"kim", "sandy", "lee"};
  w[1] = {"ga"};
  w[2] = {"o"};
  w[3] = {"tall"};
  w[4] = {"saw", "met"};
  w[5] = {"ran", "sang"};
  w[6] = {"said"};
  w[7] = {"that"};
  w[8] = {"in"};
  w[9] = {"whom"};
  w[10] = {"and"};
  return Lexicon(w);
}
}  // namespace

TEST_CASE("derived seeds") {
  CHECK(derive_seed(1, "a") == derive_seed(1, "a"));
  CHECK(derive_seed(1, "a") != derive_seed(1, "b"));
  CHECK(derive_seed(1, "a") != derive_seed(2, "a"));
  Rng r(3);
  std::vector<int> hits(5);
  for (int i = 0; i < 5000; ++i) ++hits[r.below(5)];
  for (int h : hits) CHECK(h > 850);
  for (int i = 0; i < 1000; ++i) {
    double u = r.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("lexicon") {
  auto lex = tiny();
  CHECK(lex.size() == 15);
  CHECK(lex.class_of("kim") == LexClass::NP);
  CHECK(lex.class_of("whom") == LexClass::REL);
  CHECK_FALSE(lex.class_of("zebra"));
  CHECK(Lexicon::from_json(lex.to_json()).to_json() == lex.to_json());
  auto w = std::array<std::vector<std::string>, kLexClassCount>{};
  CHECK_THROWS_AS(Lexicon{w}, std::invalid_argument);
  auto r = lex.restricted_to({"kim", "ga", "o", "tall", "saw", "ran", "said", "that", "in", "whom", "and"});
  CHECK(r.words(LexClass::NP) == std::vector<std::string>{"kim"});
  CHECK_THROWS(lex.restricted_to({"kim"}));

  const auto& d = default_lexicon();
  CHECK(d.words(LexClass::SUBJ) == std::vector<std::string>{"ga"});
  CHECK(d.words(LexClass::OBJ) == std::vector<std::string>{"o"});
  CHECK(d.words(LexClass::CONJ) == std::vector<std::string>{"and"});
  CHECK(d.words(LexClass::NP).size() > 100);
}

TEST_CASE("instantiation follows the template") {
  auto lex = tiny();
  Rng rng(1);
  auto s = instantiate(T("ADJ NP SUBJ VT NP OBJ"), lex, rng);
  REQUIRE(s.length() == 6);
  for (std::size_t i = 0; i < 6; ++i) CHECK(lex.class_of(s.tokens[i]) == s.classes[i]);
  CHECK(s.tokens[2] == "ga");
  CHECK(s.text().find("  ") == std::string::npos);
}

TEST_CASE("splits are disjoint and exact per length") {
  const auto& g = find_grammar("0101101");
  auto ts = enumerate_templates(g, 8);
  const auto& lex = default_lexicon();
  Rng rng(5);
  std::unordered_set<std::string> seen;
  auto train = sample_split(g, ts, lex, 150, kShortBand, Split::ShortTrain, rng, seen);
  auto test = sample_split(g, ts, lex.restricted_to(vocabulary(train)), 10, kShortBand, Split::ShortTest, rng, seen);
  CHECK(train.size() == 150 * 6);
  CHECK(test.size() == 10 * 6);
  for (std::size_t n = 3; n <= 8; ++n)
    CHECK(std::count_if(test.begin(), test.end(), [&](const Sentence& s) { return s.length() == n; }) == 10);
  CHECK(coverage_check(train, test));
  for (const auto& s : test) {
    CHECK(s.split == Split::ShortTest);
    CHECK(g.parses(s.classes));
  }
  // Shared sentences or unseen words break coverage.
  CHECK_FALSE(coverage_check(train, train));
  Sentence odd = test.front();
  odd.tokens[0] = "zzz";
  CHECK_FALSE(coverage_check(train, std::vector<Sentence>{odd}));
  // Only three 3-word English templates exist over a tiny lexicon: uniqueness runs out.
  std::unordered_set<std::string> fresh;
  CHECK_THROWS_AS(sample_split(g, ts, tiny(), 500, {3, 3}, Split::ShortTrain, rng, fresh), std::runtime_error);
}

TEST_CASE("targeted constructions parse in every grammar") {
  for (const auto& g : all_grammars()) {
    CAPTURE(g.id);
    auto rec = targeted_template(g, TargetedKind::Recursive);
    auto emb = targeted_template(g, TargetedKind::Embedded);
    CHECK(g.parses(rec));
    CHECK(g.parses(emb));
    CHECK(std::count(rec.begin(), rec.end(), LexClass::REL) == 2);
    CHECK(std::count(emb.begin(), emb.end(), LexClass::REL) == 1);
    CHECK(std::count(emb.begin(), emb.end(), LexClass::COMP) == 1);
  }
  auto en = find_grammar("0101101");
  Rng rng(2);
  auto s = gen_targeted(en, TargetedKind::Recursive, default_lexicon(), 25, rng);
  CHECK(s.size() == 25);
  std::set<std::string> texts;
  for (const auto& x : s) {
    texts.insert(x.text());
    CHECK(x.split == Split::Recursive);
    CHECK(x.classes == targeted_template(en, TargetedKind::Recursive));
  }
  CHECK(texts.size() == 25);
}

TEST_CASE("minimal pairs") {
  for (const char* id : {"0000000", "0101101", "1111111"}) {
    CAPTURE(id);
    const auto& g = find_grammar(id);
    auto ts = enumerate_templates(g, 10, 9);
    Rng rng(9);
    std::unordered_set<std::string> seen;
    auto src = sample_split(g, ts, default_lexicon(), 40, kMediumBand, Split::MediumTest, rng, seen);
    for (PairKind kind : {PairKind::CaseType, PairKind::VerbType}) {
      auto pairs = gen_minimal_pairs(g, kind, src, default_lexicon(), 30, rng);
      CHECK(pairs.size() == 30);
      for (const auto& p : pairs) {
        CHECK(g.parses(p.grammatical.classes));
        CHECK_FALSE(g.parses(p.ungrammatical.classes));
        CHECK(p.grammatical.split == Split::PairGrammatical);
        CHECK(p.ungrammatical.split == Split::PairUngrammatical);
        REQUIRE(p.grammatical.length() == p.ungrammatical.length());
        std::size_t diff = 0;
        for (std::size_t i = 0; i < p.grammatical.length(); ++i) {
          if (p.grammatical.tokens[i] == p.ungrammatical.tokens[i]) continue;
          ++diff;
          auto a = p.grammatical.classes[i], b = p.ungrammatical.classes[i];
          if (kind == PairKind::CaseType)
            CHECK(((a == LexClass::SUBJ && b == LexClass::OBJ) || (a == LexClass::OBJ && b == LexClass::SUBJ)));
          else
            CHECK((a == LexClass::VT && b == LexClass::VI));
        }
        CHECK(diff == 1);
      }
    }
  }
}

TEST_CASE("jsonl round trip") {
  Rng rng(4);
  auto s = instantiate(T("NP SUBJ VI"), default_lexicon(), rng);
  s.grammar_id = "0101101";
  s.split = Split::LongTest;
  std::vector<Sentence> v{s, s};
  v[1].split = Split::PairUngrammatical;
  std::stringstream ss;
  write_sentences(ss, v);
  auto line = ss.str().substr(0, ss.str().find('\n'));
  CHECK(line.find("\"grammar_id\":\"0101101\"") != std::string::npos);
  CHECK(line.find("\"length\":3") != std::string::npos);
  auto back = read_sentences(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0].tokens == s.tokens);
  CHECK(back[0].classes == s.classes);
  CHECK(back[1].split == Split::PairUngrammatical);
  for (auto sp : {Split::ShortTrain, Split::ShortTest, Split::MediumTest, Split::LongTest, Split::Recursive,
                  Split::Embedded, Split::PairGrammatical, Split::PairUngrammatical})
    CHECK(split_from_string(to_string(sp)) == sp);
  std::stringstream bad("{\"tokens\": 3}\n");
  CHECK_THROWS(read_sentences(bad));
}

TEST_CASE("sampling is deterministic") {
  const auto& g = find_grammar("1111111");
  auto ts = enumerate_templates(g, 8);
  auto run = [&](std::uint64_t seed) {
    Rng rng(seed);
    std::unordered_set<std::string> seen;
    std::stringstream ss;
    write_sentences(ss, sample_split(g, ts, default_lexicon(), 5, kShortBand, Split::ShortTrain, rng, seen));
    return ss.str();
  };
  CHECK(run(11) == run(11));
  CHECK(run(11) != run(12));
}
