#include "doctest.h"

#include <atomic>
#include <filesystem>
#include <fstream>

#include "alforge/pipeline.hpp"

using namespace alforge;
namespace fs = std::filesystem;

TEST_CASE("parallel_for visits every index once") {
  for (unsigned threads : {1u, 3u}) {
    std::vector<std::atomic<int>> hits(50);
    parallel_for(50, threads, [&](std::size_t i) { ++hits[i]; });
    for (auto& h : hits) CHECK(h == 1);
  }
  CHECK_THROWS_WITH(parallel_for(10, 2,
                                 [](std::size_t i) {
                                   if (i == 3 || i == 7) throw std::runtime_error("at " + std::to_string(i));
                                 }),
                    "at 3");
}

TEST_CASE("small pipeline run") {
  PipelineConfig c;
  c.scale = 0.1;
  c.seed = 3;
  auto dir = fs::temp_directory_path() / "alforge_pipeline_unit";
  fs::remove_all(dir);
  auto report = run_pipeline({"0101101", "0000000"}, c, dir);
  REQUIRE(report.grammars.size() == 2);
  CHECK(report.grammars[0].grammar_id == "0000000");
  for (const auto& g : report.grammars) {
    CHECK(fs::exists(dir / g.grammar_id / "grammar.gcg"));
    CHECK(fs::exists(dir / g.grammar_id / "scores" / "long_test.jsonl"));
    CHECK(g.ppl.size() >= 3);
    CHECK(g.case_accuracy >= 0.0);
    CHECK(g.case_accuracy <= 1.0);
  }
  std::ifstream report_csv(dir / "report.csv");
  std::string header;
  std::getline(report_csv, header);
  CHECK(header == "grammar_id,base_order,split,ppl,plausibility");
  CHECK_THROWS_AS(run_pipeline({"2222222"}, c, dir), std::invalid_argument);
  fs::remove_all(dir);
}
