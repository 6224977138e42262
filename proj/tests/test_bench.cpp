#include <doctest.h>

#include <algorithm>
#include <set>

#include "cmap/bench.hpp"
#include "cmap/search.hpp"
#include "cmap/compile.hpp"
#include "support.hpp"

using namespace cmap;

TEST_CASE("generation is deterministic in the spec and seed") {
  for (const char* name :
       {"tablemover", "maze", "maze-scaling", "workshop", "boxpushing"}) {
    BenchSpec s;
    s.domain = name;
    s.seed = 42;
    GeneratedInstance a = generate(s);
    GeneratedInstance b = generate(s);
    CHECK(a.domain_text == b.domain_text);
    CHECK(a.problem_text == b.problem_text);
  }
}

TEST_CASE("the maze layout depends on the seed") {
  BenchSpec s;
  s.domain = "maze";
  s.grid_w = 4;
  s.grid_h = 4;
  s.seed = 1;
  GeneratedInstance a = generate(s);
  s.seed = 2;
  GeneratedInstance b = generate(s);
  CHECK(a.domain_text == b.domain_text);  // the domain is fixed
  CHECK(a.problem_text != b.problem_text);
}

TEST_CASE("invalid specs are rejected with an explanation") {
  BenchSpec s;
  s.domain = "no-such-domain";
  CHECK_THROWS_AS(generate(s), BenchError);
  s.domain = "boxpushing";
  s.boxes = {4};
  CHECK_THROWS_AS(generate(s), BenchError);
  s.boxes = {};
  CHECK_THROWS_AS(generate(s), BenchError);
  s = BenchSpec{};
  s.domain = "maze-scaling";
  s.agents = 3;  // rowing boats need pairs
  CHECK_THROWS_AS(generate(s), BenchError);
  s = BenchSpec{};
  s.domain = "tablemover";
  s.rooms = 1;
  CHECK_THROWS_AS(generate(s), BenchError);
  s = BenchSpec{};
  s.domain = "workshop";
  s.agents = 1;
  CHECK_THROWS_AS(generate(s), BenchError);
}

TEST_CASE("an empty matrix produces an empty report") {
  BenchReport rep = run_bench({}, {});
  CHECK(rep.rows.empty());
}

TEST_CASE("a small bench matrix runs clean") {
  std::vector<BenchSpec> specs;
  {
    BenchSpec s;
    s.domain = "tablemover";
    specs.push_back(s);
  }
  {
    BenchSpec s;
    s.domain = "boxpushing";
    s.boxes = {1, 2};
    specs.push_back(s);
  }
  std::vector<BenchVariant> variants;
  {
    BenchVariant v;
    v.label = "negsel";
    variants.push_back(v);
  }
  {
    BenchVariant v;
    v.label = "c2";
    v.opts.bound = 2;
    variants.push_back(v);
  }
  {
    BenchVariant v;
    v.label = "naive";
    v.naive = true;
    variants.push_back(v);
  }
  BenchReport rep = run_bench(specs, variants, 120.0, 1'000'000, 2);
  REQUIRE(rep.rows.size() == specs.size() * variants.size());
  for (const BenchRow& row : rep.rows) {
    CHECK(row.status == "solved");  // run_cell throws on invalid decodes
    CHECK(row.makespan >= 1);
    CHECK(row.makespan <= row.classical_len);
    CHECK(row.grounded_actions > 0);
    CHECK(row.compiled_actions > 0);
  }
  // Every matrix cell appears exactly once.
  std::set<std::pair<std::string, std::string>> seen;
  for (const BenchRow& row : rep.rows)
    CHECK(seen.insert({row.instance, row.variant}).second);

  std::string csv = bench_to_csv(rep);
  CHECK(csv.find("instance,variant") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        static_cast<long>(rep.rows.size()) + 1);
  CHECK(bench_to_text(rep).find("makespan") != std::string::npos);
}

TEST_CASE("naive and exact compilations solve the same instances") {
  BenchSpec s;
  s.domain = "workshop";
  auto [mp, grep] = build_instance(s);
  SearchResult exact = solve(compile(mp, {}));
  ClassicalProblem ncp = naive_compile(mp, static_cast<int>(mp.agents.size()));
  SearchResult naive = solve(ncp);
  REQUIRE(exact.status == SearchStatus::Solved);
  REQUIRE(naive.status == SearchStatus::Solved);
  ConcurrentPlan de = decode(exact.plan, mp, compile(mp, {}));
  ConcurrentPlan dn = decode_naive(naive.plan, mp, ncp);
  CHECK(validate_concurrent(mp, de).valid);
  CHECK(validate_concurrent(mp, dn).valid);
}
