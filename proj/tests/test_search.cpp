#include <doctest.h>

#include <random>

#include "cmap/compile.hpp"
#include "cmap/search.hpp"
#include "support.hpp"

using namespace cmap;

namespace {

std::vector<ClassicalProblem> tiny_problems() {
  std::vector<ClassicalProblem> out;
  MapProblem small = support::small_example();
  out.push_back(compile(small, {}));
  {
    CompileOptions opts;
    opts.neg_in_select = false;
    out.push_back(compile(small, opts));
  }
  {
    CompileOptions opts;
    opts.bound = 2;
    out.push_back(compile(small, opts));
  }
  out.push_back(naive_compile(small, 2));
  {
    BenchSpec s;
    s.domain = "boxpushing";
    s.agents = 2;
    s.boxes = {1};
    s.locations = 2;
    out.push_back(compile(build_instance(s).first, {}));
  }
  return out;
}

}  // namespace

TEST_CASE("the planner agrees with a breadth-first oracle") {
  for (const ClassicalProblem& cp : tiny_problems()) {
    support::BfsResult oracle = support::bfs_classical(cp);
    SearchResult res = solve(cp);
    REQUIRE(oracle.solvable);
    REQUIRE(res.status == SearchStatus::Solved);
    // Satisficing: at least as long as the optimum, and executable.
    CHECK(res.stats.plan_length >= oracle.shortest);
    State s = cp.init;
    for (int a : res.plan) {
      REQUIRE(applicable(cp, s, a));
      s = step_classical(cp, s, a);
    }
    CHECK(holds(cp.goal, s));
  }
}

TEST_CASE("unsolvable instances exhaust exactly the reachable space") {
  BenchSpec s;
  s.domain = "boxpushing";
  s.agents = 3;
  s.boxes = {3};
  MapProblem mp = build_instance(s).first;
  CompileOptions opts;
  opts.bound = 2;  // the large box needs three pushers
  ClassicalProblem cp = compile(mp, opts);
  SearchResult res = solve(cp);
  REQUIRE(res.status == SearchStatus::Unsolvable);
  support::BfsResult oracle = support::bfs_classical(cp);
  CHECK_FALSE(oracle.solvable);
  // Expansions equal the number of reachable states, independently
  // counted: the exhaustion certificate.
  CHECK(res.stats.expansions == oracle.states);
  CHECK(static_cast<long long>(res.stats.peak_closed) == oracle.states);
}

TEST_CASE("the additive heuristic counts a two-step chain exactly") {
  ClassicalProblem p;
  p.fluents = {Sym{{"x"}}, Sym{{"y"}}};
  ClassicalAction a;
  a.name = Sym{{"first"}};
  a.effects = {CondEff{{}, {Lit{0, true}}}};
  ClassicalAction b;
  b.name = Sym{{"second"}};
  b.pre = {Lit{0, true}};
  b.effects = {CondEff{{}, {Lit{1, true}}}};
  p.actions = {a, b};
  p.provenance.resize(2);
  p.init = State(2);
  p.goal = {Lit{1, true}};
  p.build_index();
  CHECK(heuristic(p.init, p, SearchConfig::Heuristic::Additive) == 2);
  CHECK(heuristic(p.init, p, SearchConfig::Heuristic::GoalCount) == 1);
  State mid = step_classical(p, p.init, 0);
  CHECK(heuristic(mid, p, SearchConfig::Heuristic::Additive) == 1);
  // No action re-falsifies x: from mid, a goal needing not-x is a dead end.
  p.goal = {Lit{0, false}};
  CHECK(heuristic(mid, p, SearchConfig::Heuristic::Additive) >=
        sdetail::kInf);
}

TEST_CASE("a goal satisfied initially yields the empty plan") {
  ClassicalProblem p;
  p.fluents = {Sym{{"x"}}};
  p.init = make_state(1, {0});
  p.goal = {Lit{0, true}};
  p.build_index();
  SearchResult res = solve(p);
  CHECK(res.status == SearchStatus::Solved);
  CHECK(res.plan.empty());
  CHECK(res.stats.plan_length == 0);
}

TEST_CASE("search is deterministic across repeated runs") {
  ClassicalProblem cp = compile(support::figure2_tablemover(), {});
  SearchResult r1 = solve(cp);
  SearchResult r2 = solve(cp);
  REQUIRE(r1.status == SearchStatus::Solved);
  CHECK(r1.plan == r2.plan);
  CHECK(r1.stats.expansions == r2.stats.expansions);
  CHECK(r1.stats.generations == r2.stats.generations);
}

TEST_CASE("both heuristics solve the table-mover compilation") {
  ClassicalProblem cp = compile(support::figure2_tablemover(), {});
  for (auto h :
       {SearchConfig::Heuristic::GoalCount, SearchConfig::Heuristic::Additive}) {
    SearchConfig cfg;
    cfg.heuristic = h;
    SearchResult res = solve(cp, cfg);
    REQUIRE(res.status == SearchStatus::Solved);
    State s = cp.init;
    for (int a : res.plan) {
      REQUIRE(applicable(cp, s, a));
      s = step_classical(cp, s, a);
    }
    CHECK(holds(cp.goal, s));
  }
}

TEST_CASE("the node cap reports a timeout, not a wrong answer") {
  ClassicalProblem cp = compile(support::figure2_tablemover(), {});
  SearchConfig cfg;
  cfg.node_cap = 5;
  SearchResult res = solve(cp, cfg);
  CHECK(res.status == SearchStatus::Timeout);
  CHECK(res.plan.empty());
}

TEST_CASE("the transition function matches per-effect evaluation") {
  ClassicalProblem cp = compile(support::figure2_tablemover(), {});
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coin(0, 99);
  int checked = 0;
  auto check_one = [&](const State& s, int a) {
    // Recompute the triggered union literal by literal.
    std::vector<Lit> lits;
    for (const CondEff& ce : cp.actions[a].effects) {
      bool ok = true;
      for (const Lit& l : ce.cond) ok = ok && (s.test(l.var) == l.pos);
      if (ok) lits.insert(lits.end(), ce.eff.begin(), ce.eff.end());
    }
    if (!support::naive_well_defined(lits)) {
      CHECK_THROWS_AS(step_classical(cp, s, a), ModelError);
      return;
    }
    State expected = s;
    for (const Lit& l : lits) expected.set(l.var, l.pos);
    CHECK(step_classical(cp, s, a) == expected);
    ++checked;
  };
  // Random walks over applicable actions, with occasional random flips
  // of base fluents to visit off-path states too.
  for (int walk = 0; walk < 50; ++walk) {
    State s = cp.init;
    for (int depth = 0; depth < 30; ++depth) {
      if (coin(rng) < 10) {
        int v = static_cast<int>(rng() % cp.base_fluents);
        s.set(v, !s.test(v));
      }
      std::vector<int> apps;
      for (int a = 0; a < static_cast<int>(cp.actions.size()); ++a)
        if (applicable(cp, s, a)) apps.push_back(a);
      if (apps.empty()) break;
      int a = apps[rng() % apps.size()];
      check_one(s, a);
      try {
        s = step_classical(cp, s, a);
      } catch (const ModelError&) {
        break;
      }
    }
  }
  CHECK(checked > 100);
}
