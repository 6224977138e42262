#ifndef TESTS_SUPPORT_HPP
#define TESTS_SUPPORT_HPP

// Shared fixtures and independent oracles for the test suites.  The
// oracles deliberately re-derive results from first principles (plain
// BFS, brute-force enumeration) instead of reusing the library's own
// search or semantics code paths.

#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "cmap/bench.hpp"
#include "cmap/classical.hpp"
#include "cmap/model.hpp"

namespace support {

// Two agents with A1 = {a1, a2}, A2 = {a3, a4} over fluents {f, g}:
// pre(a1) = {not-a4}, cond(a1) = {{not-a3} > {f}}, cond(a3) = {{} > {g}},
// a2 and a4 have empty preconditions and effects.
inline cmap::MapProblem small_example() {
  using namespace cmap;
  MapProblem p;
  p.name = "small";
  p.agents = {"ag1", "ag2"};
  p.fluents = {Sym{{"f"}}, Sym{{"g"}}};
  auto mk = [](const char* n, int agent) {
    AtomicAction a;
    a.name = Sym{{n}};
    a.schema = n;
    a.agent = agent;
    return a;
  };
  AtomicAction a1 = mk("a1", 0);
  a1.pre_a = {ALit{3, false}};
  a1.effects = {CondEffect{{}, {ALit{2, false}}, {Lit{0, true}}}};
  AtomicAction a2 = mk("a2", 0);
  AtomicAction a3 = mk("a3", 1);
  a3.effects = {CondEffect{{}, {}, {Lit{1, true}}}};
  AtomicAction a4 = mk("a4", 1);
  p.actions = {a1, a2, a3, a4};
  p.agent_actions = {{0, 1}, {2, 3}};
  p.init = State(2);
  p.goal = {Lit{0, true}, Lit{1, true}};
  p.build_index();
  return p;
}

inline cmap::MapProblem figure2_tablemover() {
  cmap::BenchSpec spec;
  spec.domain = "tablemover";
  return cmap::build_instance(spec).first;
}

// The two plan listings from the TableMover walkthrough.
inline const char* kTableMoverConcurrentPlan =
    "(to-table a1 r1 s2)(pickup-floor a2 b1 r1)\n"
    "(putdown-table a2 b1 r1)\n"
    "(to-table a2 r1 s1)\n"
    "(lift-side a1 s2)(lift-side a2 s1)\n"
    "(move-table a1 r1 r2 s2)(move-table a2 r1 r2 s1)\n"
    "(lower-side a1 s2)\n";

inline const char* kTableMoverClassicalPrefix =
    "(select-phase )\n"
    "(select-to-table a1 r1 s2)\n"
    "(select-pickup-floor a2 b1 r1)\n"
    "(apply-phase )\n"
    "(do-pickup-floor a2 b1 r1)\n"
    "(do-to-table a1 r1 s2)\n"
    "(reset-phase )\n"
    "(end-to-table a1 r1 s2)\n"
    "(end-pickup-floor a2 b1 r1)\n"
    "(finish )\n";

struct BfsResult {
  bool solvable = false;
  int shortest = -1;
  long long states = 0;  // visited states (all reachable when unsolvable)
};

// Plain breadth-first search, independent of the library's planner.
inline BfsResult bfs_classical(const cmap::ClassicalProblem& p,
                               long long cap = 2'000'000) {
  std::unordered_map<cmap::State, int, cmap::StateHash> dist;
  std::deque<cmap::State> queue;
  dist.emplace(p.init, 0);
  queue.push_back(p.init);
  if (cmap::holds(p.goal, p.init)) return {true, 0, 1};
  while (!queue.empty()) {
    cmap::State s = queue.front();
    queue.pop_front();
    int d = dist.at(s);
    for (int a = 0; a < static_cast<int>(p.actions.size()); ++a) {
      if (!cmap::applicable(p, s, a)) continue;
      cmap::State succ = cmap::step_classical(p, s, a);
      if (dist.count(succ)) continue;
      dist.emplace(succ, d + 1);
      if (cmap::holds(p.goal, succ))
        return {true, d + 1, static_cast<long long>(dist.size())};
      if (static_cast<long long>(dist.size()) > cap)
        throw std::runtime_error("bfs oracle exceeded its state cap");
      queue.push_back(std::move(succ));
    }
  }
  return {false, -1, static_cast<long long>(dist.size())};
}

// Brute-force well-definedness of a literal list: no fluent appears with
// both polarities.  Quadratic on purpose.
inline bool naive_well_defined(const std::vector<cmap::Lit>& lits) {
  for (std::size_t i = 0; i < lits.size(); ++i)
    for (std::size_t j = i + 1; j < lits.size(); ++j)
      if (lits[i].var == lits[j].var && lits[i].pos != lits[j].pos)
        return false;
  return true;
}

// All nonempty joint-action member sets with at most one action per
// agent, as sorted id vectors in lexicographic order.
inline std::vector<std::vector<int>> all_member_sets(
    const cmap::MapProblem& p) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, std::size_t agent) -> void {
    if (agent == p.agents.size()) {
      if (!cur.empty()) out.push_back(cur);
      return;
    }
    self(self, agent + 1);
    for (int a : p.agent_actions[agent]) {
      cur.push_back(a);
      self(self, agent + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  for (auto& m : out) std::sort(m.begin(), m.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace support

#endif  // TESTS_SUPPORT_HPP
