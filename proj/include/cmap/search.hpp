#ifndef CMAP_SEARCH_HPP
#define CMAP_SEARCH_HPP

// Built-in satisficing planner: greedy best-first search with FIFO
// tie-breaking, duplicate pruning via a closed set, and a choice of
// goal-count or additive delete-relaxation heuristic.  Deterministic by
// construction: successors are generated in action-id order.

#include <chrono>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "cmap/classical.hpp"
#include "cmap/model.hpp"

namespace cmap {

struct SearchConfig {
  enum class Heuristic { GoalCount, Additive };

  Heuristic heuristic = Heuristic::Additive;
  long long node_cap = 1'000'000;
  double timeout_s = 300.0;
  unsigned seed = 0;  // reserved; search is deterministic regardless
};

struct SearchStats {
  long long expansions = 0;
  long long generations = 0;
  double seconds = 0;
  int plan_length = -1;
  std::size_t peak_open = 0;
  std::size_t peak_closed = 0;
};

enum class SearchStatus { Solved, Unsolvable, Timeout };

struct SearchResult {
  SearchStatus status = SearchStatus::Unsolvable;
  ClassicalPlan plan;
  SearchStats stats;
};

namespace sdetail {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

// Relaxed sub-actions for the additive heuristic: one per conditional
// effect, with the action precondition folded into the condition.
// Propositions are literals: prop(v, true) = 2v+1, prop(v, false) = 2v.
struct RelaxedTask {
  struct Sub {
    std::vector<int> conds;
    std::vector<int> adds;
  };
  std::vector<Sub> subs;
  std::vector<int> goal_props;
  int num_props = 0;

  explicit RelaxedTask(const ClassicalProblem& p) {
    num_props = 2 * static_cast<int>(p.fluents.size());
    auto prop = [](const Lit& l) { return 2 * l.var + (l.pos ? 1 : 0); };
    for (const ClassicalAction& a : p.actions) {
      for (const CondEff& ce : a.effects) {
        Sub s;
        for (const Lit& l : a.pre) s.conds.push_back(prop(l));
        for (const Lit& l : ce.cond) s.conds.push_back(prop(l));
        for (const Lit& l : ce.eff) s.adds.push_back(prop(l));
        subs.push_back(std::move(s));
      }
    }
    for (const Lit& l : p.goal) goal_props.push_back(prop(l));
  }

  int additive(const State& s) const {
    std::vector<int> cost(num_props, kInf);
    for (int v = 0; v < static_cast<int>(s.size()); ++v)
      cost[2 * v + (s.test(v) ? 1 : 0)] = 0;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Sub& sub : subs) {
        long long c = 1;
        for (int pr : sub.conds) {
          if (cost[pr] >= kInf) {
            c = kInf;
            break;
          }
          c += cost[pr];
          if (c >= kInf) {
            c = kInf;
            break;
          }
        }
        if (c >= kInf) continue;
        for (int pr : sub.adds)
          if (c < cost[pr]) {
            cost[pr] = static_cast<int>(c);
            changed = true;
          }
      }
    }
    long long h = 0;
    for (int pr : goal_props) {
      if (cost[pr] >= kInf) return kInf;
      h += cost[pr];
    }
    return static_cast<int>(h > kInf ? kInf : h);
  }
};

}  // namespace sdetail

inline int heuristic(const State& s, const ClassicalProblem& p,
                     SearchConfig::Heuristic kind) {
  if (kind == SearchConfig::Heuristic::GoalCount) {
    int h = 0;
    for (const Lit& l : p.goal)
      if (s.test(l.var) != l.pos) ++h;
    return h;
  }
  sdetail::RelaxedTask task(p);
  return task.additive(s);
}

inline SearchResult solve(const ClassicalProblem& p,
                          const SearchConfig& cfg = {}) {
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&t0]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  SearchResult res;
  sdetail::RelaxedTask relaxed(p);
  auto h_of = [&](const State& s) {
    if (cfg.heuristic == SearchConfig::Heuristic::GoalCount)
      return heuristic(s, p, cfg.heuristic);
    return relaxed.additive(s);
  };

  struct Node {
    State s;
    int parent;
    int action;
  };
  std::vector<Node> nodes;
  std::unordered_map<State, int, StateHash> seen;

  // Min-heap on (h, insertion order): greedy best-first, FIFO ties.
  using Entry = std::pair<std::pair<int, long long>, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  long long seq = 0;

  auto extract_plan = [&](int node) {
    ClassicalPlan plan;
    for (int i = node; nodes[i].parent >= 0; i = nodes[i].parent)
      plan.push_back(nodes[i].action);
    std::reverse(plan.begin(), plan.end());
    return plan;
  };

  nodes.push_back(Node{p.init, -1, -1});
  seen.emplace(p.init, 0);
  if (holds(p.goal, p.init)) {
    res.status = SearchStatus::Solved;
    res.stats.plan_length = 0;
    res.stats.seconds = elapsed();
    return res;
  }
  open.push({{h_of(p.init), seq++}, 0});

  while (!open.empty()) {
    res.stats.peak_open = std::max(res.stats.peak_open, open.size());
    int cur = open.top().second;
    open.pop();
    ++res.stats.expansions;
    if ((res.stats.expansions & 1023) == 0 && elapsed() > cfg.timeout_s) {
      res.status = SearchStatus::Timeout;
      res.stats.seconds = elapsed();
      return res;
    }
    State s = nodes[cur].s;  // copy: nodes may reallocate below
    for (int a = 0; a < static_cast<int>(p.actions.size()); ++a) {
      if (!applicable(p, s, a)) continue;
      State succ = step_classical(p, s, a);
      if (seen.count(succ)) continue;
      int id = static_cast<int>(nodes.size());
      nodes.push_back(Node{succ, cur, a});
      seen.emplace(std::move(succ), id);
      ++res.stats.generations;
      if (res.stats.generations >= cfg.node_cap) {
        res.status = SearchStatus::Timeout;
        res.stats.seconds = elapsed();
        return res;
      }
      if (holds(p.goal, nodes[id].s)) {
        res.status = SearchStatus::Solved;
        res.plan = extract_plan(id);
        res.stats.plan_length = static_cast<int>(res.plan.size());
        res.stats.peak_closed = seen.size();
        res.stats.seconds = elapsed();
        // Self-check before returning: an emitted plan must execute.
        State check = p.init;
        for (int act : res.plan) {
          if (!applicable(p, check, act))
            throw std::logic_error("planner produced an inapplicable plan");
          check = step_classical(p, check, act);
        }
        if (!holds(p.goal, check))
          throw std::logic_error("planner produced a non-goal plan");
        return res;
      }
      open.push({{h_of(nodes[id].s), seq++}, id});
    }
  }
  // Open list exhausted: the reachable space has been enumerated.
  res.status = SearchStatus::Unsolvable;
  res.stats.peak_closed = seen.size();
  res.stats.seconds = elapsed();
  return res;
}

}  // namespace cmap

#endif  // CMAP_SEARCH_HPP
