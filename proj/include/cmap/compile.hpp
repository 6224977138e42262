#ifndef CMAP_COMPILE_HPP
#define CMAP_COMPILE_HPP

// Compilation of a multiagent problem into a classical one.  Each joint
// action is simulated by a selection phase, an application phase, and a
// reset phase; per atomic action the compilation emits select-, do- and
// end- actions.  Optional extensions: checking negative concurrency
// constraints at selection time via req-neg- fluents, and a bound C on
// joint-action size via count fluents on select/end actions.
//
// The naive baseline compiles one classical macro per admissible joint
// action instead, exponential in the number of agents.

#include <functional>
#include <string>
#include <vector>

#include "cmap/classical.hpp"
#include "cmap/model.hpp"
#include "cmap/semantics.hpp"

namespace cmap {

// Compiled identifiers reserve a handful of names and prefixes; user
// symbols that would collide get a marker prefix so decoding stays
// unambiguous.
inline std::string sanitize_symbol(const std::string& w) {
  static const char* reserved[] = {
      "free",        "select",      "apply",      "reset",      "finish",
      "free-agent",  "busy-agent",  "done-agent", "count",
      "select-phase", "apply-phase", "reset-phase",
  };
  static const char* prefixes[] = {"active-", "req-neg-", "select-",
                                   "do-",     "end-",     "count-",
                                   "joint-"};
  for (const char* r : reserved)
    if (w == r) return "u-" + w;
  for (const char* pre : prefixes)
    if (w.rfind(pre, 0) == 0) return "u-" + w;
  return w;
}

inline Sym sanitized(const Sym& s) {
  Sym out = s;
  if (!out.words.empty()) out.words[0] = sanitize_symbol(out.words[0]);
  return out;
}

inline long long expected_fluent_count(const MapProblem& p,
                                       const CompileOptions& opts) {
  long long n = static_cast<long long>(p.agents.size());
  long long sum_a = static_cast<long long>(p.actions.size());
  long long total = static_cast<long long>(p.fluents.size()) + 4 + 3 * n + sum_a;
  if (opts.neg_in_select) total += sum_a;
  if (opts.bounded()) total += opts.bound + 1;
  return total;
}

inline long long expected_action_count(const MapProblem& p,
                                       const CompileOptions& opts) {
  long long sum_a = static_cast<long long>(p.actions.size());
  if (opts.bounded()) return 4 + sum_a * (2LL * opts.bound + 1);
  return 4 + 3 * sum_a;
}

inline ClassicalProblem compile(const MapProblem& p,
                                const CompileOptions& opts) {
  ClassicalProblem cp;
  cp.name = p.name;
  cp.opts = opts;
  const int n = static_cast<int>(p.agents.size());
  const int num_atomic = static_cast<int>(p.actions.size());
  const int C = opts.bound;

  // Fluent layout: F, phase fluents, agent-state fluents, active-,
  // req-neg- (optional), count (optional).
  for (const Sym& f : p.fluents) cp.fluents.push_back(sanitized(f));
  cp.base_fluents = static_cast<int>(p.fluents.size());
  auto add_fluent = [&](std::vector<std::string> words) {
    cp.fluents.push_back(Sym{std::move(words)});
    return static_cast<int>(cp.fluents.size()) - 1;
  };
  const int f_free = add_fluent({"free"});
  const int f_select = add_fluent({"select"});
  const int f_apply = add_fluent({"apply"});
  const int f_reset = add_fluent({"reset"});
  std::vector<int> f_free_agent(n), f_busy_agent(n), f_done_agent(n);
  for (int i = 0; i < n; ++i)
    f_free_agent[i] = add_fluent({"free-agent", p.agents[i]});
  for (int i = 0; i < n; ++i)
    f_busy_agent[i] = add_fluent({"busy-agent", p.agents[i]});
  for (int i = 0; i < n; ++i)
    f_done_agent[i] = add_fluent({"done-agent", p.agents[i]});
  std::vector<int> f_active(num_atomic), f_req_neg(num_atomic, -1);
  auto derived_words = [&](const char* prefix, const AtomicAction& a) {
    std::vector<std::string> words;
    words.push_back(prefix + sanitize_symbol(a.schema));
    words.push_back(p.agents[a.agent]);
    for (const auto& arg : a.args) words.push_back(arg);
    return words;
  };
  for (int a = 0; a < num_atomic; ++a)
    f_active[a] = add_fluent(derived_words("active-", p.actions[a]));
  if (opts.neg_in_select)
    for (int a = 0; a < num_atomic; ++a)
      f_req_neg[a] = add_fluent(derived_words("req-neg-", p.actions[a]));
  std::vector<int> f_count;
  if (opts.bounded())
    for (int j = 0; j <= C; ++j)
      f_count.push_back(add_fluent({"count", "n" + std::to_string(j)}));

  auto add_action = [&](Sym name, LitSet pre, std::vector<CondEff> effs,
                        Provenance prov) {
    cp.actions.push_back(
        ClassicalAction{std::move(name), make_lit_set(std::move(pre)),
                        std::move(effs)});
    cp.provenance.push_back(std::move(prov));
  };

  // Phase-switch actions.
  add_action(Sym{{"select-phase"}}, {Lit{f_free, true}},
             {CondEff{{}, make_lit_set({Lit{f_free, false},
                                        Lit{f_select, true}})}},
             Provenance{CompiledKind::PhaseSelect});
  add_action(Sym{{"apply-phase"}}, {Lit{f_select, true}},
             {CondEff{{}, make_lit_set({Lit{f_select, false},
                                        Lit{f_apply, true}})}},
             Provenance{CompiledKind::PhaseApply});
  add_action(Sym{{"reset-phase"}}, {Lit{f_apply, true}},
             {CondEff{{}, make_lit_set({Lit{f_apply, false},
                                        Lit{f_reset, true}})}},
             Provenance{CompiledKind::PhaseReset});
  {
    LitSet pre{Lit{f_reset, true}};
    for (int i = 0; i < n; ++i) pre.push_back(Lit{f_free_agent[i], true});
    if (opts.bounded()) pre.push_back(Lit{f_count[0], true});
    add_action(Sym{{"finish"}}, std::move(pre),
               {CondEff{{}, make_lit_set({Lit{f_reset, false},
                                          Lit{f_free, true}})}},
               Provenance{CompiledKind::Finish});
  }

  // Only actions that are negatively referenced by someone can ever have
  // their req-neg marker set; checking it elsewhere would be vacuous.
  std::vector<char> neg_referenced(num_atomic, 0);
  if (opts.neg_in_select)
    for (const AtomicAction& act : p.actions)
      for (const ALit& l : act.pre_a)
        if (!l.pos) neg_referenced[l.act] = 1;

  auto subst_active = [&](const std::vector<ALit>& alits, bool positive_only) {
    LitSet out;
    for (const ALit& l : alits) {
      if (positive_only && !l.pos) continue;
      out.push_back(Lit{f_active[l.act], l.pos});
    }
    return out;
  };

  for (int a = 0; a < num_atomic; ++a) {
    const AtomicAction& act = p.actions[a];
    const int i = act.agent;

    // select-a: commit to the action during the selection phase.
    auto select_body = [&](int counter) {
      LitSet pre{Lit{f_select, true}, Lit{f_free_agent[i], true}};
      pre.insert(pre.end(), act.pre_f.begin(), act.pre_f.end());
      LitSet eff{Lit{f_busy_agent[i], true}, Lit{f_free_agent[i], false},
                 Lit{f_active[a], true}};
      if (opts.neg_in_select) {
        if (neg_referenced[a]) pre.push_back(Lit{f_req_neg[a], false});
        for (const ALit& l : act.pre_a)
          if (!l.pos) {
            pre.push_back(Lit{f_active[l.act], false});
            eff.push_back(Lit{f_req_neg[l.act], true});
          }
      }
      Sym name{derived_words("select-", act)};
      if (counter >= 0) {
        pre.push_back(Lit{f_count[counter], true});
        eff.push_back(Lit{f_count[counter], false});
        eff.push_back(Lit{f_count[counter + 1], true});
        name.words.push_back("n" + std::to_string(counter));
      }
      add_action(std::move(name), std::move(pre),
                 {CondEff{{}, make_lit_set(std::move(eff))}},
                 Provenance{CompiledKind::Select, a, counter});
    };
    if (opts.bounded())
      for (int j = 0; j < C; ++j) select_body(j);
    else
      select_body(-1);

    // do-a: apply the effects once all selections are known.
    {
      LitSet pre{Lit{f_apply, true}, Lit{f_busy_agent[i], true},
                 Lit{f_active[a], true}};
      // With the selection-phase extension only positive concurrency
      // constraints still need checking here.
      LitSet mapped = subst_active(act.pre_a, opts.neg_in_select);
      pre.insert(pre.end(), mapped.begin(), mapped.end());
      std::vector<CondEff> effs;
      effs.push_back(
          CondEff{{}, make_lit_set({Lit{f_done_agent[i], true},
                                    Lit{f_busy_agent[i], false}})});
      for (const CondEffect& ce : act.effects) {
        LitSet cond = ce.cond_f;
        LitSet mapped_cond = subst_active(ce.cond_a, false);
        cond.insert(cond.end(), mapped_cond.begin(), mapped_cond.end());
        effs.push_back(CondEff{make_lit_set(std::move(cond)), ce.effect});
      }
      add_action(Sym{derived_words("do-", act)}, std::move(pre),
                 std::move(effs), Provenance{CompiledKind::Do, a});
    }

    // end-a: restore auxiliary fluents in the reset phase.
    auto end_body = [&](int counter) {
      LitSet pre{Lit{f_reset, true}, Lit{f_done_agent[i], true},
                 Lit{f_active[a], true}};
      LitSet eff{Lit{f_free_agent[i], true}, Lit{f_done_agent[i], false},
                 Lit{f_active[a], false}};
      if (opts.neg_in_select)
        for (const ALit& l : act.pre_a)
          if (!l.pos) eff.push_back(Lit{f_req_neg[l.act], false});
      Sym name{derived_words("end-", act)};
      if (counter >= 0) {
        pre.push_back(Lit{f_count[counter], true});
        eff.push_back(Lit{f_count[counter], false});
        eff.push_back(Lit{f_count[counter - 1], true});
        name.words.push_back("n" + std::to_string(counter));
      }
      add_action(std::move(name), std::move(pre),
                 {CondEff{{}, make_lit_set(std::move(eff))}},
                 Provenance{CompiledKind::End, a, counter});
    };
    if (opts.bounded())
      for (int j = 1; j <= C; ++j) end_body(j);
    else
      end_body(-1);
  }

  cp.init = State(static_cast<int>(cp.fluents.size()));
  for (int v : p.init.true_atoms()) cp.init.set(v, true);
  cp.init.set(f_free, true);
  for (int i = 0; i < n; ++i) cp.init.set(f_free_agent[i], true);
  if (opts.bounded()) cp.init.set(f_count[0], true);

  LitSet goal = p.goal;
  goal.push_back(Lit{f_free, true});
  cp.goal = make_lit_set(std::move(goal));
  cp.build_index();
  return cp;
}

// Naive baseline: one classical macro per joint action of size at most
// max_size whose concurrency constraints are internally satisfied and
// whose precondition/unconditional-effect unions do not conflict.
// Conditional effects are rewritten by evaluating their action part
// against the combination at compile time.
inline ClassicalProblem naive_compile(const MapProblem& p, int max_size) {
  ClassicalProblem cp;
  cp.name = p.name;
  cp.opts = CompileOptions{false, 0};
  for (const Sym& f : p.fluents) cp.fluents.push_back(sanitized(f));
  cp.base_fluents = static_cast<int>(cp.fluents.size());
  cp.init = p.init;
  cp.goal = p.goal;

  const int n = static_cast<int>(p.agents.size());
  std::vector<int> chosen;                       // current member set
  std::vector<int> required(n, -1);              // forced pick per agent
  std::vector<int> forbidden(p.actions.size(), 0);

  std::function<void()> emit = [&]() {
    std::vector<Lit> pre;
    std::vector<Lit> uncond;
    std::vector<CondEff> cond_effs;
    for (int m : chosen) {
      const AtomicAction& act = p.actions[m];
      pre.insert(pre.end(), act.pre_f.begin(), act.pre_f.end());
      for (const CondEffect& ce : act.effects) {
        bool a_holds = true;
        for (const ALit& l : ce.cond_a) {
          bool in = std::binary_search(chosen.begin(), chosen.end(), l.act);
          if (in != l.pos) {
            a_holds = false;
            break;
          }
        }
        if (!a_holds) continue;
        if (ce.cond_f.empty())
          uncond.insert(uncond.end(), ce.effect.begin(), ce.effect.end());
        else
          cond_effs.push_back(CondEff{ce.cond_f, ce.effect});
      }
    }
    LitSet pre_set, uncond_set;
    try {
      pre_set = make_lit_set(std::move(pre));
      uncond_set = make_lit_set(std::move(uncond));
    } catch (const ModelError&) {
      return;  // conflicting combination
    }
    ClassicalAction a;
    a.name.words.push_back("joint-action");
    for (int m : chosen) a.name.words.push_back(p.actions[m].name.mangled());
    a.pre = std::move(pre_set);
    if (!uncond_set.empty()) a.effects.push_back(CondEff{{}, uncond_set});
    for (auto& ce : cond_effs) a.effects.push_back(std::move(ce));
    cp.provenance.push_back(Provenance{CompiledKind::Joint, -1, -1, chosen});
    cp.actions.push_back(std::move(a));
  };

  // Depth-first over agents; positive constraints propagate as forced
  // picks, negative ones as forbidden actions.
  std::function<void(int)> dfs = [&](int agent) {
    if (agent == n) {
      if (!chosen.empty() &&
          static_cast<int>(chosen.size()) <= max_size)
        emit();
      return;
    }
    if (required[agent] == -1) {
      dfs(agent + 1);  // agent sits this one out
    }
    for (int cand : p.agent_actions[agent]) {
      if (required[agent] != -1 && required[agent] != cand) continue;
      if (forbidden[cand] > 0) continue;
      if (static_cast<int>(chosen.size()) >= max_size) continue;
      const AtomicAction& act = p.actions[cand];
      bool ok = true;
      std::vector<int> req_set;   // agents whose requirement we set
      std::vector<int> forb_set;  // actions we forbade
      for (const ALit& l : act.pre_a) {
        int tgt_agent = p.actions[l.act].agent;
        if (l.pos) {
          if (l.act == cand) continue;  // self, trivially in
          if (tgt_agent == agent) {
            ok = false;  // needs a second action of the same agent
            break;
          }
          if (tgt_agent < agent) {
            if (!std::binary_search(chosen.begin(), chosen.end(), l.act)) {
              ok = false;
              break;
            }
          } else {
            if (required[tgt_agent] == -1) {
              required[tgt_agent] = l.act;
              req_set.push_back(tgt_agent);
            } else if (required[tgt_agent] != l.act) {
              ok = false;
              break;
            }
          }
        } else {
          if (l.act == cand) {
            ok = false;  // negates itself
            break;
          }
          if (tgt_agent < agent &&
              std::binary_search(chosen.begin(), chosen.end(), l.act)) {
            ok = false;
            break;
          }
          if (tgt_agent > agent) {
            ++forbidden[l.act];
            forb_set.push_back(l.act);
          }
        }
      }
      if (ok) {
        chosen.push_back(cand);
        dfs(agent + 1);
        chosen.pop_back();
      }
      for (int t : req_set) required[t] = -1;
      for (int t : forb_set) --forbidden[t];
    }
  };
  dfs(0);
  cp.build_index();
  return cp;
}

}  // namespace cmap

#endif  // CMAP_COMPILE_HPP
