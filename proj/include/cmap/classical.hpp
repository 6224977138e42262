#ifndef CMAP_CLASSICAL_HPP
#define CMAP_CLASSICAL_HPP

// Grounded classical planning problems with conditional effects and
// negative preconditions/goals, plus the sequential transition function.
// Compiled problems carry a provenance record per action so plans can be
// decoded back into joint actions.

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "cmap/model.hpp"

namespace cmap {

struct CompileOptions {
  bool neg_in_select = true;
  int bound = 0;  // 0 means unbounded; otherwise C >= 1

  bool bounded() const { return bound > 0; }
};

enum class CompiledKind {
  PhaseSelect,
  PhaseApply,
  PhaseReset,
  Finish,
  Select,
  Do,
  End,
  Joint,  // naive compilation macro
  Plain,  // ordinary classical action
};

inline const char* compiled_kind_name(CompiledKind k) {
  switch (k) {
    case CompiledKind::PhaseSelect: return "select-phase";
    case CompiledKind::PhaseApply: return "apply-phase";
    case CompiledKind::PhaseReset: return "reset-phase";
    case CompiledKind::Finish: return "finish";
    case CompiledKind::Select: return "select";
    case CompiledKind::Do: return "do";
    case CompiledKind::End: return "end";
    case CompiledKind::Joint: return "joint";
    case CompiledKind::Plain: return "plain";
  }
  return "?";
}

struct Provenance {
  CompiledKind kind = CompiledKind::Plain;
  int atomic = -1;   // atomic action id for Select/Do/End
  int counter = -1;  // count(j) consumed, for bounded select/end variants
  std::vector<int> members;  // atomic action ids for Joint
};

struct CondEff {
  LitSet cond;
  LitSet eff;
};

struct ClassicalAction {
  Sym name;
  LitSet pre;
  std::vector<CondEff> effects;
};

struct ClassicalProblem {
  std::string name;
  std::vector<Sym> fluents;
  std::vector<ClassicalAction> actions;
  State init;
  LitSet goal;
  std::vector<Provenance> provenance;  // parallel to actions
  int base_fluents = 0;  // ids [0, base_fluents) are the original MAP fluents
  CompileOptions opts;

  std::unordered_map<std::string, int> fluent_ids;
  std::unordered_map<std::string, int> action_ids;          // display form
  std::unordered_map<std::string, int> action_mangled_ids;  // mangled form

  void build_index() {
    fluent_ids.clear();
    action_ids.clear();
    action_mangled_ids.clear();
    for (std::size_t i = 0; i < fluents.size(); ++i)
      fluent_ids.emplace(fluents[i].display(), static_cast<int>(i));
    for (std::size_t i = 0; i < actions.size(); ++i) {
      action_ids.emplace(actions[i].name.display(), static_cast<int>(i));
      action_mangled_ids.emplace(actions[i].name.mangled(),
                                 static_cast<int>(i));
    }
  }

  int fluent_id(const std::string& display) const {
    auto it = fluent_ids.find(display);
    return it == fluent_ids.end() ? -1 : it->second;
  }

  int action_id(const std::string& display) const {
    auto it = action_ids.find(display);
    return it == action_ids.end() ? -1 : it->second;
  }

  int action_id_mangled(const std::string& mangled) const {
    auto it = action_mangled_ids.find(mangled);
    return it == action_mangled_ids.end() ? -1 : it->second;
  }
};

using ClassicalPlan = std::vector<int>;  // action ids

inline bool applicable(const ClassicalProblem& p, const State& s, int a) {
  return holds(p.actions[a].pre, s);
}

// Union of the effects whose conditions hold in s; throws on a
// conflicting union (ill-defined effect).
inline LitSet triggered_effect(const ClassicalProblem& p, const State& s,
                               int a) {
  LitSet out;
  for (const CondEff& ce : p.actions[a].effects)
    if (holds(ce.cond, s))
      out.insert(out.end(), ce.eff.begin(), ce.eff.end());
  return make_lit_set(std::move(out));
}

inline State step_classical(const ClassicalProblem& p, const State& s, int a) {
  return apply_effect(s, triggered_effect(p, s, a));
}

// Canonical text form of the solvability-relevant structure: action
// bodies, initial atoms, and goal, all by mangled name.  Two problems
// with equal signatures are isomorphic for planning purposes.
inline std::string canonical_signature(const ClassicalProblem& p) {
  auto lit_name = [&](const Lit& l) {
    return (l.pos ? std::string() : std::string("!")) +
           p.fluents[l.var].mangled();
  };
  auto lit_set = [&](const LitSet& ls) {
    std::set<std::string> names;
    for (const Lit& l : ls) names.insert(lit_name(l));
    std::string out;
    for (const auto& n : names) out += n + " ";
    return out;
  };
  std::map<std::string, std::string> acts;
  for (const ClassicalAction& a : p.actions) {
    std::string body = "pre{" + lit_set(a.pre) + "}";
    // Effects with equal conditions are merged so that splitting one
    // conditional effect into several does not change the signature.
    std::map<std::string, std::set<std::string>> by_cond;
    for (const CondEff& ce : a.effects) {
      auto& bucket = by_cond[lit_set(ce.cond)];
      for (const Lit& l : ce.eff) bucket.insert(lit_name(l));
    }
    for (const auto& [cond, effs] : by_cond) {
      body += "[" + cond + ">";
      for (const auto& e : effs) body += e + " ";
      body += "]";
    }
    acts[a.name.mangled()] = body;
  }
  std::set<std::string> init_atoms;
  for (int v : p.init.true_atoms()) init_atoms.insert(p.fluents[v].mangled());
  std::string out;
  for (const auto& [n, b] : acts) out += n + ":" + b + "\n";
  out += "init:";
  for (const auto& n : init_atoms) out += " " + n;
  out += "\ngoal:" + lit_set(p.goal) + "\n";
  return out;
}

}  // namespace cmap

#endif  // CMAP_CLASSICAL_HPP
