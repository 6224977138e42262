#ifndef CMAP_PDDL_IO_HPP
#define CMAP_PDDL_IO_HPP

// Textual interfaces: emitting compiled problems as classical PDDL,
// the provenance sidecar, classical plan files (one action per line),
// and concurrent plan files (one joint action per line, concatenated
// parenthesized atomic actions).

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmap/classical.hpp"
#include "cmap/model.hpp"
#include "cmap/semantics.hpp"
#include "cmap/sexpr.hpp"

namespace cmap {

struct EmittedPddl {
  std::string domain;
  std::string problem;
};

inline EmittedPddl emit_classical_pddl(const ClassicalProblem& p) {
  // Predicate table: head word -> arity, checked for consistency.
  std::map<std::string, int> preds;
  std::set<std::string> constants;
  auto visit_sym = [&](const Sym& s) {
    int arity = static_cast<int>(s.words.size()) - 1;
    auto [it, inserted] = preds.emplace(s.words[0], arity);
    if (!inserted && it->second != arity)
      throw std::runtime_error("predicate '" + s.words[0] +
                               "' used with two arities");
    for (std::size_t i = 1; i < s.words.size(); ++i)
      constants.insert(s.words[i]);
  };
  for (const Sym& f : p.fluents) visit_sym(f);
  for (const ClassicalAction& a : p.actions)
    for (std::size_t i = 1; i < a.name.words.size(); ++i)
      constants.insert(a.name.words[i]);

  auto atom = [&](int var) { return p.fluents[var].display(); };
  auto lit = [&](const Lit& l) {
    return l.pos ? atom(l.var) : "(not " + atom(l.var) + ")";
  };
  auto lit_conj = [&](const LitSet& ls) {
    std::string out = "(and";
    for (const Lit& l : ls) out += " " + lit(l);
    out += ")";
    return out;
  };

  std::ostringstream dom;
  dom << "(define (domain " << p.name << "-compiled)\n";
  dom << "  (:requirements :strips :negative-preconditions"
         " :conditional-effects)\n";
  if (!constants.empty()) {
    dom << "  (:constants";
    for (const auto& c : constants) dom << " " << c;
    dom << ")\n";
  }
  dom << "  (:predicates\n";
  for (const auto& [name, arity] : preds) {
    dom << "    (" << name;
    for (int i = 0; i < arity; ++i) dom << " ?x" << i;
    dom << ")\n";
  }
  dom << "  )\n";
  for (const ClassicalAction& a : p.actions) {
    dom << "  (:action " << a.name.mangled() << "\n";
    dom << "    :parameters ()\n";
    dom << "    :precondition " << lit_conj(a.pre) << "\n";
    dom << "    :effect (and";
    for (const CondEff& ce : a.effects) {
      if (ce.cond.empty()) {
        for (const Lit& l : ce.eff) dom << " " << lit(l);
      } else {
        dom << " (when " << lit_conj(ce.cond) << " " << lit_conj(ce.eff)
            << ")";
      }
    }
    dom << ")\n  )\n";
  }
  dom << ")\n";

  std::ostringstream prob;
  prob << "(define (problem " << p.name << "-compiled)\n";
  prob << "  (:domain " << p.name << "-compiled)\n";
  prob << "  (:init\n";
  for (int v : p.init.true_atoms()) prob << "    " << atom(v) << "\n";
  prob << "  )\n";
  prob << "  (:goal (and";
  for (const Lit& l : p.goal) prob << " " << lit(l);
  prob << "))\n)\n";

  return EmittedPddl{dom.str(), prob.str()};
}

// Provenance sidecar: enough to interpret an external planner's plan
// over the emitted PDDL.
inline std::string emit_sidecar(const ClassicalProblem& p) {
  nlohmann::json j;
  j["problem"] = p.name;
  j["options"] = {{"neg_in_select", p.opts.neg_in_select},
                  {"bound", p.opts.bound}};
  nlohmann::json actions = nlohmann::json::object();
  for (std::size_t i = 0; i < p.actions.size(); ++i) {
    const Provenance& pr = p.provenance[i];
    nlohmann::json e;
    e["kind"] = compiled_kind_name(pr.kind);
    if (pr.atomic >= 0) e["atomic"] = pr.atomic;
    if (pr.counter >= 0) e["counter"] = pr.counter;
    if (!pr.members.empty()) e["members"] = pr.members;
    actions[p.actions[i].name.mangled()] = std::move(e);
  }
  j["actions"] = std::move(actions);
  return j.dump(2) + "\n";
}

class PlanParseError : public std::runtime_error {
 public:
  explicit PlanParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// One parenthesized action per line; `;` comments and blank lines are
// ignored.  Returns the word lists.
inline std::vector<std::vector<std::string>> parse_plan_tokens(
    std::string_view text) {
  SExprReader reader(text);
  std::vector<std::vector<std::string>> out;
  while (!reader.at_end()) {
    SExpr e = reader.read();
    if (e.is_atom)
      throw PlanParseError(e.pos.str() + ": expected a parenthesized action");
    std::vector<std::string> words;
    for (const SExpr& w : e.items) {
      if (!w.is_atom)
        throw PlanParseError(w.pos.str() + ": nested list in action");
      words.push_back(w.text);
    }
    if (words.empty())
      throw PlanParseError(e.pos.str() + ": empty action");
    out.push_back(std::move(words));
  }
  return out;
}

// Classical plan file against a compiled problem.  Accepts both the
// display form `(select-to-table a1 r1 s2)` and the mangled form
// `(select-to-table-a1-r1-s2)` that external planners print.
inline ClassicalPlan parse_classical_plan(std::string_view text,
                                          const ClassicalProblem& p) {
  ClassicalPlan plan;
  for (const auto& words : parse_plan_tokens(text)) {
    Sym sym{words};
    int id = p.action_id(sym.display());
    if (id < 0) id = p.action_id_mangled(sym.mangled());
    if (id < 0)
      throw PlanParseError("unknown action " + sym.display());
    plan.push_back(id);
  }
  return plan;
}

inline std::string write_classical_plan(const ClassicalPlan& plan,
                                        const ClassicalProblem& p) {
  std::string out;
  for (int id : plan) out += p.actions[id].name.display() + "\n";
  return out;
}

// Concurrent plan file: one joint action per line, e.g.
// `(lift-side a1 s2)(lift-side a2 s1)`.
inline ConcurrentPlan parse_concurrent_plan(std::string_view text,
                                            const MapProblem& p) {
  ConcurrentPlan plan;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string stripped = line.substr(0, line.find(';'));
    if (stripped.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<int> members;
    for (const auto& words : parse_plan_tokens(stripped)) {
      Sym sym{words};
      int id = p.action_id(sym.display());
      if (id < 0) throw PlanParseError("unknown atomic action " + sym.display());
      members.push_back(id);
    }
    plan.steps.push_back(make_joint_action(std::move(members), p));
  }
  return plan;
}

inline std::string write_concurrent_plan(const ConcurrentPlan& plan,
                                         const MapProblem& p) {
  std::string out;
  for (const JointAction& ja : plan.steps) {
    for (int m : ja.members) out += p.actions[m].name.display();
    out += "\n";
  }
  return out;
}

inline std::string report_to_text(const ValidationReport& rep) {
  std::ostringstream out;
  out << (rep.valid ? "VALID" : "INVALID") << "\n";
  for (std::size_t i = 0; i < rep.steps.size(); ++i)
    out << "step " << i << ": state " << std::hex
        << rep.steps[i].state_digest << std::dec << "\n";
  if (rep.failure)
    out << "failure at step " << rep.failure->step << ": "
        << fail_reason_name(rep.failure->reason) << " (" << rep.failure->detail
        << ")\n";
  return out.str();
}

inline std::string report_to_json(const ValidationReport& rep,
                                  const MapProblem* mp = nullptr) {
  nlohmann::json j;
  j["valid"] = rep.valid;
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : rep.steps) {
    nlohmann::json e;
    e["state_digest"] = s.state_digest;
    if (mp && !s.joint.members.empty()) {
      nlohmann::json members = nlohmann::json::array();
      for (int m : s.joint.members)
        members.push_back(mp->actions[m].name.display());
      e["joint"] = std::move(members);
    }
    steps.push_back(std::move(e));
  }
  j["steps"] = std::move(steps);
  if (rep.failure) {
    j["failure"] = {{"step", rep.failure->step},
                    {"reason", fail_reason_name(rep.failure->reason)},
                    {"detail", rep.failure->detail}};
  }
  return j.dump(2) + "\n";
}

}  // namespace cmap

#endif  // CMAP_PDDL_IO_HPP
