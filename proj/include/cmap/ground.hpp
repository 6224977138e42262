#ifndef CMAP_GROUND_HPP
#define CMAP_GROUND_HPP

// Instantiates schema actions over typed objects into ground atomic
// actions.  `forall` expands to the conjunction over all type-consistent
// bindings, `when` becomes one conditional effect per binding, statics
// are evaluated against the initial state and pruned, and action atoms
// resolve to ground action ids.
//
// Equality atoms inside a `forall` body act as binding filters: a
// binding whose equality conjuncts are false contributes nothing.  This
// is what makes "no *other* agent" constraints expressible without
// disjunction.

#include <chrono>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cmap/ast.hpp"
#include "cmap/classical.hpp"
#include "cmap/model.hpp"

namespace cmap {

class GroundError : public std::runtime_error {
 public:
  explicit GroundError(const std::string& msg) : std::runtime_error(msg) {}
};

struct GroundingReport {
  int num_fluents = 0;
  std::vector<int> per_agent;  // |A^i| in agent order
  long long pruned = 0;        // candidates dropped by statics/constraints
  double millis = 0;

  int total_actions() const {
    return std::accumulate(per_agent.begin(), per_agent.end(), 0);
  }
};

namespace gdetail {

using Env = std::unordered_map<std::string, std::string>;

struct ARef {
  std::string key;  // ground display form "(schema agent args...)"
  bool pos = true;
};

struct PreAcc {
  std::vector<Lit> lits;
  std::vector<ARef> arefs;
};

struct CEAcc {
  PreAcc cond;
  std::vector<Lit> eff;
};

struct Candidate {
  Sym name;
  std::string schema;
  std::string agent_obj;
  std::vector<std::string> args;
  PreAcc pre;
  std::vector<Lit> uncond_eff;
  std::vector<CEAcc> cond_effs;
  bool alive = true;
};

struct Grounder {
  const DomainAst& d;
  const ProblemAst& p;

  std::vector<TypedVar> objects;                    // problem + constants
  std::unordered_map<std::string, std::string> object_type;
  std::unordered_set<std::string> static_preds;
  std::unordered_set<std::string> init_truth;       // "(pred args)" display
  std::vector<Sym> fluents;
  std::unordered_map<std::string, int> fluent_ids;
  long long pruned = 0;

  Grounder(const DomainAst& d, const ProblemAst& p) : d(d), p(p) {
    objects = p.objects;
    for (const auto& o : objects) object_type[o.name] = o.type;
    compute_statics();
    for (const auto& atom : p.init)
      init_truth.insert(atom_display(atom.pred, atom.args));
  }

  static std::string atom_display(const std::string& pred,
                                  const std::vector<std::string>& args) {
    std::string s = "(" + pred;
    for (const auto& a : args) s += " " + a;
    s += ")";
    return s;
  }

  std::vector<std::string> objects_of(const std::string& type) const {
    std::vector<std::string> out;
    for (const auto& o : objects)
      if (d.subtype_of(o.type, type)) out.push_back(o.name);
    return out;
  }

  void compute_statics() {
    std::unordered_set<std::string> affected;
    for (const auto& a : d.actions) collect_effect_preds(a.eff, affected);
    for (const auto& [atom, pos] : p.goal) affected.insert(atom.pred);
    for (const auto& pred : d.predicates)
      if (!affected.count(pred.name)) static_preds.insert(pred.name);
  }

  static void collect_effect_preds(const Formula& f,
                                   std::unordered_set<std::string>& out) {
    switch (f.kind) {
      case Formula::Kind::PredAtom:
        out.insert(f.head);
        break;
      case Formula::Kind::Not:
        collect_effect_preds(f.kids[0], out);
        break;
      case Formula::Kind::And:
      case Formula::Kind::Forall:
        for (const auto& k : f.kids) collect_effect_preds(k, out);
        break;
      case Formula::Kind::When:
        collect_effect_preds(f.kids[1], out);  // consequent only
        break;
      default:
        break;
    }
  }

  void enumerate_fluents() {
    for (const auto& pred : d.predicates) {
      if (static_preds.count(pred.name)) continue;
      std::vector<std::vector<std::string>> domains;
      for (const auto& param : pred.params)
        domains.push_back(objects_of(param.type));
      std::vector<std::string> args(pred.params.size());
      enumerate(domains, 0, args, [&]() {
        Sym sym;
        sym.words.push_back(pred.name);
        for (const auto& a : args) sym.words.push_back(a);
        fluent_ids.emplace(sym.display(), static_cast<int>(fluents.size()));
        fluents.push_back(std::move(sym));
      });
    }
  }

  template <typename Fn>
  static void enumerate(const std::vector<std::vector<std::string>>& domains,
                        std::size_t i, std::vector<std::string>& args,
                        Fn&& fn) {
    if (i == domains.size()) {
      fn();
      return;
    }
    for (const auto& obj : domains[i]) {
      args[i] = obj;
      enumerate(domains, i + 1, args, fn);
    }
  }

  std::string resolve(const Term& t, const Env& env) const {
    if (t.is_var()) {
      auto it = env.find(t.text);
      if (it == env.end())
        throw GroundError("unbound variable " + t.text + " after expansion");
      return it->second;
    }
    if (!object_type.count(t.text))
      throw GroundError("unknown object '" + t.text + "' in formula");
    return t.text;
  }

  bool static_truth(const std::string& pred,
                    const std::vector<std::string>& args) const {
    return init_truth.count(atom_display(pred, args)) > 0;
  }

  int fluent_of(const std::string& pred, const std::vector<std::string>& args,
                SourcePos pos) const {
    auto it = fluent_ids.find(atom_display(pred, args));
    if (it == fluent_ids.end())
      throw GroundError(pos.str() + ": atom " + atom_display(pred, args) +
                        " is not in the fluent universe (type mismatch?)");
    return it->second;
  }

  std::vector<std::string> ground_args(const Formula& f, const Env& env) const {
    std::vector<std::string> out;
    out.reserve(f.args.size());
    for (const auto& t : f.args) out.push_back(resolve(t, env));
    return out;
  }

  // Returns false when the (sub)formula is statically unsatisfiable,
  // which kills the whole candidate.
  bool eval_pre(const Formula& f, const Env& env, bool positive, PreAcc& acc,
                bool allow_actions) {
    switch (f.kind) {
      case Formula::Kind::And:
        for (const auto& k : f.kids)
          if (!eval_pre(k, env, positive, acc, allow_actions)) return false;
        return true;
      case Formula::Kind::Not:
        return eval_pre(f.kids[0], env, !positive, acc, allow_actions);
      case Formula::Kind::Equality: {
        bool eq = resolve(f.args[0].text[0] == '?' ? f.args[0] : f.args[0],
                          env) == resolve(f.args[1], env);
        return eq == positive;
      }
      case Formula::Kind::PredAtom: {
        auto args = ground_args(f, env);
        if (static_preds.count(f.head))
          return static_truth(f.head, args) == positive;
        acc.lits.push_back(Lit{fluent_of(f.head, args, f.pos), positive});
        return true;
      }
      case Formula::Kind::ActionAtom: {
        if (!allow_actions)
          throw GroundError(f.pos.str() +
                            ": action atom not allowed in this context");
        auto args = ground_args(f, env);
        acc.arefs.push_back(ARef{atom_display(f.head, args), positive});
        return true;
      }
      case Formula::Kind::Forall:
        return expand_forall(f, env, acc, allow_actions);
      default:
        throw GroundError(f.pos.str() + ": unexpected formula in condition");
    }
  }

  // Splits the forall body into equality guards and payload conjuncts;
  // guards that fail drop the binding, payload failures kill the
  // candidate.
  bool expand_forall(const Formula& f, const Env& env, PreAcc& acc,
                     bool allow_actions) {
    std::vector<const Formula*> guards, payload;
    split_body(f.kids[0], guards, payload);
    std::vector<std::vector<std::string>> domains;
    for (const auto& v : f.vars) domains.push_back(objects_of(v.type));
    std::vector<std::string> binding(f.vars.size());
    bool ok = true;
    enumerate(domains, 0, binding, [&]() {
      if (!ok) return;
      Env ext = env;
      for (std::size_t i = 0; i < f.vars.size(); ++i)
        ext[f.vars[i].name] = binding[i];
      for (const Formula* g : guards) {
        bool positive = g->kind != Formula::Kind::Not;
        const Formula& eq = positive ? *g : g->kids[0];
        if ((resolve(eq.args[0], ext) == resolve(eq.args[1], ext)) != positive)
          return;  // binding filtered out
      }
      for (const Formula* c : payload)
        if (!eval_pre(*c, ext, true, acc, allow_actions)) {
          ok = false;
          return;
        }
    });
    return ok;
  }

  static void split_body(const Formula& body,
                         std::vector<const Formula*>& guards,
                         std::vector<const Formula*>& payload) {
    if (body.kind == Formula::Kind::And) {
      for (const auto& k : body.kids) split_body(k, guards, payload);
      return;
    }
    bool is_eq = body.kind == Formula::Kind::Equality ||
                 (body.kind == Formula::Kind::Not &&
                  body.kids[0].kind == Formula::Kind::Equality);
    (is_eq ? guards : payload).push_back(&body);
  }

  // Effect walk: literals accumulate unconditionally, `when` produces
  // conditional effects, `forall` expands bindings.
  void eval_eff(const Formula& f, const Env& env, bool positive,
                std::vector<Lit>& uncond, std::vector<CEAcc>& ces) {
    switch (f.kind) {
      case Formula::Kind::And:
        for (const auto& k : f.kids) eval_eff(k, env, positive, uncond, ces);
        return;
      case Formula::Kind::Not:
        eval_eff(f.kids[0], env, !positive, uncond, ces);
        return;
      case Formula::Kind::PredAtom: {
        auto args = ground_args(f, env);
        uncond.push_back(Lit{fluent_of(f.head, args, f.pos), positive});
        return;
      }
      case Formula::Kind::When: {
        CEAcc ce;
        if (!eval_pre(f.kids[0], env, true, ce.cond, /*allow_actions=*/true))
          return;  // condition statically false, effect never fires
        std::vector<CEAcc> nested;
        eval_eff(f.kids[1], env, true, ce.eff, nested);
        if (!nested.empty())
          throw GroundError(f.pos.str() + ": nested 'when' not supported");
        if (!ce.eff.empty()) ces.push_back(std::move(ce));
        return;
      }
      case Formula::Kind::Forall: {
        std::vector<const Formula*> guards, payload;
        split_body(f.kids[0], guards, payload);
        std::vector<std::vector<std::string>> domains;
        for (const auto& v : f.vars) domains.push_back(objects_of(v.type));
        std::vector<std::string> binding(f.vars.size());
        enumerate(domains, 0, binding, [&]() {
          Env ext = env;
          for (std::size_t i = 0; i < f.vars.size(); ++i)
            ext[f.vars[i].name] = binding[i];
          for (const Formula* g : guards) {
            bool gpos = g->kind != Formula::Kind::Not;
            const Formula& eq = gpos ? *g : g->kids[0];
            if ((resolve(eq.args[0], ext) == resolve(eq.args[1], ext)) != gpos)
              return;
          }
          for (const Formula* c : payload)
            eval_eff(*c, ext, positive, uncond, ces);
        });
        return;
      }
      default:
        throw GroundError(f.pos.str() + ": unexpected formula in effect");
    }
  }

  // Instantiates one schema under one binding; returns false when the
  // instance is statically impossible.
  bool instantiate(const SchemaAction& schema, const Env& env,
                   const std::string& agent_obj,
                   const std::vector<std::string>& args, Candidate& out) {
    out.schema = schema.name;
    out.agent_obj = agent_obj;
    out.args = args;
    out.name.words.push_back(schema.name);
    if (schema.has_agent) out.name.words.push_back(agent_obj);
    for (const auto& a : args) out.name.words.push_back(a);
    if (!eval_pre(schema.pre, env, true, out.pre, /*allow_actions=*/true))
      return false;
    try {
      out.pre.lits = make_lit_set(std::move(out.pre.lits));
    } catch (const ModelError&) {
      return false;  // contradictory precondition, never applicable
    }
    eval_eff(schema.eff, env, true, out.uncond_eff, out.cond_effs);
    try {
      out.uncond_eff = make_lit_set(std::move(out.uncond_eff));
    } catch (const ModelError&) {
      return false;  // self-contradictory effect
    }
    for (auto it = out.cond_effs.begin(); it != out.cond_effs.end();) {
      bool drop = false;
      try {
        it->cond.lits = make_lit_set(std::move(it->cond.lits));
      } catch (const ModelError&) {
        drop = true;  // unsatisfiable condition
      }
      if (!drop) {
        try {
          it->eff = make_lit_set(std::move(it->eff));
        } catch (const ModelError&) {
          return false;
        }
      }
      it = drop ? out.cond_effs.erase(it) : ++it;
    }
    return true;
  }
};

}  // namespace gdetail

inline std::pair<MapProblem, GroundingReport> ground(const DomainAst& d,
                                                     const ProblemAst& p) {
  auto t0 = std::chrono::steady_clock::now();
  gdetail::Grounder g(d, p);
  g.enumerate_fluents();

  // The agent set is the set of objects of the types named in :agent
  // slots, in declaration order.
  std::vector<std::string> agent_types;
  for (const auto& a : d.actions)
    if (a.has_agent) {
      bool seen = false;
      for (const auto& t : agent_types) seen = seen || t == a.agent.type;
      if (!seen) agent_types.push_back(a.agent.type);
    }
  if (agent_types.empty())
    throw GroundError("domain has no :agent slots; not a multiagent domain");
  std::vector<std::string> agents;
  std::unordered_map<std::string, int> agent_ids;
  for (const auto& o : g.objects) {
    for (const auto& t : agent_types) {
      if (d.subtype_of(o.type, t) && !agent_ids.count(o.name)) {
        agent_ids.emplace(o.name, static_cast<int>(agents.size()));
        agents.push_back(o.name);
      }
    }
  }

  // Candidate ground actions in (schema, agent, binding) order.
  std::vector<gdetail::Candidate> cands;
  std::unordered_map<std::string, int> cand_ids;
  for (const auto& schema : d.actions) {
    if (!schema.has_agent)
      throw GroundError("action '" + schema.name +
                        "' lacks an :agent slot in a multiagent domain");
    std::vector<std::vector<std::string>> domains;
    domains.push_back(g.objects_of(schema.agent.type));
    for (const auto& v : schema.params)
      domains.push_back(g.objects_of(v.type));
    std::vector<std::string> binding(domains.size());
    gdetail::Grounder::enumerate(domains, 0, binding, [&]() {
      gdetail::Env env;
      env[schema.agent.name] = binding[0];
      for (std::size_t i = 0; i < schema.params.size(); ++i)
        env[schema.params[i].name] = binding[i + 1];
      gdetail::Candidate c;
      std::vector<std::string> args(binding.begin() + 1, binding.end());
      if (g.instantiate(schema, env, binding[0], args, c)) {
        cand_ids.emplace(c.name.display(), static_cast<int>(cands.size()));
        cands.push_back(std::move(c));
      } else {
        ++g.pruned;
      }
    });
  }

  // An action whose positive concurrency constraint references a missing
  // or dropped action can never be part of any joint action.
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& c : cands) {
      if (!c.alive) continue;
      for (const auto& ref : c.pre.arefs) {
        if (!ref.pos) continue;
        auto it = cand_ids.find(ref.key);
        if (it == cand_ids.end() || !cands[it->second].alive) {
          c.alive = false;
          ++g.pruned;
          changed = true;
          break;
        }
      }
    }
  }

  // Final numbering groups actions by agent.
  std::vector<int> order;
  for (std::size_t ai = 0; ai < agents.size(); ++ai)
    for (std::size_t ci = 0; ci < cands.size(); ++ci)
      if (cands[ci].alive &&
          agent_ids.at(cands[ci].agent_obj) == static_cast<int>(ai))
        order.push_back(static_cast<int>(ci));
  std::unordered_map<std::string, int> final_ids;
  for (std::size_t i = 0; i < order.size(); ++i)
    final_ids.emplace(cands[order[i]].name.display(), static_cast<int>(i));

  auto resolve_refs = [&](const std::vector<gdetail::ARef>& refs, bool& dead) {
    std::vector<ALit> out;
    for (const auto& r : refs) {
      auto it = final_ids.find(r.key);
      if (it == final_ids.end()) {
        if (r.pos) dead = true;  // positive ref to a nonexistent action
        continue;                // negative ref is trivially satisfied
      }
      out.push_back(ALit{it->second, r.pos});
    }
    return out;
  };

  MapProblem mp;
  mp.name = p.name;
  mp.agents = agents;
  mp.fluents = g.fluents;
  mp.agent_actions.assign(agents.size(), {});
  for (int ci : order) {
    gdetail::Candidate& c = cands[ci];
    AtomicAction a;
    a.name = c.name;
    a.schema = c.schema;
    a.agent = agent_ids.at(c.agent_obj);
    a.args = c.args;
    a.pre_f = c.pre.lits;
    bool dead = false;
    a.pre_a = make_alit_set(resolve_refs(c.pre.arefs, dead));
    if (dead)
      throw GroundError("internal: dead positive reference survived fixpoint");
    if (!c.uncond_eff.empty())
      a.effects.push_back(CondEffect{{}, {}, c.uncond_eff});
    for (auto& ce : c.cond_effs) {
      bool ce_dead = false;
      auto cond_a = make_alit_set(resolve_refs(ce.cond.arefs, ce_dead));
      if (ce_dead) continue;  // condition requires a nonexistent action
      a.effects.push_back(
          CondEffect{ce.cond.lits, std::move(cond_a), ce.eff});
    }
    mp.agent_actions[a.agent].push_back(static_cast<int>(mp.actions.size()));
    mp.actions.push_back(std::move(a));
  }

  mp.init = State(static_cast<int>(mp.fluents.size()));
  for (const auto& atom : p.init) {
    if (g.static_preds.count(atom.pred)) continue;
    mp.init.set(g.fluent_of(atom.pred, atom.args, atom.pos), true);
  }
  {
    std::vector<Lit> goal;
    for (const auto& [atom, pos] : p.goal)
      goal.push_back(Lit{g.fluent_of(atom.pred, atom.args, atom.pos), pos});
    mp.goal = make_lit_set(std::move(goal));
  }
  mp.build_index();

  GroundingReport rep;
  rep.num_fluents = static_cast<int>(mp.fluents.size());
  for (const auto& ids : mp.agent_actions)
    rep.per_agent.push_back(static_cast<int>(ids.size()));
  rep.pruned = g.pruned;
  rep.millis = std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
                   .count();
  return {std::move(mp), rep};
}

// Classical grounding: same instantiation machinery minus agents and
// action atoms.  The fluent universe is restricted to atoms actually
// mentioned by the grounded problem, which keeps already-ground
// (compiled) inputs compact.
inline ClassicalProblem ground_classical(const DomainAst& d,
                                         const ProblemAst& p) {
  gdetail::Grounder g(d, p);
  g.enumerate_fluents();

  std::vector<gdetail::Candidate> cands;
  for (const auto& schema : d.actions) {
    std::vector<std::vector<std::string>> domains;
    if (schema.has_agent)
      throw GroundError("action '" + schema.name +
                        "' has an :agent slot; use the multiagent grounder");
    for (const auto& v : schema.params)
      domains.push_back(g.objects_of(v.type));
    std::vector<std::string> binding(domains.size());
    gdetail::Grounder::enumerate(domains, 0, binding, [&]() {
      gdetail::Env env;
      for (std::size_t i = 0; i < schema.params.size(); ++i)
        env[schema.params[i].name] = binding[i];
      gdetail::Candidate c;
      if (g.instantiate(schema, env, "", binding, c)) {
        if (!c.pre.arefs.empty())
          throw GroundError("action atom in classical domain '" + schema.name +
                            "'");
        for (const auto& ce : c.cond_effs)
          if (!ce.cond.arefs.empty())
            throw GroundError("action atom in classical domain '" +
                              schema.name + "'");
        cands.push_back(std::move(c));
      } else {
        ++g.pruned;
      }
    });
  }

  // Keep only mentioned fluents, renumbered in universe order.
  std::vector<char> used(g.fluents.size(), 0);
  auto mark = [&](const std::vector<Lit>& ls) {
    for (const Lit& l : ls) used[l.var] = 1;
  };
  for (const auto& c : cands) {
    mark(c.pre.lits);
    mark(c.uncond_eff);
    for (const auto& ce : c.cond_effs) {
      mark(ce.cond.lits);
      mark(ce.eff);
    }
  }
  for (const auto& atom : p.init)
    if (!g.static_preds.count(atom.pred))
      used[g.fluent_of(atom.pred, atom.args, atom.pos)] = 1;
  for (const auto& [atom, pos] : p.goal)
    used[g.fluent_of(atom.pred, atom.args, atom.pos)] = 1;

  std::vector<int> remap(g.fluents.size(), -1);
  ClassicalProblem cp;
  cp.name = p.name;
  for (std::size_t i = 0; i < g.fluents.size(); ++i)
    if (used[i]) {
      remap[i] = static_cast<int>(cp.fluents.size());
      cp.fluents.push_back(g.fluents[i]);
    }
  auto remap_lits = [&](const std::vector<Lit>& ls) {
    LitSet out;
    for (const Lit& l : ls) out.push_back(Lit{remap[l.var], l.pos});
    return make_lit_set(std::move(out));
  };

  for (const auto& c : cands) {
    ClassicalAction a;
    a.name = c.name;
    a.pre = remap_lits(c.pre.lits);
    if (!c.uncond_eff.empty())
      a.effects.push_back(CondEff{{}, remap_lits(c.uncond_eff)});
    for (const auto& ce : c.cond_effs)
      a.effects.push_back(
          CondEff{remap_lits(ce.cond.lits), remap_lits(ce.eff)});
    cp.provenance.push_back(Provenance{});
    cp.actions.push_back(std::move(a));
  }
  cp.init = State(static_cast<int>(cp.fluents.size()));
  for (const auto& atom : p.init)
    if (!g.static_preds.count(atom.pred))
      cp.init.set(remap[g.fluent_of(atom.pred, atom.args, atom.pos)], true);
  {
    std::vector<Lit> goal;
    for (const auto& [atom, pos] : p.goal)
      goal.push_back(
          Lit{remap[g.fluent_of(atom.pred, atom.args, atom.pos)], pos});
    cp.goal = make_lit_set(std::move(goal));
  }
  cp.base_fluents = static_cast<int>(cp.fluents.size());
  cp.build_index();
  return cp;
}

}  // namespace cmap

#endif  // CMAP_GROUND_HPP
