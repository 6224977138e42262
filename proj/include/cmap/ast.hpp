#ifndef CMAP_AST_HPP
#define CMAP_AST_HPP

// Schema-level ASTs for multiagent PDDL in the Kovacs notation: an
// `:agent` slot on actions, and action atoms allowed in preconditions
// and `when` conditions.  The accepted formula fragment is conjunction,
// negation on atoms, `forall`, and `when` (inside effects only).

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cmap/sexpr.hpp"

namespace cmap {

struct TypedVar {
  std::string name;
  std::string type;
};

struct Term {
  std::string text;  // "?x" or an object name

  bool is_var() const { return !text.empty() && text[0] == '?'; }
};

struct Formula {
  enum class Kind { PredAtom, ActionAtom, Equality, Not, And, Forall, When };

  Kind kind = Kind::And;
  std::string head;            // atom head for PredAtom/ActionAtom
  std::vector<Term> args;      // atom/equality arguments
  std::vector<TypedVar> vars;  // forall-bound variables
  std::vector<Formula> kids;   // Not: 1, And: n, Forall: 1, When: {cond, eff}
  SourcePos pos;
};

struct Predicate {
  std::string name;
  std::vector<TypedVar> params;
  SourcePos pos;
};

struct SchemaAction {
  std::string name;
  TypedVar agent;              // empty name for classical domains
  bool has_agent = false;
  std::vector<TypedVar> params;
  Formula pre;   // And-rooted, possibly empty
  Formula eff;   // And-rooted, possibly empty
  SourcePos pos;

  // Full argument arity of ground occurrences: agent slot + parameters.
  int arity() const { return (has_agent ? 1 : 0) + static_cast<int>(params.size()); }
};

struct DomainAst {
  std::string name;
  std::vector<std::string> types;                       // declaration order
  std::unordered_map<std::string, std::string> supertype;  // type -> parent
  std::vector<Predicate> predicates;
  std::vector<TypedVar> constants;
  std::vector<SchemaAction> actions;

  const Predicate* find_predicate(const std::string& n) const {
    for (const auto& p : predicates)
      if (p.name == n) return &p;
    return nullptr;
  }

  const SchemaAction* find_action(const std::string& n) const {
    for (const auto& a : actions)
      if (a.name == n) return &a;
    return nullptr;
  }

  bool is_multiagent() const {
    for (const auto& a : actions)
      if (a.has_agent) return true;
    return false;
  }

  bool type_known(const std::string& t) const {
    if (t == "object") return true;
    for (const auto& x : types)
      if (x == t) return true;
    return false;
  }

  // True iff `t` equals `want` or descends from it.
  bool subtype_of(std::string t, const std::string& want) const {
    if (want == "object") return true;
    for (;;) {
      if (t == want) return true;
      auto it = supertype.find(t);
      if (it == supertype.end() || it->second == t) return false;
      t = it->second;
      if (t == "object") return t == want;
    }
  }
};

struct GroundAtomAst {
  std::string pred;
  std::vector<std::string> args;
  SourcePos pos;
};

struct ProblemAst {
  std::string name;
  std::string domain_name;
  std::vector<TypedVar> objects;       // problem objects + domain constants
  std::vector<GroundAtomAst> init;
  std::vector<std::pair<GroundAtomAst, bool>> goal;  // atom, positive
};

namespace detail {

// Parses "n1 n2 - t1 n3 - t2 ..." into typed entries; untyped names get
// type "object".
inline std::vector<TypedVar> parse_typed_list(const std::vector<SExpr>& items,
                                              std::size_t from,
                                              std::size_t to) {
  std::vector<TypedVar> out;
  std::vector<std::string> pending;
  for (std::size_t i = from; i < to; ++i) {
    const SExpr& e = items[i];
    if (!e.is_atom) throw ParseError(e.pos, "expected a name in typed list");
    if (e.text == "-") {
      if (i + 1 >= to)
        throw ParseError(e.pos, "dangling '-' in typed list");
      const SExpr& t = items[++i];
      if (!t.is_atom) throw ParseError(t.pos, "expected a type name");
      for (const auto& n : pending) out.push_back(TypedVar{n, t.text});
      pending.clear();
    } else {
      pending.push_back(e.text);
    }
  }
  for (const auto& n : pending) out.push_back(TypedVar{n, "object"});
  return out;
}

inline std::vector<TypedVar> parse_typed_list(const SExpr& list) {
  return parse_typed_list(list.items, 0, list.items.size());
}

struct FormulaContext {
  const DomainAst* domain = nullptr;
  std::unordered_set<std::string> bound;  // variable names in scope
  bool in_effect = false;                 // when-consequents / effect atoms
};

inline Formula parse_atom(const SExpr& e, FormulaContext& ctx,
                          bool allow_action_atoms) {
  Formula f;
  f.pos = e.pos;
  f.head = e.head();
  if (f.head.empty()) throw ParseError(e.pos, "expected an atom");
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    const SExpr& a = e.items[i];
    if (!a.is_atom) throw ParseError(a.pos, "atom arguments must be names");
    if (a.text[0] == '?' && !ctx.bound.count(a.text))
      throw ParseError(a.pos, "unbound variable " + a.text);
    f.args.push_back(Term{a.text});
  }
  if (f.head == "=") {
    if (f.args.size() != 2)
      throw ParseError(e.pos, "'=' takes exactly two arguments");
    f.kind = Formula::Kind::Equality;
    return f;
  }
  const Predicate* pred = ctx.domain->find_predicate(f.head);
  const SchemaAction* act = ctx.domain->find_action(f.head);
  if (pred && act)
    throw ParseError(e.pos, "'" + f.head +
                                "' is declared as both predicate and action");
  if (act) {
    if (!allow_action_atoms)
      throw ParseError(e.pos,
                       "action atom '" + f.head + "' not allowed here");
    if (static_cast<int>(f.args.size()) != act->arity())
      throw ParseError(e.pos, "action atom '" + f.head + "' expects " +
                                  std::to_string(act->arity()) +
                                  " arguments, got " +
                                  std::to_string(f.args.size()));
    f.kind = Formula::Kind::ActionAtom;
    return f;
  }
  if (!pred)
    throw ParseError(e.pos, "undeclared predicate or action '" + f.head + "'");
  if (f.args.size() != pred->params.size())
    throw ParseError(e.pos, "predicate '" + f.head + "' expects " +
                                std::to_string(pred->params.size()) +
                                " arguments, got " +
                                std::to_string(f.args.size()));
  f.kind = Formula::Kind::PredAtom;
  return f;
}

Formula parse_formula(const SExpr& e, FormulaContext& ctx, bool in_effect,
                      bool allow_when);

inline Formula parse_formula_impl(const SExpr& e, FormulaContext& ctx,
                                  bool in_effect, bool allow_when) {
  std::string h = e.head();
  Formula f;
  f.pos = e.pos;
  if (h == "and") {
    f.kind = Formula::Kind::And;
    for (std::size_t i = 1; i < e.items.size(); ++i)
      f.kids.push_back(parse_formula(e.items[i], ctx, in_effect, allow_when));
    return f;
  }
  if (h == "not") {
    if (e.items.size() != 2)
      throw ParseError(e.pos, "'not' takes exactly one argument");
    f.kind = Formula::Kind::Not;
    Formula inner =
        parse_atom(e.at(1), ctx, /*allow_action_atoms=*/!in_effect);
    f.kids.push_back(std::move(inner));
    return f;
  }
  if (h == "forall") {
    if (e.items.size() != 3)
      throw ParseError(e.pos, "'forall' takes a variable list and a body");
    f.kind = Formula::Kind::Forall;
    f.vars = parse_typed_list(e.at(1));
    for (const auto& v : f.vars) {
      if (v.name.empty() || v.name[0] != '?')
        throw ParseError(e.pos, "forall binds variables, got " + v.name);
      if (!ctx.domain->type_known(v.type))
        throw ParseError(e.pos, "unknown type '" + v.type + "'");
    }
    std::vector<std::string> added;
    for (const auto& v : f.vars)
      if (ctx.bound.insert(v.name).second) added.push_back(v.name);
    f.kids.push_back(parse_formula(e.at(2), ctx, in_effect, allow_when));
    for (const auto& n : added) ctx.bound.erase(n);
    return f;
  }
  if (h == "when") {
    if (!in_effect || !allow_when)
      throw ParseError(e.pos, "'when' is only allowed in effects");
    if (e.items.size() != 3)
      throw ParseError(e.pos, "'when' takes a condition and a consequent");
    f.kind = Formula::Kind::When;
    // Condition is precondition-like: fluent and action atoms allowed.
    f.kids.push_back(parse_formula(e.at(1), ctx, /*in_effect=*/false,
                                   /*allow_when=*/false));
    // Consequent is a conjunction of fluent literals only.
    f.kids.push_back(parse_formula(e.at(2), ctx, /*in_effect=*/true,
                                   /*allow_when=*/false));
    return f;
  }
  if (h == "or" || h == "imply" || h == "exists")
    throw ParseError(e.pos, "'" + h + "' is outside the supported fragment");
  return parse_atom(e, ctx, /*allow_action_atoms=*/!in_effect);
}

inline Formula parse_formula(const SExpr& e, FormulaContext& ctx,
                             bool in_effect, bool allow_when) {
  return parse_formula_impl(e, ctx, in_effect, allow_when);
}

inline Formula empty_and() {
  Formula f;
  f.kind = Formula::Kind::And;
  return f;
}

}  // namespace detail

inline DomainAst parse_domain(std::string_view text) {
  SExprReader reader(text);
  SExpr root = reader.read();
  if (root.head() != "define")
    throw ParseError(root.pos, "expected (define (domain ...) ...)");
  DomainAst d;
  if (root.at(1).head() != "domain" || root.at(1).items.size() != 2)
    throw ParseError(root.at(1).pos, "expected (domain <name>)");
  d.name = root.at(1).at(1).text;

  std::vector<const SExpr*> action_nodes;
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& sec = root.items[i];
    std::string h = sec.head();
    if (h == ":requirements") {
      continue;
    } else if (h == ":types") {
      auto typed =
          detail::parse_typed_list(sec.items, 1, sec.items.size());
      for (const auto& tv : typed) {
        d.types.push_back(tv.name);
        d.supertype[tv.name] = tv.type;
        if (tv.type != "object" && !d.supertype.count(tv.type)) {
          d.types.push_back(tv.type);
          d.supertype[tv.type] = "object";
        }
      }
    } else if (h == ":constants") {
      auto typed =
          detail::parse_typed_list(sec.items, 1, sec.items.size());
      d.constants.insert(d.constants.end(), typed.begin(), typed.end());
    } else if (h == ":predicates") {
      for (std::size_t j = 1; j < sec.items.size(); ++j) {
        const SExpr& pe = sec.items[j];
        if (pe.is_atom || pe.items.empty())
          throw ParseError(pe.pos, "expected a predicate declaration");
        Predicate p;
        p.pos = pe.pos;
        p.name = pe.at(0).text;
        p.params = detail::parse_typed_list(pe.items, 1, pe.items.size());
        for (const auto& v : p.params)
          if (!d.type_known(v.type) )
            throw ParseError(pe.pos, "unknown type '" + v.type + "'");
        d.predicates.push_back(std::move(p));
      }
    } else if (h == ":action") {
      action_nodes.push_back(&sec);
    } else {
      throw ParseError(sec.pos, "unknown domain section '" + h + "'");
    }
  }

  // First pass registers action names so action atoms can refer to
  // schemas declared later in the file.
  for (const SExpr* node : action_nodes) {
    SchemaAction a;
    a.pos = node->pos;
    a.name = node->at(1).text;
    if (a.name.empty() || !node->at(1).is_atom)
      throw ParseError(node->pos, "expected an action name");
    if (d.find_predicate(a.name))
      throw ParseError(node->pos, "'" + a.name +
                                      "' is declared as both predicate and "
                                      "action");
    if (d.find_action(a.name))
      throw ParseError(node->pos, "duplicate action '" + a.name + "'");
    std::size_t i = 2;
    while (i < node->items.size()) {
      std::string key = node->items[i].text;
      if (key == ":agent") {
        auto typed = detail::parse_typed_list(node->items, i + 1,
                                              std::min(i + 4, node->items.size()));
        if (typed.empty())
          throw ParseError(node->items[i].pos, "':agent' needs a variable");
        a.agent = typed[0];
        a.has_agent = true;
        i += (i + 2 < node->items.size() && node->items[i + 2].is_atom &&
              node->items[i + 2].text == "-")
                 ? 4
                 : 2;
      } else if (key == ":parameters") {
        a.params = detail::parse_typed_list(node->at(i + 1));
        i += 2;
      } else if (key == ":precondition" || key == ":effect") {
        i += 2;  // parsed in the second pass
      } else {
        throw ParseError(node->items[i].pos,
                         "unknown action section '" + key + "'");
      }
    }
    a.pre = detail::empty_and();
    a.eff = detail::empty_and();
    d.actions.push_back(std::move(a));
  }

  for (std::size_t k = 0; k < action_nodes.size(); ++k) {
    const SExpr* node = action_nodes[k];
    SchemaAction& a = d.actions[k];
    detail::FormulaContext ctx;
    ctx.domain = &d;
    if (a.has_agent) {
      if (!d.type_known(a.agent.type))
        throw ParseError(a.pos, "unknown type '" + a.agent.type + "'");
      ctx.bound.insert(a.agent.name);
    }
    for (const auto& v : a.params) {
      if (!d.type_known(v.type))
        throw ParseError(a.pos, "unknown type '" + v.type + "'");
      ctx.bound.insert(v.name);
    }
    std::size_t i = 2;
    while (i < node->items.size()) {
      std::string key = node->items[i].text;
      if (key == ":precondition") {
        a.pre = detail::parse_formula(node->at(i + 1), ctx,
                                      /*in_effect=*/false,
                                      /*allow_when=*/false);
        i += 2;
      } else if (key == ":effect") {
        a.eff = detail::parse_formula(node->at(i + 1), ctx,
                                      /*in_effect=*/true,
                                      /*allow_when=*/true);
        i += 2;
      } else if (key == ":agent") {
        i += (i + 2 < node->items.size() && node->items[i + 2].is_atom &&
              node->items[i + 2].text == "-")
                 ? 4
                 : 2;
      } else {
        i += 2;
      }
    }
  }
  return d;
}

inline ProblemAst parse_problem(std::string_view text, const DomainAst& d) {
  SExprReader reader(text);
  SExpr root = reader.read();
  if (root.head() != "define")
    throw ParseError(root.pos, "expected (define (problem ...) ...)");
  ProblemAst p;
  if (root.at(1).head() != "problem" || root.at(1).items.size() != 2)
    throw ParseError(root.at(1).pos, "expected (problem <name>)");
  p.name = root.at(1).at(1).text;
  p.objects = d.constants;

  auto find_object = [&p](const std::string& n) -> const TypedVar* {
    for (const auto& o : p.objects)
      if (o.name == n) return &o;
    return nullptr;
  };

  auto parse_ground_atom = [&](const SExpr& e) {
    GroundAtomAst atom;
    atom.pos = e.pos;
    atom.pred = e.head();
    const Predicate* pred = d.find_predicate(atom.pred);
    if (!pred)
      throw ParseError(e.pos, "undeclared predicate '" + atom.pred + "'");
    if (e.items.size() - 1 != pred->params.size())
      throw ParseError(e.pos, "predicate '" + atom.pred + "' expects " +
                                  std::to_string(pred->params.size()) +
                                  " arguments");
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      const std::string& obj = e.items[i].text;
      const TypedVar* o = find_object(obj);
      if (!o) throw ParseError(e.items[i].pos, "unknown object '" + obj + "'");
      if (!d.subtype_of(o->type, pred->params[i - 1].type))
        throw ParseError(e.items[i].pos,
                         "object '" + obj + "' has type '" + o->type +
                             "', expected '" + pred->params[i - 1].type + "'");
      atom.args.push_back(obj);
    }
    return atom;
  };

  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& sec = root.items[i];
    std::string h = sec.head();
    if (h == ":domain") {
      p.domain_name = sec.at(1).text;
      if (p.domain_name != d.name)
        throw ParseError(sec.pos, "problem is for domain '" + p.domain_name +
                                      "', parsed domain is '" + d.name + "'");
    } else if (h == ":objects") {
      auto typed = detail::parse_typed_list(sec.items, 1, sec.items.size());
      for (const auto& o : typed) {
        if (!d.type_known(o.type))
          throw ParseError(sec.pos, "unknown type '" + o.type + "'");
        p.objects.push_back(o);
      }
    } else if (h == ":init") {
      for (std::size_t j = 1; j < sec.items.size(); ++j)
        p.init.push_back(parse_ground_atom(sec.items[j]));
    } else if (h == ":goal") {
      const SExpr& g = sec.at(1);
      std::vector<const SExpr*> lits;
      if (g.head() == "and") {
        for (std::size_t j = 1; j < g.items.size(); ++j)
          lits.push_back(&g.items[j]);
      } else {
        lits.push_back(&g);
      }
      for (const SExpr* le : lits) {
        bool positive = true;
        const SExpr* atom = le;
        if (le->head() == "not") {
          positive = false;
          atom = &le->at(1);
        }
        p.goal.emplace_back(parse_ground_atom(*atom), positive);
      }
    } else {
      throw ParseError(sec.pos, "unknown problem section '" + h + "'");
    }
  }
  return p;
}

}  // namespace cmap

#endif  // CMAP_AST_HPP
