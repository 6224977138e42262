#ifndef CMAP_SEMANTICS_HPP
#define CMAP_SEMANTICS_HPP

// Joint-action semantics: applicability against the extended state
// s ∪ L(a), triggered effects, state transition, and full plan
// validation.  This module is the ground truth the compilation is
// tested against.

#include <optional>
#include <string>
#include <vector>

#include "cmap/model.hpp"

namespace cmap {

enum class FailReason {
  AgentDuplication,
  FluentPrecondition,
  ConcurrencyConstraint,
  IllDefinedPrecondition,
  IllDefinedEffect,
  GoalUnsatisfied,
};

inline const char* fail_reason_name(FailReason r) {
  switch (r) {
    case FailReason::AgentDuplication: return "agent-duplication";
    case FailReason::FluentPrecondition: return "fluent-precondition";
    case FailReason::ConcurrencyConstraint: return "concurrency-constraint";
    case FailReason::IllDefinedPrecondition: return "ill-defined-precondition";
    case FailReason::IllDefinedEffect: return "ill-defined-effect";
    case FailReason::GoalUnsatisfied: return "goal-unsatisfied";
  }
  return "?";
}

class SemanticsError : public std::runtime_error {
 public:
  SemanticsError(FailReason reason, const std::string& msg, int subject = -1)
      : std::runtime_error(msg), reason(reason), subject(subject) {}

  FailReason reason;
  int subject;  // conflicting fluent id when applicable
};

struct StepRecord {
  uint64_t state_digest = 0;  // state *before* the step
  JointAction joint;
  LitSet effect;
};

struct StepFailure {
  int step = -1;
  FailReason reason = FailReason::GoalUnsatisfied;
  std::string detail;
};

struct ValidationReport {
  bool valid = false;
  std::vector<StepRecord> steps;
  uint64_t final_digest = 0;
  std::optional<StepFailure> failure;
};

// True iff the projected precondition pre(a)|A holds in L(a), where the
// joint action is given by its sorted member set (all other actions are
// implicitly false).
inline bool constraint_holds(const AtomicAction& a,
                             const std::vector<int>& members) {
  for (const ALit& l : a.pre_a) {
    bool in = std::binary_search(members.begin(), members.end(), l.act);
    if (in != l.pos) return false;
  }
  return true;
}

// Applicability of a joint action: per-member fluent preconditions hold
// in s, concurrency constraints hold in L(a), and the precondition union
// is well-defined.  Throws on ill-definedness; returns the failing
// reason otherwise.
inline std::optional<FailReason> joint_inapplicable(const State& s,
                                                    const JointAction& a,
                                                    const MapProblem& p) {
  std::vector<Lit> pre_union;
  for (int m : a.members) {
    const AtomicAction& act = p.actions[m];
    if (!holds(act.pre_f, s)) return FailReason::FluentPrecondition;
    if (!constraint_holds(act, a.members))
      return FailReason::ConcurrencyConstraint;
    pre_union.insert(pre_union.end(), act.pre_f.begin(), act.pre_f.end());
  }
  try {
    make_lit_set(std::move(pre_union));
  } catch (const ModelError& e) {
    throw SemanticsError(FailReason::IllDefinedPrecondition,
                         "joint precondition conflicts on " +
                             p.fluents[e.subject].display(),
                         e.subject);
  }
  return std::nullopt;
}

inline bool joint_applicable(const State& s, const JointAction& a,
                             const MapProblem& p) {
  return !joint_inapplicable(s, a, p).has_value();
}

// eff(s, a) = union over members of the effects whose condition holds in
// the extended state s ∪ L(a).  Throws on a conflicting union.
inline LitSet joint_effect(const State& s, const JointAction& a,
                           const MapProblem& p) {
  std::vector<Lit> out;
  for (int m : a.members) {
    const AtomicAction& act = p.actions[m];
    for (const CondEffect& ce : act.effects) {
      if (!holds(ce.cond_f, s)) continue;
      bool a_holds = true;
      for (const ALit& l : ce.cond_a) {
        bool in =
            std::binary_search(a.members.begin(), a.members.end(), l.act);
        if (in != l.pos) {
          a_holds = false;
          break;
        }
      }
      if (a_holds) out.insert(out.end(), ce.effect.begin(), ce.effect.end());
    }
  }
  try {
    return make_lit_set(std::move(out));
  } catch (const ModelError& e) {
    throw SemanticsError(
        FailReason::IllDefinedEffect,
        "joint effect conflicts on " + p.fluents[e.subject].display(),
        e.subject);
  }
}

inline State step(const State& s, const JointAction& a, const MapProblem& p) {
  return apply_effect(s, joint_effect(s, a, p));
}

inline ValidationReport validate_concurrent(const MapProblem& p,
                                            const ConcurrentPlan& plan) {
  ValidationReport rep;
  State s = p.init;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const JointAction& a = plan.steps[i];
    StepRecord rec;
    rec.state_digest = s.digest();
    rec.joint = a;
    // Re-validate member structure against this problem.
    try {
      make_joint_action(a.members, p);
    } catch (const ModelError& e) {
      rep.failure = StepFailure{static_cast<int>(i),
                                FailReason::AgentDuplication, e.what()};
      rep.steps.push_back(std::move(rec));
      return rep;
    }
    try {
      if (auto why = joint_inapplicable(s, a, p)) {
        rep.failure = StepFailure{static_cast<int>(i), *why,
                                  "joint action not applicable"};
        rep.steps.push_back(std::move(rec));
        return rep;
      }
      rec.effect = joint_effect(s, a, p);
    } catch (const SemanticsError& e) {
      rep.failure = StepFailure{static_cast<int>(i), e.reason, e.what()};
      rep.steps.push_back(std::move(rec));
      return rep;
    }
    s = apply_effect(s, rec.effect);
    rep.steps.push_back(std::move(rec));
  }
  rep.final_digest = s.digest();
  if (!holds(p.goal, s)) {
    rep.failure = StepFailure{static_cast<int>(plan.steps.size()),
                              FailReason::GoalUnsatisfied,
                              "goal does not hold in the final state"};
    return rep;
  }
  rep.valid = true;
  return rep;
}

}  // namespace cmap

#endif  // CMAP_SEMANTICS_HPP
