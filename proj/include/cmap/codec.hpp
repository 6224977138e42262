#ifndef CMAP_CODEC_HPP
#define CMAP_CODEC_HPP

// Decoding classical plans over a compiled problem into concurrent
// plans, and encoding concurrent plans back.  Decoding segments the
// classical plan at select-phase…finish boundaries, rebuilds one joint
// action per segment, and cross-checks the segment's sequential
// execution against the joint semantics (interference detection).

#include <string>
#include <vector>

#include "cmap/classical.hpp"
#include "cmap/compile.hpp"
#include "cmap/model.hpp"
#include "cmap/semantics.hpp"

namespace cmap {

class CodecError : public std::runtime_error {
 public:
  enum class Kind {
    MalformedSegmentation,
    MemberMismatch,
    Interference,
    BoundExceeded,
    InvalidPlan,
  };

  CodecError(Kind kind, const std::string& msg)
      : std::runtime_error(msg), kind(kind) {}

  Kind kind;
};

// Classical plan validation: sequential θ with conditional effects;
// valid iff every action is applicable and the goal holds at the end.
inline ValidationReport validate_classical(const ClassicalProblem& p,
                                           const ClassicalPlan& plan) {
  ValidationReport rep;
  State s = p.init;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    int a = plan[i];
    StepRecord rec;
    rec.state_digest = s.digest();
    if (a < 0 || a >= static_cast<int>(p.actions.size())) {
      rep.failure = StepFailure{static_cast<int>(i),
                                FailReason::FluentPrecondition,
                                "unknown action id"};
      rep.steps.push_back(std::move(rec));
      return rep;
    }
    if (!applicable(p, s, a)) {
      rep.failure =
          StepFailure{static_cast<int>(i), FailReason::FluentPrecondition,
                      "precondition of " + p.actions[a].name.display() +
                          " does not hold"};
      rep.steps.push_back(std::move(rec));
      return rep;
    }
    try {
      rec.effect = triggered_effect(p, s, a);
    } catch (const ModelError& e) {
      rep.failure = StepFailure{static_cast<int>(i),
                                FailReason::IllDefinedEffect, e.what()};
      rep.steps.push_back(std::move(rec));
      return rep;
    }
    s = apply_effect(s, rec.effect);
    rep.steps.push_back(std::move(rec));
  }
  rep.final_digest = s.digest();
  if (!holds(p.goal, s)) {
    rep.failure = StepFailure{static_cast<int>(plan.size()),
                              FailReason::GoalUnsatisfied,
                              "goal does not hold in the final state"};
    return rep;
  }
  rep.valid = true;
  return rep;
}

namespace cdetail {

inline bool fluent_parts_equal(const State& classical, const State& joint,
                               int base_fluents) {
  for (int v = 0; v < base_fluents; ++v)
    if (classical.test(v) != joint.test(v)) return false;
  return true;
}

}  // namespace cdetail

inline ConcurrentPlan decode(const ClassicalPlan& plan, const MapProblem& mp,
                             const ClassicalProblem& cp) {
  enum class Phase { Free, Selection, Application, Reset };
  Phase phase = Phase::Free;
  std::vector<int> selected, applied, reset;
  ConcurrentPlan out;
  State joint_state = mp.init;
  State classical_state = cp.init;
  State segment_start = mp.init;

  auto bad = [](const std::string& msg) {
    throw CodecError(CodecError::Kind::MalformedSegmentation, msg);
  };

  for (std::size_t i = 0; i < plan.size(); ++i) {
    int id = plan[i];
    if (id < 0 || id >= static_cast<int>(cp.actions.size()))
      bad("action #" + std::to_string(id) + " outside the compiled problem");
    const Provenance& prov = cp.provenance[id];
    if (!applicable(cp, classical_state, id))
      throw CodecError(CodecError::Kind::InvalidPlan,
                       "step " + std::to_string(i) + ": " +
                           cp.actions[id].name.display() +
                           " is not applicable");
    classical_state = step_classical(cp, classical_state, id);

    switch (prov.kind) {
      case CompiledKind::PhaseSelect:
        if (phase != Phase::Free) bad("select-phase inside a segment");
        phase = Phase::Selection;
        selected.clear();
        applied.clear();
        reset.clear();
        segment_start = joint_state;
        break;
      case CompiledKind::Select:
        if (phase != Phase::Selection) bad("select- outside selection phase");
        selected.push_back(prov.atomic);
        break;
      case CompiledKind::PhaseApply:
        if (phase != Phase::Selection) bad("apply-phase out of order");
        phase = Phase::Application;
        break;
      case CompiledKind::Do:
        if (phase != Phase::Application) bad("do- outside application phase");
        applied.push_back(prov.atomic);
        break;
      case CompiledKind::PhaseReset:
        if (phase != Phase::Application) bad("reset-phase out of order");
        phase = Phase::Reset;
        break;
      case CompiledKind::End:
        if (phase != Phase::Reset) bad("end- outside reset phase");
        reset.push_back(prov.atomic);
        break;
      case CompiledKind::Finish: {
        if (phase != Phase::Reset) bad("finish out of order");
        phase = Phase::Free;
        std::sort(selected.begin(), selected.end());
        std::sort(applied.begin(), applied.end());
        std::sort(reset.begin(), reset.end());
        if (selected != applied || applied != reset)
          throw CodecError(CodecError::Kind::MemberMismatch,
                           "selected, applied and reset member sets differ");
        if (selected.empty()) break;  // idle cycle simulates no joint action
        JointAction ja = make_joint_action(selected, mp);
        joint_state = step(segment_start, ja, mp);
        if (!cdetail::fluent_parts_equal(classical_state, joint_state,
                                         cp.base_fluents))
          throw CodecError(
              CodecError::Kind::Interference,
              "segment execution diverges from joint semantics at step " +
                  std::to_string(out.steps.size()));
        out.steps.push_back(std::move(ja));
        break;
      }
      default:
        bad("non-compiled action " + cp.actions[id].name.display() +
            " in plan");
    }
  }
  if (phase != Phase::Free) bad("plan ends inside a segment");
  return out;
}

inline ClassicalPlan encode(const ConcurrentPlan& plan, const MapProblem& mp,
                            const ClassicalProblem& cp) {
  ValidationReport rep = validate_concurrent(mp, plan);
  if (!rep.valid)
    throw CodecError(CodecError::Kind::InvalidPlan,
                     "concurrent plan is invalid: " +
                         (rep.failure ? rep.failure->detail : ""));

  const int num_atomic = static_cast<int>(mp.actions.size());
  const int C = cp.opts.bound;
  int phase_select = -1, phase_apply = -1, phase_reset = -1, finish = -1;
  std::vector<std::vector<int>> sel(num_atomic), end(num_atomic);
  std::vector<int> doit(num_atomic, -1);
  for (std::size_t i = 0; i < cp.actions.size(); ++i) {
    const Provenance& pr = cp.provenance[i];
    switch (pr.kind) {
      case CompiledKind::PhaseSelect: phase_select = static_cast<int>(i); break;
      case CompiledKind::PhaseApply: phase_apply = static_cast<int>(i); break;
      case CompiledKind::PhaseReset: phase_reset = static_cast<int>(i); break;
      case CompiledKind::Finish: finish = static_cast<int>(i); break;
      case CompiledKind::Select: sel[pr.atomic].push_back(static_cast<int>(i)); break;
      case CompiledKind::Do: doit[pr.atomic] = static_cast<int>(i); break;
      case CompiledKind::End: end[pr.atomic].push_back(static_cast<int>(i)); break;
      default: break;
    }
  }

  ClassicalPlan out;
  for (const JointAction& ja : plan.steps) {
    const int k = static_cast<int>(ja.members.size());
    if (cp.opts.bounded() && k > C)
      throw CodecError(CodecError::Kind::BoundExceeded,
                       "joint action of size " + std::to_string(k) +
                           " exceeds the bound C=" + std::to_string(C));
    out.push_back(phase_select);
    // Members in ActionId order; bounded select variants consume
    // count(0), count(1), … in turn.
    for (int j = 0; j < k; ++j)
      out.push_back(cp.opts.bounded() ? sel[ja.members[j]][j]
                                      : sel[ja.members[j]][0]);
    out.push_back(phase_apply);
    for (int m : ja.members) out.push_back(doit[m]);
    out.push_back(phase_reset);
    // End variants decrement: the first consumes count(k).
    for (int j = 0; j < k; ++j)
      out.push_back(cp.opts.bounded() ? end[ja.members[j]][k - 1 - j]
                                      : end[ja.members[j]][0]);
    out.push_back(finish);
  }
  return out;
}

}  // namespace cmap

#endif  // CMAP_CODEC_HPP
