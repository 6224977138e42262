#ifndef CMAP_MODEL_HPP
#define CMAP_MODEL_HPP

// Ground model for concurrent multiagent planning: fluents, literals,
// states, atomic and joint actions, and the problem tuple itself.
// Everything is immutable after construction; literal sets are kept
// sorted and checked for conflicting polarities on every build path.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace cmap {

inline std::string join_words(const std::vector<std::string>& words, char sep) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out.push_back(sep);
    out += words[i];
  }
  return out;
}

// A symbolic name: head word plus argument words.  display() is the
// parenthesized form used in plan files, mangled() the dash-joined form
// used in emitted classical PDDL identifiers.
struct Sym {
  std::vector<std::string> words;

  std::string display() const { return "(" + join_words(words, ' ') + ")"; }
  std::string mangled() const { return join_words(words, '-'); }

  bool operator==(const Sym& o) const = default;
};

class ModelError : public std::runtime_error {
 public:
  enum class Kind {
    ConflictingLiteral,
    AgentDuplication,
    EmptyJointAction,
    BadReference,
  };

  ModelError(Kind kind, const std::string& msg, int subject = -1)
      : std::runtime_error(msg), kind(kind), subject(subject) {}

  Kind kind;
  int subject;  // conflicting fluent/action id when applicable
};

// Literal over a fluent id.
struct Lit {
  int var = -1;
  bool pos = true;

  auto operator<=>(const Lit&) const = default;
};

// Literal over a ground atomic action id (the A part of F ∪ A).
struct ALit {
  int act = -1;
  bool pos = true;

  auto operator<=>(const ALit&) const = default;
};

// A well-defined literal set: sorted, duplicate-free, never containing
// both polarities of one fluent.
using LitSet = std::vector<Lit>;

inline LitSet make_lit_set(LitSet lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 1; i < lits.size(); ++i) {
    if (lits[i].var == lits[i - 1].var) {
      throw ModelError(ModelError::Kind::ConflictingLiteral,
                       "literal set assigns both polarities to fluent #" +
                           std::to_string(lits[i].var),
                       lits[i].var);
    }
  }
  return lits;
}

inline std::vector<ALit> make_alit_set(std::vector<ALit> lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 1; i < lits.size(); ++i) {
    if (lits[i].act == lits[i - 1].act) {
      throw ModelError(ModelError::Kind::ConflictingLiteral,
                       "literal set assigns both polarities to action #" +
                           std::to_string(lits[i].act),
                       lits[i].act);
    }
  }
  return lits;
}

inline bool well_defined(LitSet lits) {
  std::sort(lits.begin(), lits.end());
  for (std::size_t i = 1; i < lits.size(); ++i) {
    if (lits[i].var == lits[i - 1].var && lits[i].pos != lits[i - 1].pos) {
      return false;
    }
  }
  return true;
}

inline LitSet complement(const LitSet& lits) {
  LitSet out = lits;
  for (Lit& l : out) l.pos = !l.pos;
  std::sort(out.begin(), out.end());
  return out;
}

// Mixed literal set over F ∪ A, both parts independently well-defined.
struct ExtLitSet {
  LitSet fluents;
  std::vector<ALit> actions;

  bool operator==(const ExtLitSet&) const = default;
};

inline ExtLitSet make_ext_lit_set(LitSet fluents, std::vector<ALit> actions) {
  return ExtLitSet{make_lit_set(std::move(fluents)),
                   make_alit_set(std::move(actions))};
}

enum class Part { Fluents, Actions };

inline ExtLitSet project(const ExtLitSet& l, Part part) {
  if (part == Part::Fluents) return ExtLitSet{l.fluents, {}};
  return ExtLitSet{{}, l.actions};
}

// Total literal set over the action universe encoding a joint action:
// members positive, every other action negative.
inline std::vector<ALit> encode_joint(const std::vector<int>& members,
                                      int num_actions) {
  std::vector<ALit> out;
  out.reserve(num_actions);
  std::vector<char> in(num_actions, 0);
  for (int m : members) {
    if (m < 0 || m >= num_actions) {
      throw ModelError(ModelError::Kind::BadReference,
                       "joint action member #" + std::to_string(m) +
                           " outside the action universe",
                       m);
    }
    in[m] = 1;
  }
  for (int a = 0; a < num_actions; ++a) out.push_back(ALit{a, in[a] != 0});
  return out;
}

// Total assignment over a fluent universe, stored as a bitset of true atoms.
class State {
 public:
  State() = default;
  explicit State(int n) : bits_((n + 63) / 64, 0), n_(n) {}

  int size() const { return n_; }

  bool test(int i) const { return (bits_[i >> 6] >> (i & 63)) & 1; }

  void set(int i, bool v) {
    if (v)
      bits_[i >> 6] |= (uint64_t{1} << (i & 63));
    else
      bits_[i >> 6] &= ~(uint64_t{1} << (i & 63));
  }

  bool operator==(const State&) const = default;

  uint64_t digest() const {
    uint64_t h = 1469598103934665603ull;
    for (uint64_t w : bits_) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return h ^ static_cast<uint64_t>(n_);
  }

  std::vector<int> true_atoms() const {
    std::vector<int> out;
    for (int i = 0; i < n_; ++i)
      if (test(i)) out.push_back(i);
    return out;
  }

  const std::vector<uint64_t>& words() const { return bits_; }

 private:
  std::vector<uint64_t> bits_;
  int n_ = 0;
};

struct StateHash {
  std::size_t operator()(const State& s) const {
    return static_cast<std::size_t>(s.digest());
  }
};

inline State make_state(int n, const std::vector<int>& true_atoms) {
  State s(n);
  for (int a : true_atoms) s.set(a, true);
  return s;
}

inline bool holds(const LitSet& lits, const State& s) {
  for (const Lit& l : lits)
    if (s.test(l.var) != l.pos) return false;
  return true;
}

// θ: positive literals of the effect become true, negative false, the
// rest is untouched; totality over F is preserved by construction.
inline State apply_effect(const State& s, const LitSet& effect) {
  State out = s;
  for (const Lit& l : effect) out.set(l.var, l.pos);
  return out;
}

// One conditional effect C ▷ E.  The condition may reference fluents and
// concurrent actions; the effect is on fluents only.
struct CondEffect {
  LitSet cond_f;
  std::vector<ALit> cond_a;
  LitSet effect;
};

// One agent's ground action with an extended precondition split into its
// fluent part and its concurrency-constraint part.
struct AtomicAction {
  Sym name;  // words = {schema, agent, args...}
  std::string schema;
  int agent = -1;
  std::vector<std::string> args;
  LitSet pre_f;
  std::vector<ALit> pre_a;
  std::vector<CondEffect> effects;
};

struct JointAction {
  std::vector<int> members;  // sorted action ids, nonempty

  bool operator==(const JointAction&) const = default;
};

struct ConcurrentPlan {
  std::vector<JointAction> steps;

  bool operator==(const ConcurrentPlan&) const = default;
};

struct MapProblem {
  std::string name;
  std::vector<std::string> agents;
  std::vector<Sym> fluents;
  std::vector<AtomicAction> actions;           // grouped by agent id
  std::vector<std::vector<int>> agent_actions; // per-agent action ids
  State init;
  LitSet goal;

  std::unordered_map<std::string, int> fluent_ids;  // display -> id
  std::unordered_map<std::string, int> action_ids;  // display -> id

  void build_index() {
    fluent_ids.clear();
    action_ids.clear();
    for (std::size_t i = 0; i < fluents.size(); ++i)
      fluent_ids.emplace(fluents[i].display(), static_cast<int>(i));
    for (std::size_t i = 0; i < actions.size(); ++i)
      action_ids.emplace(actions[i].name.display(), static_cast<int>(i));
  }

  int fluent_id(const std::string& display) const {
    auto it = fluent_ids.find(display);
    return it == fluent_ids.end() ? -1 : it->second;
  }

  int action_id(const std::string& display) const {
    auto it = action_ids.find(display);
    return it == action_ids.end() ? -1 : it->second;
  }
};

// Enforces nonemptiness and the one-action-per-agent rule.
inline JointAction make_joint_action(std::vector<int> members,
                                     const MapProblem& p) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty()) {
    throw ModelError(ModelError::Kind::EmptyJointAction,
                     "joint action has no members");
  }
  std::vector<char> seen(p.agents.size(), 0);
  for (int m : members) {
    if (m < 0 || m >= static_cast<int>(p.actions.size())) {
      throw ModelError(ModelError::Kind::BadReference,
                       "unknown action id #" + std::to_string(m), m);
    }
    int agent = p.actions[m].agent;
    if (seen[agent]) {
      throw ModelError(ModelError::Kind::AgentDuplication,
                       "agent " + p.agents[agent] +
                           " contributes more than one action",
                       agent);
    }
    seen[agent] = 1;
  }
  return JointAction{std::move(members)};
}

}  // namespace cmap

#endif  // CMAP_MODEL_HPP
