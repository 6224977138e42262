#ifndef CMAP_BENCH_HPP
#define CMAP_BENCH_HPP

// Benchmark instance generators (maze, tablemover, workshop, boxpushing,
// maze-scaling) and the matrix runner: compile, solve, decode, validate
// per cell.  Generators are pure functions of the spec, including its
// seed.
//
// Positive concurrency constraints are realized with witness parameters:
// an action that needs a partner carries the partner agent as a
// parameter and references the partner's symmetric action.  Pairs
// (boats, medium boxes, switch+key, lift+examine) are mutual, large
// boxes use a cyclic triple.

#include <atomic>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cmap/ast.hpp"
#include "cmap/codec.hpp"
#include "cmap/compile.hpp"
#include "cmap/ground.hpp"
#include "cmap/search.hpp"

namespace cmap {

struct BenchSpec {
  std::string domain;  // maze | tablemover | workshop | boxpushing | maze-scaling
  int agents = 2;
  int rooms = 2;            // tablemover
  int blocks = 1;           // tablemover
  int grid_w = 3;           // maze
  int grid_h = 3;           // maze
  int doors = 1;            // workshop
  int pallets = 1;          // workshop
  int locations = 2;        // boxpushing
  std::vector<int> boxes = {1};  // boxpushing box sizes (1..3)
  unsigned seed = 1;
};

struct GeneratedInstance {
  std::string domain_text;
  std::string problem_text;
};

class BenchError : public std::runtime_error {
 public:
  explicit BenchError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace bdetail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw BenchError(msg);
}

inline std::string agent_name(int i) { return "a" + std::to_string(i + 1); }

}  // namespace bdetail

// TableMover: two agents move blocks between rooms, either carrying them
// or on a table that tips when lowered on one side.  At the default size
// (2 agents, 1 block, 2 rooms) this is the classic two-room instance.
inline GeneratedInstance generate_tablemover(const BenchSpec& s) {
  bdetail::require(s.agents >= 1 && s.blocks >= 1 && s.rooms >= 2,
                   "tablemover needs >= 1 agent, >= 1 block, >= 2 rooms");
  std::ostringstream d;
  d << R"((define (domain tablemover)
  (:requirements :strips :typing :negative-preconditions
                 :conditional-effects :universal-preconditions :equality)
  (:types agent block room side)
  (:predicates
    (at-agent ?a - agent ?r - room)
    (at-side ?a - agent ?s - side)
    (handempty ?a - agent)
    (holding ?a - agent ?b - block)
    (on-table ?b - block)
    (on-floor ?b - block)
    (inroom ?b - block ?r - room)
    (inroom-table ?r - room)
    (down ?s - side)
    (up ?s - side)
    (lifting ?a - agent ?s - side)
    (occupied ?s - side)
    (connected ?r1 - room ?r2 - room))
  (:action move-agent
    :agent ?a - agent
    :parameters (?r1 - room ?r2 - room)
    :precondition (and (at-agent ?a ?r1) (connected ?r1 ?r2)
                       (forall (?s - side) (not (at-side ?a ?s))))
    :effect (and (not (at-agent ?a ?r1)) (at-agent ?a ?r2)))
  (:action pickup-floor
    :agent ?a - agent
    :parameters (?b - block ?r - room)
    :precondition (and (at-agent ?a ?r) (on-floor ?b) (inroom ?b ?r)
                       (handempty ?a)
                       (forall (?s - side) (not (at-side ?a ?s)))
                       (forall (?a2 - agent)
                         (and (not (= ?a2 ?a))
                              (not (pickup-floor ?a2 ?b ?r)))))
    :effect (and (holding ?a ?b) (not (handempty ?a))
                 (not (on-floor ?b)) (not (inroom ?b ?r))))
  (:action putdown-floor
    :agent ?a - agent
    :parameters (?b - block ?r - room)
    :precondition (and (at-agent ?a ?r) (holding ?a ?b))
    :effect (and (not (holding ?a ?b)) (handempty ?a)
                 (on-floor ?b) (inroom ?b ?r)))
  (:action pickup-table
    :agent ?a - agent
    :parameters (?b - block ?r - room)
    :precondition (and (at-agent ?a ?r) (inroom-table ?r) (on-table ?b)
                       (handempty ?a)
                       (forall (?a2 - agent)
                         (and (not (= ?a2 ?a))
                              (not (pickup-table ?a2 ?b ?r)))))
    :effect (and (holding ?a ?b) (not (handempty ?a)) (not (on-table ?b))))
  (:action putdown-table
    :agent ?a - agent
    :parameters (?b - block ?r - room)
    :precondition (and (at-agent ?a ?r) (inroom-table ?r) (holding ?a ?b))
    :effect (and (not (holding ?a ?b)) (handempty ?a) (on-table ?b)))
  (:action to-table
    :agent ?a - agent
    :parameters (?r - room ?s - side)
    :precondition (and (at-agent ?a ?r) (inroom-table ?r)
                       (not (occupied ?s))
                       (forall (?s2 - side) (not (at-side ?a ?s2)))
                       (forall (?a2 - agent)
                         (and (not (= ?a2 ?a))
                              (not (to-table ?a2 ?r ?s)))))
    :effect (and (at-side ?a ?s) (occupied ?s)))
  (:action from-table
    :agent ?a - agent
    :parameters (?s - side)
    :precondition (and (at-side ?a ?s) (down ?s))
    :effect (and (not (at-side ?a ?s)) (not (occupied ?s))))
  (:action lift-side
    :agent ?a - agent
    :parameters (?s - side)
    :precondition (and (at-side ?a ?s) (down ?s) (handempty ?a)
                       (forall (?a2 - agent ?s2 - side)
                         (not (lower-side ?a2 ?s2))))
    :effect (and (not (down ?s)) (lifting ?a ?s) (up ?s)
                 (not (handempty ?a))
                 (forall (?b - block ?r - room ?s2 - side)
                   (when (and (inroom-table ?r) (on-table ?b) (down ?s2)
                              (forall (?a2 - agent)
                                (not (lift-side ?a2 ?s2))))
                     (and (on-floor ?b) (inroom ?b ?r)
                          (not (on-table ?b)))))))
  (:action lower-side
    :agent ?a - agent
    :parameters (?s - side)
    :precondition (and (at-side ?a ?s) (lifting ?a ?s))
    :effect (and (down ?s) (not (up ?s)) (not (lifting ?a ?s))
                 (handempty ?a)
                 (forall (?b - block ?r - room ?s2 - side)
                   (when (and (inroom-table ?r) (on-table ?b) (up ?s2)
                              (forall (?a2 - agent)
                                (not (lower-side ?a2 ?s2))))
                     (and (on-floor ?b) (inroom ?b ?r)
                          (not (on-table ?b)))))))
  (:action move-table
    :agent ?a - agent
    :parameters (?r1 - room ?r2 - room ?s - side)
    :precondition (and (at-agent ?a ?r1) (inroom-table ?r1)
                       (connected ?r1 ?r2) (lifting ?a ?s)
                       (forall (?s2 - side) (up ?s2))
                       (forall (?a2 - agent ?s2 - side)
                         (not (lower-side ?a2 ?s2)))
                       (forall (?a2 - agent ?r3 - room ?s2 - side)
                         (and (not (= ?r3 ?r2))
                              (not (move-table ?a2 ?r1 ?r3 ?s2)))))
    :effect (and (not (at-agent ?a ?r1)) (at-agent ?a ?r2)
                 (not (inroom-table ?r1)) (inroom-table ?r2)))
)
)";
  std::ostringstream p;
  p << "(define (problem tablemover-" << s.agents << "-" << s.blocks << "-"
    << s.rooms << ")\n";
  p << "  (:domain tablemover)\n  (:objects";
  for (int i = 0; i < s.agents; ++i) p << " " << bdetail::agent_name(i);
  p << " - agent";
  for (int i = 0; i < s.blocks; ++i) p << " b" << i + 1;
  p << " - block";
  for (int i = 0; i < s.rooms; ++i) p << " r" << i + 1;
  p << " - room s1 s2 - side)\n  (:init\n";
  p << "    (inroom-table r1) (down s1) (down s2)\n";
  for (int i = 0; i < s.agents; ++i)
    p << "    (at-agent " << bdetail::agent_name(i) << " r1) (handempty "
      << bdetail::agent_name(i) << ")\n";
  for (int i = 0; i < s.blocks; ++i)
    p << "    (on-floor b" << i + 1 << ") (inroom b" << i + 1 << " r1)\n";
  for (int i = 0; i + 1 < s.rooms; ++i)
    p << "    (connected r" << i + 1 << " r" << i + 2 << ") (connected r"
      << i + 2 << " r" << i + 1 << ")\n";
  p << "  )\n  (:goal (and";
  for (int i = 0; i < s.blocks; ++i)
    p << " (inroom b" << i + 1 << " r" << s.rooms << ") (on-floor b" << i + 1
      << ")";
  p << "))\n)\n";
  return GeneratedInstance{d.str(), p.str()};
}

namespace bdetail {

// Shared maze domain: doors exclude other users, bridges are destroyed
// on first use, boats need two rowers in the same direction (mutual
// witness parameter).
inline std::string maze_domain() {
  return R"((define (domain maze)
  (:requirements :strips :typing :negative-preconditions :equality
                 :universal-preconditions)
  (:types agent loc)
  (:predicates
    (at ?a - agent ?l - loc)
    (door ?l1 - loc ?l2 - loc)
    (bridge ?l1 - loc ?l2 - loc)
    (bridge-ok ?l1 - loc ?l2 - loc)
    (boat ?l1 - loc ?l2 - loc))
  (:action walk-door
    :agent ?a - agent
    :parameters (?l1 - loc ?l2 - loc)
    :precondition (and (at ?a ?l1) (door ?l1 ?l2)
                       (forall (?a2 - agent)
                         (and (not (= ?a2 ?a))
                              (not (walk-door ?a2 ?l1 ?l2))
                              (not (walk-door ?a2 ?l2 ?l1)))))
    :effect (and (not (at ?a ?l1)) (at ?a ?l2)))
  (:action cross-bridge
    :agent ?a - agent
    :parameters (?l1 - loc ?l2 - loc)
    :precondition (and (at ?a ?l1) (bridge ?l1 ?l2) (bridge-ok ?l1 ?l2))
    :effect (and (not (at ?a ?l1)) (at ?a ?l2)
                 (not (bridge-ok ?l1 ?l2)) (not (bridge-ok ?l2 ?l1))))
  (:action row
    :agent ?a - agent
    :parameters (?l1 - loc ?l2 - loc ?a2 - agent)
    :precondition (and (at ?a ?l1) (boat ?l1 ?l2) (not (= ?a ?a2))
                       (row ?a2 ?l1 ?l2 ?a))
    :effect (and (not (at ?a ?l1)) (at ?a ?l2)))
)
)";
}

}  // namespace bdetail

// Random grid maze: agents start in the top-left cell and must gather in
// the bottom-right one; each grid edge is a door, a bridge, or a boat,
// chosen by the seeded generator.
inline GeneratedInstance generate_maze(const BenchSpec& s) {
  bdetail::require(s.agents >= 1 && s.grid_w >= 2 && s.grid_h >= 1,
                   "maze needs >= 1 agent and a grid of >= 2 cells");
  std::mt19937 rng(s.seed);
  auto cell = [&](int x, int y) {
    return "c" + std::to_string(x) + "-" + std::to_string(y);
  };
  std::ostringstream p;
  p << "(define (problem maze-" << s.grid_w << "x" << s.grid_h << "-"
    << s.agents << "-s" << s.seed << ")\n  (:domain maze)\n  (:objects";
  for (int i = 0; i < s.agents; ++i) p << " " << bdetail::agent_name(i);
  p << " - agent";
  for (int x = 0; x < s.grid_w; ++x)
    for (int y = 0; y < s.grid_h; ++y) p << " " << cell(x, y);
  p << " - loc)\n  (:init\n";
  for (int i = 0; i < s.agents; ++i)
    p << "    (at " << bdetail::agent_name(i) << " " << cell(0, 0) << ")\n";
  std::uniform_int_distribution<int> kind(0, 9);
  auto edge = [&](const std::string& u, const std::string& v) {
    int k = kind(rng);
    if (k < 6) {
      p << "    (door " << u << " " << v << ") (door " << v << " " << u
        << ")\n";
    } else if (k < 8) {
      p << "    (bridge " << u << " " << v << ") (bridge " << v << " " << u
        << ")\n    (bridge-ok " << u << " " << v << ") (bridge-ok " << v
        << " " << u << ")\n";
    } else {
      p << "    (boat " << u << " " << v << ") (boat " << v << " " << u
        << ")\n";
    }
  };
  for (int x = 0; x < s.grid_w; ++x)
    for (int y = 0; y < s.grid_h; ++y) {
      if (x + 1 < s.grid_w) edge(cell(x, y), cell(x + 1, y));
      if (y + 1 < s.grid_h) edge(cell(x, y), cell(x, y + 1));
    }
  p << "  )\n  (:goal (and";
  for (int i = 0; i < s.agents; ++i)
    p << " (at " << bdetail::agent_name(i) << " "
      << cell(s.grid_w - 1, s.grid_h - 1) << ")";
  p << "))\n)\n";
  return GeneratedInstance{bdetail::maze_domain(), p.str()};
}

// Scalability instance: a 3x3 grid whose only route is a single path of
// interleaved bridges and boats; all agents share start and goal, so the
// whole group must cross each bridge at once and row the boats in pairs.
inline GeneratedInstance generate_maze_scaling(const BenchSpec& s) {
  bdetail::require(s.agents >= 2 && s.agents % 2 == 0,
                   "maze-scaling needs an even agent count >= 2");
  auto cell = [&](int x, int y) {
    return "c" + std::to_string(x) + "-" + std::to_string(y);
  };
  std::vector<std::string> path = {cell(0, 0), cell(1, 0), cell(2, 0),
                                   cell(2, 1), cell(2, 2)};
  std::ostringstream p;
  p << "(define (problem maze-scaling-" << s.agents
    << ")\n  (:domain maze)\n  (:objects";
  for (int i = 0; i < s.agents; ++i) p << " " << bdetail::agent_name(i);
  p << " - agent";
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) p << " " << cell(x, y);
  p << " - loc)\n  (:init\n";
  for (int i = 0; i < s.agents; ++i)
    p << "    (at " << bdetail::agent_name(i) << " " << path[0] << ")\n";
  for (std::size_t e = 0; e + 1 < path.size(); ++e) {
    if (e % 2 == 0)
      p << "    (bridge " << path[e] << " " << path[e + 1] << ") (bridge-ok "
        << path[e] << " " << path[e + 1] << ")\n";
    else
      p << "    (boat " << path[e] << " " << path[e + 1] << ")\n";
  }
  p << "  )\n  (:goal (and";
  for (int i = 0; i < s.agents; ++i)
    p << " (at " << bdetail::agent_name(i) << " " << path.back() << ")";
  p << "))\n)\n";
  return GeneratedInstance{bdetail::maze_domain(), p.str()};
}

// Workshop: doors open only when one agent presses the switch while
// another turns the key; pallets are examined only while a partner holds
// them up with the forklift.  Both are mutual witness pairs.
inline GeneratedInstance generate_workshop(const BenchSpec& s) {
  bdetail::require(s.agents >= 2 && s.doors >= 0 && s.pallets >= 0 &&
                       s.doors + s.pallets >= 1,
                   "workshop needs >= 2 agents and >= 1 door or pallet");
  std::ostringstream d;
  d << R"((define (domain workshop)
  (:requirements :strips :typing :negative-preconditions :equality)
  (:types agent door switch key pallet)
  (:predicates
    (locked ?d - door)
    (open ?d - door)
    (pressed ?s - switch)
    (controls ?s - switch ?d - door)
    (fits ?k - key ?d - door)
    (lifted ?p - pallet)
    (examined ?p - pallet))
  (:action press-switch
    :agent ?a - agent
    :parameters (?s - switch ?d - door ?k - key ?a2 - agent)
    :precondition (and (controls ?s ?d) (fits ?k ?d) (locked ?d)
                       (not (= ?a ?a2))
                       (turn-key ?a2 ?k ?d ?s ?a))
    :effect (and (pressed ?s)))
  (:action turn-key
    :agent ?a - agent
    :parameters (?k - key ?d - door ?s - switch ?a2 - agent)
    :precondition (and (controls ?s ?d) (fits ?k ?d) (locked ?d)
                       (not (= ?a ?a2))
                       (press-switch ?a2 ?s ?d ?k ?a))
    :effect (and (open ?d) (not (locked ?d))))
  (:action lift-pallet
    :agent ?a - agent
    :parameters (?p - pallet ?a2 - agent)
    :precondition (and (not (= ?a ?a2))
                       (examine-pallet ?a2 ?p ?a))
    :effect (and (lifted ?p)))
  (:action examine-pallet
    :agent ?a - agent
    :parameters (?p - pallet ?a2 - agent)
    :precondition (and (not (= ?a ?a2))
                       (lift-pallet ?a2 ?p ?a))
    :effect (and (examined ?p)))
)
)";
  std::ostringstream p;
  p << "(define (problem workshop-" << s.agents << "-" << s.doors << "-"
    << s.pallets << ")\n  (:domain workshop)\n  (:objects";
  for (int i = 0; i < s.agents; ++i) p << " " << bdetail::agent_name(i);
  p << " - agent";
  if (s.doors > 0) {
    for (int i = 0; i < s.doors; ++i) p << " d" << i + 1;
    p << " - door";
    for (int i = 0; i < s.doors; ++i) p << " sw" << i + 1;
    p << " - switch";
    for (int i = 0; i < s.doors; ++i) p << " k" << i + 1;
    p << " - key";
  }
  if (s.pallets > 0) {
    for (int i = 0; i < s.pallets; ++i) p << " p" << i + 1;
    p << " - pallet";
  }
  p << ")\n  (:init\n";
  for (int i = 0; i < s.doors; ++i)
    p << "    (locked d" << i + 1 << ") (controls sw" << i + 1 << " d" << i + 1
      << ") (fits k" << i + 1 << " d" << i + 1 << ")\n";
  p << "  )\n  (:goal (and";
  for (int i = 0; i < s.doors; ++i) p << " (open d" << i + 1 << ")";
  for (int i = 0; i < s.pallets; ++i) p << " (examined p" << i + 1 << ")";
  p << "))\n)\n";
  return GeneratedInstance{d.str(), p.str()};
}

// BoxPushing: boxes of size 1, 2 or 3 need as many simultaneous pushers.
// Medium boxes use a mutual witness pair, large boxes a cyclic triple,
// so any superset of pushers still satisfies the constraints.
inline GeneratedInstance generate_boxpushing(const BenchSpec& s) {
  bdetail::require(s.agents >= 1 && s.locations >= 2 && !s.boxes.empty(),
                   "boxpushing needs >= 1 agent, >= 2 locations, >= 1 box");
  for (int b : s.boxes)
    bdetail::require(b >= 1 && b <= 3, "box sizes must be 1, 2 or 3");
  std::ostringstream d;
  d << R"((define (domain boxpushing)
  (:requirements :strips :typing :negative-preconditions :equality)
  (:types agent box loc)
  (:predicates
    (at ?a - agent ?l - loc)
    (box-at ?b - box ?l - loc)
    (adj ?l1 - loc ?l2 - loc)
    (size1 ?b - box)
    (size2 ?b - box)
    (size3 ?b - box))
  (:action move
    :agent ?a - agent
    :parameters (?l1 - loc ?l2 - loc)
    :precondition (and (at ?a ?l1) (adj ?l1 ?l2))
    :effect (and (not (at ?a ?l1)) (at ?a ?l2)))
  (:action push-small
    :agent ?a - agent
    :parameters (?b - box ?l1 - loc ?l2 - loc)
    :precondition (and (size1 ?b) (at ?a ?l1) (box-at ?b ?l1) (adj ?l1 ?l2))
    :effect (and (not (box-at ?b ?l1)) (box-at ?b ?l2)
                 (not (at ?a ?l1)) (at ?a ?l2)))
  (:action push-medium
    :agent ?a - agent
    :parameters (?b - box ?l1 - loc ?l2 - loc ?a2 - agent)
    :precondition (and (size2 ?b) (at ?a ?l1) (box-at ?b ?l1) (adj ?l1 ?l2)
                       (not (= ?a ?a2))
                       (push-medium ?a2 ?b ?l1 ?l2 ?a))
    :effect (and (not (box-at ?b ?l1)) (box-at ?b ?l2)
                 (not (at ?a ?l1)) (at ?a ?l2)))
  (:action push-large
    :agent ?a - agent
    :parameters (?b - box ?l1 - loc ?l2 - loc ?a2 - agent ?a3 - agent)
    :precondition (and (size3 ?b) (at ?a ?l1) (box-at ?b ?l1) (adj ?l1 ?l2)
                       (not (= ?a ?a2)) (not (= ?a ?a3)) (not (= ?a2 ?a3))
                       (push-large ?a2 ?b ?l1 ?l2 ?a3 ?a)
                       (push-large ?a3 ?b ?l1 ?l2 ?a ?a2))
    :effect (and (not (box-at ?b ?l1)) (box-at ?b ?l2)
                 (not (at ?a ?l1)) (at ?a ?l2)))
)
)";
  std::ostringstream p;
  p << "(define (problem boxpushing-" << s.agents << "-"
    << static_cast<int>(s.boxes.size()) << "-" << s.locations
    << ")\n  (:domain boxpushing)\n  (:objects";
  for (int i = 0; i < s.agents; ++i) p << " " << bdetail::agent_name(i);
  p << " - agent";
  for (std::size_t i = 0; i < s.boxes.size(); ++i) p << " b" << i + 1;
  p << " - box";
  for (int i = 0; i < s.locations; ++i) p << " l" << i + 1;
  p << " - loc)\n  (:init\n";
  for (int i = 0; i < s.agents; ++i)
    p << "    (at " << bdetail::agent_name(i) << " l1)\n";
  for (std::size_t i = 0; i < s.boxes.size(); ++i)
    p << "    (box-at b" << i + 1 << " l1) (size" << s.boxes[i] << " b"
      << i + 1 << ")\n";
  for (int i = 0; i + 1 < s.locations; ++i)
    p << "    (adj l" << i + 1 << " l" << i + 2 << ") (adj l" << i + 2 << " l"
      << i + 1 << ")\n";
  p << "  )\n  (:goal (and";
  for (std::size_t i = 0; i < s.boxes.size(); ++i)
    p << " (box-at b" << i + 1 << " l" << s.locations << ")";
  p << "))\n)\n";
  return GeneratedInstance{d.str(), p.str()};
}

inline GeneratedInstance generate(const BenchSpec& s) {
  if (s.domain == "tablemover") return generate_tablemover(s);
  if (s.domain == "maze") return generate_maze(s);
  if (s.domain == "maze-scaling") return generate_maze_scaling(s);
  if (s.domain == "workshop") return generate_workshop(s);
  if (s.domain == "boxpushing") return generate_boxpushing(s);
  throw BenchError("unknown benchmark domain '" + s.domain + "'");
}

inline std::pair<MapProblem, GroundingReport> build_instance(
    const BenchSpec& s) {
  GeneratedInstance gi = generate(s);
  DomainAst d = parse_domain(gi.domain_text);
  ProblemAst p = parse_problem(gi.problem_text, d);
  return ground(d, p);
}

// One column of the bench matrix.
struct BenchVariant {
  std::string label;
  bool naive = false;
  CompileOptions opts;
  SearchConfig::Heuristic heuristic = SearchConfig::Heuristic::Additive;
};

struct BenchRow {
  std::string instance;
  std::string variant;
  int grounded_actions = 0;       // |A| of the MAP
  long long compiled_actions = 0; // |A'| of the classical problem
  std::string status;             // solved | unsolvable | timeout
  double seconds = 0;
  int classical_len = -1;
  int makespan = -1;  // decoded joint steps
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

/// Decodes a plan over a naive compilation: each macro is one joint action.
inline ConcurrentPlan decode_naive(const ClassicalPlan& plan,
                                   const MapProblem& mp,
                                   const ClassicalProblem& cp) {
  ConcurrentPlan out;
  for (int id : plan) {
    const Provenance& pr = cp.provenance[id];
    if (pr.kind != CompiledKind::Joint)
      throw CodecError(CodecError::Kind::MalformedSegmentation,
                       "non-macro action in a naive plan");
    out.steps.push_back(make_joint_action(pr.members, mp));
  }
  return out;
}

inline BenchRow run_cell(const BenchSpec& spec, const BenchVariant& variant,
                         double timeout_s, long long node_cap) {
  auto [mp, grep] = build_instance(spec);
  BenchRow row;
  {
    GeneratedInstance gi = generate(spec);
    std::string pname = parse_problem(gi.problem_text,
                                      parse_domain(gi.domain_text)).name;
    row.instance = pname;
  }
  row.variant = variant.label;
  row.grounded_actions = grep.total_actions();

  ClassicalProblem cp =
      variant.naive
          ? naive_compile(mp, static_cast<int>(mp.agents.size()))
          : compile(mp, variant.opts);
  row.compiled_actions = static_cast<long long>(cp.actions.size());

  SearchConfig cfg;
  cfg.heuristic = variant.heuristic;
  cfg.timeout_s = timeout_s;
  cfg.node_cap = node_cap;
  SearchResult res = solve(cp, cfg);
  row.seconds = res.stats.seconds;
  switch (res.status) {
    case SearchStatus::Solved: {
      row.status = "solved";
      row.classical_len = static_cast<int>(res.plan.size());
      ConcurrentPlan dec = variant.naive ? decode_naive(res.plan, mp, cp)
                                         : decode(res.plan, mp, cp);
      row.makespan = static_cast<int>(dec.steps.size());
      ValidationReport rep = validate_concurrent(mp, dec);
      if (!rep.valid)
        throw BenchError("validation failure on " + row.instance + " / " +
                         row.variant + ": " +
                         (rep.failure ? rep.failure->detail : "?"));
      break;
    }
    case SearchStatus::Unsolvable:
      row.status = "unsolvable";
      break;
    case SearchStatus::Timeout:
      row.status = "timeout";
      break;
  }
  return row;
}

inline BenchReport run_bench(const std::vector<BenchSpec>& specs,
                             const std::vector<BenchVariant>& variants,
                             double timeout_s = 300.0,
                             long long node_cap = 1'000'000, int jobs = 1) {
  struct Cell {
    const BenchSpec* spec;
    const BenchVariant* variant;
  };
  std::vector<Cell> cells;
  for (const auto& s : specs)
    for (const auto& v : variants) cells.push_back(Cell{&s, &v});

  BenchReport report;
  report.rows.resize(cells.size());
  if (jobs < 1) jobs = 1;
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::string first_error;
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        report.rows[i] =
            run_cell(*cells[i].spec, *cells[i].variant, timeout_s, node_cap);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (first_error.empty()) first_error = e.what();
      }
    }
  };
  if (jobs == 1 || cells.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (!first_error.empty()) throw BenchError(first_error);
  return report;
}

inline std::string bench_to_csv(const BenchReport& r) {
  std::ostringstream out;
  out << "instance,variant,grounded_actions,compiled_actions,status,"
         "seconds,classical_len,makespan\n";
  for (const BenchRow& row : r.rows) {
    out << row.instance << "," << row.variant << "," << row.grounded_actions
        << "," << row.compiled_actions << "," << row.status << ","
        << row.seconds << "," << row.classical_len << "," << row.makespan
        << "\n";
  }
  return out.str();
}

inline std::string bench_to_text(const BenchReport& r) {
  std::ostringstream out;
  out << "instance                    variant       |A|   |A'|  status"
         "      time(s)  len  makespan\n";
  for (const BenchRow& row : r.rows) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%-27s %-12s %5d %6lld  %-10s %7.2f %4d %9d\n",
                  row.instance.c_str(), row.variant.c_str(),
                  row.grounded_actions, row.compiled_actions,
                  row.status.c_str(), row.seconds, row.classical_len,
                  row.makespan);
    out << buf;
  }
  return out.str();
}

}  // namespace cmap

#endif  // CMAP_BENCH_HPP
