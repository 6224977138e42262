#include <doctest.h>

#include <random>

#include "cmap/model.hpp"
#include "support.hpp"

using namespace cmap;

TEST_CASE("literal sets are sorted, deduplicated and conflict-checked") {
  LitSet s = make_lit_set({Lit{2, true}, Lit{0, false}, Lit{2, true}});
  CHECK(s == LitSet{Lit{0, false}, Lit{2, true}});
  CHECK_THROWS_AS(make_lit_set({Lit{1, true}, Lit{1, false}}), ModelError);
  CHECK(well_defined({Lit{1, true}, Lit{2, false}, Lit{1, true}}));
  CHECK_FALSE(well_defined({Lit{1, true}, Lit{1, false}}));
}

TEST_CASE("well-definedness matches the brute-force oracle on small universes") {
  // Every literal list over <= 4 fluents drawn from <= 5 literals.
  std::vector<Lit> universe;
  for (int v = 0; v < 4; ++v) {
    universe.push_back(Lit{v, true});
    universe.push_back(Lit{v, false});
  }
  std::vector<int> pick(5, 0);
  auto rec = [&](auto&& self, std::size_t i, std::vector<Lit>& lits) -> void {
    if (i == pick.size()) {
      bool oracle = support::naive_well_defined(lits);
      CHECK(well_defined(lits) == oracle);
      bool threw = false;
      try {
        make_lit_set(lits);
      } catch (const ModelError&) {
        threw = true;
      }
      CHECK(threw == !oracle);
      return;
    }
    for (const Lit& l : universe) {
      lits.push_back(l);
      self(self, i + 1, lits);
      lits.pop_back();
    }
    self(self, pick.size(), lits);  // shorter lists too
  };
  std::vector<Lit> lits;
  rec(rec, 0, lits);
}

TEST_CASE("complement flips every literal") {
  LitSet s = make_lit_set({Lit{0, true}, Lit{3, false}});
  CHECK(complement(s) == LitSet{Lit{0, false}, Lit{3, true}});
  CHECK(complement(complement(s)) == s);
}

TEST_CASE("projection splits the fluent and action parts") {
  ExtLitSet e = make_ext_lit_set({Lit{1, true}}, {ALit{3, false}});
  CHECK(project(e, Part::Fluents) == ExtLitSet{{Lit{1, true}}, {}});
  CHECK(project(e, Part::Actions) == ExtLitSet{{}, {ALit{3, false}}});
}

TEST_CASE("encode_joint is a total assignment over the action universe") {
  // L({a1, a4}) over four actions: members positive, the rest negative.
  auto l = encode_joint({0, 3}, 4);
  CHECK(l == std::vector<ALit>{ALit{0, true}, ALit{1, false}, ALit{2, false},
                               ALit{3, true}});
  CHECK_THROWS_AS(encode_joint({4}, 4), ModelError);
}

TEST_CASE("the worked example's precondition projects as stated") {
  // pre(a1) = {not-a4}: holds in L({a1, a3}), fails in L({a1, a4}).
  std::vector<ALit> pre = {ALit{3, false}};
  auto holds_in = [&](const std::vector<int>& members) {
    auto l = encode_joint(members, 4);
    for (const ALit& c : pre)
      if (l[c.act].pos != c.pos) return false;
    return true;
  };
  CHECK(holds_in({0, 2}));
  CHECK_FALSE(holds_in({0, 3}));
  CHECK(holds_in({0}));
}

TEST_CASE("apply_effect sets exactly the effect literals") {
  State s = make_state(4, {0, 2});
  State t = apply_effect(s, make_lit_set({Lit{0, false}, Lit{1, true}}));
  CHECK(t.true_atoms() == std::vector<int>{1, 2});
  CHECK(s.true_atoms() == std::vector<int>{0, 2});  // input untouched
  CHECK(apply_effect(t, {}) == t);
}

TEST_CASE("state digests distinguish all states of a small universe") {
  std::vector<uint64_t> seen;
  for (int bits = 0; bits < 64; ++bits) {
    State s(6);
    for (int v = 0; v < 6; ++v) s.set(v, (bits >> v) & 1);
    seen.push_back(s.digest());
  }
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("joint actions enforce the one-action-per-agent rule") {
  MapProblem p = support::small_example();
  CHECK(make_joint_action({0, 2}, p).members == std::vector<int>{0, 2});
  CHECK(make_joint_action({2, 0}, p).members == std::vector<int>{0, 2});
  CHECK_THROWS_AS(make_joint_action({}, p), ModelError);
  CHECK_THROWS_AS(make_joint_action({0, 1}, p), ModelError);  // both ag1
  CHECK_THROWS_AS(make_joint_action({7}, p), ModelError);
  try {
    make_joint_action({2, 3}, p);
    CHECK(false);
  } catch (const ModelError& e) {
    CHECK(e.kind == ModelError::Kind::AgentDuplication);
  }
}

TEST_CASE("symbol display and mangled forms") {
  Sym s{{"select-to-table", "a1", "r1", "s2"}};
  CHECK(s.display() == "(select-to-table a1 r1 s2)");
  CHECK(s.mangled() == "select-to-table-a1-r1-s2");
}
