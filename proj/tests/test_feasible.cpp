#include "olg/feasible.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

using namespace olg;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(OLG_GAMES_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

StageGame pd() { return parse_game(read_fixture("prisoners_dilemma.json")); }
StageGame coordination() { return parse_game(read_fixture("coordination.json")); }

StableSequence seq(const StageGame& g, std::initializer_list<std::vector<std::string>> labels) {
  StableSequence s;
  for (const auto& l : labels) s.push_back(g.profile_by_labels(l));
  return s;
}

}  // namespace

TEST_CASE("effective discount") {
  CHECK(effective_discount(Rat(1, 2), 1).Delta == Rat(1, 2));
  CHECK(effective_discount(Rat(1, 2), 2).Delta == Rat(1, 4));
  CHECK(effective_discount(Rat(9, 10), 3).Delta == Rat(729, 1000));
  CHECK_THROWS_AS(effective_discount(Rat(0), 1), ValidationError);
  CHECK_THROWS_AS(effective_discount(Rat(3, 2), 1), ValidationError);
  CHECK_THROWS_AS(effective_discount(Rat(1, 2), 0), ValidationError);
}

TEST_CASE("stable payoffs") {
  StageGame g = pd();
  CHECK(stable_payoff(g, seq(g, {{"C", "C"}, {"C", "C"}}), Rat(1, 2)) == PayoffVector{1, 1});
  CHECK(stable_payoff(g, seq(g, {{"D", "C"}, {"C", "D"}}), Rat(1, 3)) ==
        PayoffVector{Rat(5, 4), Rat(5, 4)});
  CHECK(stable_payoff(g, seq(g, {{"D", "C"}, {"C", "D"}}), Rat(2, 3)) ==
        PayoffVector{Rat(4, 5), Rat(4, 5)});
  CHECK_THROWS_AS(stable_payoff(g, seq(g, {{"C", "C"}, {"C", "C"}}), Rat(0)), ValidationError);
  CHECK_THROWS_AS(stable_payoff(g, seq(g, {{"C", "C"}}), Rat(1, 2)), ValidationError);
}

TEST_CASE("lifetime payoffs") {
  StageGame g = pd();
  DiscountSpec t1 = effective_discount(Rat(1, 3), 1);
  CHECK(lifetime_payoff(g, seq(g, {{"D", "C"}, {"C", "D"}}), t1) ==
        PayoffVector{Rat(5, 4), Rat(5, 4)});

  DiscountSpec t2 = effective_discount(Rat(1, 2), 2);
  StableSequence stretched = seq(g, {{"D", "C"}, {"D", "C"}, {"C", "D"}, {"C", "D"}});
  CHECK(lifetime_payoff(g, stretched, t2) ==
        stable_payoff(g, seq(g, {{"D", "C"}, {"C", "D"}}), Rat(1, 4)));

  StableSequence constant = seq(g, {{"D", "D"}, {"D", "D"}, {"D", "D"}, {"D", "D"}});
  CHECK(lifetime_payoff(g, constant, t2) == PayoffVector{0, 0});

  CHECK_THROWS_AS(lifetime_payoff(g, seq(g, {{"C", "C"}}), t2), ValidationError);
}

TEST_CASE("rotation identity") {
  StageGame g = coordination();
  SplitMix64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    StableSequence s;
    for (int k = 0; k < 3; ++k)
      s.push_back(g.profile_from_index(static_cast<int>(rng.below(8))));
    Rat Delta(1 + static_cast<long>(rng.below(9)), 10);
    PayoffVector v = stable_payoff(g, s, Delta);
    for (int i = 0; i < 3; ++i) {
      StableSequence rotated;
      for (int k = 0; k < 3; ++k) rotated.push_back(s[(i + k) % 3]);
      CHECK(stable_payoff(g, rotated, Delta)[0] == v[i]);
    }
  }
}

TEST_CASE("stretch identity") {
  StageGame g = pd();
  SplitMix64 rng(4);
  for (int T : {1, 2, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      StableSequence s;
      for (int k = 0; k < 2; ++k)
        s.push_back(g.profile_from_index(static_cast<int>(rng.below(4))));
      Rat delta(1 + static_cast<long>(rng.below(9)), 10);
      DiscountSpec spec = effective_discount(delta, T);
      LifetimeSequence stretched;
      for (const auto& a : s)
        for (int t = 0; t < T; ++t) stretched.push_back(a);
      CHECK(lifetime_payoff(g, stretched, spec) == stable_payoff(g, s, spec.Delta));
    }
  }
}

TEST_CASE("feasible sets") {
  StageGame g = pd();
  CHECK(hull_equal(feasible_set(g, Rat(1)), one_shot_hull(g)));

  Polytope f13 = feasible_set(g, Rat(1, 3));
  CHECK(std::find(f13.vertices.begin(), f13.vertices.end(), Point{Rat(5, 4), Rat(5, 4)}) !=
        f13.vertices.end());

  StageGame c = coordination();
  Polytope fc = feasible_set(c, Rat(1));
  CHECK(fc.vertices == std::vector<Point>{Point{0, 0, 0}, Point{1, 1, 1}});
}

TEST_CASE("feasible set is wedged between V and the cube") {
  for (const char* name : {"prisoners_dilemma.json", "coordination.json", "rectangle.json"}) {
    StageGame g = parse_game(read_fixture(name));
    Polytope v = one_shot_hull(g);
    Polytope cube = payoff_cube(g);
    for (int k = 1; k <= 4; ++k) {
      Polytope f = feasible_set(g, Rat(k, 4));
      CHECK(hull_contains(f, v));
      CHECK(hull_contains(cube, f));
    }
  }
}

TEST_CASE("enumeration cap") {
  CHECK_THROWS_AS(feasible_set(pd(), Rat(1, 2), 3), CapExceededError);
}

TEST_CASE("welfare") {
  StageGame g = pd();
  Direction lam({1, 1});
  CHECK(welfare(g, seq(g, {{"C", "C"}, {"C", "C"}}), Rat(1, 2), lam) == 2);
  CHECK(welfare(g, seq(g, {{"D", "C"}, {"C", "D"}}), Rat(1, 3), lam) == Rat(5, 2));
  CHECK(welfare(g, seq(g, {{"D", "C"}, {"C", "D"}}), Rat(2, 3), lam) == Rat(8, 5));
}

TEST_CASE("max welfare") {
  StageGame g = pd();
  Direction lam({1, 1});

  WelfareRecord high = max_welfare(g, Rat(2, 3), lam);
  CHECK(high.value == 2);
  StableSequence cc = seq(g, {{"C", "C"}, {"C", "C"}});
  CHECK(std::find(high.optimizers.begin(), high.optimizers.end(), cc) != high.optimizers.end());

  WelfareRecord low = max_welfare(g, Rat(1, 3), lam);
  CHECK(low.value == Rat(5, 2));
  StableSequence dccd = seq(g, {{"D", "C"}, {"C", "D"}});
  CHECK(std::find(low.optimizers.begin(), low.optimizers.end(), dccd) != low.optimizers.end());

  CHECK(max_welfare(g, Rat(1), lam).value == support_value(one_shot_hull(g), lam));
}

TEST_CASE("max welfare equals the support value of the feasible set") {
  StageGame g = pd();
  for (const Direction& lam :
       {Direction({1, 1}), Direction({1, 0}), Direction({0, -1}), Direction({-2, 3})}) {
    for (int k = 1; k <= 4; ++k) {
      Rat d(k, 4);
      CHECK(max_welfare(g, d, lam).value == support_value(feasible_set(g, d), lam));
    }
  }
}

TEST_CASE("positive scaling of the direction") {
  StageGame g = pd();
  Direction lam({1, -2});
  Direction scaled({Rat(3, 2), -3});
  WelfareRecord a = max_welfare(g, Rat(1, 3), lam);
  WelfareRecord b = max_welfare(g, Rat(1, 3), scaled);
  CHECK(b.value == Rat(3, 2) * a.value);
  CHECK(b.optimizers == a.optimizers);
}

TEST_CASE("age weights") {
  StageGame g = pd();
  Direction lam({1, 1});
  std::vector<PayoffVector> u = {{2, -1}, {-1, 2}};
  CHECK(age_weights(u, lam) == std::vector<Rat>{4, -2});

  // n = 3 pattern
  Direction lam3({1, 1, 1});
  std::vector<PayoffVector> u3 = {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
  std::vector<Rat> w3 = age_weights(u3, lam3);
  CHECK(w3[0] == Rat(1) + 5 + 9);
  CHECK(w3[1] == Rat(4) + 8 + 3);
  CHECK(w3[2] == Rat(7) + 2 + 6);

  std::vector<PayoffVector> constant = {{1, 2}, {1, 2}};
  CHECK(age_weights(constant, lam) == std::vector<Rat>{3, 3});

  CHECK_THROWS_AS(age_weights({{1, 2}}, lam), ValidationError);
}

TEST_CASE("welfare satisfies the age-weight identity") {
  StageGame g = coordination();
  Direction lam({2, -1, 3});
  SplitMix64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    StableSequence s;
    for (int k = 0; k < 3; ++k)
      s.push_back(g.profile_from_index(static_cast<int>(rng.below(8))));
    Rat Delta(1 + static_cast<long>(rng.below(9)), 10);
    std::vector<Rat> w = age_weights(payoff_sequence(g, s), lam);
    Rat num = 0, den = 0;
    for (int k = 0; k < 3; ++k) {
      num += rat_pow(Delta, k) * w[k];
      den += rat_pow(Delta, k);
    }
    CHECK(welfare(g, s, Delta, lam) == num / den);
  }
}

TEST_CASE("vertex generators") {
  StageGame g = pd();
  auto rows = feasible_set_with_generators(g, Rat(1, 3));
  bool found = false;
  for (const auto& row : rows) {
    if (row.vertex == Point{Rat(5, 4), Rat(5, 4)}) {
      found = true;
      CHECK(row.generator == seq(g, {{"D", "C"}, {"C", "D"}}));
    }
  }
  CHECK(found);
}
