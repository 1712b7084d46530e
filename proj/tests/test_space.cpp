#include <doctest.h>

#include "helpers.hpp"

using namespace declearn;

namespace {

OutputSpace sum_eq_one(int n) {
  LinearConstraint c{std::vector<long>(n, 1), Rel::Eq, 1};
  return OutputSpace(n, 2, ConstraintSet{{c}, {}});
}

}  // namespace

TEST_CASE("is_feasible: unconstrained accepts everything") {
  OutputSpace space = OutputSpace::unconstrained(3);
  CHECK(space.is_feasible({0, 0, 0}));
  CHECK(space.is_feasible({1, 1, 1}));
  CHECK(space.is_feasible({1, 0, 1}));
}

TEST_CASE("is_feasible: exactly-one linear constraint") {
  OutputSpace space = sum_eq_one(3);
  CHECK(space.is_feasible({0, 1, 0}));
  CHECK_FALSE(space.is_feasible({1, 1, 0}));
  CHECK_FALSE(space.is_feasible({0, 0, 0}));
}

TEST_CASE("is_feasible: clause semantics (y1 or not-y2)") {
  Clause clause{Literal{0, false}, Literal{1, true}};
  OutputSpace space(3, 2, ConstraintSet{{}, {clause}});
  CHECK_FALSE(space.is_feasible({0, 1, 0}));
  CHECK_FALSE(space.is_feasible({0, 1, 1}));
  CHECK(space.is_feasible({0, 0, 0}));
  CHECK(space.is_feasible({1, 1, 0}));
}

TEST_CASE("is_feasible: length mismatch throws") {
  OutputSpace space = OutputSpace::unconstrained(3);
  CHECK_THROWS_AS(space.is_feasible({0, 0}), DimensionError);
}

TEST_CASE("enumerate_feasible: unconstrained n=2 in lexicographic order") {
  OutputSpace space = OutputSpace::unconstrained(2);
  std::vector<Assignment> want{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  CHECK(space.enumerate_feasible() == want);
}

TEST_CASE("enumerate_feasible: exactly-one n=3") {
  std::vector<Assignment> want{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}};
  CHECK(sum_eq_one(3).enumerate_feasible() == want);
  CHECK(sum_eq_one(3).count_feasible() == 3);
}

TEST_CASE("empty space rejected at construction") {
  std::vector<long> ones(2, 1);
  ConstraintSet cs;
  cs.linear.push_back({ones, Rel::Le, 0});
  cs.linear.push_back({ones, Rel::Ge, 1});
  CHECK_THROWS_AS(OutputSpace(2, 2, std::move(cs)), ConfigError);
}

TEST_CASE("enumeration cap exceeded names the size") {
  Assignment witness(30, 0);
  OutputSpace space(30, 2, ConstraintSet{}, 1L << 10, &witness);
  try {
    space.enumerate_feasible();
    FAIL("expected CapExceededError");
  } catch (const CapExceededError& e) {
    CHECK(std::string(e.what()).find("alphabet^n") != std::string::npos);
  }
}

TEST_CASE("constraint shape validation") {
  ConstraintSet bad_row;
  bad_row.linear.push_back({{1, 1}, Rel::Le, 1});  // length 2 for n=3
  CHECK_THROWS_AS(OutputSpace(3, 2, std::move(bad_row)), DimensionError);

  ConstraintSet empty_clause;
  empty_clause.clauses.push_back({});
  CHECK_THROWS_AS(OutputSpace(3, 2, std::move(empty_clause)), ConfigError);

  ConstraintSet bad_var;
  bad_var.clauses.push_back({Literal{5, false}});
  CHECK_THROWS_AS(OutputSpace(3, 2, std::move(bad_var)), ConfigError);
}

TEST_CASE("diff_set basics") {
  CHECK(diff_set({1, 0, 1}, {1, 0, 1}).empty());
  CHECK(diff_set({1, 1, 0}, {0, 1, 1}) == std::vector<int>{0, 2});
  CHECK(diff_set({0, 0, 0, 0}, {1, 1, 1, 1}) == std::vector<int>{0, 1, 2, 3});
  CHECK_THROWS_AS(diff_set({0}, {0, 1}), DimensionError);
}

TEST_CASE("patch basics") {
  Assignment gold{0, 0, 0};
  CHECK(patch(gold, {}, {}) == gold);
  CHECK(patch(gold, {1}, {1}) == Assignment{0, 1, 0});
  CHECK(patch(gold, {0, 2}, {gold[0], gold[2]}) == gold);
  CHECK_THROWS_AS(patch(gold, {5}, {1}), DimensionError);
  CHECK_THROWS_AS(patch(gold, {0, 1}, {1}), DimensionError);
}

TEST_CASE("patch/diff_set round trip over an enumerated space") {
  std::mt19937_64 rng(11);
  OutputSpace space = testutil::random_space(5, rng);
  auto all = space.enumerate_feasible();
  for (const auto& y : all)
    for (const auto& y2 : all) {
      auto s = diff_set(y, y2);
      std::vector<int> local;
      for (int i : s) local.push_back(y2[i]);
      CHECK(patch(y, s, local) == y2);
    }
}

TEST_CASE("enumeration agrees with is_feasible, exhaustively") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 20; ++t) {
    int n = 2 + int(rng() % 5);
    OutputSpace space = testutil::random_space(n, rng);
    std::set<Assignment> listed;
    for (auto& y : space.enumerate_feasible()) listed.insert(y);
    OutputSpace free = OutputSpace::unconstrained(n);
    for (const auto& y : free.enumerate_feasible())
      CHECK(space.is_feasible(y) == (listed.count(y) > 0));
  }
}

TEST_CASE("enumeration order is deterministic and sorted") {
  std::mt19937_64 rng(5);
  OutputSpace space = testutil::random_space(6, rng);
  auto a = space.enumerate_feasible();
  auto b = space.enumerate_feasible();
  CHECK(a == b);
  CHECK(std::is_sorted(a.begin(), a.end()));
}

TEST_CASE("witness admits a space too large to enumerate") {
  Assignment witness(30, 0);
  OutputSpace space(30, 2, ConstraintSet{}, 1L << 10, &witness);
  CHECK(space.is_feasible(witness));
}
