#pragma once

// Shared generators and brute-force oracles for the test suite. Oracles are
// deliberately naive re-implementations used to cross-check the library.

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "declearn/lab.hpp"

namespace testutil {

using namespace declearn;

inline InputMatrix random_input(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  InputMatrix x = InputMatrix::zero(rows, cols);
  for (auto& v : x.data) v = normal(rng);
  return x;
}

inline WeightVector random_weights(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  WeightVector w(dim);
  for (auto& v : w) v = normal(rng);
  return w;
}

// Random binary space with a few linear constraints and maybe a clause;
// retries until non-empty.
inline OutputSpace random_space(int n, std::mt19937_64& rng,
                                int max_linear = 2, bool with_clauses = true) {
  for (;;) {
    ConstraintSet cs;
    int k = int(rng() % (max_linear + 1));
    for (int c = 0; c < k; ++c) {
      LinearConstraint lc;
      lc.coeffs.resize(n);
      for (auto& a : lc.coeffs) a = long(rng() % 3) - 1;  // -1, 0, 1
      lc.rel = static_cast<Rel>(rng() % 3);
      lc.bound = long(rng() % (n + 1)) - n / 2;
      cs.linear.push_back(std::move(lc));
    }
    if (with_clauses && rng() % 3 == 0) {
      Clause clause;
      int len = 1 + int(rng() % 3);
      for (int i = 0; i < len; ++i)
        clause.push_back(Literal{int(rng() % n), rng() % 2 == 0});
      cs.clauses.push_back(std::move(clause));
    }
    try {
      return OutputSpace(n, 2, std::move(cs));
    } catch (const ConfigError&) {
      // empty space; draw again
    }
  }
}

inline Assignment random_feasible(const OutputSpace& space,
                                  std::mt19937_64& rng) {
  auto all = space.enumerate_feasible();
  return all[rng() % all.size()];
}

// Random valid decomposition: either decl_k or maximal random subsets.
inline Decomposition random_decomposition(int n, std::mt19937_64& rng) {
  if (rng() % 2 == 0) return decl_k(n, 1 + int(rng() % n));
  std::vector<std::vector<int>> sets;
  int count = 1 + int(rng() % 4);
  for (int c = 0; c < count; ++c) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (rng() % 2 == 0) s.push_back(i);
    if (s.empty()) s.push_back(int(rng() % n));
    sets.push_back(std::move(s));
  }
  // keep only maximal, distinct sets
  std::vector<std::vector<int>> keep;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < sets.size() && !dominated; ++j) {
      if (i == j) continue;
      bool subset = std::includes(sets[j].begin(), sets[j].end(),
                                  sets[i].begin(), sets[i].end());
      if (subset && (sets[i] != sets[j] || j < i)) dominated = true;
    }
    if (!dominated) keep.push_back(sets[i]);
  }
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  Decomposition S{std::move(keep)};
  return S;
}

// Literal nbr(gold, S) filter over the enumerated space.
inline std::vector<Assignment> nbr_oracle(const OutputSpace& space,
                                          const Assignment& gold,
                                          const Decomposition& S) {
  std::vector<Assignment> out;
  for (const auto& y : space.enumerate_feasible()) {
    auto diff = diff_set(gold, y);
    for (const auto& s : S.sets) {
      if (std::includes(s.begin(), s.end(), diff.begin(), diff.end())) {
        out.push_back(y);
        break;
      }
    }
  }
  return out;
}

// Hinge via the literal feature-map route (independent arithmetic path from
// the incremental one inside inference).
inline double hinge_oracle(const ScoringModel& model, const WeightVector& w,
                           const InputMatrix& x, const Assignment& gold,
                           const Assignment& y, Loss loss) {
  return flat_score(model, w, x, y) - flat_score(model, w, x, gold) +
         loss_value(loss, gold, y);
}

struct RandomProblem {
  ScoringModel model;
  OutputSpace space;
  Dataset data;
  WeightVector w;
};

// Random singleton or pairwise problem with feasible golds.
inline RandomProblem random_problem(int n, std::mt19937_64& rng,
                                    int instances = 2) {
  ScoringModel model;
  int d = 1 + int(rng() % 3);
  if (rng() % 2 == 0) {
    model = ScoringModel::singleton(n, d);
  } else {
    model = ScoringModel::chain(n, d, 2, rng() % 2 == 0);
  }
  OutputSpace space = random_space(n, rng);
  Dataset data;
  for (int i = 0; i < instances; ++i) {
    Instance inst;
    inst.x = random_input(n, d, rng);
    inst.gold = random_feasible(space, rng);
    data.push_back(std::move(inst));
  }
  return RandomProblem{model, std::move(space), std::move(data),
                       random_weights(model.feature_dim(), rng)};
}

}  // namespace testutil
