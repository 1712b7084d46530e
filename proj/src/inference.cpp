#include "declearn/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace declearn {

namespace {

bool relation_holds(long lhs, Rel rel, long rhs) {
  switch (rel) {
    case Rel::Le: return lhs <= rhs;
    case Rel::Ge: return lhs >= rhs;
    case Rel::Eq: return lhs == rhs;
  }
  return false;
}

// Per-call scoring context: unit node scores for fixed (w, x) and score
// deltas relative to a fixed gold assignment. Both enumeration routes score
// candidates through the same delta arithmetic, which is what makes the
// full-set decomposition agree with global inference bit for bit.
struct GoldContext {
  const ScoringModel& model;
  const WeightVector& w;
  const Assignment& gold;
  std::vector<double> node_unit;

  GoldContext(const ScoringModel& m, const WeightVector& weights,
              const InputMatrix& x, const Assignment& g)
      : model(m), w(weights), gold(g) {
    m.check_weights(w);
    m.check_input(x);
    m.check_assignment(gold);
    if (m.family == ModelFamily::SingletonLinear) {
      node_unit.resize(m.n);
      for (int i = 0; i < m.n; ++i) {
        const double* xi = x.row(i);
        const double* wi = w.data() + std::size_t(i) * m.d;
        double dot = 0.0;
        for (int j = 0; j < m.d; ++j) dot += wi[j] * xi[j];
        node_unit[i] = dot;
      }
    } else {
      const int A = m.alphabet;
      node_unit.resize(std::size_t(m.n) * A);
      for (int i = 0; i < m.n; ++i) {
        const double* xi = x.row(i);
        for (int a = 0; a < A; ++a) {
          const double* wb = w.data() + (std::size_t(i) * A + a) * m.d;
          double dot = 0.0;
          for (int j = 0; j < m.d; ++j) dot += wb[j] * xi[j];
          node_unit[std::size_t(i) * A + a] = dot;
        }
      }
    }
  }

  double node_score(int i, int label) const {
    if (model.family == ModelFamily::SingletonLinear)
      return label == 1 ? node_unit[i] : 0.0;
    return node_unit[std::size_t(i) * model.alphabet + label];
  }

  double node_delta(int i, int label) const {
    return node_score(i, label) - node_score(i, gold[i]);
  }

  double edge_entry(int e, int lu, int lv) const {
    return w[model.edge_table_offset(e) + lu * model.alphabet + lv];
  }

  double edge_delta(int e, int lu, int lv) const {
    auto [u, v] = model.edges[e];
    return edge_entry(e, lu, lv) - edge_entry(e, gold[u], gold[v]);
  }

  // Hinge numerator f(y) - f(gold) for a full candidate.
  double delta_full(const Assignment& y, int* mismatches) const {
    int mism = 0;
    double delta = 0.0;
    for (int i = 0; i < model.n; ++i) {
      if (y[i] == gold[i]) continue;
      ++mism;
      delta += node_delta(i, y[i]);
    }
    for (std::size_t e = 0; e < model.edges.size(); ++e) {
      auto [u, v] = model.edges[e];
      if (y[u] != gold[u] || y[v] != gold[v])
        delta += edge_delta(static_cast<int>(e), y[u], y[v]);
    }
    *mismatches = mism;
    return delta;
  }
};

}  // namespace

InferenceResult map_exact(const ScoringModel& model, const WeightVector& w,
                          const InputMatrix& x, const OutputSpace& space) {
  if (space.n() != model.n)
    throw DimensionError("space n = " + std::to_string(space.n()) +
                         " does not match model n = " + std::to_string(model.n));
  InferenceResult result;
  double best = -std::numeric_limits<double>::infinity();
  space.for_each_feasible([&](const Assignment& y) {
    ++result.candidates_examined;
    double score = flat_score(model, w, x, y);
    if (score > best) {  // lexicographic enumeration: first maximizer wins
      best = score;
      result.argmax = y;
    }
    return true;
  });
  result.value = best;
  return result;
}

InferenceResult map_loss_augmented(const ScoringModel& model,
                                   const WeightVector& w, const InputMatrix& x,
                                   const Assignment& gold,
                                   const OutputSpace& space, Loss loss) {
  if (!space.is_feasible(gold)) throw ConfigError("gold assignment is infeasible");
  GoldContext ctx(model, w, x, gold);
  InferenceResult result;
  double best = -std::numeric_limits<double>::infinity();
  const int A = space.alphabet();
  Assignment y(model.n, 0);
  // full-space odometer; feasibility filtered directly
  for (;;) {
    ++result.candidates_examined;
    if (space.is_feasible(y)) {
      int mism = 0;
      double value = ctx.delta_full(y, &mism) + loss_from_mismatches(loss, mism);
      if (value > best) {
        best = value;
        result.argmax = y;
      }
    }
    int pos = model.n - 1;
    while (pos >= 0 && y[pos] == A - 1) y[pos--] = 0;
    if (pos < 0) break;
    ++y[pos];
  }
  result.value = best;
  return result;
}

InferenceResult map_decomposed(const ScoringModel& model, const WeightVector& w,
                               const InputMatrix& x, const Assignment& gold,
                               const Decomposition& S, const OutputSpace& space,
                               Loss loss,
                               std::optional<int> sample_sets,
                               std::mt19937_64& rng) {
  auto report = validate(S, model.n);
  if (!report.ok) throw ConfigError("invalid decomposition: " + report.message);
  if (!space.is_feasible(gold)) throw ConfigError("gold assignment is infeasible");
  GoldContext ctx(model, w, x, gold);

  std::vector<int> set_order(S.sets.size());
  std::iota(set_order.begin(), set_order.end(), 0);
  if (sample_sets && *sample_sets < static_cast<int>(S.sets.size())) {
    if (*sample_sets <= 0)
      throw ConfigError("sample_sets must be positive, got " +
                        std::to_string(*sample_sets));
    std::vector<int> chosen;
    std::sample(set_order.begin(), set_order.end(), std::back_inserter(chosen),
                *sample_sets, rng);
    set_order = std::move(chosen);
  }
  if (set_order.empty()) throw ConfigError("empty sampled pool of sets");

  const auto& linear = space.constraints().linear;
  const auto& clauses = space.constraints().clauses;
  const int A = space.alphabet();
  std::vector<long> gold_activity(linear.size(), 0);
  for (std::size_t c = 0; c < linear.size(); ++c)
    for (int i = 0; i < model.n; ++i)
      gold_activity[c] += linear[c].coeffs[i] * gold[i];

  // Per-variable constraint incidence, built once per call: feasibility of a
  // patch is then checked through sparse integer deltas over the variables
  // that actually differ from gold, with no per-set setup.
  std::vector<std::vector<std::pair<int, long>>> var_touch(model.n);
  for (std::size_t ci = 0; ci < linear.size(); ++ci)
    for (int i = 0; i < model.n; ++i)
      if (linear[ci].coeffs[i] != 0)
        var_touch[i].emplace_back(static_cast<int>(ci), linear[ci].coeffs[i]);
  std::vector<long> act_delta(linear.size(), 0);
  std::vector<char> touched_flag(linear.size(), 0);
  std::vector<int> touched;
  touched.reserve(linear.size());

  // A candidate differing from gold in fewer than |s| places is enumerated
  // by every set containing its difference set. For complete uniform
  // decompositions (all size-k sets present, no sampling), score each
  // distinct candidate only in the lexicographically first set containing
  // its difference set; the (max, lex-min) result is order-independent, so
  // the outcome is unchanged and the duplicate work disappears.
  bool dedup = !sample_sets || *sample_sets >= static_cast<int>(S.sets.size());
  if (dedup && S.sets.size() > 1) {
    const std::size_t k0 = S.sets.front().size();
    for (const auto& s : S.sets) dedup = dedup && s.size() == k0;
    if (dedup) {
      double count = 1.0;
      for (std::size_t i = 0; i < k0; ++i) count = count * (model.n - i) / (i + 1);
      dedup = std::llround(count) == static_cast<long long>(S.sets.size());
    }
  } else {
    dedup = false;
  }

  InferenceResult result;
  result.argmax = gold;  // gold is always a candidate, hinge 0
  double best = 0.0;
  std::vector<int> pos_in_s(model.n, -1);
  // scratch reused across sets to keep the per-set cost allocation-free
  std::vector<const Clause*> touching_clauses;
  std::vector<int> incident_edges;
  std::vector<int> local;
  std::vector<int> mism_pos;

  for (int set_idx : set_order) {
    const auto& s = S.sets[set_idx];
    const int m = static_cast<int>(s.size());
    for (int t = 0; t < m; ++t) pos_in_s[s[t]] = t;

    // Clauses and edges not touching s stay at their gold status, so only
    // the touching ones need re-checking.
    touching_clauses.clear();
    for (const auto& clause : clauses) {
      bool touches = false;
      for (const auto& lit : clause)
        if (pos_in_s[lit.var] >= 0) {
          touches = true;
          break;
        }
      if (touches) touching_clauses.push_back(&clause);
    }
    incident_edges.clear();
    for (std::size_t e = 0; e < model.edges.size(); ++e) {
      auto [u, v] = model.edges[e];
      if (pos_in_s[u] >= 0 || pos_in_s[v] >= 0)
        incident_edges.push_back(static_cast<int>(e));
    }

    local.assign(m, 0);
    auto value_at = [&](int i) {
      return pos_in_s[i] >= 0 ? local[pos_in_s[i]] : gold[i];
    };
    auto clauses_ok = [&] {
      for (const Clause* clause : touching_clauses) {
        bool satisfied = false;
        for (const auto& lit : *clause) {
          bool v = value_at(lit.var) == 1;
          if (lit.negated ? !v : v) {
            satisfied = true;
            break;
          }
        }
        if (!satisfied) return false;
      }
      return true;
    };
    auto score = [&](int mism, double delta) {
      for (int e : incident_edges) {
        auto [u, v] = model.edges[e];
        int lu = value_at(u), lv = value_at(v);
        if (lu != gold[u] || lv != gold[v]) delta += ctx.edge_delta(e, lu, lv);
      }
      double value = delta + loss_from_mismatches(loss, mism);
      auto take_candidate = [&] {
        result.argmax.assign(gold.begin(), gold.end());
        for (int t = 0; t < m; ++t) result.argmax[s[t]] = local[t];
      };
      if (value > best) {
        best = value;
        take_candidate();
      } else if (value == best) {
        // lexicographic comparison against the incumbent, allocation-free
        for (int i = 0; i < model.n; ++i) {
          int li = value_at(i);
          if (li == result.argmax[i]) continue;
          if (li < result.argmax[i]) take_candidate();
          break;
        }
      }
    };

    if (!dedup && 2 * m >= model.n) {
      // Large sets reject most patches on constraints, so build the per-set
      // constraint entries once and check feasibility before scoring.
      struct DenseCons {
        Rel rel;
        long bound;
        long gold_activity;
        std::vector<std::pair<int, long>> entries;  // (position in s, coeff)
      };
      std::vector<DenseCons> cons;
      for (std::size_t ci = 0; ci < linear.size(); ++ci) {
        DenseCons dc{linear[ci].rel, linear[ci].bound, gold_activity[ci], {}};
        for (int t = 0; t < m; ++t)
          if (linear[ci].coeffs[s[t]] != 0)
            dc.entries.emplace_back(t, linear[ci].coeffs[s[t]]);
        if (!dc.entries.empty()) cons.push_back(std::move(dc));
      }
      for (;;) {
        ++result.candidates_examined;
        bool feasible = true;
        for (const auto& dc : cons) {
          long act = dc.gold_activity;
          for (auto [t, coeff] : dc.entries) act += coeff * (local[t] - gold[s[t]]);
          if (!relation_holds(act, dc.rel, dc.bound)) {
            feasible = false;
            break;
          }
        }
        if (feasible && clauses_ok()) {
          int mism = 0;
          double delta = 0.0;
          for (int t = 0; t < m; ++t) {
            if (local[t] == gold[s[t]]) continue;
            ++mism;
            delta += ctx.node_delta(s[t], local[t]);
          }
          // mism == 0 is the gold patch, already seeded as best
          if (mism > 0) score(mism, delta);
        }
        int p = m - 1;
        while (p >= 0 && local[p] == A - 1) local[p--] = 0;
        if (p < 0) break;
        ++local[p];
      }
      for (int t = 0; t < m; ++t) pos_in_s[s[t]] = -1;
      continue;
    }

    for (;;) {
      ++result.candidates_examined;
      mism_pos.clear();
      // s is the lex-first superset of the mismatch coords iff the filler
      // coords are exactly the smallest indices outside the mismatch set;
      // idx tracks the next such index during one ascending pass
      bool canonical = true;
      int idx = 0;
      for (int t = 0; t < m; ++t) {
        const int coord = s[t];
        if (local[t] != gold[coord]) {
          mism_pos.push_back(t);
          if (coord == idx) ++idx;
        } else if (dedup) {
          if (coord != idx) {
            canonical = false;
            break;
          }
          ++idx;
        }
      }
      const int mism = static_cast<int>(mism_pos.size());
      // mism == 0 is the gold patch, already seeded as best
      bool consider = canonical && mism > 0;
      bool feasible = consider;
      if (consider) {
        for (int ci : touched) touched_flag[ci] = 0;
        touched.clear();
        for (int t : mism_pos) {
          const int g = gold[s[t]];
          for (auto [ci, coeff] : var_touch[s[t]]) {
            if (!touched_flag[ci]) {
              touched_flag[ci] = 1;
              act_delta[ci] = 0;
              touched.push_back(ci);
            }
            act_delta[ci] += coeff * (local[t] - g);
          }
        }
      }
      if (feasible)
        for (int ci : touched)
          if (!relation_holds(gold_activity[ci] + act_delta[ci],
                              linear[ci].rel, linear[ci].bound)) {
            feasible = false;
            break;
          }
      if (feasible && clauses_ok()) {
        double delta = 0.0;
        for (int t : mism_pos) delta += ctx.node_delta(s[t], local[t]);
        score(mism, delta);
      }
      int p = m - 1;
      while (p >= 0 && local[p] == A - 1) local[p--] = 0;
      if (p < 0) break;
      ++local[p];
    }
    for (int t = 0; t < m; ++t) pos_in_s[s[t]] = -1;
  }
  result.value = best;
  return result;
}

InferenceResult map_decomposed(const ScoringModel& model, const WeightVector& w,
                               const InputMatrix& x, const Assignment& gold,
                               const Decomposition& S, const OutputSpace& space,
                               Loss loss) {
  std::mt19937_64 rng(0);
  return map_decomposed(model, w, x, gold, S, space, loss, std::nullopt, rng);
}

InferenceResult map_chain(const ScoringModel& model, const WeightVector& w,
                          const InputMatrix& x, std::optional<Loss> loss,
                          const Assignment* gold) {
  if (model.family != ModelFamily::PairwiseNetwork)
    throw ConfigError("map_chain requires a pairwise network model");
  if (loss && *loss == Loss::ZeroOne)
    throw ConfigError("map_chain supports Hamming or Perceptron loss only");
  if (loss && gold == nullptr)
    throw ConfigError("loss-augmented map_chain needs a gold assignment");
  model.check_weights(w);
  model.check_input(x);
  const int n = model.n;
  const int A = model.alphabet;

  // Map positions to edge indices; the edge set must be exactly a path.
  std::vector<int> pos_edge(std::max(0, n - 1), -1);
  std::vector<bool> flipped(std::max(0, n - 1), false);
  for (std::size_t e = 0; e < model.edges.size(); ++e) {
    auto [u, v] = model.edges[e];
    int lo = std::min(u, v), hi = std::max(u, v);
    if (hi != lo + 1 || lo < 0 || hi >= n || pos_edge[lo] != -1)
      throw ConfigError("map_chain: edge set is not a path");
    pos_edge[lo] = static_cast<int>(e);
    flipped[lo] = u > v;
  }
  if (static_cast<int>(model.edges.size()) != n - 1)
    throw ConfigError("map_chain: edge set is not a path");

  const Assignment zero_ref(n, 0);
  GoldContext ctx(model, w, x, gold ? *gold : zero_ref);
  auto transition = [&](int i, int a, int b) {
    // score of labels (a at i, b at i+1)
    int e = pos_edge[i];
    return flipped[i] ? ctx.edge_entry(e, b, a) : ctx.edge_entry(e, a, b);
  };
  auto unit = [&](int i, int a) {
    double u = ctx.node_score(i, a);
    if (loss && *loss == Loss::Hamming && a != (*gold)[i]) u += 1.0;
    return u;
  };

  // Suffix DP, then a forward pass picking the smallest label among the
  // maximizers gives the lexicographically smallest argmax.
  std::vector<std::vector<double>> suffix(n, std::vector<double>(A));
  for (int a = 0; a < A; ++a) suffix[n - 1][a] = unit(n - 1, a);
  for (int i = n - 2; i >= 0; --i)
    for (int a = 0; a < A; ++a) {
      double best = -std::numeric_limits<double>::infinity();
      for (int b = 0; b < A; ++b)
        best = std::max(best, transition(i, a, b) + suffix[i + 1][b]);
      suffix[i][a] = unit(i, a) + best;
    }

  InferenceResult result;
  result.argmax.resize(n);
  int first = 0;
  for (int a = 1; a < A; ++a)
    if (suffix[0][a] > suffix[0][first]) first = a;
  result.argmax[0] = first;
  for (int i = 1; i < n; ++i) {
    int prev = result.argmax[i - 1];
    int pick = 0;
    double best = transition(i - 1, prev, 0) + suffix[i][0];
    for (int b = 1; b < A; ++b) {
      double v = transition(i - 1, prev, b) + suffix[i][b];
      if (v > best) {
        best = v;
        pick = b;
      }
    }
    result.argmax[i] = pick;
  }
  result.candidates_examined = static_cast<long>(n) * A;

  double total = suffix[0][first];
  if (loss) {
    double gold_score = 0.0;
    for (int i = 0; i < n; ++i) gold_score += ctx.node_score(i, (*gold)[i]);
    for (int i = 0; i + 1 < n; ++i)
      gold_score += transition(i, (*gold)[i], (*gold)[i + 1]);
    result.value = total - gold_score;  // hinge
  } else {
    result.value = total;
  }
  return result;
}

}  // namespace declearn
