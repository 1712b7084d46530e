#include "declearn/model.hpp"

#include <string>

namespace declearn {

ScoringModel ScoringModel::singleton(int n, int d) {
  ScoringModel m;
  m.family = ModelFamily::SingletonLinear;
  m.n = n;
  m.d = d;
  m.alphabet = 2;
  return m;
}

ScoringModel ScoringModel::chain(int n, int d, int alphabet, bool tied) {
  ScoringModel m;
  m.family = ModelFamily::PairwiseNetwork;
  m.n = n;
  m.d = d;
  m.alphabet = alphabet;
  m.tied_edges = tied;
  for (int i = 0; i + 1 < n; ++i) m.edges.emplace_back(i, i + 1);
  return m;
}

int ScoringModel::node_dim() const {
  if (family == ModelFamily::SingletonLinear) return n * d;
  return n * alphabet * d;
}

int ScoringModel::edge_dim() const {
  if (family == ModelFamily::SingletonLinear) return 0;
  int table = alphabet * alphabet;
  return tied_edges ? table : static_cast<int>(edges.size()) * table;
}

int ScoringModel::edge_table_offset(int e) const {
  int table = alphabet * alphabet;
  return node_dim() + (tied_edges ? 0 : e * table);
}

void ScoringModel::check_assignment(const Assignment& y) const {
  if (static_cast<int>(y.size()) != n)
    throw DimensionError("assignment length " + std::to_string(y.size()) +
                         " does not match model n = " + std::to_string(n));
  int limit = family == ModelFamily::SingletonLinear ? 2 : alphabet;
  for (int v : y)
    if (v < 0 || v >= limit)
      throw DimensionError("label " + std::to_string(v) +
                           " outside alphabet of size " + std::to_string(limit));
}

void ScoringModel::check_input(const InputMatrix& x) const {
  if (x.cols != d)
    throw DimensionError("input has " + std::to_string(x.cols) +
                         " columns, model d = " + std::to_string(d));
  if (x.rows != n && x.rows != 1)
    throw DimensionError("input has " + std::to_string(x.rows) +
                         " rows, expected n = " + std::to_string(n) +
                         " or a single broadcast row");
}

void ScoringModel::check_weights(const WeightVector& w) const {
  if (static_cast<int>(w.size()) != feature_dim())
    throw DimensionError("weight vector has dimension " +
                         std::to_string(w.size()) + ", model expects " +
                         std::to_string(feature_dim()));
}

FeatureVector joint_feature(const ScoringModel& model, const InputMatrix& x,
                            const Assignment& y) {
  model.check_assignment(y);
  model.check_input(x);
  FeatureVector phi(model.feature_dim(), 0.0);
  if (model.family == ModelFamily::SingletonLinear) {
    for (int i = 0; i < model.n; ++i) {
      if (y[i] != 1) continue;
      const double* xi = x.row(i);
      double* block = phi.data() + std::size_t(i) * model.d;
      for (int j = 0; j < model.d; ++j) block[j] = xi[j];
    }
    return phi;
  }
  const int A = model.alphabet;
  for (int i = 0; i < model.n; ++i) {
    const double* xi = x.row(i);
    double* block = phi.data() + (std::size_t(i) * A + y[i]) * model.d;
    for (int j = 0; j < model.d; ++j) block[j] = xi[j];
  }
  for (std::size_t e = 0; e < model.edges.size(); ++e) {
    auto [u, v] = model.edges[e];
    int off = model.edge_table_offset(static_cast<int>(e));
    phi[off + y[u] * A + y[v]] += 1.0;
  }
  return phi;
}

double flat_score(const ScoringModel& model, const WeightVector& w,
                  const InputMatrix& x, const Assignment& y) {
  model.check_weights(w);
  FeatureVector phi = joint_feature(model, x, y);
  double score = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) score += w[i] * phi[i];
  return score;
}

Modularity edge_modularity(const ScoringModel& model, const WeightVector& w,
                           const InputMatrix& x, std::pair<int, int> edge,
                           double tol) {
  (void)x;  // edge potentials are label-pair indicators, independent of x
  if (model.family != ModelFamily::PairwiseNetwork)
    throw ConfigError("edge_modularity requires a pairwise network model");
  if (model.alphabet != 2)
    throw ConfigError("edge_modularity is defined for binary models only");
  model.check_weights(w);
  int idx = -1;
  for (std::size_t e = 0; e < model.edges.size(); ++e)
    if (model.edges[e] == edge) {
      idx = static_cast<int>(e);
      break;
    }
  if (idx < 0)
    throw ConfigError("edge (" + std::to_string(edge.first + 1) + "," +
                      std::to_string(edge.second + 1) + ") not in graph");
  int off = model.edge_table_offset(idx);
  const int A = 2;
  double margin = (w[off + 1 * A + 1] + w[off + 0 * A + 0]) -
                  (w[off + 1 * A + 0] + w[off + 0 * A + 1]);
  if (margin > tol) return Modularity::Submodular;
  if (margin < -tol) return Modularity::Supermodular;
  return Modularity::Neither;
}

}  // namespace declearn
