#pragma once

#include <utility>
#include <vector>

#include "declearn/types.hpp"

namespace declearn {

enum class ModelFamily { SingletonLinear, PairwiseNetwork };

enum class Modularity { Submodular, Supermodular, Neither };

// Linear-in-weights scoring family.
//
// SingletonLinear: f(x,y;w) = sum_i y_i (w_i . x_i) with one d-block of
// weights per variable; binary labels only.
//
// PairwiseNetwork: node potentials w_node[i,a] . x_i plus edge potentials
// read from a label-pair table, one table per edge (untied) or one shared
// table (tied). Flat weight layout: node blocks first (variable-major,
// then label, then feature), then edge tables.
struct ScoringModel {
  ModelFamily family = ModelFamily::SingletonLinear;
  int n = 0;
  int d = 0;
  int alphabet = 2;
  std::vector<std::pair<int, int>> edges;  // 0-indexed
  bool tied_edges = true;

  static ScoringModel singleton(int n, int d);
  static ScoringModel chain(int n, int d, int alphabet = 2, bool tied = true);

  int node_dim() const;
  int edge_dim() const;
  int feature_dim() const { return node_dim() + edge_dim(); }

  // Offset of edge e's label-pair table in the flat weight vector.
  int edge_table_offset(int e) const;

  void check_assignment(const Assignment& y) const;
  void check_input(const InputMatrix& x) const;
  void check_weights(const WeightVector& w) const;
};

// Joint feature map phi(x, y).
FeatureVector joint_feature(const ScoringModel& model, const InputMatrix& x,
                            const Assignment& y);

// f(x, y; w) = w . phi(x, y), computed literally through the feature map.
double flat_score(const ScoringModel& model, const WeightVector& w,
                  const InputMatrix& x, const Assignment& y);

// Sign of (phi(1,1) + phi(0,0)) - (phi(1,0) + phi(0,1)) for a binary
// pairwise edge. Values within tol of zero classify as Neither.
Modularity edge_modularity(const ScoringModel& model, const WeightVector& w,
                           const InputMatrix& x, std::pair<int, int> edge,
                           double tol = 1e-9);

}  // namespace declearn
