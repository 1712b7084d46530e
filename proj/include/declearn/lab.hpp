#pragma once

#include <string>

#include "declearn/learning.hpp"

namespace declearn {

struct SyntheticConfig {
  int n = 10;
  int d = 20;
  int constraints = 3;
  int min_feasible = 50;
  std::vector<int> train_sizes{20, 40, 80, 160, 320};
  int test_size = 200;
  int validation_size = 100;
  int trials = 10;
  // Inputs are resampled until the gold labeling outscores the runner-up by
  // at least min_margin * sqrt(d); 0 disables the rejection step.
  double min_margin = 0.5;

  void check() const;
  int max_train_size() const;
};

struct SyntheticData {
  OutputSpace space;
  ScoringModel model;
  WeightVector true_weights;
  Dataset train;  // max_train_size() instances; take prefixes for curves
  Dataset validation;
  Dataset test;
};

// Random constrained space (regenerated until the feasible set is large
// enough), random true weights, gaussian inputs, gold labels from exact MAP.
// Data is separable with Perceptron loss by construction.
SyntheticData gen_synthetic(const SyntheticConfig& config, std::uint64_t seed);

struct Metrics {
  double avg_hamming = 0.0;
  double avg_f1 = 0.0;
  double per_bit_error = 0.0;
  long infeasible_predictions = 0;  // w.r.t. the true space
};

// Predicts with exact MAP, with or without the space's constraints
// (LL vs LL+C evaluation).
Metrics evaluate(const ScoringModel& model, const WeightVector& w,
                 const Dataset& testset, const OutputSpace& space,
                 bool use_constraints);
Metrics evaluate_serial(const ScoringModel& model, const WeightVector& w,
                        const Dataset& testset, const OutputSpace& space,
                        bool use_constraints);

enum class ProbeOutcome { ExactCertified, NoCounterexample, Counterexample };

struct ExactnessVerdict {
  std::string mode;  // "certificate" | "sampling"
  ProbeOutcome outcome = ProbeOutcome::NoCounterexample;
  long probes = 0;
  // Counterexample witness: zero decomposed objective, positive global one.
  WeightVector witness;
  int instance = -1;
  Assignment violating_y;
  // Certificate failures: (instance, y) pairs with no admissible partition.
  std::vector<std::pair<int, Assignment>> uncovered;
};

// Repeatedly trains from random starts with Perceptron loss until the
// decomposed objective is zero, then checks the global objective; any
// (decl = 0, global > 0) weight is a counterexample to exactness.
ExactnessVerdict exactness_probe_sampling(const ScoringModel& model,
                                          const Dataset& D,
                                          const OutputSpace& space,
                                          const std::vector<Decomposition>& S_list,
                                          long probes, std::uint64_t seed,
                                          int budget_epochs = 500);

// Sufficient-condition certificate for singleton models with subadditive
// loss: for every instance and every feasible y, searches for a partition of
// the difference set into pieces, each inside some decomposition set and
// each individually patchable to a feasible assignment. Failures are
// inconclusive, not refutations.
ExactnessVerdict exactness_certificate_cor1(const ScoringModel& model,
                                            const Dataset& D,
                                            const OutputSpace& space,
                                            const std::vector<Decomposition>& S_list,
                                            Loss loss);

struct BenchmarkConfig {
  SyntheticConfig data;
  int epochs = 50;
  double eta0 = 0.1;
  Loss loss = Loss::Hamming;
  bool shuffle = true;
  bool tune_lambda = false;
  std::vector<double> lambda_grid{0.0, 1e-4, 1e-3, 1e-2, 1e-1};
  std::uint64_t seed = 0;
  int threads = 1;

  void check() const;
};

struct BenchRow {
  int trial = 0;
  int train_size = 0;
  std::string algorithm;  // ll, ll+c, decl-1, decl-2, decl-3, gl
  double avg_hamming = 0.0;
  double avg_f1 = 0.0;
  double train_seconds = 0.0;
};

struct BenchResult {
  std::vector<BenchRow> rows;  // ordered by (trial, size, algorithm)
  int n = 0;
  int threads = 1;
};

// Trains LL, DecL-1..3, and GL on identical data per (trial, size) cell and
// evaluates on the held-out test set; LL is reported twice (ll without
// constraints at test time, ll+c with them).
BenchResult run_benchmark(const BenchmarkConfig& config);

std::string benchmark_csv(const BenchResult& result);

// Mean of a metric over trials for one (size, algorithm) cell.
double bench_mean(const BenchResult& result, int train_size,
                  const std::string& algorithm, double BenchRow::*field);

}  // namespace declearn
