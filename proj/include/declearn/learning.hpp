#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "declearn/inference.hpp"

namespace declearn {

struct SubadditivityViolation {
  Assignment y, y_prime, y1, y2;
  double lhs = 0.0, rhs = 0.0;
};

struct SubadditivityReport {
  bool subadditive = true;
  bool exhaustive = false;
  long quadruples_checked = 0;
  std::optional<SubadditivityViolation> violation;
};

using LossTable = std::function<double(const Assignment&, const Assignment&)>;

// Samples (or, for n <= 6, exhaustively enumerates) quadruples
// (y, y', y1, y2) in Y with s(y,y1) u s(y,y2) = s(y,y') and reports any
// violation of loss(y,y') <= loss(y,y1) + loss(y,y2). Binary spaces only.
SubadditivityReport check_subadditive(const LossTable& loss,
                                      const OutputSpace& space, long trials,
                                      std::uint64_t seed);
SubadditivityReport check_subadditive(Loss loss, const OutputSpace& space,
                                      long trials, std::uint64_t seed);

// Sum over instances of the max hinge over the decomposition-restricted
// neighborhood. S_list holds one decomposition per instance, or a single
// decomposition broadcast to all. With full-set decompositions this equals
// global_objective bit-exactly.
double decl_objective(const ScoringModel& model, const WeightVector& w,
                      const Dataset& D, const std::vector<Decomposition>& S_list,
                      const OutputSpace& space, Loss loss);
double decl_objective_serial(const ScoringModel& model, const WeightVector& w,
                             const Dataset& D,
                             const std::vector<Decomposition>& S_list,
                             const OutputSpace& space, Loss loss);

// Sum over instances of the max hinge over the entire feasible space.
double global_objective(const ScoringModel& model, const WeightVector& w,
                        const Dataset& D, const OutputSpace& space, Loss loss);
double global_objective_serial(const ScoringModel& model, const WeightVector& w,
                               const Dataset& D, const OutputSpace& space,
                               Loss loss);

enum class StepSchedule { Constant, Inverse };

struct TrainConfig {
  int epochs = 100;
  StepSchedule schedule = StepSchedule::Constant;
  double eta0 = 0.1;
  double lambda = 0.0;  // l2 shrinkage strength; 0 = off
  std::uint64_t seed = 0;
  std::optional<int> sample_sets;
  bool averaging = false;
  bool shuffle = true;
  // Evaluate the epoch-end objectives (outside the timed sweep).
  bool track_objective = true;
  bool track_global = false;
  bool early_stop_on_zero = false;
  std::optional<WeightVector> init;

  void check() const;
  double eta(int epoch) const;
};

struct TrainReport {
  WeightVector weights;
  std::optional<WeightVector> averaged;
  std::vector<double> decl_objective_trace;    // one entry per epoch run
  std::vector<double> global_objective_trace;  // only when track_global
  std::vector<double> epoch_seconds;
  double train_seconds = 0.0;  // timed sweeps only, excludes objective evals
  long updates = 0;            // inner steps with a nonzero weight change
  int epochs_run = 0;
};

// Subgradient descent on the decomposed hinge objective. GL training is the
// same call with full-set decompositions.
TrainReport train_subgradient(const ScoringModel& model, const Dataset& D,
                              const std::vector<Decomposition>& S_list,
                              const OutputSpace& space, Loss loss,
                              const TrainConfig& config);

// Local-learning baseline: independent per-variable perceptrons (singleton),
// or node-potential-only training with zeroed edge blocks (pairwise). The
// returned weights occupy the same flat layout as the structured model.
TrainReport train_local(const ScoringModel& model, const Dataset& D,
                        const OutputSpace& space, const TrainConfig& config);

}  // namespace declearn
