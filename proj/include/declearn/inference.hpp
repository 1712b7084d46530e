#pragma once

#include <optional>
#include <random>

#include "declearn/decomposition.hpp"
#include "declearn/loss.hpp"
#include "declearn/model.hpp"
#include "declearn/space.hpp"

namespace declearn {

struct InferenceResult {
  Assignment argmax;
  // Absolute score for map_exact / plain map_chain; hinge value
  // f(y) - f(gold) + loss for the loss-augmented variants.
  double value = 0.0;
  long candidates_examined = 0;
};

// Exact MAP over the enumerable space; ties broken toward the
// lexicographically smallest assignment.
InferenceResult map_exact(const ScoringModel& model, const WeightVector& w,
                          const InputMatrix& x, const OutputSpace& space);

// Loss-augmented MAP: argmax over Y of f(x,y;w) + loss(gold, y); the
// reported value is the hinge f(y) - f(gold) + loss.
InferenceResult map_loss_augmented(const ScoringModel& model,
                                   const WeightVector& w, const InputMatrix& x,
                                   const Assignment& gold,
                                   const OutputSpace& space, Loss loss);

// Decomposed loss-augmented inference: maximizes the hinge over all feasible
// patches (y_s, gold_{-s}) for s in S, or over sample_sets sets drawn
// uniformly without replacement. Gold itself is always a candidate, so the
// hinge is never negative.
InferenceResult map_decomposed(const ScoringModel& model, const WeightVector& w,
                               const InputMatrix& x, const Assignment& gold,
                               const Decomposition& S, const OutputSpace& space,
                               Loss loss,
                               std::optional<int> sample_sets,
                               std::mt19937_64& rng);

// Exhaustive-set convenience overload.
InferenceResult map_decomposed(const ScoringModel& model, const WeightVector& w,
                               const InputMatrix& x, const Assignment& gold,
                               const Decomposition& S, const OutputSpace& space,
                               Loss loss);

// Viterbi-style exact MAP for an unconstrained pairwise chain. With a loss
// and gold it performs loss-augmented decoding (Hamming or Perceptron) and
// reports the hinge. Same lexicographic tie-break as map_exact.
InferenceResult map_chain(const ScoringModel& model, const WeightVector& w,
                          const InputMatrix& x,
                          std::optional<Loss> loss = std::nullopt,
                          const Assignment* gold = nullptr);

}  // namespace declearn
