#pragma once

#include "declearn/types.hpp"

namespace declearn {

// Built-in loss functions. All satisfy loss(y, y) = 0 and loss >= 0;
// Perceptron is the constant-zero loss.
enum class Loss { Hamming, ZeroOne, Perceptron };

// |{i : y_i != y2_i}|
int hamming(const Assignment& y, const Assignment& y2);

double loss_value(Loss loss, const Assignment& gold, const Assignment& y);

// Same losses expressed through the mismatch count; used by the incremental
// inference paths (inline: called once per enumerated candidate).
inline double loss_from_mismatches(Loss loss, int mismatches) {
  switch (loss) {
    case Loss::Hamming: return static_cast<double>(mismatches);
    case Loss::ZeroOne: return mismatches > 0 ? 1.0 : 0.0;
    case Loss::Perceptron: return 0.0;
  }
  return 0.0;
}

}  // namespace declearn
