#include "declearn/loss.hpp"

#include <string>

namespace declearn {

int hamming(const Assignment& y, const Assignment& y2) {
  if (y.size() != y2.size())
    throw DimensionError("hamming: lengths differ (" + std::to_string(y.size()) +
                         " vs " + std::to_string(y2.size()) + ")");
  int count = 0;
  for (std::size_t i = 0; i < y.size(); ++i) count += y[i] != y2[i];
  return count;
}

double loss_value(Loss loss, const Assignment& gold, const Assignment& y) {
  return loss_from_mismatches(loss, hamming(gold, y));
}

}  // namespace declearn
