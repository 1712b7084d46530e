#pragma once

#include <functional>
#include <string>
#include <vector>

#include "declearn/model.hpp"
#include "declearn/space.hpp"

namespace declearn {

// Collection of distinct, non-inclusive index sets over {0..n-1}. Sets are
// kept sorted ascending.
struct Decomposition {
  std::vector<std::vector<int>> sets;
};

struct ValidationReport {
  bool ok = true;
  std::string message;
};

// Checks distinctness, non-inclusion, and index range; reports the first
// violation found.
ValidationReport validate(const Decomposition& S, int n);

// All C(n,k) size-k subsets in lexicographic order.
Decomposition decl_k(int n, int k, long budget = 1L << 20);

// Streaming variant for combinatorially large k: calls fn once per subset.
void decl_k_for_each(int n, int k,
                     const std::function<void(const std::vector<int>&)>& fn);

// The single-set decomposition {{0..n-1}} (full neighborhood = Y).
Decomposition full_set(int n);

// Maximal connected components of the kept-edge graph E^j, where an edge is
// kept iff its modularity agrees with the gold labels (submodular and equal
// labels, or supermodular and unequal). Isolated nodes become singleton
// components. Throws on any Neither edge.
Decomposition s_pair(const Assignment& gold,
                     const std::vector<std::pair<int, int>>& edges,
                     const std::vector<Modularity>& modularity);

// Maximal same-label runs of a chain-ordered gold assignment; the
// multi-state generalization used for diagonal-heavy chain models.
Decomposition s_pair_blocks(const Assignment& gold);

// nbr(gold, S) = { y in Y | exists s in S with s(gold, y) subseteq s },
// built by patching all local assignments of each set and deduplicating.
// Returned sorted lexicographically.
std::vector<Assignment> neighborhood(const OutputSpace& space,
                                     const Assignment& gold,
                                     const Decomposition& S);

// Single-threaded reference for the OpenMP path above; identical output.
std::vector<Assignment> neighborhood_serial(const OutputSpace& space,
                                            const Assignment& gold,
                                            const Decomposition& S);

}  // namespace declearn
