#include "declearn/decomposition.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace declearn {

namespace {

bool is_subset(const std::vector<int>& a, const std::vector<int>& b) {
  // both sorted
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::string set_to_string(const std::vector<int>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i] + 1);
  }
  return out + "}";
}

// All |alphabet|^|s| patches of one set, feasibility-filtered.
std::vector<Assignment> set_patches(const OutputSpace& space,
                                    const Assignment& gold,
                                    const std::vector<int>& s) {
  std::vector<Assignment> out;
  const int A = space.alphabet();
  std::vector<int> local(s.size(), 0);
  for (;;) {
    Assignment candidate = patch(gold, s, local);
    if (space.is_feasible(candidate)) out.push_back(std::move(candidate));
    int pos = static_cast<int>(s.size()) - 1;
    while (pos >= 0 && local[pos] == A - 1) local[pos--] = 0;
    if (pos < 0) break;
    ++local[pos];
  }
  return out;
}

}  // namespace

ValidationReport validate(const Decomposition& S, int n) {
  for (const auto& s : S.sets) {
    if (s.empty()) return {false, "empty index set"};
    if (!std::is_sorted(s.begin(), s.end()) ||
        std::adjacent_find(s.begin(), s.end()) != s.end())
      return {false, "index set " + set_to_string(s) + " is not sorted-unique"};
    for (int i : s)
      if (i < 0 || i >= n)
        return {false, "index " + std::to_string(i + 1) +
                           " out of range for n = " + std::to_string(n)};
  }
  // Builders emit sets in increasing lex order, making duplicate detection
  // linear; otherwise fall back to sorting a view.
  bool lex_ordered = true;
  for (std::size_t i = 0; i + 1 < S.sets.size() && lex_ordered; ++i)
    lex_ordered = S.sets[i] < S.sets[i + 1];
  if (!lex_ordered) {
    std::vector<const std::vector<int>*> sorted;
    sorted.reserve(S.sets.size());
    for (const auto& s : S.sets) sorted.push_back(&s);
    std::sort(sorted.begin(), sorted.end(),
              [](const std::vector<int>* a, const std::vector<int>* b) {
                return *a < *b;
              });
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
      if (*sorted[i] == *sorted[i + 1])
        return {false, "duplicate sets " + set_to_string(*sorted[i])};
  }
  // Distinct equal-size sets cannot include one another, so the quadratic
  // inclusion scan only runs for mixed-size decompositions.
  bool uniform = true;
  for (const auto& s : S.sets) uniform &= s.size() == S.sets.front().size();
  if (!uniform)
    for (const auto& a : S.sets)
      for (const auto& b : S.sets) {
        if (a.size() >= b.size() || !is_subset(a, b)) continue;
        return {false, "set " + set_to_string(a) + " is included in " +
                           set_to_string(b)};
      }
  return {true, ""};
}

void decl_k_for_each(int n, int k,
                     const std::function<void(const std::vector<int>&)>& fn) {
  if (k < 1 || k > n)
    throw ConfigError("decl_k: k = " + std::to_string(k) +
                      " out of range [1, " + std::to_string(n) + "]");
  std::vector<int> s(k);
  std::iota(s.begin(), s.end(), 0);
  for (;;) {
    fn(s);
    int pos = k - 1;
    while (pos >= 0 && s[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++s[pos];
    for (int t = pos + 1; t < k; ++t) s[t] = s[t - 1] + 1;
  }
}

Decomposition decl_k(int n, int k, long budget) {
  double count = 1.0;
  for (int i = 0; i < k; ++i) count = count * (n - i) / (i + 1);
  if (count > static_cast<double>(budget))
    throw CapExceededError("decl_k(" + std::to_string(n) + "," +
                           std::to_string(k) + ") would materialize " +
                           std::to_string(count) +
                           " sets; use decl_k_for_each to stream");
  Decomposition S;
  decl_k_for_each(n, k, [&S](const std::vector<int>& s) { S.sets.push_back(s); });
  return S;
}

Decomposition full_set(int n) {
  Decomposition S;
  S.sets.emplace_back(n);
  std::iota(S.sets.back().begin(), S.sets.back().end(), 0);
  return S;
}

Decomposition s_pair(const Assignment& gold,
                     const std::vector<std::pair<int, int>>& edges,
                     const std::vector<Modularity>& modularity) {
  const int n = static_cast<int>(gold.size());
  if (edges.size() != modularity.size())
    throw DimensionError("s_pair: one modularity class per edge required");
  // union-find over kept edges
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [u, v] = edges[e];
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw DimensionError("s_pair: edge endpoint out of range");
    bool keep;
    switch (modularity[e]) {
      case Modularity::Submodular: keep = gold[u] == gold[v]; break;
      case Modularity::Supermodular: keep = gold[u] != gold[v]; break;
      default:
        throw ConfigError(
            "s_pair: edge (" + std::to_string(u + 1) + "," +
            std::to_string(v + 1) +
            ") is neither submodular nor supermodular; every edge must be "
            "classified for this decomposition to apply");
    }
    if (keep) parent[find(u)] = find(v);
  }
  std::vector<std::vector<int>> components(n);
  for (int i = 0; i < n; ++i) components[find(i)].push_back(i);
  Decomposition S;
  for (auto& c : components)
    if (!c.empty()) S.sets.push_back(std::move(c));
  std::sort(S.sets.begin(), S.sets.end());
  return S;
}

Decomposition s_pair_blocks(const Assignment& gold) {
  Decomposition S;
  int start = 0;
  for (int i = 1; i <= static_cast<int>(gold.size()); ++i) {
    if (i == static_cast<int>(gold.size()) || gold[i] != gold[start]) {
      std::vector<int> run(i - start);
      std::iota(run.begin(), run.end(), start);
      S.sets.push_back(std::move(run));
      start = i;
    }
  }
  return S;
}

std::vector<Assignment> neighborhood_serial(const OutputSpace& space,
                                            const Assignment& gold,
                                            const Decomposition& S) {
  auto report = validate(S, space.n());
  if (!report.ok) throw ConfigError("invalid decomposition: " + report.message);
  if (!space.is_feasible(gold)) throw ConfigError("gold assignment is infeasible");
  std::set<Assignment> dedup;
  for (const auto& s : S.sets)
    for (auto& y : set_patches(space, gold, s)) dedup.insert(std::move(y));
  return {dedup.begin(), dedup.end()};
}

std::vector<Assignment> neighborhood(const OutputSpace& space,
                                     const Assignment& gold,
                                     const Decomposition& S) {
  auto report = validate(S, space.n());
  if (!report.ok) throw ConfigError("invalid decomposition: " + report.message);
  if (!space.is_feasible(gold)) throw ConfigError("gold assignment is infeasible");
  const int num_sets = static_cast<int>(S.sets.size());
  std::vector<std::vector<Assignment>> per_set(num_sets);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int i = 0; i < num_sets; ++i)
    per_set[i] = set_patches(space, gold, S.sets[i]);
  // deterministic merge: dedup is order-independent, result sorted
  std::set<Assignment> dedup;
  for (auto& patches : per_set)
    for (auto& y : patches) dedup.insert(std::move(y));
  return {dedup.begin(), dedup.end()};
}

}  // namespace declearn
