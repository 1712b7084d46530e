#include "declearn/space.hpp"

#include <algorithm>
#include <cmath>
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

}  // namespace

OutputSpace::OutputSpace(int n, int alphabet, ConstraintSet constraints,
                         long enumeration_cap, const Assignment* witness)
    : n_(n), alphabet_(alphabet), cap_(enumeration_cap),
      constraints_(std::move(constraints)) {
  if (n_ <= 0) throw ConfigError("OutputSpace: n must be positive, got " +
                                 std::to_string(n_));
  if (alphabet_ < 2)
    throw ConfigError("OutputSpace: alphabet must be at least 2");
  if (cap_ <= 0) throw ConfigError("OutputSpace: enumeration cap must be positive");
  for (const auto& c : constraints_.linear) {
    if (static_cast<int>(c.coeffs.size()) != n_)
      throw DimensionError("linear constraint row has length " +
                           std::to_string(c.coeffs.size()) + ", expected n = " +
                           std::to_string(n_));
  }
  if (!constraints_.clauses.empty() && alphabet_ != 2)
    throw ConfigError("OR clauses require a binary alphabet");
  for (const auto& clause : constraints_.clauses) {
    if (clause.empty()) throw ConfigError("empty OR clause");
    for (const auto& lit : clause) {
      if (lit.var < 0 || lit.var >= n_)
        throw ConfigError("clause variable index " + std::to_string(lit.var + 1) +
                          " out of range for n = " + std::to_string(n_));
    }
  }

  if (witness != nullptr) {
    if (!is_feasible(*witness))
      throw ConfigError("OutputSpace: provided witness is infeasible");
    return;
  }
  // No witness: establish non-emptiness by enumeration.
  bool found = false;
  for_each_feasible([&](const Assignment&) {
    found = true;
    return false;
  });
  if (!found) throw ConfigError("OutputSpace: constraint system has no feasible assignment");
}

OutputSpace OutputSpace::unconstrained(int n, int alphabet) {
  Assignment zero(n, 0);
  return OutputSpace(n, alphabet, ConstraintSet{}, kDefaultCap, &zero);
}

double OutputSpace::total_assignments() const {
  return std::pow(static_cast<double>(alphabet_), static_cast<double>(n_));
}

void OutputSpace::check_enumerable() const {
  if (total_assignments() > static_cast<double>(cap_))
    throw CapExceededError("space too large to enumerate: alphabet^n = " +
                           std::to_string(total_assignments()) + " exceeds cap " +
                           std::to_string(cap_));
}

bool OutputSpace::is_feasible(const Assignment& y) const {
  if (static_cast<int>(y.size()) != n_)
    throw DimensionError("assignment length " + std::to_string(y.size()) +
                         " does not match n = " + std::to_string(n_));
  for (const auto& c : constraints_.linear) {
    long lhs = 0;
    for (int i = 0; i < n_; ++i) lhs += c.coeffs[i] * y[i];
    if (!relation_holds(lhs, c.rel, c.bound)) return false;
  }
  for (const auto& clause : constraints_.clauses) {
    bool satisfied = false;
    for (const auto& lit : clause) {
      bool value = y[lit.var] == 1;
      if (lit.negated ? !value : value) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied) return false;
  }
  return true;
}

void OutputSpace::for_each_feasible(
    const std::function<bool(const Assignment&)>& fn) const {
  check_enumerable();
  Assignment y(n_, 0);
  for (;;) {
    if (is_feasible(y) && !fn(y)) return;
    // lexicographic odometer, last variable fastest
    int pos = n_ - 1;
    while (pos >= 0 && y[pos] == alphabet_ - 1) y[pos--] = 0;
    if (pos < 0) return;
    ++y[pos];
  }
}

std::vector<Assignment> OutputSpace::enumerate_feasible() const {
  std::vector<Assignment> out;
  for_each_feasible([&](const Assignment& y) {
    out.push_back(y);
    return true;
  });
  return out;
}

long OutputSpace::count_feasible() const {
  long count = 0;
  for_each_feasible([&](const Assignment&) {
    ++count;
    return true;
  });
  return count;
}

std::vector<int> diff_set(const Assignment& y, const Assignment& y2) {
  if (y.size() != y2.size())
    throw DimensionError("diff_set: lengths differ (" + std::to_string(y.size()) +
                         " vs " + std::to_string(y2.size()) + ")");
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(y.size()); ++i)
    if (y[i] != y2[i]) out.push_back(i);
  return out;
}

Assignment patch(const Assignment& gold, const std::vector<int>& s,
                 const std::vector<int>& local) {
  if (s.size() != local.size())
    throw DimensionError("patch: |local| = " + std::to_string(local.size()) +
                         " does not match |s| = " + std::to_string(s.size()));
  Assignment out = gold;
  for (std::size_t t = 0; t < s.size(); ++t) {
    if (s[t] < 0 || s[t] >= static_cast<int>(gold.size()))
      throw DimensionError("patch: index " + std::to_string(s[t] + 1) +
                           " out of range");
    out[s[t]] = local[t];
  }
  return out;
}

}  // namespace declearn
