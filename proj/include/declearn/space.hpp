#pragma once

#include <functional>
#include <vector>

#include "declearn/types.hpp"

namespace declearn {

enum class Rel { Le, Ge, Eq };

// Integer linear constraint a . y (rel) b over the label vector.
struct LinearConstraint {
  std::vector<long> coeffs;  // length n
  Rel rel = Rel::Le;
  long bound = 0;
};

// One literal of an OR clause. Positive means y_var == 1, negated means
// y_var == 0. Clauses are only meaningful for binary spaces.
struct Literal {
  int var = 0;
  bool negated = false;
};
using Clause = std::vector<Literal>;

struct ConstraintSet {
  std::vector<LinearConstraint> linear;
  std::vector<Clause> clauses;

  bool empty() const { return linear.empty() && clauses.empty(); }
};

// Declarative constrained output space Y. Construction validates constraint
// shapes and that at least one feasible assignment exists (by enumeration,
// or via the provided witness when the space is too large to enumerate).
class OutputSpace {
 public:
  static constexpr long kDefaultCap = 1L << 20;

  OutputSpace(int n, int alphabet, ConstraintSet constraints,
              long enumeration_cap = kDefaultCap,
              const Assignment* witness = nullptr);

  static OutputSpace unconstrained(int n, int alphabet = 2);

  int n() const { return n_; }
  int alphabet() const { return alphabet_; }
  long enumeration_cap() const { return cap_; }
  const ConstraintSet& constraints() const { return constraints_; }
  bool has_constraints() const { return !constraints_.empty(); }

  bool is_feasible(const Assignment& y) const;

  // Exactly the feasible assignments, in lexicographic order.
  std::vector<Assignment> enumerate_feasible() const;
  long count_feasible() const;

  // Visits feasible assignments in lexicographic order until fn returns
  // false. Throws CapExceededError when alphabet^n exceeds the cap.
  void for_each_feasible(const std::function<bool(const Assignment&)>& fn) const;

  // alphabet^n, saturating; used for cap checks and error messages.
  double total_assignments() const;

 private:
  void check_enumerable() const;

  int n_;
  int alphabet_;
  long cap_;
  ConstraintSet constraints_;
};

// s(y, y') = positions where the two assignments differ (0-indexed).
std::vector<int> diff_set(const Assignment& y, const Assignment& y2);

// (y_s, gold_{-s}): replaces the variables of gold indexed by s with the
// corresponding entries of local.
Assignment patch(const Assignment& gold, const std::vector<int>& s,
                 const std::vector<int>& local);

}  // namespace declearn
