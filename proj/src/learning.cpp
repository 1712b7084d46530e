#include "declearn/learning.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace declearn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

const Decomposition& S_at(const std::vector<Decomposition>& S_list,
                          std::size_t j) {
  return S_list.size() == 1 ? S_list[0] : S_list[j];
}

void check_s_list(const std::vector<Decomposition>& S_list, std::size_t m) {
  if (S_list.size() != m && S_list.size() != 1)
    throw DimensionError("S_list has " + std::to_string(S_list.size()) +
                         " decompositions for " + std::to_string(m) +
                         " instances (one per instance, or one broadcast)");
}

unsigned mask_of(const Assignment& y, const Assignment& y2) {
  unsigned mask = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] != y2[i]) mask |= 1u << i;
  return mask;
}

Assignment flip(const Assignment& y, unsigned mask) {
  Assignment out = y;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (mask & (1u << i)) out[i] = 1 - out[i];
  return out;
}

}  // namespace

SubadditivityReport check_subadditive(const LossTable& loss,
                                      const OutputSpace& space, long trials,
                                      std::uint64_t seed) {
  if (space.alphabet() != 2)
    throw ConfigError("subadditivity check is defined for binary spaces");
  auto feasible = space.enumerate_feasible();
  std::set<Assignment> members(feasible.begin(), feasible.end());
  SubadditivityReport report;

  auto test = [&](const Assignment& y, const Assignment& yp, unsigned m1,
                  unsigned m2) {
    Assignment y1 = flip(y, m1);
    Assignment y2 = flip(y, m2);
    if (!members.count(y1) || !members.count(y2)) return true;
    ++report.quadruples_checked;
    double lhs = loss(y, yp);
    double rhs = loss(y, y1) + loss(y, y2);
    if (lhs > rhs + 1e-12) {
      report.subadditive = false;
      report.violation = SubadditivityViolation{y, yp, y1, y2, lhs, rhs};
      return false;
    }
    return true;
  };

  if (space.n() <= 6) {
    report.exhaustive = true;
    for (const auto& y : feasible)
      for (const auto& yp : feasible) {
        unsigned diff = mask_of(y, yp);
        // every split of diff into (m1, m2) with m1 | m2 == diff
        for (unsigned m1 = diff;; m1 = (m1 - 1) & diff) {
          unsigned rest = diff ^ m1;
          for (unsigned t = m1;; t = (t - 1) & m1) {
            if (!test(y, yp, m1, rest | t)) return report;
            if (t == 0) break;
          }
          if (m1 == 0) break;
        }
      }
    return report;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, feasible.size() - 1);
  std::uniform_int_distribution<int> three(0, 2);
  for (long t = 0; t < trials; ++t) {
    const auto& y = feasible[pick(rng)];
    const auto& yp = feasible[pick(rng)];
    unsigned diff = mask_of(y, yp);
    unsigned m1 = 0, m2 = 0;
    for (int i = 0; i < space.n(); ++i) {
      if (!(diff & (1u << i))) continue;
      switch (three(rng)) {
        case 0: m1 |= 1u << i; break;
        case 1: m2 |= 1u << i; break;
        default: m1 |= 1u << i; m2 |= 1u << i; break;
      }
    }
    if (!test(y, yp, m1, m2)) return report;
  }
  return report;
}

SubadditivityReport check_subadditive(Loss loss, const OutputSpace& space,
                                      long trials, std::uint64_t seed) {
  return check_subadditive(
      [loss](const Assignment& a, const Assignment& b) {
        return loss_value(loss, a, b);
      },
      space, trials, seed);
}

double decl_objective_serial(const ScoringModel& model, const WeightVector& w,
                             const Dataset& D,
                             const std::vector<Decomposition>& S_list,
                             const OutputSpace& space, Loss loss) {
  check_s_list(S_list, D.size());
  double total = 0.0;
  for (std::size_t j = 0; j < D.size(); ++j)
    total += map_decomposed(model, w, D[j].x, D[j].gold, S_at(S_list, j), space,
                            loss)
                 .value;
  return total;
}

double decl_objective(const ScoringModel& model, const WeightVector& w,
                      const Dataset& D, const std::vector<Decomposition>& S_list,
                      const OutputSpace& space, Loss loss) {
  check_s_list(S_list, D.size());
  const int m = static_cast<int>(D.size());
  std::vector<double> terms(m);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int j = 0; j < m; ++j)
    terms[j] = map_decomposed(model, w, D[j].x, D[j].gold, S_at(S_list, j),
                              space, loss)
                   .value;
  double total = 0.0;  // in-order sum, identical to the serial path
  for (double t : terms) total += t;
  return total;
}

double global_objective_serial(const ScoringModel& model, const WeightVector& w,
                               const Dataset& D, const OutputSpace& space,
                               Loss loss) {
  double total = 0.0;
  for (const auto& inst : D)
    total += map_loss_augmented(model, w, inst.x, inst.gold, space, loss).value;
  return total;
}

double global_objective(const ScoringModel& model, const WeightVector& w,
                        const Dataset& D, const OutputSpace& space, Loss loss) {
  const int m = static_cast<int>(D.size());
  std::vector<double> terms(m);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int j = 0; j < m; ++j)
    terms[j] =
        map_loss_augmented(model, w, D[j].x, D[j].gold, space, loss).value;
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

void TrainConfig::check() const {
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (eta0 <= 0.0) throw ConfigError("eta0 must be positive");
  if (lambda < 0.0) throw ConfigError("lambda must be nonnegative");
  if (sample_sets && *sample_sets <= 0)
    throw ConfigError("sample_sets must be positive when set");
}

double TrainConfig::eta(int epoch) const {
  return schedule == StepSchedule::Constant ? eta0 : eta0 / (1.0 + epoch);
}

TrainReport train_subgradient(const ScoringModel& model, const Dataset& D,
                              const std::vector<Decomposition>& S_list,
                              const OutputSpace& space, Loss loss,
                              const TrainConfig& config) {
  config.check();
  if (D.empty()) throw ConfigError("training data is empty");
  check_s_list(S_list, D.size());
  for (const auto& S : S_list) {
    auto report = validate(S, model.n);
    if (!report.ok) throw ConfigError("invalid decomposition: " + report.message);
  }

  const int dim = model.feature_dim();
  WeightVector w(dim, 0.0);
  if (config.init) {
    model.check_weights(*config.init);
    w = *config.init;
  }
  std::vector<FeatureVector> phi_gold;
  phi_gold.reserve(D.size());
  for (const auto& inst : D)
    phi_gold.push_back(joint_feature(model, inst.x, inst.gold));

  std::mt19937_64 shuffle_rng(sub_seed(config.seed, "shuffle"));
  std::mt19937_64 sample_rng(sub_seed(config.seed, "sample"));
  std::vector<std::size_t> order(D.size());
  std::iota(order.begin(), order.end(), 0);

  WeightVector avg_sum(config.averaging ? dim : 0, 0.0);
  long avg_count = 0;

  TrainReport report;
  for (int t = 0; t < config.epochs; ++t) {
    const double eta = config.eta(t);
    if (config.shuffle) std::shuffle(order.begin(), order.end(), shuffle_rng);
    auto start = Clock::now();
    for (std::size_t j : order) {
      auto inferred = map_decomposed(model, w, D[j].x, D[j].gold, S_at(S_list, j),
                                     space, loss, config.sample_sets, sample_rng);
      if (config.lambda > 0.0) {
        double shrink = 1.0 - eta * config.lambda;
        for (double& wi : w) wi *= shrink;
      }
      if (inferred.argmax != D[j].gold) {
        FeatureVector phi_y = joint_feature(model, D[j].x, inferred.argmax);
        for (int k = 0; k < dim; ++k) w[k] += eta * (phi_gold[j][k] - phi_y[k]);
        ++report.updates;
      }
      if (config.averaging) {
        for (int k = 0; k < dim; ++k) avg_sum[k] += w[k];
        ++avg_count;
      }
    }
    double elapsed = seconds_since(start);
    report.epoch_seconds.push_back(elapsed);
    report.train_seconds += elapsed;
    ++report.epochs_run;
    if (config.track_objective) {
      double obj = decl_objective(model, w, D, S_list, space, loss);
      report.decl_objective_trace.push_back(obj);
      if (config.track_global)
        report.global_objective_trace.push_back(
            global_objective(model, w, D, space, loss));
      if (config.early_stop_on_zero && obj == 0.0) break;
    }
  }
  report.weights = std::move(w);
  if (config.averaging && avg_count > 0) {
    for (double& v : avg_sum) v /= static_cast<double>(avg_count);
    report.averaged = std::move(avg_sum);
  }
  return report;
}

TrainReport train_local(const ScoringModel& model, const Dataset& D,
                        const OutputSpace& space, const TrainConfig& config) {
  (void)space;  // constraints are deliberately ignored during local learning
  config.check();
  if (D.empty()) throw ConfigError("training data is empty");
  const int dim = model.feature_dim();
  const int d = model.d;
  WeightVector w(dim, 0.0);
  if (config.init) {
    model.check_weights(*config.init);
    w = *config.init;
  }
  std::mt19937_64 shuffle_rng(sub_seed(config.seed, "shuffle"));
  std::vector<std::size_t> order(D.size());
  std::iota(order.begin(), order.end(), 0);

  WeightVector avg_sum(config.averaging ? dim : 0, 0.0);
  long avg_count = 0;

  TrainReport report;
  for (int t = 0; t < config.epochs; ++t) {
    const double eta = config.eta(t);
    if (config.shuffle) std::shuffle(order.begin(), order.end(), shuffle_rng);
    auto start = Clock::now();
    for (std::size_t j : order) {
      const auto& inst = D[j];
      if (model.family == ModelFamily::SingletonLinear) {
        for (int i = 0; i < model.n; ++i) {
          const double* xi = inst.x.row(i);
          double* wi = w.data() + std::size_t(i) * d;
          double score = 0.0;
          for (int k = 0; k < d; ++k) score += wi[k] * xi[k];
          int pred = score > 0.0 ? 1 : 0;  // ties resolve to 0
          if (pred != inst.gold[i]) {
            double sign = inst.gold[i] - pred;
            for (int k = 0; k < d; ++k) wi[k] += eta * sign * xi[k];
            ++report.updates;
          }
        }
      } else {
        const int A = model.alphabet;
        for (int i = 0; i < model.n; ++i) {
          const double* xi = inst.x.row(i);
          int pred = 0;
          double best = -std::numeric_limits<double>::infinity();
          for (int a = 0; a < A; ++a) {
            const double* wb = w.data() + (std::size_t(i) * A + a) * d;
            double score = 0.0;
            for (int k = 0; k < d; ++k) score += wb[k] * xi[k];
            if (score > best) {
              best = score;
              pred = a;
            }
          }
          if (pred != inst.gold[i]) {
            double* wg = w.data() + (std::size_t(i) * A + inst.gold[i]) * d;
            double* wp = w.data() + (std::size_t(i) * A + pred) * d;
            for (int k = 0; k < d; ++k) {
              wg[k] += eta * xi[k];
              wp[k] -= eta * xi[k];
            }
            ++report.updates;
          }
        }
      }
      if (config.averaging) {
        for (int k = 0; k < dim; ++k) avg_sum[k] += w[k];
        ++avg_count;
      }
    }
    double elapsed = seconds_since(start);
    report.epoch_seconds.push_back(elapsed);
    report.train_seconds += elapsed;
    ++report.epochs_run;
  }
  report.weights = std::move(w);
  if (config.averaging && avg_count > 0) {
    for (double& v : avg_sum) v /= static_cast<double>(avg_count);
    report.averaged = std::move(avg_sum);
  }
  return report;
}

}  // namespace declearn
