#include "declearn/lab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace declearn {

namespace {

InputMatrix gaussian_input(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  InputMatrix x = InputMatrix::zero(rows, cols);
  for (double& v : x.data) v = normal(rng);
  return x;
}

WeightVector gaussian_weights(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  WeightVector w(dim);
  for (double& v : w) v = normal(rng);
  return w;
}

// Density-1/2 0/1 row with at least two nonzeros; bound at the midpoint of
// the attainable range. Keeps the all-zeros assignment feasible, so the
// space is never empty, and empirically lands the feasible count in the
// tens-to-hundreds at n = 10.
LinearConstraint random_constraint(int n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  LinearConstraint c;
  c.rel = Rel::Le;
  for (;;) {
    c.coeffs.assign(n, 0);
    long nonzeros = 0;
    for (int i = 0; i < n; ++i)
      if (coin(rng)) {
        c.coeffs[i] = 1;
        ++nonzeros;
      }
    if (nonzeros >= 2) {
      long hi = std::max<long>(1, (nonzeros + 1) / 2);
      c.bound = std::uniform_int_distribution<long>(1, hi)(rng);
      return c;
    }
  }
}

// Best and runner-up feasible scores plus the argmax in one pass.
std::pair<Assignment, double> top_two(const ScoringModel& model,
                                      const WeightVector& w,
                                      const InputMatrix& x,
                                      const OutputSpace& space) {
  Assignment argmax;
  double best = -std::numeric_limits<double>::infinity();
  double second = best;
  space.for_each_feasible([&](const Assignment& y) {
    double score = flat_score(model, w, x, y);
    if (score > best) {
      second = best;
      best = score;
      argmax = y;
    } else if (score > second) {
      second = score;
    }
    return true;
  });
  return {std::move(argmax), best - second};
}

Dataset make_instances(const ScoringModel& model, const WeightVector& w_true,
                       const OutputSpace& space, int count, double min_margin,
                       std::mt19937_64& rng) {
  const double required = min_margin * std::sqrt(model.d);
  Dataset out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Instance inst;
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 1000)
        throw ConfigError(
            "could not sample an instance with margin at least " +
            std::to_string(required) + " in 1000 attempts; lower min_margin");
      inst.x = gaussian_input(model.n, model.d, rng);
      auto [gold, margin] = top_two(model, w_true, inst.x, space);
      if (margin < required) continue;
      inst.gold = std::move(gold);
      break;
    }
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace

void SyntheticConfig::check() const {
  if (n <= 0) throw ConfigError("n must be positive");
  if (d <= 0) throw ConfigError("d must be positive");
  if (constraints < 0) throw ConfigError("constraint count must be nonnegative");
  if (min_feasible < 2) throw ConfigError("min feasible-set size must be >= 2");
  if (train_sizes.empty()) throw ConfigError("train_sizes must be non-empty");
  for (int s : train_sizes)
    if (s <= 0) throw ConfigError("train sizes must be positive");
  if (test_size <= 0 || validation_size <= 0)
    throw ConfigError("split sizes must be positive");
  if (trials <= 0) throw ConfigError("trials must be positive");
  if (min_margin < 0.0) throw ConfigError("min_margin must be nonnegative");
}

int SyntheticConfig::max_train_size() const {
  return *std::max_element(train_sizes.begin(), train_sizes.end());
}

SyntheticData gen_synthetic(const SyntheticConfig& config, std::uint64_t seed) {
  config.check();
  std::mt19937_64 con_rng(sub_seed(seed, "constraints"));

  auto build_space = [&]() -> OutputSpace {
    ConstraintSet cs;
    for (int k = 0; k < config.constraints; ++k)
      cs.linear.push_back(random_constraint(config.n, con_rng));
    Assignment zero(config.n, 0);
    return OutputSpace(config.n, 2, std::move(cs), OutputSpace::kDefaultCap,
                       &zero);
  };

  OutputSpace space = build_space();
  int attempts = 1;
  while (space.count_feasible() < config.min_feasible) {
    if (++attempts > 1000)
      throw ConfigError(
          "could not generate a space with at least " +
          std::to_string(config.min_feasible) +
          " feasible outputs in 1000 attempts; loosen the constraint law");
    space = build_space();
  }

  ScoringModel model = ScoringModel::singleton(config.n, config.d);
  std::mt19937_64 w_rng(sub_seed(seed, "weights"));
  WeightVector w_true = gaussian_weights(model.feature_dim(), w_rng);

  std::mt19937_64 inst_rng(sub_seed(seed, "instances"));
  Dataset train =
      make_instances(model, w_true, space, config.max_train_size(),
                     config.min_margin, inst_rng);
  Dataset validation = make_instances(model, w_true, space,
                                      config.validation_size,
                                      config.min_margin, inst_rng);
  Dataset test = make_instances(model, w_true, space, config.test_size,
                                config.min_margin, inst_rng);

  return SyntheticData{std::move(space), model, std::move(w_true),
                       std::move(train), std::move(validation), std::move(test)};
}

namespace {

Metrics evaluate_impl(const ScoringModel& model, const WeightVector& w,
                      const Dataset& testset, const OutputSpace& space,
                      bool use_constraints, bool parallel) {
  if (testset.empty()) throw ConfigError("test set is empty");
  const OutputSpace plain = OutputSpace::unconstrained(space.n(), space.alphabet());
  const OutputSpace& inference_space = use_constraints ? space : plain;
  const int m = static_cast<int>(testset.size());
  std::vector<Assignment> predictions(m);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#else
  (void)parallel;
#endif
  for (int j = 0; j < m; ++j)
    predictions[j] = map_exact(model, w, testset[j].x, inference_space).argmax;

  Metrics metrics;
  for (int j = 0; j < m; ++j) {
    const Assignment& gold = testset[j].gold;
    const Assignment& pred = predictions[j];
    int h = hamming(gold, pred);
    metrics.avg_hamming += h;
    metrics.per_bit_error += static_cast<double>(h) / space.n();
    int t = 0, p = 0, c = 0;
    for (int i = 0; i < space.n(); ++i) {
      t += gold[i] == 1;
      p += pred[i] == 1;
      c += gold[i] == 1 && pred[i] == 1;
    }
    // empty gold and empty prediction count as a perfect instance
    metrics.avg_f1 += (t + p == 0) ? 1.0 : 2.0 * c / (t + p);
    metrics.infeasible_predictions += !space.is_feasible(pred);
  }
  metrics.avg_hamming /= m;
  metrics.avg_f1 /= m;
  metrics.per_bit_error /= m;
  return metrics;
}

}  // namespace

Metrics evaluate(const ScoringModel& model, const WeightVector& w,
                 const Dataset& testset, const OutputSpace& space,
                 bool use_constraints) {
  return evaluate_impl(model, w, testset, space, use_constraints, true);
}

Metrics evaluate_serial(const ScoringModel& model, const WeightVector& w,
                        const Dataset& testset, const OutputSpace& space,
                        bool use_constraints) {
  return evaluate_impl(model, w, testset, space, use_constraints, false);
}

ExactnessVerdict exactness_probe_sampling(const ScoringModel& model,
                                          const Dataset& D,
                                          const OutputSpace& space,
                                          const std::vector<Decomposition>& S_list,
                                          long probes, std::uint64_t seed,
                                          int budget_epochs) {
  ExactnessVerdict verdict;
  verdict.mode = "sampling";
  verdict.outcome = ProbeOutcome::NoCounterexample;
  for (long p = 0; p < probes; ++p) {
    ++verdict.probes;
    std::mt19937_64 rng(sub_seed(seed, "probe-" + std::to_string(p)));
    TrainConfig cfg;
    cfg.epochs = budget_epochs;
    cfg.eta0 = 0.1;
    cfg.seed = sub_seed(seed, "train-" + std::to_string(p));
    cfg.early_stop_on_zero = true;
    cfg.init = gaussian_weights(model.feature_dim(), rng);
    TrainReport report =
        train_subgradient(model, D, S_list, space, Loss::Perceptron, cfg);
    double decl = decl_objective(model, report.weights, D, S_list, space,
                                 Loss::Perceptron);
    if (decl > 1e-12) continue;  // budget exhausted before separation
    double global =
        global_objective(model, report.weights, D, space, Loss::Perceptron);
    if (global > 1e-9) {
      verdict.outcome = ProbeOutcome::Counterexample;
      verdict.witness = report.weights;
      for (std::size_t j = 0; j < D.size(); ++j) {
        auto res = map_loss_augmented(model, report.weights, D[j].x, D[j].gold,
                                      space, Loss::Perceptron);
        if (res.value > 1e-9) {
          verdict.instance = static_cast<int>(j);
          verdict.violating_y = res.argmax;
          break;
        }
      }
      return verdict;
    }
  }
  return verdict;
}

ExactnessVerdict exactness_certificate_cor1(const ScoringModel& model,
                                            const Dataset& D,
                                            const OutputSpace& space,
                                            const std::vector<Decomposition>& S_list,
                                            Loss loss) {
  (void)loss;  // any subadditive loss; the search itself is loss-free
  if (model.family != ModelFamily::SingletonLinear)
    throw ConfigError(
        "the certificate applies to singleton scoring functions only");
  if (space.n() > 30) throw CapExceededError("certificate limited to n <= 30");
  ExactnessVerdict verdict;
  verdict.mode = "certificate";
  verdict.outcome = ProbeOutcome::ExactCertified;

  auto feasible = space.enumerate_feasible();
  for (std::size_t j = 0; j < D.size(); ++j) {
    const Assignment& gold = D[j].gold;
    const Decomposition& S = S_list.size() == 1 ? S_list[0] : S_list[j];
    std::vector<unsigned> set_masks;
    for (const auto& s : S.sets) {
      unsigned mask = 0;
      for (int i : s) mask |= 1u << i;
      set_masks.push_back(mask);
    }
    for (const auto& y : feasible) {
      unsigned diff = 0;
      for (int i = 0; i < space.n(); ++i)
        if (y[i] != gold[i]) diff |= 1u << i;
      if (diff == 0) continue;

      // admissible pieces: inside some decomposition set, and individually
      // patchable onto gold without leaving Y
      auto piece_ok = [&](unsigned p) {
        bool covered = false;
        for (unsigned sm : set_masks)
          if ((p & ~sm) == 0) {
            covered = true;
            break;
          }
        if (!covered) return false;
        Assignment patched = gold;
        for (int i = 0; i < space.n(); ++i)
          if (p & (1u << i)) patched[i] = y[i];
        return space.is_feasible(patched);
      };

      // exact-cover search over submasks of diff
      std::vector<char> reachable(1u << std::popcount(diff), 0);
      // work in the compressed index space of diff's bits
      std::vector<int> bits;
      for (int i = 0; i < space.n(); ++i)
        if (diff & (1u << i)) bits.push_back(i);
      auto expand = [&](unsigned compact) {
        unsigned full = 0;
        for (std::size_t b = 0; b < bits.size(); ++b)
          if (compact & (1u << b)) full |= 1u << bits[b];
        return full;
      };
      const unsigned all = (1u << bits.size()) - 1;
      reachable[0] = 1;
      bool done = false;
      for (unsigned m = 0; m <= all && !done; ++m) {
        if (!reachable[m]) continue;
        unsigned remaining = all ^ m;
        if (remaining == 0) {
          done = true;
          break;
        }
        unsigned low = remaining & (~remaining + 1);
        // pieces of the remaining bits that contain the lowest one
        for (unsigned sub = remaining;; sub = (sub - 1) & remaining) {
          if ((sub & low) && piece_ok(expand(sub))) {
            if ((m | sub) == all) {
              done = true;
              break;
            }
            reachable[m | sub] = 1;
          }
          if (sub == 0) break;
        }
      }
      if (!done) verdict.uncovered.emplace_back(static_cast<int>(j), y);
    }
  }
  if (!verdict.uncovered.empty()) verdict.outcome = ProbeOutcome::NoCounterexample;
  return verdict;
}

void BenchmarkConfig::check() const {
  data.check();
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (eta0 <= 0.0) throw ConfigError("eta0 must be positive");
}

BenchResult run_benchmark(const BenchmarkConfig& config) {
  config.check();
  BenchResult result;
  result.n = config.data.n;
#ifdef _OPENMP
  result.threads = omp_get_max_threads();
#endif

  std::vector<int> sizes = config.data.train_sizes;
  std::sort(sizes.begin(), sizes.end());

  for (int trial = 0; trial < config.data.trials; ++trial) {
    SyntheticData data = gen_synthetic(
        config.data, sub_seed(config.seed, "trial-" + std::to_string(trial)));

    for (int size : sizes) {
      Dataset D(data.train.begin(), data.train.begin() + size);

      auto configure = [&](const std::string& algo) {
        TrainConfig cfg;
        cfg.epochs = config.epochs;
        cfg.eta0 = config.eta0;
        cfg.shuffle = config.shuffle;
        cfg.seed = sub_seed(config.seed, "train-" + std::to_string(trial) + "-" +
                                             std::to_string(size) + "-" + algo);
        cfg.track_objective = false;  // keep the timed loop clean
        return cfg;
      };

      auto tuned_lambda = [&](const std::string& algo,
                              const std::vector<Decomposition>& S_list,
                              bool local) {
        if (!config.tune_lambda) return 0.0;
        double best_lambda = 0.0, best_err = std::numeric_limits<double>::max();
        for (double lambda : config.lambda_grid) {
          TrainConfig cfg = configure(algo + "-tune");
          cfg.lambda = lambda;
          TrainReport rep = local
                                ? train_local(data.model, D, data.space, cfg)
                                : train_subgradient(data.model, D, S_list,
                                                    data.space, config.loss, cfg);
          double err = evaluate(data.model, rep.weights, data.validation,
                                data.space, true)
                           .avg_hamming;
          if (err < best_err) {
            best_err = err;
            best_lambda = lambda;
          }
        }
        return best_lambda;
      };

      auto emit = [&](const std::string& algo, const WeightVector& weights,
                      double seconds, bool use_constraints) {
        Metrics metrics =
            evaluate(data.model, weights, data.test, data.space, use_constraints);
        result.rows.push_back(BenchRow{trial, size, algo, metrics.avg_hamming,
                                       metrics.avg_f1, seconds});
      };

      {  // local learning, reported with and without test-time constraints
        TrainConfig cfg = configure("ll");
        cfg.lambda = tuned_lambda("ll", {}, true);
        TrainReport rep = train_local(data.model, D, data.space, cfg);
        emit("ll", rep.weights, rep.train_seconds, false);
        emit("ll+c", rep.weights, rep.train_seconds, true);
      }
      for (int k = 1; k <= 3; ++k) {
        std::string algo = "decl-" + std::to_string(k);
        std::vector<Decomposition> S_list{decl_k(config.data.n, k)};
        TrainConfig cfg = configure(algo);
        cfg.lambda = tuned_lambda(algo, S_list, false);
        TrainReport rep = train_subgradient(data.model, D, S_list, data.space,
                                            config.loss, cfg);
        emit(algo, rep.weights, rep.train_seconds, true);
      }
      {
        std::vector<Decomposition> S_list{full_set(config.data.n)};
        TrainConfig cfg = configure("gl");
        cfg.lambda = tuned_lambda("gl", S_list, false);
        TrainReport rep = train_subgradient(data.model, D, S_list, data.space,
                                            config.loss, cfg);
        emit("gl", rep.weights, rep.train_seconds, true);
      }
    }
  }
  std::sort(result.rows.begin(), result.rows.end(),
            [](const BenchRow& a, const BenchRow& b) {
              return std::tie(a.trial, a.train_size, a.algorithm) <
                     std::tie(b.trial, b.train_size, b.algorithm);
            });
  return result;
}

std::string benchmark_csv(const BenchResult& result) {
  std::ostringstream out;
  out << "# n=" << result.n << " threads=" << result.threads << "\n";
  out << "trial,train_size,algorithm,avg_hamming,avg_f1,train_seconds\n";
  for (const auto& row : result.rows)
    out << row.trial << "," << row.train_size << "," << row.algorithm << ","
        << row.avg_hamming << "," << row.avg_f1 << "," << row.train_seconds
        << "\n";
  return out.str();
}

double bench_mean(const BenchResult& result, int train_size,
                  const std::string& algorithm, double BenchRow::*field) {
  double total = 0.0;
  long count = 0;
  for (const auto& row : result.rows)
    if (row.train_size == train_size && row.algorithm == algorithm) {
      total += row.*field;
      ++count;
    }
  if (count == 0)
    throw ConfigError("no benchmark rows for size " + std::to_string(train_size) +
                      ", algorithm " + algorithm);
  return total / count;
}

}  // namespace declearn
