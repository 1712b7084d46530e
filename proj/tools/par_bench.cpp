// Compares the OpenMP kernels against their serial reference variants:
// same inputs, verified-identical outputs, wall-clock side by side.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "declearn/lab.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace declearn;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

template <typename Fn>
double time_best_of(int reps, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, seconds_since(t0));
  }
  return best;
}

void row(const char* name, double serial, double parallel, bool equal) {
  std::printf("%-22s %10.4fs %10.4fs %8.2fx   %s\n", name, serial, parallel,
              serial / parallel, equal ? "outputs equal" : "OUTPUTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t seed = 7;
  int reps = 3;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--seed") && i + 1 < argc)
      seed = std::strtoull(argv[++i], nullptr, 10);
    else if (!std::strcmp(argv[i], "--reps") && i + 1 < argc)
      reps = std::atoi(argv[++i]);
    else {
      std::fprintf(stderr, "usage: par_bench [--seed S] [--reps R]\n");
      return 2;
    }
  }

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif

  SyntheticConfig sc;
  sc.train_sizes = {320};
  sc.test_size = 2000;
  SyntheticData data = gen_synthetic(sc, seed);
  const int n = data.model.n;

  // Slightly-off weights so objectives and evaluation do real work.
  WeightVector w = data.true_weights;
  for (std::size_t i = 0; i < w.size(); ++i) w[i] *= (i % 2 ? 0.9 : 1.1);

  std::printf("%-22s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    Metrics ms, mp;
    double ts = time_best_of(reps, [&] {
      ms = evaluate_serial(data.model, w, data.test, data.space, true);
    });
    double tp = time_best_of(reps, [&] {
      mp = evaluate(data.model, w, data.test, data.space, true);
    });
    bool eq = ms.avg_hamming == mp.avg_hamming && ms.avg_f1 == mp.avg_f1 &&
              ms.infeasible_predictions == mp.infeasible_predictions;
    row("evaluate", ts, tp, eq);
  }

  {
    std::vector<Decomposition> S{decl_k(n, 2)};
    double vs = 0, vp = 0;
    double ts = time_best_of(reps, [&] {
      vs = decl_objective_serial(data.model, w, data.train, S, data.space,
                                 Loss::Hamming);
    });
    double tp = time_best_of(reps, [&] {
      vp = decl_objective(data.model, w, data.train, S, data.space,
                          Loss::Hamming);
    });
    row("decl_objective", ts, tp, vs == vp);
  }

  {
    double vs = 0, vp = 0;
    double ts = time_best_of(reps, [&] {
      vs = global_objective_serial(data.model, w, data.train, data.space,
                                   Loss::Hamming);
    });
    double tp = time_best_of(reps, [&] {
      vp = global_objective(data.model, w, data.train, data.space,
                            Loss::Hamming);
    });
    row("global_objective", ts, tp, vs == vp);
  }

  {
    Decomposition S = decl_k(n, 3);
    std::vector<Assignment> ns, np;
    const Assignment& gold = data.train.front().gold;
    double ts = time_best_of(
        reps, [&] { ns = neighborhood_serial(data.space, gold, S); });
    double tp =
        time_best_of(reps, [&] { np = neighborhood(data.space, gold, S); });
    row("neighborhood", ts, tp, ns == np);
  }

  return 0;
}
