// Serial vs OpenMP kernel comparison. Each kernel pair must produce identical
// output (see tests/test_parallel.cpp); this only measures the speedup.

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "termsearch/logic.hpp"
#include "termsearch/noise.hpp"
#include "termsearch/parser.hpp"
#include "termsearch/rng.hpp"
#include "termsearch/stats.hpp"

using namespace termsearch;

namespace {

double time_of(const std::function<void()>& fn, int reps = 3) {
  using clock = std::chrono::steady_clock;
  double best = 1e30;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-22s %10.4fs %10.4fs %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled: parallel variants run serially\n");
#endif
  std::printf("%-22s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

  // document scoring
  TermVocabulary vocab;
  for (int i = 0; i < 8; ++i) vocab.add_term("T" + std::to_string(i));
  const QueryNode query =
      parse_expression("(T0/ or T1/ or T2/) and (T3/ or T4/) not (T5/ and T6/)", vocab);
  std::vector<TermVector> rows(400000);
  for (std::size_t d = 0; d < rows.size(); ++d) {
    CounterRng rng(1, d);
    rows[d].kind = VectorKind::Probabilistic;
    for (int t = 0; t < 8; ++t)
      if (rng.next_bernoulli(0.8)) rows[d].set(t, rng.next_double());
  }
  std::vector<const TermVector*> ptrs;
  for (const auto& r : rows) ptrs.push_back(&r);
  row("score_documents", time_of([&] { score_documents_serial(query, ptrs); }),
      time_of([&] { score_documents(query, ptrs); }));

  // noise injection
  AssignmentMatrix gold;
  gold.kind = VectorKind::Binary;
  for (int d = 0; d < 200000; ++d) {
    CounterRng rng(2, static_cast<std::uint64_t>(d));
    for (int t = 0; t < 8; ++t)
      gold.set("d" + std::to_string(d), t, rng.next_bernoulli(0.2) ? 1.0 : 0.0);
  }
  NoiseSpec spec;
  spec.seed = 3;
  for (int t = 0; t < 8; ++t) spec.per_term[t] = {0.1, 0.1};
  row("inject_noise", time_of([&] { inject_noise_serial(gold, spec); }),
      time_of([&] { inject_noise(gold, spec); }));

  // randomization test
  std::vector<double> a, b;
  for (int i = 0; i < 200; ++i) {
    CounterRng rng(4, static_cast<std::uint64_t>(i));
    a.push_back(rng.next_double());
    b.push_back(rng.next_double());
  }
  row("randomization_test",
      time_of([&] { randomization_test_serial(a, b, 200000, 5); }),
      time_of([&] { randomization_test(a, b, 200000, 5); }));
  return 0;
}
