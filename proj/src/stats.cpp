#include "termsearch/stats.hpp"

#include <cmath>
#include <numeric>

#include "termsearch/errors.hpp"
#include "termsearch/rng.hpp"

namespace termsearch {

namespace {

std::vector<double> paired_diffs(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw LengthMismatchError("paired vectors have different lengths");
  if (a.empty()) throw LengthMismatchError("empty paired vectors");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

SignificanceResult randomization_test_serial(const std::vector<double>& a,
                                             const std::vector<double>& b,
                                             int iterations, std::uint64_t seed,
                                             const std::string& metric_name) {
  const std::vector<double> d = paired_diffs(a, b);
  const double obs = std::abs(mean(d));
  const double inv_n = 1.0 / static_cast<double>(d.size());
  std::int64_t count = 0;
  for (int it = 0; it < iterations; ++it) {
    CounterRng rng(seed, static_cast<std::uint64_t>(it));
    double sum = 0.0;
    for (double di : d) sum += rng.next_bernoulli(0.5) ? -di : di;
    if (std::abs(sum * inv_n) >= obs - 1e-15) ++count;
  }
  SignificanceResult r;
  r.metric_name = metric_name;
  r.mean_a = mean(a);
  r.mean_b = mean(b);
  r.n_iterations = iterations;
  r.seed = seed;
  r.p_value = static_cast<double>(count + 1) / static_cast<double>(iterations + 1);
  return r;
}

SignificanceResult randomization_test(const std::vector<double>& a,
                                      const std::vector<double>& b, int iterations,
                                      std::uint64_t seed, const std::string& metric_name) {
  const std::vector<double> d = paired_diffs(a, b);
  const double obs = std::abs(mean(d));
  const double inv_n = 1.0 / static_cast<double>(d.size());
  std::int64_t count = 0;
#pragma omp parallel for schedule(static) reduction(+ : count)
  for (int it = 0; it < iterations; ++it) {
    CounterRng rng(seed, static_cast<std::uint64_t>(it));
    double sum = 0.0;
    for (double di : d) sum += rng.next_bernoulli(0.5) ? -di : di;
    if (std::abs(sum * inv_n) >= obs - 1e-15) ++count;
  }
  SignificanceResult r;
  r.metric_name = metric_name;
  r.mean_a = mean(a);
  r.mean_b = mean(b);
  r.n_iterations = iterations;
  r.seed = seed;
  r.p_value = static_cast<double>(count + 1) / static_cast<double>(iterations + 1);
  return r;
}

double randomization_test_exhaustive(const std::vector<double>& a,
                                     const std::vector<double>& b) {
  const std::vector<double> d = paired_diffs(a, b);
  const std::size_t n = d.size();
  if (n > 20) throw Error("exhaustive randomization limited to n <= 20");
  const double obs = std::abs(mean(d));
  const double inv_n = 1.0 / static_cast<double>(n);
  std::uint64_t count = 0;
  const std::uint64_t total = 1ULL << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += (mask >> i) & 1 ? -d[i] : d[i];
    if (std::abs(sum * inv_n) >= obs - 1e-15) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(total);
}

// Continued-fraction evaluation of the regularized incomplete beta (Lentz).
double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(1.0 - x);
  const bool swap = x >= (a + 1.0) / (a + b + 2.0);
  if (swap) return 1.0 - incomplete_beta(b, a, 1.0 - x);
  const double tiny = 1e-300;
  double f = 1.0, c = 1.0, dd = 0.0;
  for (int i = 0; i <= 300; ++i) {
    const int m = i / 2;
    double numerator;
    if (i == 0)
      numerator = 1.0;
    else if (i % 2 == 0)
      numerator = m * (b - m) * x / ((a + 2.0 * m - 1.0) * (a + 2.0 * m));
    else
      numerator = -(a + m) * (a + b + m) * x / ((a + 2.0 * m) * (a + 2.0 * m + 1.0));
    dd = 1.0 + numerator * dd;
    if (std::abs(dd) < tiny) dd = tiny;
    dd = 1.0 / dd;
    c = 1.0 + numerator / c;
    if (std::abs(c) < tiny) c = tiny;
    const double delta = c * dd;
    f *= delta;
    if (std::abs(1.0 - delta) < 1e-14) break;
  }
  return std::exp(ln_front) * (f - 1.0) / a;
}

double student_t_two_sided_p(double t, double nu) {
  const double x = nu / (nu + t * t);
  return incomplete_beta(nu / 2.0, 0.5, x);
}

PearsonResult pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw LengthMismatchError("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw LengthMismatchError("pearson requires n >= 3");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw ZeroVarianceError("pearson: zero variance input");
  PearsonResult r;
  r.r = sxy / std::sqrt(sxx * syy);
  const double nu = static_cast<double>(n - 2);
  const double r2 = std::min(r.r * r.r, 1.0 - 1e-15);
  const double t = r.r * std::sqrt(nu / (1.0 - r2));
  r.p_value = student_t_two_sided_p(t, nu);
  return r;
}

double pearson_permutation_p(const std::vector<double>& x, const std::vector<double>& y,
                             int iterations, std::uint64_t seed) {
  const double obs = std::abs(pearson(x, y).r);
  std::int64_t count = 0;
#pragma omp parallel for schedule(static) reduction(+ : count)
  for (int it = 0; it < iterations; ++it) {
    CounterRng rng(seed, static_cast<std::uint64_t>(it));
    std::vector<double> perm = y;
    for (std::size_t i = perm.size(); i > 1; --i)
      std::swap(perm[i - 1], perm[rng.next_below(i)]);
    double r;
    try {
      r = pearson(x, perm).r;
    } catch (const ZeroVarianceError&) {
      r = 0.0;
    }
    if (std::abs(r) >= obs - 1e-15) ++count;
  }
  return static_cast<double>(count + 1) / static_cast<double>(iterations + 1);
}

}  // namespace termsearch
