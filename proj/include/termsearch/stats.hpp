#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace termsearch {

struct SignificanceResult {
  std::string metric_name;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double p_value = 1.0;
  int n_iterations = 0;
  std::uint64_t seed = 0;
};

/// Paired two-sided sign-flip randomization test. Each iteration flips the
/// sign of each pair difference independently with probability 0.5;
/// p = (count(|delta_perm| >= |delta_obs|) + 1) / (iterations + 1).
/// Counter-based per-iteration seeding keeps the result independent of thread
/// scheduling.
SignificanceResult randomization_test(const std::vector<double>& per_query_a,
                                      const std::vector<double>& per_query_b,
                                      int iterations = 10000, std::uint64_t seed = 0,
                                      const std::string& metric_name = "");
SignificanceResult randomization_test_serial(const std::vector<double>& per_query_a,
                                             const std::vector<double>& per_query_b,
                                             int iterations = 10000,
                                             std::uint64_t seed = 0,
                                             const std::string& metric_name = "");

/// Exact p over all 2^n sign patterns (n <= 20).
double randomization_test_exhaustive(const std::vector<double>& per_query_a,
                                     const std::vector<double>& per_query_b);

struct PearsonResult {
  double r = 0.0;
  double p_value = 1.0;  // two-sided, Student-t approximation with n-2 dof
};

PearsonResult pearson(const std::vector<double>& x, const std::vector<double>& y);

/// Permutation-based alternative p-value for the same correlation.
double pearson_permutation_p(const std::vector<double>& x, const std::vector<double>& y,
                             int iterations = 10000, std::uint64_t seed = 0);

/// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// Two-sided p-value of Student's t with nu degrees of freedom.
double student_t_two_sided_p(double t, double nu);

}  // namespace termsearch
