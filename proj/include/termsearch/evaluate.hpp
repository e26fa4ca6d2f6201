#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "termsearch/classifier.hpp"
#include "termsearch/corpus.hpp"
#include "termsearch/metrics.hpp"
#include "termsearch/query.hpp"
#include "termsearch/stats.hpp"

namespace termsearch {

struct TermFeatureAggregates {
  double worst_f1 = 0.0;
  double avg_f1 = 0.0;
  double best_f1 = 0.0;
  double highest_term_freq = 0.0;
  double lowest_term_freq = 0.0;
  int n_terms = 0;
  int n_and = 0;
  int n_or = 0;
};

struct QueryEvalReport {
  std::string query_id;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::optional<double> map;        // ranking metrics absent for binary methods
  std::optional<double> p_at_10;
  std::optional<double> p_at_50;
  std::optional<double> r_at_1000;
  std::optional<double> threshold_used;
  bool has_term_features = false;
  TermFeatureAggregates term_features;
};

enum class Method { Gold, BinaryPred, ProbPred, QueryClf };
std::string method_name(Method m);

struct EvalOptions {
  bool per_query_threshold = true;  // false: one global threshold over all queries
  std::vector<int> precision_ks{10, 50};
  int recall_k = 1000;
};

struct MethodEvaluation {
  Method method = Method::Gold;
  std::vector<QueryEvalReport> per_query;
  QueryEvalReport macro;  // unweighted means over queries
};

struct EvalContext {
  const Corpus* corpus = nullptr;
  const TermVocabulary* vocab = nullptr;
  const AssignmentMatrix* gold = nullptr;  // binary gold matrix
  const CorpusSplit* split = nullptr;
};

MethodEvaluation evaluate_gold(const EvalContext& ctx, const std::vector<QueryAst>& queries,
                               const EvalOptions& opts = {});
MethodEvaluation evaluate_binary(const EvalContext& ctx, const std::vector<QueryAst>& queries,
                                 const AssignmentMatrix& binary_pred,
                                 const EvalOptions& opts = {});
MethodEvaluation evaluate_prob(const EvalContext& ctx, const std::vector<QueryAst>& queries,
                               const AssignmentMatrix& prob_pred,
                               const EvalOptions& opts = {});
MethodEvaluation evaluate_query_clf(const EvalContext& ctx,
                                    const std::vector<QueryAst>& queries,
                                    const std::map<std::string, LinearClassifier>& per_query,
                                    const TfidfModel& tfidf, const EvalOptions& opts = {});

/// Per-term F1 of `binary_pred` against `gold` over `docs`, for each term.
std::map<int, double> per_term_f1(const AssignmentMatrix& gold,
                                  const AssignmentMatrix& binary_pred,
                                  const std::vector<std::string>& docs,
                                  const std::vector<int>& terms);

/// Gold-positive doc counts per term over `docs` (term "frequency").
std::map<int, double> term_frequency(const AssignmentMatrix& gold,
                                     const std::vector<std::string>& docs,
                                     const std::vector<int>& terms);

/// Aggregates over the query's distinct term leaves; counts from query_shape.
TermFeatureAggregates term_feature_table(const QueryAst& query,
                                         const std::map<int, double>& f1_by_term,
                                         const std::map<int, double>& freq_by_term);

void attach_term_features(std::vector<QueryEvalReport>& reports,
                          const std::vector<QueryAst>& queries,
                          const std::map<int, double>& f1_by_term,
                          const std::map<int, double>& freq_by_term);

struct CorrelationCell {
  double r = 0.0;
  double p_value = 1.0;
  bool zero_variance = false;
  bool significant_05 = false;
  bool significant_10 = false;  // moderately significant: 0.05 <= p < 0.1
};

struct CorrelationReport {
  std::vector<std::string> feature_names;                // 8 term-level features
  std::vector<std::string> metric_names;                 // precision, recall
  std::vector<std::vector<CorrelationCell>> cells;       // metric x feature
  std::vector<std::vector<double>> permutation_p_values; // same layout
};

CorrelationReport correlation_report(const std::vector<QueryEvalReport>& reports,
                                     bool with_permutation_p = false,
                                     int permutation_iterations = 10000,
                                     std::uint64_t seed = 0);

struct MixedIndexingPoint {
  double t = 0.0;  // F1 threshold: terms with F1 < t come from gold
  double avg_precision = 0.0;
  double avg_recall = 0.0;
  double avg_f1 = 0.0;
  double manual_fraction = 0.0;  // replaced gold-positive instances / all
};

struct MixedIndexingCurve {
  std::vector<MixedIndexingPoint> points;
};

/// Grid {0, 0.05, ..., 1.0} plus observed F1 values plus one point above the
/// maximum, so every breakpoint and both endpoints appear.
std::vector<double> default_sweep_grid(const std::map<int, double>& f1_by_term);

MixedIndexingCurve mixed_indexing_sweep(const EvalContext& ctx,
                                        const std::vector<QueryAst>& queries,
                                        const AssignmentMatrix& prob_pred,
                                        const std::map<int, double>& f1_by_term,
                                        const std::vector<double>& grid,
                                        const EvalOptions& opts = {});

// Report emission.
std::string evaluation_to_json(const std::vector<MethodEvaluation>& evals,
                               const std::vector<SignificanceResult>& significance,
                               const std::string& config_hash);
std::string evaluation_to_csv(const std::vector<MethodEvaluation>& evals,
                              const std::string& config_hash);
std::string correlation_to_json(const CorrelationReport& rep, const std::string& config_hash);
std::string correlation_to_csv(const CorrelationReport& rep, const std::string& config_hash);
std::string curve_to_csv(const MixedIndexingCurve& curve, const std::string& config_hash);
std::string curve_to_svg(const MixedIndexingCurve& curve, const std::string& config_hash);

}  // namespace termsearch
