#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "termsearch/corpus.hpp"
#include "termsearch/tfidf.hpp"

namespace termsearch {

enum class LossKind { WeightedCE, Focal };

struct Hyperparams {
  double learning_rate = 0.5;
  int epochs = 100;
  int batch_size = 64;
  double l2_lambda = 1e-4;
  double gamma = 2.0;   // focal only
  double alpha = 0.25;  // focal only
  double loss_delta_tol = 1e-6;
};

struct LinearClassifier {
  std::vector<double> weights;
  double bias = 0.0;
  std::string target;  // term name or query id
  LossKind loss_kind = LossKind::WeightedCE;
  Hyperparams hyperparams;
  std::uint64_t seed = 0;

  double decision(const FeatureVector& x) const;
  double predict_proba(const FeatureVector& x) const;  // sigmoid(decision)
};

// Per-example loss and its gradient w.r.t. the logit z. For WeightedCE the
// class weights come from weighted_ce_alphas; for Focal, alpha_pos = alpha and
// alpha_neg = 1 - alpha.
double example_loss(double z, int label, LossKind kind, double alpha_pos,
                    double alpha_neg, double gamma);
double example_dloss_dz(double z, int label, LossKind kind, double alpha_pos,
                        double alpha_neg, double gamma);

/// Inverse-class-frequency weights: alpha_c = n_samples / (2 * n_samples_c).
std::pair<double, double> weighted_ce_alphas(std::size_t n_pos, std::size_t n_neg);

double sigmoid(double z);

struct TrainingSubset {
  std::vector<std::string> doc_ids;  // multiset; upsampling appends duplicates
  std::size_t base_size = 0;
  int n_classes = 0;
  double fair_share_fraction = 0.1;
  std::vector<int> classes_without_positives;  // reported, skipped
};

/// Classes with fewer than fraction*N/M positives are upsampled (with
/// replacement from their own positives) to ceil(fraction*N/M).
TrainingSubset fair_share_upsample(const std::vector<std::string>& train_ids,
                                   const std::map<int, std::vector<std::string>>& positives_per_class,
                                   int n_classes, double fraction, std::uint64_t seed);

/// Mini-batch gradient descent with L2 regularization. Deterministic given
/// seed: per-epoch shuffles and within-batch accumulation order are fixed.
LinearClassifier train_classifier(const std::vector<FeatureVector>& features,
                                  const std::vector<int>& labels, int n_features,
                                  LossKind loss, const Hyperparams& hp,
                                  std::uint64_t seed, const std::string& target = "");

/// Per-term sigmoid probabilities for every requested doc; values below
/// `floor` are not stored.
AssignmentMatrix predict_matrix(const std::map<int, LinearClassifier>& per_term,
                                const TfidfModel& tfidf, const Corpus& corpus,
                                const std::vector<std::string>& doc_ids,
                                const TermVocabulary& vocab, double floor = 1e-4);

/// value 1 iff p >= threshold.
AssignmentMatrix binarize_matrix(const AssignmentMatrix& m, double threshold = 0.5);

LinearClassifier train_query_classifier(const QueryAst& query,
                                        const AssignmentMatrix& gold,
                                        const Corpus& corpus,
                                        const std::vector<std::string>& doc_ids,
                                        const TfidfModel& tfidf, LossKind loss,
                                        const Hyperparams& hp, std::uint64_t seed);

struct IndexerModel {
  TfidfModel tfidf;
  std::map<int, LinearClassifier> per_term;          // term_id -> classifier
  std::map<std::string, LinearClassifier> per_query; // query_id -> classifier
  std::uint64_t seed = 0;
};

void save_model(const IndexerModel& model, const TermVocabulary& vocab,
                const std::string& path, const std::string& config_hash = "");
IndexerModel load_model(const std::string& path, const TermVocabulary& vocab);

}  // namespace termsearch
