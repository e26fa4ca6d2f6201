#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "termsearch/corpus.hpp"
#include "termsearch/metrics.hpp"

namespace termsearch {

/// Per-term independent Bernoulli flip rates: a gold 1 flips to 0 with p01, a
/// gold 0 flips to 1 with p10. Terms absent from the map are untouched.
struct NoiseSpec {
  struct Rates {
    double flip_pos_rate = 0.0;  // p01
    double flip_neg_rate = 0.0;  // p10
  };
  std::map<int, Rates> per_term;
  std::uint64_t seed = 0;
};

AssignmentMatrix inject_noise(const AssignmentMatrix& gold, const NoiseSpec& spec);
AssignmentMatrix inject_noise_serial(const AssignmentMatrix& gold, const NoiseSpec& spec);

/// Probabilistic scores drawn around gold labels: Beta(pos_alpha, pos_beta)
/// for gold positives, Beta(neg_alpha, neg_beta) for gold negatives.
struct BetaScoreSpec {
  double pos_alpha = 8.0, pos_beta = 2.0;
  double neg_alpha = 1.0, neg_beta = 9.0;
  double floor = 1e-4;
  std::uint64_t seed = 0;
};

AssignmentMatrix draw_beta_scores(const AssignmentMatrix& gold, int n_terms,
                                  const BetaScoreSpec& spec);

struct SyntheticTermSpec {
  std::string name;
  double prevalence = 0.1;        // in (0, 1)
  double signal_strength = -1.0;  // overrides the corpus-wide value when >= 0
};

struct PairCorrelation {
  std::string term_a, term_b;
  double joint_prob = 0.0;  // target P(A and B); must satisfy Frechet bounds
};

struct SyntheticCorpusSpec {
  int n_docs = 1000;
  std::vector<SyntheticTermSpec> terms;
  std::vector<PairCorrelation> correlations;  // each term in at most one pair
  double text_signal_strength = 0.9;
  int signature_tokens_per_term = 4;
  int background_tokens = 50;
  std::uint64_t seed = 0;
};

/// Gold assignments drawn per prevalence (with optional pairwise coupling);
/// each present term emits its signature tokens into the abstract with
/// probability signal_strength, so trained classifiers reach a tunable F1.
/// Per-document counter seeds make generation order-independent.
IngestResult generate_corpus(const SyntheticCorpusSpec& spec);

/// Two-term construction with all prediction errors in the symmetric
/// difference (the intersection is preserved), so the conjunctive query beats
/// both term F1s and the disjunctive query trails both.
struct VennDemoConfig {
  int n_docs = 1000;
  int core = 300;     // |A and B|, preserved exactly by predictions
  int a_only = 200;   // |A minus B|
  int b_only = 200;
  int a_only_kept = 50;  // predicted positives within a_only
  int b_only_kept = 50;
  int false_a = 150;  // predicted A positives outside A union B
  int false_b = 150;  // disjoint from false_a
};

struct VennDemoReport {
  double f1_a = 0.0, f1_b = 0.0;
  double f1_and = 0.0, f1_or = 0.0;
  std::map<std::string, int> regions;  // 7 region cardinalities
};

VennDemoReport venn_effect_demo(const VennDemoConfig& cfg);

}  // namespace termsearch
