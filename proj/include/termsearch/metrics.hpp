#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace termsearch {

struct PrfMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// P = |inter|/|retrieved| (0 if retrieved empty), R = |inter|/|relevant|
/// (0 if relevant empty), F1 harmonic mean with 0/0 -> 0.
PrfMetrics classification_metrics(const std::set<std::string>& retrieved,
                                  const std::set<std::string>& relevant);

struct RankingMetrics {
  double average_precision = 0.0;
  std::map<int, double> precision_at;  // k -> P@k
  double recall_at_k = 0.0;
};

/// AP averages precision at each relevant hit over |relevant| (missing
/// relevant docs contribute 0). P@k = hits in top k / k; recall_at_k = hits in
/// top `recall_k` / |relevant|.
RankingMetrics ranking_metrics(const std::vector<std::string>& ranking,
                               const std::set<std::string>& relevant,
                               const std::vector<int>& ks = {10, 50},
                               int recall_k = 1000);

struct CalibrationResult {
  double threshold = 0.0;
  double best_f1 = 0.0;
};

/// Exhaustive search over candidate thresholds (the sorted unique scores);
/// classify score >= theta as positive; ties in F1 break toward higher theta.
CalibrationResult calibrate_threshold(const std::map<std::string, double>& scores,
                                      const std::set<std::string>& relevant);

}  // namespace termsearch
