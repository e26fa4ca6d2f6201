#include "termsearch/metrics.hpp"

#include <algorithm>

#include "termsearch/errors.hpp"

namespace termsearch {

PrfMetrics classification_metrics(const std::set<std::string>& retrieved,
                                  const std::set<std::string>& relevant) {
  std::size_t inter = 0;
  const auto& small = retrieved.size() <= relevant.size() ? retrieved : relevant;
  const auto& large = retrieved.size() <= relevant.size() ? relevant : retrieved;
  for (const auto& d : small)
    if (large.count(d)) ++inter;
  PrfMetrics m;
  m.precision = retrieved.empty() ? 0.0 : static_cast<double>(inter) / retrieved.size();
  m.recall = relevant.empty() ? 0.0 : static_cast<double>(inter) / relevant.size();
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

RankingMetrics ranking_metrics(const std::vector<std::string>& ranking,
                               const std::set<std::string>& relevant,
                               const std::vector<int>& ks, int recall_k) {
  RankingMetrics m;
  std::size_t hits = 0;
  double ap_sum = 0.0;
  std::size_t hits_at_recall_k = 0;
  std::map<int, std::size_t> hits_at;
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const bool rel = relevant.count(ranking[i]) != 0;
    if (rel) {
      ++hits;
      ap_sum += static_cast<double>(hits) / static_cast<double>(i + 1);
      if (static_cast<int>(i) < recall_k) ++hits_at_recall_k;
    }
    for (int k : ks)
      if (static_cast<int>(i) < k && rel) ++hits_at[k];
  }
  if (!relevant.empty()) {
    m.average_precision = ap_sum / static_cast<double>(relevant.size());
    m.recall_at_k = static_cast<double>(hits_at_recall_k) / static_cast<double>(relevant.size());
  }
  for (int k : ks)
    m.precision_at[k] = k > 0 ? static_cast<double>(hits_at[k]) / static_cast<double>(k) : 0.0;
  return m;
}

CalibrationResult calibrate_threshold(const std::map<std::string, double>& scores,
                                      const std::set<std::string>& relevant) {
  if (scores.empty()) throw Error("calibrate_threshold: empty scores");
  // sort (score desc, doc_id asc); sweeping the prefix gives every candidate
  std::vector<std::pair<double, const std::string*>> order;
  order.reserve(scores.size());
  for (const auto& [doc, s] : scores) order.emplace_back(s, &doc);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return *a.second < *b.second;
  });

  const std::size_t n_rel = relevant.size();
  CalibrationResult best;
  best.threshold = order.front().first;  // degenerate fallback: highest candidate
  best.best_f1 = 0.0;
  bool have = false;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (relevant.count(*order[i].second)) ++tp;
    // candidate threshold = this score; include the whole tie group
    if (i + 1 < order.size() && order[i + 1].first == order[i].first) continue;
    const std::size_t retrieved = i + 1;
    const double p = static_cast<double>(tp) / static_cast<double>(retrieved);
    const double r = n_rel ? static_cast<double>(tp) / static_cast<double>(n_rel) : 0.0;
    const double f1 = (p + r) > 0 ? 2 * p * r / (p + r) : 0.0;
    // ties toward higher theta: strictly-better keeps the earlier (higher)
    // one. The tolerance absorbs last-ulp noise between mathematically equal
    // F1 values computed from different tp/retrieved counts.
    if (!have || f1 > best.best_f1 + 1e-12) {
      best.best_f1 = f1;
      best.threshold = order[i].first;
      have = true;
    }
  }
  return best;
}

}  // namespace termsearch
