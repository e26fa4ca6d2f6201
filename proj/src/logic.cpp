#include "termsearch/logic.hpp"

#include <algorithm>
#include <cstdint>

#include "termsearch/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace termsearch {

double TermVector::get(int term_id) const {
  auto it = std::lower_bound(values.begin(), values.end(), term_id,
                             [](const auto& p, int id) { return p.first < id; });
  if (it == values.end() || it->first != term_id) return 0.0;
  return it->second;
}

void TermVector::set(int term_id, double value) {
  auto it = std::lower_bound(values.begin(), values.end(), term_id,
                             [](const auto& p, int id) { return p.first < id; });
  if (it != values.end() && it->first == term_id)
    it->second = value;
  else
    values.insert(it, {term_id, value});
}

void TermVector::sort_values() {
  std::sort(values.begin(), values.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
}

bool eval_boolean(const QueryNode& n, const TermVector& v) {
  if (v.kind != VectorKind::Binary)
    throw KindMismatchError("eval_boolean requires a Binary vector");
  switch (n.kind) {
    case NodeKind::Term:
      return v.get(n.term_id) != 0.0;
    case NodeKind::FreeText:
      return false;
    case NodeKind::And:
      for (const auto& c : n.children)
        if (!eval_boolean(c, v)) return false;
      return true;
    case NodeKind::Or:
      for (const auto& c : n.children)
        if (eval_boolean(c, v)) return true;
      return false;
    case NodeKind::Not:
      return eval_boolean(n.children[0], v) && !eval_boolean(n.children[1], v);
  }
  return false;
}

namespace {

double eval_prob_node(const QueryNode& n, const TermVector& v) {
  switch (n.kind) {
    case NodeKind::Term:
      return v.get(n.term_id);
    case NodeKind::FreeText:
      return 0.0;
    case NodeKind::And: {
      double acc = eval_prob_node(n.children[0], v);
      for (std::size_t i = 1; i < n.children.size(); ++i)
        acc *= eval_prob_node(n.children[i], v);
      return acc;
    }
    case NodeKind::Or: {
      double acc = eval_prob_node(n.children[0], v);
      for (std::size_t i = 1; i < n.children.size(); ++i) {
        const double x = eval_prob_node(n.children[i], v);
        acc = acc + x - acc * x;
      }
      return acc;
    }
    case NodeKind::Not:
      return eval_prob_node(n.children[0], v) * (1.0 - eval_prob_node(n.children[1], v));
  }
  return 0.0;
}

}  // namespace

double eval_prob(const QueryNode& ast, const TermVector& v) {
  return eval_prob_node(ast, v);
}

double bernoulli_oracle(const QueryNode& ast, const TermVector& v) {
  const std::vector<int> terms = query_terms(ast);
  const int k = static_cast<int>(terms.size());
  if (k > 20)
    throw TooManyTermsError("bernoulli_oracle supports at most 20 distinct terms, got " +
                            std::to_string(k));
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) {
    TermVector assign;
    assign.kind = VectorKind::Binary;
    double weight = 1.0;
    for (int i = 0; i < k; ++i) {
      const double p = v.get(terms[i]);
      const bool on = (mask >> i) & 1;
      weight *= on ? p : (1.0 - p);
      assign.values.emplace_back(terms[i], on ? 1.0 : 0.0);
    }
    if (weight == 0.0) continue;
    if (eval_boolean(ast, assign)) total += weight;
  }
  return total;
}

std::vector<double> score_documents_serial(const QueryNode& ast,
                                           const std::vector<const TermVector*>& rows) {
  std::vector<double> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = eval_prob(ast, *rows[i]);
  return out;
}

std::vector<double> score_documents(const QueryNode& ast,
                                    const std::vector<const TermVector*>& rows) {
  std::vector<double> out(rows.size());
  const std::int64_t n = static_cast<std::int64_t>(rows.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[i] = eval_prob(ast, *rows[i]);
  return out;
}

std::vector<char> decide_documents_serial(const QueryNode& ast,
                                          const std::vector<const TermVector*>& rows) {
  std::vector<char> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = eval_boolean(ast, *rows[i]) ? 1 : 0;
  return out;
}

std::vector<char> decide_documents(const QueryNode& ast,
                                   const std::vector<const TermVector*>& rows) {
  std::vector<char> out(rows.size());
  const std::int64_t n = static_cast<std::int64_t>(rows.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[i] = eval_boolean(ast, *rows[i]) ? 1 : 0;
  return out;
}

}  // namespace termsearch
