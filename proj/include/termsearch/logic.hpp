#pragma once

#include <vector>

#include "termsearch/query.hpp"

namespace termsearch {

enum class VectorKind { Binary, Probabilistic };

/// Sparse per-document term vector; absent terms read as 0.
struct TermVector {
  VectorKind kind = VectorKind::Binary;
  std::vector<std::pair<int, double>> values;  // sorted by term_id

  double get(int term_id) const;
  void set(int term_id, double value);
  void sort_values();
};

/// Boolean semantics over a binary vector. Not(l, r) = l AND NOT r.
bool eval_boolean(const QueryNode& ast, const TermVector& v);

/// Product t-norm semantics: AND(x,y) = xy, OR(x,y) = x + y - xy,
/// Not(l,r) = l(1-r). N-ary nodes fold left to right. Binary vectors are
/// the degenerate case and evaluate identically to eval_boolean.
double eval_prob(const QueryNode& ast, const TermVector& v);

/// Exact query probability under independent Bernoulli(p_i) terms, by
/// enumeration over the distinct leaves. Throws TooManyTerms above 20 leaves.
double bernoulli_oracle(const QueryNode& ast, const TermVector& v);

/// Probabilistic score of one query across many documents.
/// The parallel version must agree elementwise with the serial reference.
std::vector<double> score_documents_serial(const QueryNode& ast,
                                           const std::vector<const TermVector*>& rows);
std::vector<double> score_documents(const QueryNode& ast,
                                    const std::vector<const TermVector*>& rows);

/// Boolean decisions of one query across many documents.
std::vector<char> decide_documents_serial(const QueryNode& ast,
                                          const std::vector<const TermVector*>& rows);
std::vector<char> decide_documents(const QueryNode& ast,
                                   const std::vector<const TermVector*>& rows);

}  // namespace termsearch
