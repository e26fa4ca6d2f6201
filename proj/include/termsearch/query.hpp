#pragma once

#include <set>
#include <string>
#include <vector>

#include "termsearch/vocab.hpp"

namespace termsearch {

enum class NodeKind { Term, FreeText, And, Or, Not };

/// Boolean expression node. And/Or are n-ary (>= 2 children after
/// construction); Not is binary "left AND NOT right". FreeText leaves hold
/// tokens that are not in the vocabulary; normalization removes them.
struct QueryNode {
  NodeKind kind = NodeKind::Term;
  int term_id = -1;        // Term
  bool explode = false;    // Term written as `exp Name/`
  std::string text;        // FreeText
  std::vector<QueryNode> children;

  static QueryNode term(int id, bool explode = false) {
    QueryNode n;
    n.kind = NodeKind::Term;
    n.term_id = id;
    n.explode = explode;
    return n;
  }
  static QueryNode free_text(std::string t) {
    QueryNode n;
    n.kind = NodeKind::FreeText;
    n.text = std::move(t);
    return n;
  }
  static QueryNode make_and(std::vector<QueryNode> kids);
  static QueryNode make_or(std::vector<QueryNode> kids);
  static QueryNode make_not(QueryNode left, QueryNode right);

  bool operator==(const QueryNode& other) const;
};

struct QueryAst {
  std::string query_id;
  QueryNode root;
};

struct QueryShape {
  int n_terms = 0;  // distinct term leaves
  int n_and = 0;    // binary connections: a k-child And contributes k-1
  int n_or = 0;
  int n_not = 0;
  bool operator==(const QueryShape&) const = default;
};

QueryShape query_shape(const QueryAst& ast);

/// Distinct term ids appearing in the tree, sorted.
std::vector<int> query_terms(const QueryNode& root);

/// Round-trippable textual form (`Name/` leaves, parenthesized operators).
std::string pretty_print(const QueryNode& root, const TermVocabulary& vocab);

}  // namespace termsearch
