#include "termsearch/query.hpp"

#include "termsearch/errors.hpp"

namespace termsearch {

QueryNode QueryNode::make_and(std::vector<QueryNode> kids) {
  if (kids.size() < 2) throw Error("And node requires >= 2 children");
  QueryNode n;
  n.kind = NodeKind::And;
  n.children = std::move(kids);
  return n;
}

QueryNode QueryNode::make_or(std::vector<QueryNode> kids) {
  if (kids.size() < 2) throw Error("Or node requires >= 2 children");
  QueryNode n;
  n.kind = NodeKind::Or;
  n.children = std::move(kids);
  return n;
}

QueryNode QueryNode::make_not(QueryNode left, QueryNode right) {
  QueryNode n;
  n.kind = NodeKind::Not;
  n.children.push_back(std::move(left));
  n.children.push_back(std::move(right));
  return n;
}

bool QueryNode::operator==(const QueryNode& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case NodeKind::Term:
      return term_id == other.term_id && explode == other.explode;
    case NodeKind::FreeText:
      return text == other.text;
    default:
      return children == other.children;
  }
}

namespace {

void shape_walk(const QueryNode& n, QueryShape& s, std::set<int>& terms) {
  switch (n.kind) {
    case NodeKind::Term:
      terms.insert(n.term_id);
      return;
    case NodeKind::FreeText:
      return;
    case NodeKind::And:
      s.n_and += static_cast<int>(n.children.size()) - 1;
      break;
    case NodeKind::Or:
      s.n_or += static_cast<int>(n.children.size()) - 1;
      break;
    case NodeKind::Not:
      s.n_not += 1;
      break;
  }
  for (const auto& c : n.children) shape_walk(c, s, terms);
}

void collect_terms(const QueryNode& n, std::set<int>& terms) {
  if (n.kind == NodeKind::Term) terms.insert(n.term_id);
  for (const auto& c : n.children) collect_terms(c, terms);
}

}  // namespace

QueryShape query_shape(const QueryAst& ast) {
  QueryShape s;
  std::set<int> terms;
  shape_walk(ast.root, s, terms);
  s.n_terms = static_cast<int>(terms.size());
  return s;
}

std::vector<int> query_terms(const QueryNode& root) {
  std::set<int> terms;
  collect_terms(root, terms);
  return {terms.begin(), terms.end()};
}

std::string pretty_print(const QueryNode& n, const TermVocabulary& vocab) {
  switch (n.kind) {
    case NodeKind::Term: {
      std::string s = vocab.name(n.term_id) + "/";
      return n.explode ? "exp " + s : s;
    }
    case NodeKind::FreeText:
      return "\"" + n.text + "\"";
    case NodeKind::And:
    case NodeKind::Or: {
      const char* op = n.kind == NodeKind::And ? " and " : " or ";
      std::string s = "(";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) s += op;
        s += pretty_print(n.children[i], vocab);
      }
      return s + ")";
    }
    case NodeKind::Not:
      return "(" + pretty_print(n.children[0], vocab) + " not " +
             pretty_print(n.children[1], vocab) + ")";
  }
  return "";
}

}  // namespace termsearch
