#pragma once

#include <string>
#include <utility>
#include <vector>

#include "termsearch/query.hpp"
#include "termsearch/vocab.hpp"

namespace termsearch {

/// One line-numbered query as read from a query file.
struct QuerySource {
  std::string query_id;
  std::string raw_text;
  std::vector<std::pair<int, std::string>> lines;  // (line_number, body)
};

struct ParseOptions {
  // When true, a `Name/` token absent from the vocabulary becomes a FreeText
  // leaf instead of raising UnknownTerm. Quoted strings are always FreeText.
  bool allow_unknown_terms = false;
};

/// Split a query file into blocks. Blocks are delimited by `### <query_id>`
/// headers; a file without headers is a single query named `default_id`.
std::vector<QuerySource> read_query_file(const std::string& text,
                                         const std::string& default_id);

/// Parse a line-numbered query. Line references resolve by substitution of the
/// earlier line's subtree; `or/A-B` and `and/A-B` expand over lines A..B. The
/// final line is the query root.
QueryAst parse_query(const QuerySource& source, const TermVocabulary& vocab,
                     const ParseOptions& opts = {});

/// Parse a single inline expression (no line numbers). Precedence:
/// NOT > AND > OR, parentheses override.
QueryNode parse_expression(const std::string& text, const TermVocabulary& vocab,
                           const ParseOptions& opts = {});

/// Drop FreeText leaves and exp flags. And/Or nodes that fall to one child
/// collapse to that child; a Not whose right side vanishes collapses to its
/// left; a Not whose left side vanishes is removed. Throws QueryVanished when
/// nothing remains.
QueryAst normalize_query(const QueryAst& ast, const TermVocabulary& vocab);

}  // namespace termsearch
