#include "termsearch/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>

#include "termsearch/errors.hpp"

namespace termsearch {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

struct Token {
  enum Type { LParen, RParen, OpAnd, OpOr, OpNot, LineRef, Range, TermName, Text } type;
  int ref = 0;            // LineRef
  int range_lo = 0, range_hi = 0;
  bool range_is_or = false;
  std::string name;       // TermName / Text
  bool explode = false;   // TermName preceded by `exp`
};

// Tries to read `or/A-B` / `and/A-B`.
bool parse_range_word(const std::string& word, Token& out) {
  const std::string lw = lower(word);
  std::size_t body;
  if (lw.rfind("or/", 0) == 0) {
    out.range_is_or = true;
    body = 3;
  } else if (lw.rfind("and/", 0) == 0) {
    out.range_is_or = false;
    body = 4;
  } else {
    return false;
  }
  const auto dash = lw.find('-', body);
  if (dash == std::string::npos) return false;
  const std::string a = lw.substr(body, dash - body), b = lw.substr(dash + 1);
  if (!all_digits(a) || !all_digits(b)) return false;
  out.type = Token::Range;
  out.range_lo = std::stoi(a);
  out.range_hi = std::stoi(b);
  return true;
}

std::vector<Token> lex_body(const std::string& body, int line_no) {
  std::vector<Token> toks;
  std::size_t i = 0;
  bool pending_explode = false;
  while (i < body.size()) {
    const char c = body[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(') {
      toks.push_back({Token::LParen});
      ++i;
      continue;
    }
    if (c == ')') {
      toks.push_back({Token::RParen});
      ++i;
      continue;
    }
    if (c == '"') {
      const auto end = body.find('"', i + 1);
      if (end == std::string::npos) throw MalformedLineError(line_no, "unterminated quote");
      Token t{Token::Text};
      t.name = body.substr(i + 1, end - i - 1);
      toks.push_back(t);
      i = end + 1;
      continue;
    }
    const std::size_t word_start = i;
    while (i < body.size() && !std::isspace(static_cast<unsigned char>(body[i])) &&
           body[i] != '(' && body[i] != ')' && body[i] != '"')
      ++i;
    const std::string word = body.substr(word_start, i - word_start);
    Token t{};
    if (parse_range_word(word, t)) {
      toks.push_back(t);
      continue;
    }
    const std::string lw = lower(word);
    if (lw == "and") {
      toks.push_back({Token::OpAnd});
      continue;
    }
    if (lw == "or") {
      toks.push_back({Token::OpOr});
      continue;
    }
    if (lw == "not") {
      toks.push_back({Token::OpNot});
      continue;
    }
    if (all_digits(word)) {
      Token r{Token::LineRef};
      r.ref = std::stoi(word);
      toks.push_back(r);
      continue;
    }
    if (lw == "exp") {
      pending_explode = true;
      continue;
    }
    // A term name runs from the word start to the next '/'.
    const auto slash = body.find('/', word_start);
    if (slash == std::string::npos)
      throw MalformedLineError(line_no, "expected '/' terminating term name near '" + word + "'");
    Token term{Token::TermName};
    term.name = trim(body.substr(word_start, slash - word_start));
    term.explode = pending_explode;
    pending_explode = false;
    toks.push_back(term);
    i = slash + 1;
  }
  if (pending_explode) throw MalformedLineError(line_no, "dangling 'exp'");
  return toks;
}

struct ExprParser {
  const std::vector<Token>& toks;
  std::size_t pos = 0;
  int line_no;
  const TermVocabulary& vocab;
  const ParseOptions& opts;
  const std::map<int, QueryNode>* lines;  // null for standalone expressions

  bool at_end() const { return pos >= toks.size(); }
  const Token& peek() const { return toks[pos]; }

  QueryNode resolve_ref(int ref) {
    if (!lines) throw MalformedLineError(line_no, "line reference outside a line-numbered query");
    auto it = lines->find(ref);
    if (it == lines->end() || ref >= line_no) throw ForwardReferenceError(line_no, ref);
    return it->second;  // substitution by copy
  }

  QueryNode parse_atom() {
    if (at_end()) throw MalformedLineError(line_no, "unexpected end of expression");
    const Token t = toks[pos++];
    switch (t.type) {
      case Token::LParen: {
        QueryNode e = parse_or();
        if (at_end() || toks[pos].type != Token::RParen)
          throw MalformedLineError(line_no, "missing ')'");
        ++pos;
        return e;
      }
      case Token::LineRef:
        return resolve_ref(t.ref);
      case Token::Range: {
        if (t.range_lo > t.range_hi)
          throw MalformedLineError(line_no, "descending range");
        std::vector<QueryNode> kids;
        for (int r = t.range_lo; r <= t.range_hi; ++r) kids.push_back(resolve_ref(r));
        if (kids.size() == 1) return kids.front();
        return t.range_is_or ? QueryNode::make_or(std::move(kids))
                             : QueryNode::make_and(std::move(kids));
      }
      case Token::TermName: {
        if (auto id = vocab.find(t.name)) return QueryNode::term(*id, t.explode);
        if (opts.allow_unknown_terms) return QueryNode::free_text(t.name);
        throw UnknownTermError(t.name);
      }
      case Token::Text:
        return QueryNode::free_text(t.name);
      default:
        throw MalformedLineError(line_no, "unexpected operator");
    }
  }

  QueryNode parse_not() {
    QueryNode left = parse_atom();
    while (!at_end() && peek().type == Token::OpNot) {
      ++pos;
      QueryNode right = parse_atom();
      left = QueryNode::make_not(std::move(left), std::move(right));
    }
    return left;
  }

  QueryNode parse_and() {
    std::vector<QueryNode> kids;
    kids.push_back(parse_not());
    while (!at_end() && peek().type == Token::OpAnd) {
      ++pos;
      kids.push_back(parse_not());
    }
    if (kids.size() == 1) return std::move(kids.front());
    return QueryNode::make_and(std::move(kids));
  }

  QueryNode parse_or() {
    std::vector<QueryNode> kids;
    kids.push_back(parse_and());
    while (!at_end() && peek().type == Token::OpOr) {
      ++pos;
      kids.push_back(parse_and());
    }
    if (kids.size() == 1) return std::move(kids.front());
    return QueryNode::make_or(std::move(kids));
  }

  QueryNode parse_full() {
    QueryNode e = parse_or();
    if (!at_end()) throw MalformedLineError(line_no, "trailing tokens");
    return e;
  }
};

std::optional<QueryNode> normalize_node(const QueryNode& n) {
  switch (n.kind) {
    case NodeKind::Term: {
      QueryNode t = n;
      t.explode = false;  // no hyponym expansion: keep the bare term
      return t;
    }
    case NodeKind::FreeText:
      return std::nullopt;
    case NodeKind::And:
    case NodeKind::Or: {
      std::vector<QueryNode> kids;
      for (const auto& c : n.children)
        if (auto k = normalize_node(c)) kids.push_back(std::move(*k));
      if (kids.empty()) return std::nullopt;
      if (kids.size() == 1) return std::move(kids.front());
      return n.kind == NodeKind::And ? QueryNode::make_and(std::move(kids))
                                     : QueryNode::make_or(std::move(kids));
    }
    case NodeKind::Not: {
      auto l = normalize_node(n.children[0]);
      auto r = normalize_node(n.children[1]);
      if (!l) return std::nullopt;
      if (!r) return l;
      return QueryNode::make_not(std::move(*l), std::move(*r));
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<QuerySource> read_query_file(const std::string& text,
                                         const std::string& default_id) {
  std::vector<QuerySource> out;
  std::istringstream in(text);
  std::string line;
  auto current = [&]() -> QuerySource& {
    if (out.empty()) out.push_back(QuerySource{default_id, "", {}});
    return out.back();
  };
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.rfind("###", 0) == 0) {
      out.push_back(QuerySource{trim(t.substr(3)), "", {}});
      continue;
    }
    QuerySource& q = current();
    q.raw_text += line + "\n";
    const auto dot = t.find('.');
    std::string num = dot == std::string::npos ? "" : t.substr(0, dot);
    if (all_digits(num)) {
      q.lines.emplace_back(std::stoi(num), trim(t.substr(dot + 1)));
    } else if (!q.lines.empty()) {
      // continuation of a wrapped line body
      q.lines.back().second += " " + t;
    } else {
      throw MalformedLineError(0, "expected 'N. <body>': " + t);
    }
  }
  return out;
}

QueryAst parse_query(const QuerySource& source, const TermVocabulary& vocab,
                     const ParseOptions& opts) {
  if (source.lines.empty()) throw EmptyQueryError();
  std::map<int, QueryNode> parsed;
  int prev = 0;
  for (const auto& [no, body] : source.lines) {
    if (no <= prev) throw MalformedLineError(no, "line numbers must be strictly increasing");
    prev = no;
    auto toks = lex_body(body, no);
    if (toks.empty()) throw MalformedLineError(no, "empty line body");
    ExprParser p{toks, 0, no, vocab, opts, &parsed};
    parsed.emplace(no, p.parse_full());
  }
  return QueryAst{source.query_id, parsed.at(prev)};
}

QueryNode parse_expression(const std::string& text, const TermVocabulary& vocab,
                           const ParseOptions& opts) {
  auto toks = lex_body(text, 0);
  if (toks.empty()) throw EmptyQueryError();
  ExprParser p{toks, 0, 0, vocab, opts, nullptr};
  return p.parse_full();
}

QueryAst normalize_query(const QueryAst& ast, const TermVocabulary&) {
  auto root = normalize_node(ast.root);
  if (!root) throw QueryVanishedError();
  return QueryAst{ast.query_id, std::move(*root)};
}

}  // namespace termsearch
