#include "termsearch/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "termsearch/errors.hpp"
#include "termsearch/rng.hpp"

namespace termsearch {

using nlohmann::json;

void Corpus::add(DocumentRecord doc) {
  if (index_.count(doc.doc_id)) throw DuplicateDocError(doc.doc_id);
  index_[doc.doc_id] = docs_.size();
  docs_.push_back(std::move(doc));
}

const DocumentRecord& Corpus::doc(const std::string& doc_id) const {
  auto it = index_.find(doc_id);
  if (it == index_.end()) throw Error("unknown doc_id: " + doc_id);
  return docs_[it->second];
}

const TermVector& AssignmentMatrix::row(const std::string& doc_id) const {
  static const TermVector empty_binary{VectorKind::Binary, {}};
  static const TermVector empty_prob{VectorKind::Probabilistic, {}};
  auto it = rows.find(doc_id);
  if (it != rows.end()) return it->second;
  return kind == VectorKind::Binary ? empty_binary : empty_prob;
}

TermVector& AssignmentMatrix::row_mut(const std::string& doc_id) {
  auto [it, inserted] = rows.try_emplace(doc_id);
  if (inserted) it->second.kind = kind;
  return it->second;
}

void AssignmentMatrix::set(const std::string& doc_id, int term_id, double value) {
  row_mut(doc_id).set(term_id, value);
}

double AssignmentMatrix::get(const std::string& doc_id, int term_id) const {
  return row(doc_id).get(term_id);
}

IngestResult ingest_corpus_text(const std::string& text) {
  struct RawDoc {
    std::string doc_id, title, abstract_text;
    std::vector<std::string> terms;
  };
  std::vector<RawDoc> raw;
  // name (lowercased) -> (display name, external id)
  std::map<std::string, std::pair<std::string, std::string>> names;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("documents file line " + std::to_string(line_no) + ": " + e.what());
    }
    if (j.contains("vocabulary")) {
      for (const auto& v : j.at("vocabulary")) {
        std::string name = v.is_string() ? v.get<std::string>() : v.at("name").get<std::string>();
        std::string ext = (v.is_object() && v.contains("external_id"))
                              ? v.at("external_id").get<std::string>()
                              : "";
        auto key = TermVocabulary::normalize_name(name);
        auto it = names.find(key);
        if (it == names.end())
          names[key] = {name, ext};
        else if (it->second.second.empty())
          it->second.second = ext;
      }
      continue;
    }
    RawDoc d;
    try {
      d.doc_id = j.at("doc_id").get<std::string>();
      d.title = j.value("title", "");
      d.abstract_text = j.value("abstract", "");
      for (const auto& t : j.value("terms", json::array()))
        d.terms.push_back(t.get<std::string>());
    } catch (const json::exception& e) {
      throw ParseError("documents file line " + std::to_string(line_no) + ": " + e.what());
    }
    for (const auto& t : d.terms) {
      auto key = TermVocabulary::normalize_name(t);
      names.try_emplace(key, std::make_pair(t, std::string{}));
    }
    raw.push_back(std::move(d));
  }

  IngestResult out;
  // stable id assignment: sorted by normalized name
  for (const auto& [key, val] : names) out.vocab.add_term(val.first, val.second);
  for (auto& d : raw) {
    DocumentRecord rec;
    rec.doc_id = d.doc_id;
    rec.title = d.title;
    rec.abstract_text = d.abstract_text;
    for (const auto& t : d.terms) rec.gold_terms.insert(*out.vocab.find(t));
    out.corpus.add(std::move(rec));
  }
  return out;
}

IngestResult ingest_corpus(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw MissingArtifactError("cannot open documents file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ingest_corpus_text(ss.str());
}

AssignmentMatrix gold_matrix(const Corpus& corpus, const TermVocabulary& vocab) {
  AssignmentMatrix m;
  m.kind = VectorKind::Binary;
  m.vocab_fingerprint = vocab.fingerprint();
  for (const auto& d : corpus.docs()) {
    TermVector& row = m.row_mut(d.doc_id);
    for (int t : d.gold_terms) row.values.emplace_back(t, 1.0);
    row.sort_values();
  }
  return m;
}

CorpusSplit make_split(const Corpus& corpus, double train_frac, double val_frac,
                       double test_frac, std::uint64_t seed) {
  if (train_frac <= 0 || val_frac <= 0 || test_frac <= 0 ||
      train_frac + val_frac + test_frac > 1.0 + 1e-9)
    throw BadFractionsError("split fractions must be positive and sum to at most 1");
  std::vector<std::string> ids = all_doc_ids(corpus);
  std::sort(ids.begin(), ids.end());
  // Fisher-Yates with our own generator; std::shuffle is implementation-defined.
  CounterRng rng(seed, 0x5eedULL);
  for (std::size_t i = ids.size(); i > 1; --i)
    std::swap(ids[i - 1], ids[rng.next_below(i)]);

  const std::size_t n = ids.size();
  const std::size_t n_train = static_cast<std::size_t>(train_frac * static_cast<double>(n));
  const std::size_t n_val = static_cast<std::size_t>(val_frac * static_cast<double>(n));
  const std::size_t n_test = static_cast<std::size_t>(test_frac * static_cast<double>(n));
  const std::size_t remainder = n - n_train - n_val - n_test;

  CorpusSplit s;
  s.seed = seed;
  std::size_t i = 0;
  for (; i < n_train + remainder; ++i) s.train.push_back(ids[i]);
  for (; i < n_train + remainder + n_val; ++i) s.validation.push_back(ids[i]);
  for (; i < n; ++i) s.test.push_back(ids[i]);
  return s;
}

std::set<std::string> ground_truth_relevance(const QueryAst& query,
                                             const AssignmentMatrix& matrix,
                                             const std::vector<std::string>& docs) {
  if (matrix.kind != VectorKind::Binary)
    throw KindMismatchError("ground_truth_relevance requires a Binary matrix");
  std::vector<const TermVector*> rows;
  rows.reserve(docs.size());
  for (const auto& d : docs) rows.push_back(&matrix.row(d));
  const std::vector<char> hits = decide_documents(query.root, rows);
  std::set<std::string> out;
  for (std::size_t i = 0; i < docs.size(); ++i)
    if (hits[i]) out.insert(docs[i]);
  return out;
}

std::vector<QueryAst> filter_sparse_queries(const std::vector<QueryAst>& queries,
                                            const AssignmentMatrix& gold,
                                            const Corpus& corpus,
                                            std::size_t min_relevant) {
  const std::vector<std::string> docs = all_doc_ids(corpus);
  std::vector<QueryAst> kept;
  for (const auto& q : queries)
    if (ground_truth_relevance(q, gold, docs).size() >= min_relevant) kept.push_back(q);
  return kept;
}

void save_matrix(const AssignmentMatrix& m, const TermVocabulary& vocab,
                 const std::string& path, const std::string& config_hash) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << "# kind=" << (m.kind == VectorKind::Binary ? "binary" : "prob")
    << " floor=" << m.floor;
  if (!config_hash.empty()) f << " config_hash=" << config_hash;
  f << "\n";
  std::vector<std::string> ids;
  ids.reserve(m.rows.size());
  for (const auto& [id, _] : m.rows) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  f.precision(17);
  for (const auto& id : ids)
    for (const auto& [term, value] : m.rows.at(id).values) {
      if (m.kind == VectorKind::Probabilistic && value < m.floor) continue;
      f << id << '\t' << vocab.name(term) << '\t' << value << '\n';
    }
}

AssignmentMatrix load_matrix(const std::string& path, const TermVocabulary& vocab) {
  std::ifstream f(path);
  if (!f) throw MissingArtifactError("cannot open predictions file: " + path);
  AssignmentMatrix m;
  m.vocab_fingerprint = vocab.fingerprint();
  std::string line;
  if (!std::getline(f, line) || line.rfind("# kind=", 0) != 0)
    throw ParseError("predictions file missing '# kind=...' header: " + path);
  {
    std::istringstream h(line.substr(2));
    std::string field;
    while (h >> field) {
      if (field.rfind("kind=", 0) == 0) {
        const std::string k = field.substr(5);
        if (k == "binary")
          m.kind = VectorKind::Binary;
        else if (k == "prob")
          m.kind = VectorKind::Probabilistic;
        else
          throw ParseError("bad matrix kind: " + k);
      } else if (field.rfind("floor=", 0) == 0) {
        m.floor = std::stod(field.substr(6));
      }
    }
  }
  int line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string doc_id, term_name, value_str;
    if (!std::getline(ls, doc_id, '\t') || !std::getline(ls, term_name, '\t') ||
        !std::getline(ls, value_str, '\t'))
      throw ParseError("predictions line " + std::to_string(line_no) + ": expected 3 columns");
    auto id = vocab.find(term_name);
    if (!id) throw UnknownTermError(term_name);
    m.set(doc_id, *id, std::stod(value_str));
  }
  for (auto& [_, row] : m.rows) {
    row.kind = m.kind;
    row.sort_values();
  }
  return m;
}

void save_split(const CorpusSplit& s, const std::string& path,
                const std::string& config_hash) {
  json j{{"seed", s.seed},
         {"train", s.train},
         {"validation", s.validation},
         {"test", s.test}};
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << j.dump(2) << "\n";
}

CorpusSplit load_split(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw MissingArtifactError("cannot open split file: " + path);
  json j = json::parse(f);
  CorpusSplit s;
  s.seed = j.value("seed", 0ULL);
  s.train = j.at("train").get<std::vector<std::string>>();
  s.validation = j.at("validation").get<std::vector<std::string>>();
  s.test = j.at("test").get<std::vector<std::string>>();
  return s;
}

void save_vocab(const TermVocabulary& vocab, const std::string& path,
                const std::string& config_hash) {
  json terms = json::array();
  for (const auto& e : vocab.entries()) {
    json t{{"id", e.term_id}, {"name", e.name}};
    if (!e.external_id.empty()) t["external_id"] = e.external_id;
    terms.push_back(t);
  }
  json j{{"terms", terms}};
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << j.dump(2) << "\n";
}

TermVocabulary load_vocab(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw MissingArtifactError("cannot open vocabulary file: " + path);
  json j = json::parse(f);
  TermVocabulary v;
  for (const auto& t : j.at("terms"))
    v.add_term(t.at("name").get<std::string>(), t.value("external_id", ""));
  return v;
}

std::vector<std::string> all_doc_ids(const Corpus& corpus) {
  std::vector<std::string> ids;
  ids.reserve(corpus.size());
  for (const auto& d : corpus.docs()) ids.push_back(d.doc_id);
  return ids;
}

}  // namespace termsearch
