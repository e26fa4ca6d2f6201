#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "termsearch/logic.hpp"
#include "termsearch/query.hpp"
#include "termsearch/vocab.hpp"

namespace termsearch {

struct DocumentRecord {
  std::string doc_id;
  std::string title;
  std::string abstract_text;
  std::set<int> gold_terms;
};

class Corpus {
 public:
  void add(DocumentRecord doc);
  const DocumentRecord& doc(const std::string& doc_id) const;
  bool contains(const std::string& doc_id) const { return index_.count(doc_id) != 0; }
  const std::vector<DocumentRecord>& docs() const { return docs_; }
  std::size_t size() const { return docs_.size(); }

 private:
  std::vector<DocumentRecord> docs_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Sparse document x term matrix; rows keyed by doc_id. Missing cells read 0.
struct AssignmentMatrix {
  VectorKind kind = VectorKind::Binary;
  std::unordered_map<std::string, TermVector> rows;
  std::uint64_t vocab_fingerprint = 0;
  double floor = 0.0;  // probabilities below this were dropped on write

  const TermVector& row(const std::string& doc_id) const;
  TermVector& row_mut(const std::string& doc_id);
  void set(const std::string& doc_id, int term_id, double value);
  double get(const std::string& doc_id, int term_id) const;
};

struct CorpusSplit {
  std::uint64_t seed = 0;
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
};

struct IngestResult {
  TermVocabulary vocab;
  Corpus corpus;
};

/// Read a JSON-lines documents file:
///   {"doc_id": "...", "title": "...", "abstract": "...", "terms": ["Name", ...]}
/// A line of the form {"vocabulary": [{"name": ..., "external_id": ...}, ...]}
/// declares additional terms. The vocabulary is the union of declared terms and
/// all gold terms; ids are assigned in sorted name order.
IngestResult ingest_corpus(const std::string& path);
IngestResult ingest_corpus_text(const std::string& text);

/// Gold binary matrix from DocumentRecord.gold_terms.
AssignmentMatrix gold_matrix(const Corpus& corpus, const TermVocabulary& vocab);

/// Deterministic split: sizes floor(fraction * N) per bucket, remainder docs
/// go to train. Throws BadFractions when a fraction is non-positive or the sum
/// exceeds 1.
CorpusSplit make_split(const Corpus& corpus, double train_frac, double val_frac,
                       double test_frac, std::uint64_t seed);

/// Docs (restricted to `docs`) whose gold vector satisfies the query.
std::set<std::string> ground_truth_relevance(const QueryAst& query,
                                             const AssignmentMatrix& matrix,
                                             const std::vector<std::string>& docs);

/// Keep queries with at least `min_relevant` relevant docs over the whole corpus.
std::vector<QueryAst> filter_sparse_queries(const std::vector<QueryAst>& queries,
                                            const AssignmentMatrix& gold,
                                            const Corpus& corpus,
                                            std::size_t min_relevant = 50);

// Persistence. Predictions files are TSV with a header comment declaring kind
// and floor; split files are JSON.
void save_matrix(const AssignmentMatrix& m, const TermVocabulary& vocab,
                 const std::string& path, const std::string& config_hash = "");
AssignmentMatrix load_matrix(const std::string& path, const TermVocabulary& vocab);
void save_split(const CorpusSplit& s, const std::string& path,
                const std::string& config_hash = "");
CorpusSplit load_split(const std::string& path);
void save_vocab(const TermVocabulary& vocab, const std::string& path,
                const std::string& config_hash = "");
TermVocabulary load_vocab(const std::string& path);

std::vector<std::string> all_doc_ids(const Corpus& corpus);

}  // namespace termsearch
