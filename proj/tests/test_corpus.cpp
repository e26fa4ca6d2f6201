#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <set>

#include "termsearch/corpus.hpp"
#include "termsearch/errors.hpp"
#include "termsearch/parser.hpp"

using namespace termsearch;

namespace {

const char* kFixture =
    R"({"doc_id": "d1", "title": "alpha", "abstract": "first doc", "terms": ["A", "B"]}
{"doc_id": "d2", "title": "beta", "abstract": "second doc", "terms": ["A", "C"]}
{"doc_id": "d3", "title": "gamma", "abstract": "third doc", "terms": ["D", "E"]}
)";

Corpus make_corpus(int n) {
  Corpus c;
  for (int i = 0; i < n; ++i)
    c.add(DocumentRecord{"d" + std::to_string(i), "t", "a", {}});
  return c;
}

std::filesystem::path tmp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("ingest builds vocabulary from gold terms") {
  const IngestResult r = ingest_corpus_text(kFixture);
  CHECK(r.vocab.size() == 5);
  CHECK(r.corpus.size() == 3);
  CHECK(r.corpus.doc("d2").gold_terms.count(*r.vocab.find("C")) == 1);
  // ids are dense and assigned in sorted name order
  CHECK(*r.vocab.find("A") == 0);
  CHECK(*r.vocab.find("E") == 4);
}

TEST_CASE("ingest of an empty file gives empty corpus and vocabulary") {
  const IngestResult r = ingest_corpus_text("");
  CHECK(r.vocab.size() == 0);
  CHECK(r.corpus.size() == 0);
}

TEST_CASE("duplicate doc ids are rejected") {
  const std::string text =
      "{\"doc_id\": \"d1\", \"terms\": []}\n{\"doc_id\": \"d1\", \"terms\": []}\n";
  CHECK_THROWS_AS(ingest_corpus_text(text), DuplicateDocError);
}

TEST_CASE("vocabulary block declares extra terms with external ids") {
  const std::string text =
      "{\"vocabulary\": [{\"name\": \"COVID-19\", \"external_id\": \"D000086382\"}, \"Rare\"]}\n"
      "{\"doc_id\": \"d1\", \"terms\": [\"COVID-19\"]}\n";
  const IngestResult r = ingest_corpus_text(text);
  CHECK(r.vocab.size() == 2);
  CHECK(r.vocab.find("D000086382") == r.vocab.find("COVID-19"));
  CHECK(r.vocab.contains("Rare"));
}

TEST_CASE("make_split floor rule sends the remainder to train") {
  SUBCASE("exact fractions") {
    const CorpusSplit s = make_split(make_corpus(100), 0.8, 0.1, 0.1, 7);
    CHECK(s.train.size() == 80);
    CHECK(s.validation.size() == 10);
    CHECK(s.test.size() == 10);
  }
  SUBCASE("remainder doc goes to train") {
    const CorpusSplit s = make_split(make_corpus(10), 0.5, 0.25, 0.25, 7);
    CHECK(s.train.size() == 6);
    CHECK(s.validation.size() == 2);
    CHECK(s.test.size() == 2);
  }
  SUBCASE("fractions summing over 1 are rejected") {
    CHECK_THROWS_AS(make_split(make_corpus(10), 0.9, 0.2, 0.1, 7), BadFractionsError);
  }
}

TEST_CASE("split determinism and disjointness") {
  const Corpus c = make_corpus(200);
  const CorpusSplit a = make_split(c, 0.8, 0.1, 0.1, 42);
  const CorpusSplit b = make_split(c, 0.8, 0.1, 0.1, 42);
  CHECK(a.train == b.train);
  CHECK(a.validation == b.validation);
  CHECK(a.test == b.test);

  std::set<std::string> seen;
  for (const auto& bucket : {a.train, a.validation, a.test})
    for (const auto& d : bucket) CHECK(seen.insert(d).second);
  CHECK(seen.size() == 200);

  const CorpusSplit other = make_split(c, 0.8, 0.1, 0.1, 43);
  CHECK(a.test != other.test);
}

TEST_CASE("gold matrix is binary and mirrors gold terms") {
  const IngestResult r = ingest_corpus_text(kFixture);
  const AssignmentMatrix m = gold_matrix(r.corpus, r.vocab);
  CHECK(m.kind == VectorKind::Binary);
  CHECK(m.get("d1", *r.vocab.find("B")) == 1.0);
  CHECK(m.get("d1", *r.vocab.find("C")) == 0.0);
  CHECK(m.vocab_fingerprint == r.vocab.fingerprint());
}

TEST_CASE("ground_truth_relevance applies Boolean semantics") {
  const IngestResult r = ingest_corpus_text(kFixture);
  const AssignmentMatrix m = gold_matrix(r.corpus, r.vocab);
  const std::vector<std::string> docs = all_doc_ids(r.corpus);

  const QueryAst and_q{"and", parse_expression("A/ and B/", r.vocab)};
  CHECK(ground_truth_relevance(and_q, m, docs) == std::set<std::string>{"d1"});

  const QueryAst or_q{"or", parse_expression("A/ or B/", r.vocab)};
  CHECK(ground_truth_relevance(or_q, m, docs) == std::set<std::string>{"d1", "d2"});
}

TEST_CASE("filter_sparse_queries boundary at min_relevant") {
  // 60 docs with term A, 49 docs with term B
  std::string text = "{\"vocabulary\": [\"A\", \"B\"]}\n";
  for (int i = 0; i < 60; ++i)
    text += "{\"doc_id\": \"a" + std::to_string(i) + "\", \"terms\": [\"A\"]}\n";
  for (int i = 0; i < 49; ++i)
    text += "{\"doc_id\": \"b" + std::to_string(i) + "\", \"terms\": [\"B\"]}\n";
  const IngestResult r = ingest_corpus_text(text);
  const AssignmentMatrix m = gold_matrix(r.corpus, r.vocab);
  const std::vector<QueryAst> queries = {{"qa", parse_expression("A/", r.vocab)},
                                         {"qb", parse_expression("B/", r.vocab)}};
  const auto kept = filter_sparse_queries(queries, m, r.corpus, 50);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].query_id == "qa");
  CHECK(filter_sparse_queries(queries, m, r.corpus, 49).size() == 2);
  CHECK(filter_sparse_queries(queries, m, r.corpus, 0).size() == 2);
}

TEST_CASE("matrix persistence round-trips") {
  const IngestResult r = ingest_corpus_text(kFixture);
  AssignmentMatrix m;
  m.kind = VectorKind::Probabilistic;
  m.vocab_fingerprint = r.vocab.fingerprint();
  m.floor = 1e-4;
  m.set("d1", 0, 0.123456789012345);
  m.set("d1", 2, 0.99);
  m.set("d2", 1, 0.5);
  m.set("d3", 4, 1e-3);

  const auto path = tmp_file("termsearch_matrix_test.tsv");
  save_matrix(m, r.vocab, path.string());
  const AssignmentMatrix loaded = load_matrix(path.string(), r.vocab);
  std::remove(path.string().c_str());

  CHECK(loaded.kind == VectorKind::Probabilistic);
  CHECK(loaded.floor == m.floor);
  CHECK(loaded.get("d1", 0) == m.get("d1", 0));
  CHECK(loaded.get("d1", 2) == m.get("d1", 2));
  CHECK(loaded.get("d2", 1) == 0.5);
  CHECK(loaded.get("d3", 4) == 1e-3);
}

TEST_CASE("values below the floor are dropped on write") {
  const IngestResult r = ingest_corpus_text(kFixture);
  AssignmentMatrix m;
  m.kind = VectorKind::Probabilistic;
  m.floor = 1e-4;
  m.set("d1", 0, 1e-6);
  m.set("d1", 1, 0.4);
  const auto path = tmp_file("termsearch_floor_test.tsv");
  save_matrix(m, r.vocab, path.string());
  const AssignmentMatrix loaded = load_matrix(path.string(), r.vocab);
  std::remove(path.string().c_str());
  CHECK(loaded.get("d1", 0) == 0.0);
  CHECK(loaded.get("d1", 1) == 0.4);
}

TEST_CASE("split and vocab persistence round-trip") {
  const CorpusSplit s = make_split(make_corpus(50), 0.8, 0.1, 0.1, 5);
  const auto spath = tmp_file("termsearch_split_test.json");
  save_split(s, spath.string());
  const CorpusSplit loaded = load_split(spath.string());
  std::remove(spath.string().c_str());
  CHECK(loaded.seed == 5);
  CHECK(loaded.train == s.train);
  CHECK(loaded.validation == s.validation);
  CHECK(loaded.test == s.test);

  const IngestResult r = ingest_corpus_text(kFixture);
  const auto vpath = tmp_file("termsearch_vocab_test.json");
  save_vocab(r.vocab, vpath.string());
  const TermVocabulary v2 = load_vocab(vpath.string());
  std::remove(vpath.string().c_str());
  CHECK(v2.size() == r.vocab.size());
  CHECK(v2.fingerprint() == r.vocab.fingerprint());
}
