#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "termsearch/classifier.hpp"
#include "termsearch/errors.hpp"
#include "termsearch/parser.hpp"
#include "termsearch/rng.hpp"
#include "termsearch/tfidf.hpp"

using namespace termsearch;

namespace {

Corpus two_doc_corpus() {
  Corpus c;
  c.add(DocumentRecord{"d1", "aa bb", "", {}});
  c.add(DocumentRecord{"d2", "aa cc", "", {}});
  return c;
}

// Independent oracle: central finite differences of the per-example loss.
double numeric_dloss_dz(double z, int y, LossKind kind, double ap, double an, double g) {
  const double h = 1e-6;
  return (example_loss(z + h, y, kind, ap, an, g) - example_loss(z - h, y, kind, ap, an, g)) /
         (2 * h);
}

}  // namespace

TEST_CASE("tfidf idf formula") {
  const Corpus c = two_doc_corpus();
  const TfidfModel m = TfidfModel::fit(c, {"d1", "d2"});
  // token "aa": df = 2 -> idf = ln(3/3) + 1 = 1.0
  const auto& vmap = m.vocabulary_map();
  REQUIRE(vmap.count("aa"));
  CHECK(m.idf()[vmap.at("aa")] == doctest::Approx(1.0));
  // token "bb": df = 1 -> idf = ln(3/2) + 1
  CHECK(m.idf()[vmap.at("bb")] == doctest::Approx(std::log(1.5) + 1.0));
}

TEST_CASE("tokenizer lowercases, splits on non-alphanumerics, drops 1-char tokens") {
  const auto toks = TfidfModel::tokenize("COVID-19: a Bone-Fracture study!");
  CHECK(toks == std::vector<std::string>{"covid", "19", "bone", "fracture", "study"});
}

TEST_CASE("featurize: unknown tokens give a zero vector; output is L2-normalized") {
  const Corpus c = two_doc_corpus();
  const TfidfModel m = TfidfModel::fit(c, {"d1", "d2"});
  CHECK(m.featurize_text("zz qq").empty());
  const FeatureVector f = m.featurize(c.doc("d1"));
  double norm = 0;
  for (const auto& [_, w] : f) norm += w * w;
  CHECK(norm == doctest::Approx(1.0));
  CHECK(m.featurize(c.doc("d1")) == f);  // deterministic
}

TEST_CASE("empty corpus is rejected") {
  CHECK_THROWS_AS(TfidfModel::fit(std::vector<const DocumentRecord*>{}), EmptyCorpusError);
}

TEST_CASE("weighted CE alphas follow inverse class frequency") {
  const auto [ap, an] = weighted_ce_alphas(10, 90);
  CHECK(ap == doctest::Approx(5.0));
  CHECK(an == doctest::Approx(100.0 / 180.0));
}

TEST_CASE("focal loss value at p_t = 0.9") {
  const double z = std::log(0.9 / 0.1);  // sigmoid(z) = 0.9
  const double fl = example_loss(z, 1, LossKind::Focal, 0.25, 0.75, 2.0);
  CHECK(fl == doctest::Approx(0.25 * 0.01 * (-std::log(0.9))).epsilon(1e-9));
  CHECK(fl == doctest::Approx(2.634e-4).epsilon(1e-3));
}

TEST_CASE("property: analytic loss gradients match central differences") {
  for (int i = 0; i < 100; ++i) {
    CounterRng rng(31, static_cast<std::uint64_t>(i));
    const double z = (rng.next_double() - 0.5) * 8.0;
    const int y = rng.next_bernoulli(0.5) ? 1 : 0;
    const double ap = 0.25 + rng.next_double() * 4.0;
    const double an = 0.25 + rng.next_double() * 4.0;
    for (LossKind kind : {LossKind::WeightedCE, LossKind::Focal}) {
      const double analytic = example_dloss_dz(z, y, kind, ap, an, 2.0);
      const double numeric = numeric_dloss_dz(z, y, kind, ap, an, 2.0);
      CHECK(analytic == doctest::Approx(numeric).epsilon(1e-5));
    }
  }
}

TEST_CASE("fair-share upsampling thresholds") {
  SUBCASE("paper-scale arithmetic") {
    // N = 500000, M = 210: fair share 2380.95, rarity threshold 238.095
    const double threshold = 0.1 * 500000.0 / 210.0;
    CHECK(threshold == doctest::Approx(238.095).epsilon(1e-4));
  }
  SUBCASE("class at the threshold is unchanged") {
    std::vector<std::string> ids;
    for (int i = 0; i < 1000; ++i) ids.push_back("d" + std::to_string(i));
    std::vector<std::string> pos(ids.begin(), ids.begin() + 12);
    const TrainingSubset s = fair_share_upsample(ids, {{0, pos}}, 10, 0.1, 3);
    CHECK(s.doc_ids.size() == 1000);  // threshold 10, class has 12
  }
  SUBCASE("rare class is upsampled to the ceiling") {
    std::vector<std::string> ids;
    for (int i = 0; i < 1000; ++i) ids.push_back("d" + std::to_string(i));
    std::vector<std::string> pos(ids.begin(), ids.begin() + 3);
    const TrainingSubset s = fair_share_upsample(ids, {{0, pos}}, 10, 0.1, 3);
    CHECK(s.doc_ids.size() == 1007);  // 7 duplicates to reach ceil(10)
    // never removes documents; all duplicates come from the class positives
    for (std::size_t i = 1000; i < s.doc_ids.size(); ++i) {
      const bool from_pos =
          std::find(pos.begin(), pos.end(), s.doc_ids[i]) != pos.end();
      CHECK(from_pos);
    }
  }
  SUBCASE("class with no positives is reported and skipped") {
    std::vector<std::string> ids{"a", "b", "c"};
    const TrainingSubset s = fair_share_upsample(ids, {{5, {}}}, 1, 0.5, 3);
    CHECK(s.doc_ids.size() == 3);
    CHECK(s.classes_without_positives == std::vector<int>{5});
  }
}

TEST_CASE("training separates a linearly separable toy set") {
  std::vector<FeatureVector> xs;
  std::vector<int> ys;
  for (int i = 0; i < 40; ++i) {
    const double a = (i % 2) ? 1.0 : 0.0;
    xs.push_back({{0, a}, {1, 1.0 - a}});
    ys.push_back(i % 2);
  }
  Hyperparams hp;
  hp.epochs = 300;
  hp.learning_rate = 1.0;
  hp.l2_lambda = 0.0;
  const LinearClassifier clf = train_classifier(xs, ys, 2, LossKind::WeightedCE, hp, 1);
  int correct = 0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if ((clf.predict_proba(xs[i]) >= 0.5) == (ys[i] == 1)) ++correct;
  CHECK(correct == 40);
}

TEST_CASE("degenerate labels are rejected") {
  std::vector<FeatureVector> xs{{{0, 1.0}}, {{0, 2.0}}};
  CHECK_THROWS_AS(train_classifier(xs, {1, 1}, 1, LossKind::WeightedCE, {}, 1),
                  DegenerateLabelsError);
}

TEST_CASE("training is deterministic under a fixed seed") {
  std::vector<FeatureVector> xs;
  std::vector<int> ys;
  for (int i = 0; i < 64; ++i) {
    CounterRng rng(5, static_cast<std::uint64_t>(i));
    xs.push_back({{0, rng.next_double()}, {1, rng.next_double()}, {2, rng.next_double()}});
    ys.push_back(rng.next_bernoulli(0.4) ? 1 : 0);
  }
  Hyperparams hp;
  hp.epochs = 20;
  const LinearClassifier a = train_classifier(xs, ys, 3, LossKind::Focal, hp, 77);
  const LinearClassifier b = train_classifier(xs, ys, 3, LossKind::Focal, hp, 77);
  CHECK(a.weights == b.weights);  // bit-for-bit
  CHECK(a.bias == b.bias);
}

TEST_CASE("predict_matrix produces sigmoid outputs with floor sparsification") {
  Corpus c = two_doc_corpus();
  const TermVocabulary v = [] {
    TermVocabulary v;
    v.add_term("X");
    v.add_term("Y");
    return v;
  }();
  const TfidfModel tfidf = TfidfModel::fit(c, {"d1", "d2"});

  LinearClassifier zero;
  zero.weights.assign(tfidf.n_features(), 0.0);
  zero.bias = 0.0;
  LinearClassifier low;
  low.weights.assign(tfidf.n_features(), 0.0);
  low.bias = -20.0;  // sigmoid ~ 2e-9, below the default floor

  const AssignmentMatrix m =
      predict_matrix({{0, zero}, {1, low}}, tfidf, c, {"d1", "d2"}, v);
  CHECK(m.kind == VectorKind::Probabilistic);
  CHECK(m.rows.size() == 2);
  CHECK(m.get("d1", 0) == doctest::Approx(0.5));
  CHECK(m.get("d1", 1) == 0.0);  // dropped by the floor
}

TEST_CASE("predict_matrix rejects mismatched classifiers") {
  Corpus c = two_doc_corpus();
  TermVocabulary v;
  v.add_term("X");
  const TfidfModel tfidf = TfidfModel::fit(c, {"d1", "d2"});
  LinearClassifier bad;
  bad.weights.assign(tfidf.n_features() + 3, 0.0);
  CHECK_THROWS_AS(predict_matrix({{0, bad}}, tfidf, c, {"d1"}, v), VocabularyMismatchError);
}

TEST_CASE("binarize_matrix tie at the threshold maps to positive") {
  AssignmentMatrix m;
  m.kind = VectorKind::Probabilistic;
  m.set("d1", 0, 0.5);
  m.set("d1", 1, 0.4999);
  const AssignmentMatrix b = binarize_matrix(m, 0.5);
  CHECK(b.kind == VectorKind::Binary);
  CHECK(b.get("d1", 0) == 1.0);
  CHECK(b.get("d1", 1) == 0.0);

  // idempotence on {0,1} values
  const AssignmentMatrix b2 = binarize_matrix([&] {
    AssignmentMatrix p = b;
    p.kind = VectorKind::Probabilistic;
    return p;
  }(), 0.5);
  CHECK(b2.get("d1", 0) == 1.0);
  CHECK(b2.get("d1", 1) == 0.0);
}

TEST_CASE("query classifier labels come from ground-truth relevance") {
  Corpus c;
  TermVocabulary v;
  v.add_term("A");
  v.add_term("B");
  for (int i = 0; i < 30; ++i) {
    DocumentRecord d;
    d.doc_id = "d" + std::to_string(i);
    d.title = (i % 3 == 0) ? "apple apple" : "banana banana";
    if (i % 3 == 0) d.gold_terms = {0, 1};
    else d.gold_terms = {0};
    c.add(std::move(d));
  }
  const AssignmentMatrix gold = gold_matrix(c, v);
  const TfidfModel tfidf = TfidfModel::fit(c, all_doc_ids(c));
  const QueryAst q{"q", parse_expression("A/ and B/", v)};
  Hyperparams hp;
  hp.epochs = 200;
  const LinearClassifier clf =
      train_query_classifier(q, gold, c, all_doc_ids(c), tfidf, LossKind::WeightedCE, hp, 9);
  // separable by construction
  CHECK(clf.predict_proba(tfidf.featurize(c.doc("d0"))) > 0.5);
  CHECK(clf.predict_proba(tfidf.featurize(c.doc("d1"))) < 0.5);

  // query with no positives in the subset
  const QueryAst impossible{"imp", QueryNode::make_not(QueryNode::term(0), QueryNode::term(0))};
  CHECK_THROWS_AS(train_query_classifier(impossible, gold, c, all_doc_ids(c), tfidf,
                                         LossKind::WeightedCE, hp, 9),
                  DegenerateLabelsError);
}

TEST_CASE("model save/load round-trips classifiers") {
  Corpus c = two_doc_corpus();
  TermVocabulary v;
  v.add_term("X");
  IndexerModel model;
  model.tfidf = TfidfModel::fit(c, {"d1", "d2"});
  LinearClassifier clf;
  clf.weights = {0.25, -1.5, 3.0};
  clf.weights.resize(model.tfidf.n_features(), 0.125);
  clf.bias = -0.75;
  clf.target = "X";
  clf.loss_kind = LossKind::Focal;
  model.per_term[0] = clf;
  model.seed = 99;

  const auto path = std::filesystem::temp_directory_path() / "termsearch_model_test.json";
  save_model(model, v, path.string());
  const IndexerModel loaded = load_model(path.string(), v);
  std::filesystem::remove(path);

  CHECK(loaded.seed == 99);
  REQUIRE(loaded.per_term.count(0));
  CHECK(loaded.per_term.at(0).weights == model.per_term.at(0).weights);
  CHECK(loaded.per_term.at(0).bias == clf.bias);
  CHECK(loaded.per_term.at(0).loss_kind == LossKind::Focal);
  CHECK(loaded.tfidf.idf() == model.tfidf.idf());
}
