// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the exit code is non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "termsearch/classifier.hpp"
#include "termsearch/evaluate.hpp"
#include "termsearch/logic.hpp"
#include "termsearch/noise.hpp"
#include "termsearch/parser.hpp"
#include "termsearch/rng.hpp"
#include "termsearch/stats.hpp"

using namespace termsearch;

namespace {

int failures = 0;

void report(int idx, const std::string& what, bool ok, const std::string& detail = "") {
  std::printf("[%2d] %s  %s%s%s\n", idx, ok ? "PASS" : "FAIL", what.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++failures;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const auto t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

QueryNode random_distinct_ast(CounterRng& rng, std::vector<int>& pool, int depth) {
  if (depth == 0 || pool.size() == 1 || rng.next_bernoulli(0.3)) {
    const int t = pool.back();
    pool.pop_back();
    return QueryNode::term(t);
  }
  const auto pick = rng.next_below(3);
  if (pick == 2) {
    QueryNode l = random_distinct_ast(rng, pool, depth - 1);
    if (pool.empty()) return l;
    QueryNode r = random_distinct_ast(rng, pool, depth - 1);
    return QueryNode::make_not(std::move(l), std::move(r));
  }
  std::vector<QueryNode> kids;
  const auto want = 2 + rng.next_below(2);
  for (std::uint64_t i = 0; i < want && !pool.empty(); ++i)
    kids.push_back(random_distinct_ast(rng, pool, depth - 1));
  if (kids.size() == 1) return std::move(kids.front());
  return pick == 0 ? QueryNode::make_and(std::move(kids)) : QueryNode::make_or(std::move(kids));
}

QueryNode make_random_ast(std::uint64_t seed, int max_leaves, CounterRng& rng) {
  rng = CounterRng(seed, 0);
  std::vector<int> pool;
  for (int i = 0; i < max_leaves; ++i) pool.push_back(i);
  for (std::size_t i = pool.size(); i > 1; --i)
    std::swap(pool[i - 1], pool[rng.next_below(i)]);
  return random_distinct_ast(rng, pool, 3);
}

void criterion_1_oracle_agreement() {
  const double start = now_seconds();
  bool ok = true;
  for (int i = 0; i < 1000 && ok; ++i) {
    CounterRng rng(0, 0);
    const QueryNode ast = make_random_ast(10000 + static_cast<std::uint64_t>(i), 6, rng);
    TermVector p;
    p.kind = VectorKind::Probabilistic;
    for (int t : query_terms(ast)) p.set(t, rng.next_double());
    if (std::abs(eval_prob(ast, p) - bernoulli_oracle(ast, p)) > 1e-12) ok = false;
  }
  const double elapsed = now_seconds() - start;
  report(1, "probabilistic evaluation matches the Bernoulli oracle on 1000 random queries",
         ok && elapsed < 10.0, "elapsed " + std::to_string(elapsed) + "s");
}

void criterion_2_binary_degeneracy() {
  bool ok = true;
  for (int i = 0; i < 1000 && ok; ++i) {
    CounterRng rng(0, 0);
    const QueryNode ast = make_random_ast(20000 + static_cast<std::uint64_t>(i), 6, rng);
    TermVector b;
    b.kind = VectorKind::Binary;
    for (int t : query_terms(ast)) b.set(t, rng.next_bernoulli(0.5) ? 1.0 : 0.0);
    const double pv = eval_prob(ast, b);
    if (pv != (eval_boolean(ast, b) ? 1.0 : 0.0)) ok = false;
  }
  report(2, "probabilistic evaluation degenerates exactly to Boolean on 0/1 vectors", ok);
}

void criterion_3_worked_example() {
  TermVocabulary v;
  for (int i = 0; i < 4; ++i) v.add_term("T" + std::to_string(i));
  const QueryNode q = parse_expression("(T0/ or T1/ or T2/) and T3/", v);
  TermVector p;
  p.kind = VectorKind::Probabilistic;
  p.set(0, 0.5);
  p.set(1, 0.5);
  p.set(2, 0.5);
  p.set(3, 0.8);
  const double got = eval_prob(q, p);
  report(3, "three-way OR under AND worked example equals 0.7", std::abs(got - 0.7) <= 1e-12,
         "got " + std::to_string(got));
}

void criterion_4_prf_example() {
  std::set<std::string> retrieved, relevant;
  for (int i = 0; i < 74; ++i) {
    retrieved.insert("hit" + std::to_string(i));
    relevant.insert("hit" + std::to_string(i));
  }
  for (int i = 0; i < 29; ++i) retrieved.insert("fp" + std::to_string(i));
  for (int i = 0; i < 20; ++i) relevant.insert("fn" + std::to_string(i));
  const PrfMetrics m = classification_metrics(retrieved, relevant);
  const bool ok =
      std::abs(m.precision - 0.7184) <= 1e-4 && std::abs(m.recall - 0.7872) <= 1e-4;
  report(4, "precision/recall on the 103-retrieved / 94-relevant example", ok,
         "P=" + std::to_string(m.precision) + " R=" + std::to_string(m.recall));
}

void criterion_5_gradients() {
  bool ok = true;
  std::string detail;
  for (int i = 0; i < 100 && ok; ++i) {
    CounterRng rng(131, static_cast<std::uint64_t>(i));
    const double z = (rng.next_double() - 0.5) * 8.0;
    const int y = rng.next_bernoulli(0.5) ? 1 : 0;
    const double ap = 0.25 + rng.next_double() * 4.0;
    const double an = 0.25 + rng.next_double() * 4.0;
    for (LossKind kind : {LossKind::WeightedCE, LossKind::Focal}) {
      const double h = 1e-6;
      const double numeric =
          (example_loss(z + h, y, kind, ap, an, 2.0) - example_loss(z - h, y, kind, ap, an, 2.0)) /
          (2 * h);
      const double analytic = example_dloss_dz(z, y, kind, ap, an, 2.0);
      const double rel =
          std::abs(analytic - numeric) / std::max(1e-8, std::abs(analytic) + std::abs(numeric));
      if (rel >= 1e-5) {
        ok = false;
        detail = "rel err " + std::to_string(rel) + " at case " + std::to_string(i);
      }
    }
  }
  report(5, "loss gradients match central differences on 100 random cases", ok, detail);
}

void criterion_6_calibration() {
  bool ok = true;
  for (int i = 0; i < 200 && ok; ++i) {
    CounterRng rng(171, static_cast<std::uint64_t>(i));
    std::map<std::string, double> scores;
    std::set<std::string> relevant;
    const int n = 1 + static_cast<int>(rng.next_below(12));
    for (int d = 0; d < n; ++d) {
      const std::string id = "d" + std::to_string(d);
      scores[id] = std::floor(rng.next_double() * 6) / 6.0;
      if (rng.next_bernoulli(0.4)) relevant.insert(id);
    }
    const CalibrationResult got = calibrate_threshold(scores, relevant);
    // brute force over every candidate threshold
    double best_f1 = -1.0, best_theta = 0.0;
    for (const auto& [_, theta] : scores) {
      std::set<std::string> retrieved;
      for (const auto& [d, s] : scores)
        if (s >= theta) retrieved.insert(d);
      const double f1 = classification_metrics(retrieved, relevant).f1;
      if (f1 > best_f1 + 1e-15 || (std::abs(f1 - best_f1) <= 1e-15 && theta > best_theta)) {
        best_f1 = f1;
        best_theta = theta;
      }
    }
    if (std::abs(got.best_f1 - best_f1) > 1e-12 || std::abs(got.threshold - best_theta) > 1e-12)
      ok = false;
  }
  report(6, "threshold calibration matches exhaustive search on 200 random sets", ok);
}

void criterion_7_randomization() {
  bool ok = true;
  std::string detail;

  const std::vector<double> same{0.4, 0.5, 0.6, 0.7};
  if (randomization_test(same, same, 999, 1).p_value != 1.0) {
    ok = false;
    detail = "identical samples did not give p = 1";
  }

  // 27 pairs whose mean difference is 3x the pair noise scale
  int significant = 0;
  const int trials = 40;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> a, b;
    CounterRng rng(300 + static_cast<std::uint64_t>(trial), 0);
    for (int i = 0; i < 27; ++i) {
      const double base = 0.5 + (rng.next_double() - 0.5) * 0.4;
      const double noise = (rng.next_double() - 0.5) * 0.1;  // sd ~ 0.029
      a.push_back(base + 3 * 0.05 + noise);                  // shift = 3 * noise scale
      b.push_back(base);
    }
    if (randomization_test(a, b, 2000, 400 + trial).p_value < 0.05) ++significant;
  }
  if (significant < trials * 95 / 100) {
    ok = false;
    detail = "shifted pairs significant in only " + std::to_string(significant) + "/40 trials";
  }

  // sampled p within 0.02 of the exhaustive p on small samples
  for (int i = 0; i < 20 && ok; ++i) {
    CounterRng rng(500 + static_cast<std::uint64_t>(i), 0);
    std::vector<double> a, b;
    const int n = 4 + static_cast<int>(rng.next_below(9));
    for (int j = 0; j < n; ++j) {
      a.push_back(rng.next_double());
      b.push_back(rng.next_double());
    }
    const double exact = randomization_test_exhaustive(a, b);
    const double sampled = randomization_test(a, b, 20000, 600 + i).p_value;
    if (std::abs(exact - sampled) > 0.02) {
      ok = false;
      detail = "sampled p off by " + std::to_string(std::abs(exact - sampled));
    }
  }
  report(7, "sign-flip randomization test sanity checks", ok, detail);
}

struct SweepFixture {
  Corpus corpus;
  TermVocabulary vocab;
  AssignmentMatrix gold;
  CorpusSplit split;
  std::vector<QueryAst> queries;
};

SweepFixture make_sweep_fixture() {
  SweepFixture f;
  f.vocab.add_term("A");
  f.vocab.add_term("B");
  f.vocab.add_term("C");
  for (int i = 0; i < 400; ++i) {
    DocumentRecord d;
    d.doc_id = "d" + std::to_string(i);
    if (i % 2 == 0) d.gold_terms.insert(0);
    if (i % 3 == 0) d.gold_terms.insert(1);
    if (i % 5 == 0) d.gold_terms.insert(2);
    f.corpus.add(std::move(d));
  }
  f.gold = gold_matrix(f.corpus, f.vocab);
  f.split = make_split(f.corpus, 0.6, 0.2, 0.2, 3);
  f.queries = {{"qa", parse_expression("A/", f.vocab)},
               {"qab", parse_expression("A/ and B/", f.vocab)},
               {"qbc", parse_expression("B/ or C/", f.vocab)}};
  return f;
}

void criterion_8_sweep_endpoints() {
  const SweepFixture f = make_sweep_fixture();
  AssignmentMatrix prob = f.gold;
  prob.kind = VectorKind::Probabilistic;
  for (int i = 0; i < 400; i += 4) prob.set("d" + std::to_string(i), 0, 0.1);
  for (int i = 0; i < 400; i += 9) prob.set("d" + std::to_string(i), 1, 0.2);

  const EvalContext ctx{&f.corpus, &f.vocab, &f.gold, &f.split};
  const std::vector<std::string> docs = all_doc_ids(f.corpus);
  const auto f1s = per_term_f1(f.gold, binarize_matrix(prob, 0.5), docs, {0, 1, 2});
  const MixedIndexingCurve curve =
      mixed_indexing_sweep(ctx, f.queries, prob, f1s, default_sweep_grid(f1s));
  const MethodEvaluation auto_ev = evaluate_prob(ctx, f.queries, prob);

  bool ok = !curve.points.empty();
  std::string detail;
  if (ok && std::abs(curve.points.front().avg_f1 - auto_ev.macro.f1) > 1e-12) {
    ok = false;
    detail = "automatic endpoint mismatch";
  }
  if (ok && (curve.points.back().avg_precision != 1.0 || curve.points.back().avg_recall != 1.0)) {
    ok = false;
    detail = "all-manual endpoint not exactly perfect";
  }
  for (std::size_t i = 1; ok && i < curve.points.size(); ++i)
    if (curve.points[i].manual_fraction < curve.points[i - 1].manual_fraction - 1e-12) {
      ok = false;
      detail = "manual fraction not monotone";
    }
  report(8, "mixed indexing sweep endpoints are exact and manual effort is monotone", ok,
         detail);
}

void criterion_9_venn() {
  const VennDemoReport rep = venn_effect_demo({});
  const bool ok = rep.f1_and > std::max(rep.f1_a, rep.f1_b) &&
                  rep.f1_or < std::min(rep.f1_a, rep.f1_b);
  report(9, "intersection-preserving errors push AND above and OR below the term F1s", ok,
         "A=" + std::to_string(rep.f1_a) + " AND=" + std::to_string(rep.f1_and) +
             " OR=" + std::to_string(rep.f1_or));
}

void criterion_10_pipeline() {
  const double start = now_seconds();

  SyntheticCorpusSpec spec;
  spec.n_docs = 10000;
  spec.seed = 91;
  for (int i = 0; i < 20; ++i) {
    SyntheticTermSpec t;
    t.name = "term" + std::to_string(i);
    t.prevalence = 0.08 + 0.01 * (i % 5);
    t.signal_strength = 0.30 + 0.035 * i;  // quality ramp 0.30 .. 0.965
    spec.terms.push_back(t);
  }
  const IngestResult ing = generate_corpus(spec);
  const AssignmentMatrix gold = gold_matrix(ing.corpus, ing.vocab);
  const CorpusSplit split = make_split(ing.corpus, 0.7, 0.15, 0.15, 17);
  const TfidfModel tfidf = TfidfModel::fit(ing.corpus, split.train);

  Hyperparams hp;
  hp.epochs = 25;
  hp.batch_size = 256;
  std::map<int, LinearClassifier> per_term;
  std::vector<FeatureVector> feats;
  for (const auto& id : split.train) feats.push_back(tfidf.featurize(ing.corpus.doc(id)));
  for (int t = 0; t < 20; ++t) {
    std::vector<int> labels;
    for (const auto& id : split.train)
      labels.push_back(gold.get(id, t) == 1.0 ? 1 : 0);
    per_term[t] = train_classifier(feats, labels, tfidf.n_features(), LossKind::WeightedCE, hp,
                                   700 + static_cast<std::uint64_t>(t));
  }

  std::vector<std::string> eval_docs = split.validation;
  eval_docs.insert(eval_docs.end(), split.test.begin(), split.test.end());
  const AssignmentMatrix prob = predict_matrix(per_term, tfidf, ing.corpus, eval_docs, ing.vocab);
  const AssignmentMatrix bin = binarize_matrix(prob, 0.5);

  std::vector<QueryAst> queries;
  for (int i = 0; i < 6; ++i) {
    const int t = 1 + 3 * i;  // single terms along the quality ramp
    queries.push_back({"q" + std::to_string(i), QueryNode::term(t)});
  }
  queries.push_back({"q6", parse_expression("term0/ or term1/", ing.vocab)});
  queries.push_back({"q7", parse_expression("term18/ and term19/", ing.vocab)});
  queries.push_back({"q8", parse_expression("term2/ and term17/", ing.vocab)});
  queries.push_back({"q9", parse_expression("term5/ or term14/", ing.vocab)});

  const EvalContext ctx{&ing.corpus, &ing.vocab, &gold, &split};
  const MethodEvaluation prob_ev = evaluate_prob(ctx, queries, prob);
  const MethodEvaluation bin_ev = evaluate_binary(ctx, queries, bin);

  bool ok = true;
  std::string detail = "probF1=" + std::to_string(prob_ev.macro.f1) +
                       " binF1=" + std::to_string(bin_ev.macro.f1);
  if (prob_ev.macro.f1 < bin_ev.macro.f1 - 0.01) ok = false;

  // per-query recall should track the weakest term's F1
  std::vector<int> all_terms;
  for (int t = 0; t < 20; ++t) all_terms.push_back(t);
  const auto f1s = per_term_f1(gold, bin, eval_docs, all_terms);
  std::vector<double> worst, recalls;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    double w = 1.0;
    for (int t : query_terms(queries[i].root)) w = std::min(w, f1s.at(t));
    worst.push_back(w);
    recalls.push_back(prob_ev.per_query[i].recall);
  }
  const PearsonResult corr = pearson(worst, recalls);
  detail += " r=" + std::to_string(corr.r);
  if (corr.r <= 0.3) ok = false;

  // the mixed indexing curve should improve (within tolerance) as more terms
  // are handled manually
  const MixedIndexingCurve curve =
      mixed_indexing_sweep(ctx, queries, prob, f1s, default_sweep_grid(f1s));
  for (std::size_t i = 1; i < curve.points.size(); ++i)
    if (curve.points[i].avg_f1 < curve.points[i - 1].avg_f1 - 0.02) {
      ok = false;
      detail += " curve dip at t=" + std::to_string(curve.points[i].t);
      break;
    }

  const double elapsed = now_seconds() - start;
  detail += " elapsed " + std::to_string(elapsed) + "s";
  if (elapsed >= 300.0) ok = false;
  report(10, "synthetic end-to-end pipeline quality checks", ok, detail);
}

void criterion_11_noise_calibration() {
  const int n = 100000;
  AssignmentMatrix gold;
  gold.kind = VectorKind::Binary;
  for (int i = 0; i < n; ++i)
    gold.set("d" + std::to_string(i), 0, (i % 5 == 0) ? 1.0 : 0.0);
  NoiseSpec spec;
  spec.seed = 41;
  spec.per_term[0] = {0.1, 0.1};
  const AssignmentMatrix noisy = inject_noise(gold, spec);
  std::set<std::string> retrieved, relevant;
  for (const auto& [doc, _] : gold.rows) {
    if (gold.get(doc, 0) == 1.0) relevant.insert(doc);
    if (noisy.get(doc, 0) == 1.0) retrieved.insert(doc);
  }
  const PrfMetrics m = classification_metrics(retrieved, relevant);
  const bool ok = std::abs(m.precision - 0.6923) <= 0.01 && std::abs(m.recall - 0.9) <= 0.01;
  report(11, "symmetric 10% noise at 20% prevalence lands on the closed-form P and R", ok,
         "P=" + std::to_string(m.precision) + " R=" + std::to_string(m.recall));
}

}  // namespace

int main() {
  criterion_1_oracle_agreement();
  criterion_2_binary_degeneracy();
  criterion_3_worked_example();
  criterion_4_prf_example();
  criterion_5_gradients();
  criterion_6_calibration();
  criterion_7_randomization();
  criterion_8_sweep_endpoints();
  criterion_9_venn();
  criterion_10_pipeline();
  criterion_11_noise_calibration();
  std::printf("%s (%d failure%s)\n", failures == 0 ? "ALL CRITERIA PASS" : "CRITERIA FAILED",
              failures, failures == 1 ? "" : "s");
  return failures == 0 ? 0 : 1;
}
