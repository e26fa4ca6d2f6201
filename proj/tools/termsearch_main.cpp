// termsearch: Boolean and probabilistic search over controlled-vocabulary
// term assignments. One binary, subcommands wiring the library into
// reproducible file-based pipelines.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "termsearch/classifier.hpp"
#include "termsearch/errors.hpp"
#include "termsearch/evaluate.hpp"
#include "termsearch/noise.hpp"
#include "termsearch/parser.hpp"
#include "termsearch/rng.hpp"
#include "termsearch/stats.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace termsearch;

namespace {

struct Cli {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
  std::string format = "json";

  json config;      // effective config (file + overrides)
  std::string hash; // FNV-1a over the effective config
};

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json cfg_at(const json& j, const std::string& key) {
  return j.contains(key) ? j.at(key) : json::object();
}

template <typename T>
T cfg_get(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config field '" + key + "': " + e.what());
  }
}

void finalize(Cli& cli) {
  if (!cli.config_path.empty()) {
    std::ifstream in(cli.config_path);
    if (!in) throw ConfigError("cannot read config file: " + cli.config_path);
    try {
      in >> cli.config;
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config parse error: ") + e.what());
    }
  }
  if (!cli.out_dir.empty()) cli.config["out_dir"] = cli.out_dir;
  if (cli.seed_given) cli.config["seed"] = cli.seed;
  cli.out_dir = cfg_get<std::string>(cli.config, "out_dir", "out");
  cli.seed = cfg_get<std::uint64_t>(cli.config, "seed", 0);
  cli.hash = hex64(fnv1a64(cli.config.dump()));
#ifdef _OPENMP
  if (cli.threads > 0) omp_set_num_threads(cli.threads);
#endif
  fs::create_directories(cli.out_dir);
}

std::string artifact(const Cli& cli, const std::string& name) {
  return (fs::path(cli.out_dir) / name).string();
}

void require_artifact(const std::string& path, const std::string& what) {
  if (!fs::exists(path)) throw MissingArtifactError(what + " not found: " + path);
}

std::string required_path(const Cli& cli, const std::string& key, const std::string& what) {
  const std::string p = cfg_get<std::string>(cli.config, key, "");
  if (p.empty()) throw ConfigError("config field '" + key + "' is required");
  require_artifact(p, what);
  return p;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

Hyperparams trainer_hyperparams(const json& t) {
  Hyperparams hp;
  hp.learning_rate = cfg_get(t, "learning_rate", hp.learning_rate);
  hp.epochs = cfg_get(t, "epochs", hp.epochs);
  hp.batch_size = cfg_get(t, "batch_size", hp.batch_size);
  hp.l2_lambda = cfg_get(t, "l2_lambda", hp.l2_lambda);
  hp.gamma = cfg_get(t, "gamma", hp.gamma);
  hp.alpha = cfg_get(t, "alpha", hp.alpha);
  return hp;
}

LossKind trainer_loss(const json& t) {
  const std::string name = cfg_get<std::string>(t, "loss", "weighted_ce");
  if (name == "weighted_ce") return LossKind::WeightedCE;
  if (name == "focal") return LossKind::Focal;
  throw ConfigError("trainer.loss must be weighted_ce or focal, got: " + name);
}

EvalOptions eval_options(const Cli& cli) {
  const json e = cfg_at(cli.config, "evaluation");
  EvalOptions opts;
  opts.per_query_threshold = cfg_get(e, "per_query_threshold", true);
  opts.recall_k = cfg_get(e, "recall_k", 1000);
  return opts;
}

struct Workspace {
  IngestResult ing;
  AssignmentMatrix gold;
  CorpusSplit split;
};

Workspace load_workspace(const Cli& cli, bool need_split = true) {
  Workspace w;
  const std::string corpus = required_path(cli, "corpus", "corpus file");
  w.ing = ingest_corpus(corpus);
  const std::string vocab_path = artifact(cli, "vocab.json");
  if (fs::exists(vocab_path)) {
    const TermVocabulary saved = load_vocab(vocab_path);
    if (saved.fingerprint() != w.ing.vocab.fingerprint())
      throw VocabularyMismatchError("vocabulary in " + vocab_path +
                                    " does not match the corpus file");
  }
  w.gold = gold_matrix(w.ing.corpus, w.ing.vocab);
  if (need_split) {
    const std::string split_path = artifact(cli, "split.json");
    require_artifact(split_path, "split file (run `termsearch split` first)");
    w.split = load_split(split_path);
  }
  return w;
}

std::vector<QueryAst> load_queries(const Cli& cli, const Workspace& w) {
  const std::string path = required_path(cli, "queries", "query file");
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  ParseOptions opts;
  opts.allow_unknown_terms = cfg_get(cfg_at(cli.config, "evaluation"), "lenient_terms", false);
  std::vector<QueryAst> out;
  for (const QuerySource& src : read_query_file(text, fs::path(path).stem().string()))
    out.push_back(normalize_query(parse_query(src, w.ing.vocab, opts), w.ing.vocab));
  const auto min_rel =
      cfg_get<std::size_t>(cfg_at(cli.config, "evaluation"), "min_relevant", 0);
  if (min_rel > 0) out = filter_sparse_queries(out, w.gold, w.ing.corpus, min_rel);
  if (out.empty()) throw ConfigError("no usable queries in " + path);
  return out;
}

std::vector<std::string> eval_doc_ids(const Workspace& w) {
  std::vector<std::string> docs = w.split.validation;
  docs.insert(docs.end(), w.split.test.begin(), w.split.test.end());
  return docs;
}

// --- subcommands -----------------------------------------------------------

int cmd_ingest(const Cli& cli) {
  Workspace w = load_workspace(cli, /*need_split=*/false);
  save_vocab(w.ing.vocab, artifact(cli, "vocab.json"), cli.hash);
  save_matrix(w.gold, w.ing.vocab, artifact(cli, "gold.tsv"), cli.hash);
  std::printf("ingested %zu docs, %d terms (config %s)\n", w.ing.corpus.size(),
              w.ing.vocab.size(), cli.hash.c_str());
  return 0;
}

int cmd_split(const Cli& cli) {
  Workspace w = load_workspace(cli, /*need_split=*/false);
  const json s = cfg_at(cli.config, "split");
  const CorpusSplit split =
      make_split(w.ing.corpus, cfg_get(s, "train", 0.8), cfg_get(s, "validation", 0.1),
                 cfg_get(s, "test", 0.1), cli.seed);
  save_split(split, artifact(cli, "split.json"), cli.hash);
  std::printf("split %zu/%zu/%zu (train/validation/test)\n", split.train.size(),
              split.validation.size(), split.test.size());
  return 0;
}

IndexerModel train_model(const Cli& cli, const Workspace& w,
                         const std::vector<QueryAst>* queries) {
  const json t = cfg_at(cli.config, "trainer");
  const Hyperparams hp = trainer_hyperparams(t);
  const LossKind loss = trainer_loss(t);

  IndexerModel model;
  model.seed = cli.seed;
  model.tfidf = TfidfModel::fit(w.ing.corpus, w.split.train);

  std::map<int, std::vector<std::string>> positives;
  for (const auto& id : w.split.train)
    for (const auto& [term, val] : w.gold.row(id).values)
      if (val == 1.0) positives[term].push_back(id);
  const TrainingSubset subset = fair_share_upsample(
      w.split.train, positives, w.ing.vocab.size(),
      cfg_get(t, "fair_share_fraction", 0.1), mix_seed(cli.seed, 0xfa17));

  std::map<std::string, FeatureVector> feat_cache;
  for (const auto& id : subset.doc_ids)
    if (!feat_cache.count(id)) feat_cache[id] = model.tfidf.featurize(w.ing.corpus.doc(id));
  std::vector<FeatureVector> feats;
  for (const auto& id : subset.doc_ids) feats.push_back(feat_cache.at(id));

  int skipped = 0;
  for (int term = 0; term < w.ing.vocab.size(); ++term) {
    std::vector<int> labels;
    for (const auto& id : subset.doc_ids)
      labels.push_back(w.gold.get(id, term) == 1.0 ? 1 : 0);
    try {
      model.per_term[term] =
          train_classifier(feats, labels, model.tfidf.n_features(), loss, hp,
                           mix_seed(cli.seed, static_cast<std::uint64_t>(term)),
                           w.ing.vocab.name(term));
    } catch (const DegenerateLabelsError&) {
      ++skipped;  // term absent (or universal) in the training split
    }
  }
  if (skipped > 0)
    std::fprintf(stderr, "warning: %d terms skipped (single-class training labels)\n", skipped);

  if (queries && cfg_get(t, "train_query_classifiers", false)) {
    for (const auto& q : *queries) {
      try {
        model.per_query[q.query_id] = train_query_classifier(
            q, w.gold, w.ing.corpus, w.split.train, model.tfidf, loss, hp,
            mix_seed(cli.seed, fnv1a64(q.query_id)));
      } catch (const DegenerateLabelsError&) {
        std::fprintf(stderr, "warning: query %s skipped (single-class labels)\n",
                     q.query_id.c_str());
      }
    }
  }
  return model;
}

void write_predictions(const Cli& cli, const Workspace& w, const IndexerModel& model) {
  const double floor = cfg_get(cli.config, "floor", 1e-4);
  const double threshold =
      cfg_get(cfg_at(cli.config, "evaluation"), "binary_threshold", 0.5);
  const std::vector<std::string> docs =
      cfg_get<std::string>(cli.config, "predict_docs", "eval") == "all"
          ? all_doc_ids(w.ing.corpus)
          : eval_doc_ids(w);
  const AssignmentMatrix prob =
      predict_matrix(model.per_term, model.tfidf, w.ing.corpus, docs, w.ing.vocab, floor);
  save_matrix(prob, w.ing.vocab, artifact(cli, "prob.tsv"), cli.hash);
  save_matrix(binarize_matrix(prob, threshold), w.ing.vocab, artifact(cli, "binary.tsv"),
              cli.hash);
}

int cmd_train(const Cli& cli) {
  Workspace w = load_workspace(cli);
  std::vector<QueryAst> queries;
  const bool want_query_clf =
      cfg_get(cfg_at(cli.config, "trainer"), "train_query_classifiers", false);
  if (want_query_clf) queries = load_queries(cli, w);
  const IndexerModel model = train_model(cli, w, want_query_clf ? &queries : nullptr);
  save_model(model, w.ing.vocab, artifact(cli, "model.json"), cli.hash);
  write_predictions(cli, w, model);
  std::printf("trained %zu term classifiers, %zu query classifiers\n", model.per_term.size(),
              model.per_query.size());
  return 0;
}

int cmd_predict(const Cli& cli) {
  Workspace w = load_workspace(cli);
  const std::string model_path = artifact(cli, "model.json");
  require_artifact(model_path, "model file (run `termsearch train` first)");
  write_predictions(cli, w, load_model(model_path, w.ing.vocab));
  std::printf("wrote %s and %s\n", artifact(cli, "prob.tsv").c_str(),
              artifact(cli, "binary.tsv").c_str());
  return 0;
}

int cmd_search(const Cli& cli, const std::string& query_id, const std::string& method) {
  Workspace w = load_workspace(cli);
  std::vector<QueryAst> queries = load_queries(cli, w);
  const QueryAst* query = nullptr;
  for (const auto& q : queries)
    if (q.query_id == query_id) query = &q;
  if (!query) throw ConfigError("query id not found in query file: " + query_id);

  const std::vector<std::string> docs = eval_doc_ids(w);
  std::printf("# query=%s method=%s config_hash=%s\n", query_id.c_str(), method.c_str(),
              cli.hash.c_str());
  if (method == "gold" || method == "binary") {
    const AssignmentMatrix* m = &w.gold;
    AssignmentMatrix loaded;
    if (method == "binary") {
      require_artifact(artifact(cli, "binary.tsv"), "binary predictions");
      loaded = load_matrix(artifact(cli, "binary.tsv"), w.ing.vocab);
      m = &loaded;
    }
    for (const auto& d : ground_truth_relevance(*query, *m, docs))
      std::printf("%s\n", d.c_str());
    return 0;
  }
  std::vector<std::pair<double, std::string>> ranked;
  if (method == "query_clf") {
    require_artifact(artifact(cli, "model.json"), "model file");
    const IndexerModel model = load_model(artifact(cli, "model.json"), w.ing.vocab);
    const auto it = model.per_query.find(query_id);
    if (it == model.per_query.end())
      throw MissingArtifactError("model has no classifier for query " + query_id +
                                 "; retrain with trainer.train_query_classifiers = true");
    for (const auto& d : docs)
      ranked.emplace_back(it->second.predict_proba(model.tfidf.featurize(w.ing.corpus.doc(d))),
                          d);
  } else if (method == "prob") {
    require_artifact(artifact(cli, "prob.tsv"), "probabilistic predictions");
    const AssignmentMatrix prob = load_matrix(artifact(cli, "prob.tsv"), w.ing.vocab);
    for (const auto& d : docs) ranked.emplace_back(eval_prob(query->root, prob.row(d)), d);
  } else {
    throw ConfigError("method must be gold, binary, prob, or query_clf");
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  const int top = cfg_get(cfg_at(cli.config, "evaluation"), "search_top_k", 100);
  for (int i = 0; i < top && i < static_cast<int>(ranked.size()); ++i)
    std::printf("%s\t%.6f\n", ranked[i].second.c_str(), ranked[i].first);
  return 0;
}

int cmd_evaluate(const Cli& cli) {
  Workspace w = load_workspace(cli);
  const std::vector<QueryAst> queries = load_queries(cli, w);
  const EvalContext ctx{&w.ing.corpus, &w.ing.vocab, &w.gold, &w.split};
  const EvalOptions opts = eval_options(cli);
  const json e = cfg_at(cli.config, "evaluation");
  const std::vector<std::string> methods =
      cfg_get<std::vector<std::string>>(e, "methods", {"gold", "binary", "prob"});

  std::vector<MethodEvaluation> evals;
  // indices, not pointers: push_back may reallocate the vector
  int prob_idx = -1, binary_idx = -1;
  for (const auto& m : methods) {
    if (m == "gold") {
      evals.push_back(evaluate_gold(ctx, queries, opts));
    } else if (m == "binary") {
      require_artifact(artifact(cli, "binary.tsv"), "binary predictions");
      evals.push_back(evaluate_binary(
          ctx, queries, load_matrix(artifact(cli, "binary.tsv"), w.ing.vocab), opts));
    } else if (m == "prob") {
      require_artifact(artifact(cli, "prob.tsv"), "probabilistic predictions");
      evals.push_back(evaluate_prob(
          ctx, queries, load_matrix(artifact(cli, "prob.tsv"), w.ing.vocab), opts));
    } else if (m == "query_clf") {
      require_artifact(artifact(cli, "model.json"), "model file");
      const IndexerModel model = load_model(artifact(cli, "model.json"), w.ing.vocab);
      if (model.per_query.empty())
        throw MissingArtifactError("model has no query classifiers; retrain with "
                                   "trainer.train_query_classifiers = true");
      evals.push_back(evaluate_query_clf(ctx, queries, model.per_query, model.tfidf, opts));
    } else {
      throw ConfigError("unknown evaluation method: " + m);
    }
    if (evals.back().method == Method::ProbPred) prob_idx = static_cast<int>(evals.size()) - 1;
    if (evals.back().method == Method::BinaryPred)
      binary_idx = static_cast<int>(evals.size()) - 1;
  }

  std::vector<SignificanceResult> significance;
  if (prob_idx >= 0 && binary_idx >= 0) {
    const MethodEvaluation* prob_ev = &evals[prob_idx];
    const MethodEvaluation* binary_ev = &evals[binary_idx];
    const int iters = cfg_get(e, "randomization_iterations", 10000);
    std::vector<double> pf1, bf1;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      pf1.push_back(prob_ev->per_query[i].f1);
      bf1.push_back(binary_ev->per_query[i].f1);
    }
    significance.push_back(
        randomization_test(pf1, bf1, iters, mix_seed(cli.seed, 0x51f), "f1 prob-vs-binary"));
  }

  const std::string out = cli.format == "csv"
                              ? evaluation_to_csv(evals, cli.hash)
                              : evaluation_to_json(evals, significance, cli.hash);
  const std::string path = artifact(cli, "evaluation." + (cli.format == "csv" ? std::string("csv") : std::string("json")));
  write_file(path, out);
  std::printf("%s\n", out.c_str());
  return 0;
}

// per-term F1 (binary predictions vs gold on the evaluation docs) and gold
// term frequencies, for correlation and sweep reports
std::map<int, double> load_term_f1(const Cli& cli, const Workspace& w,
                                   const std::vector<int>& terms) {
  require_artifact(artifact(cli, "binary.tsv"), "binary predictions");
  const AssignmentMatrix bin = load_matrix(artifact(cli, "binary.tsv"), w.ing.vocab);
  return per_term_f1(w.gold, bin, eval_doc_ids(w), terms);
}

int cmd_correlate(const Cli& cli) {
  Workspace w = load_workspace(cli);
  const std::vector<QueryAst> queries = load_queries(cli, w);
  const EvalContext ctx{&w.ing.corpus, &w.ing.vocab, &w.gold, &w.split};
  require_artifact(artifact(cli, "prob.tsv"), "probabilistic predictions");
  MethodEvaluation ev = evaluate_prob(
      ctx, queries, load_matrix(artifact(cli, "prob.tsv"), w.ing.vocab), eval_options(cli));

  std::vector<int> terms;
  for (int t = 0; t < w.ing.vocab.size(); ++t) terms.push_back(t);
  const std::map<int, double> f1s = load_term_f1(cli, w, terms);
  const std::map<int, double> freqs =
      term_frequency(w.gold, all_doc_ids(w.ing.corpus), terms);
  attach_term_features(ev.per_query, queries, f1s, freqs);

  const json e = cfg_at(cli.config, "evaluation");
  const CorrelationReport rep = correlation_report(
      ev.per_query, cfg_get(e, "permutation_p", false),
      cfg_get(e, "permutation_iterations", 10000), mix_seed(cli.seed, 0xc07));
  const std::string out = cli.format == "csv" ? correlation_to_csv(rep, cli.hash)
                                              : correlation_to_json(rep, cli.hash);
  write_file(artifact(cli, "correlation." + (cli.format == "csv" ? std::string("csv") : std::string("json"))), out);
  std::printf("%s\n", out.c_str());
  return 0;
}

int cmd_sweep(const Cli& cli) {
  Workspace w = load_workspace(cli);
  const std::vector<QueryAst> queries = load_queries(cli, w);
  const EvalContext ctx{&w.ing.corpus, &w.ing.vocab, &w.gold, &w.split};
  require_artifact(artifact(cli, "prob.tsv"), "probabilistic predictions");
  const AssignmentMatrix prob = load_matrix(artifact(cli, "prob.tsv"), w.ing.vocab);

  std::set<int> term_set;
  for (const auto& q : queries)
    for (int t : query_terms(q.root)) term_set.insert(t);
  const std::vector<int> terms(term_set.begin(), term_set.end());
  const std::map<int, double> f1s = load_term_f1(cli, w, terms);

  std::vector<double> grid =
      cfg_get<std::vector<double>>(cfg_at(cli.config, "sweep"), "grid", {});
  if (grid.empty()) grid = default_sweep_grid(f1s);
  const MixedIndexingCurve curve =
      mixed_indexing_sweep(ctx, queries, prob, f1s, grid, eval_options(cli));

  write_file(artifact(cli, "curve.csv"), curve_to_csv(curve, cli.hash));
  if (cli.format == "svg") write_file(artifact(cli, "curve.svg"), curve_to_svg(curve, cli.hash));
  std::printf("%s\n", curve_to_csv(curve, cli.hash).c_str());
  return 0;
}

void write_synthetic_corpus(const IngestResult& ing, const std::string& path) {
  json vocab_line;
  for (const auto& e : ing.vocab.entries()) {
    json t;
    t["name"] = e.name;
    if (!e.external_id.empty()) t["external_id"] = e.external_id;
    vocab_line["vocabulary"].push_back(t);
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << vocab_line.dump() << "\n";
  for (const auto& d : ing.corpus.docs()) {
    json line;
    line["doc_id"] = d.doc_id;
    line["title"] = d.title;
    line["abstract"] = d.abstract_text;
    line["terms"] = json::array();
    for (int t : d.gold_terms) line["terms"].push_back(ing.vocab.name(t));
    out << line.dump() << "\n";
  }
}

int cmd_simulate(const Cli& cli) {
  const json s = cfg_at(cli.config, "simulate");
  const std::string kind = cfg_get<std::string>(s, "kind", "corpus");

  if (kind == "corpus") {
    SyntheticCorpusSpec spec;
    spec.seed = cli.seed;
    spec.n_docs = cfg_get(s, "n_docs", 1000);
    spec.text_signal_strength = cfg_get(s, "text_signal_strength", 0.9);
    spec.signature_tokens_per_term = cfg_get(s, "signature_tokens_per_term", 4);
    spec.background_tokens = cfg_get(s, "background_tokens", 50);
    for (const json& t : cfg_at(s, "terms")) {
      SyntheticTermSpec ts;
      ts.name = cfg_get<std::string>(t, "name", "");
      if (ts.name.empty()) throw ConfigError("simulate.terms[].name is required");
      ts.prevalence = cfg_get(t, "prevalence", 0.1);
      ts.signal_strength = cfg_get(t, "signal_strength", -1.0);
      spec.terms.push_back(ts);
    }
    for (const json& c : cfg_at(s, "correlations")) {
      PairCorrelation pc;
      pc.term_a = cfg_get<std::string>(c, "term_a", "");
      pc.term_b = cfg_get<std::string>(c, "term_b", "");
      pc.joint_prob = cfg_get(c, "joint_prob", 0.0);
      spec.correlations.push_back(pc);
    }
    if (spec.terms.empty()) throw ConfigError("simulate.terms must not be empty");
    const IngestResult ing = generate_corpus(spec);
    const std::string path = artifact(cli, "synthetic.jsonl");
    write_synthetic_corpus(ing, path);
    std::printf("wrote %s (%zu docs, %d terms, config %s)\n", path.c_str(),
                ing.corpus.size(), ing.vocab.size(), cli.hash.c_str());
    return 0;
  }

  if (kind == "noise") {
    Workspace w = load_workspace(cli, /*need_split=*/false);
    NoiseSpec spec;
    spec.seed = cli.seed;
    for (const auto& [name, rates] : cfg_at(s, "rates").items()) {
      const auto id = w.ing.vocab.find(name);
      if (!id) throw ConfigError("simulate.rates names unknown term: " + name);
      spec.per_term[*id] = {cfg_get(rates, "p01", 0.0), cfg_get(rates, "p10", 0.0)};
    }
    const AssignmentMatrix noisy = inject_noise(w.gold, spec);
    save_matrix(noisy, w.ing.vocab, artifact(cli, "noisy.tsv"), cli.hash);
    std::printf("wrote %s\n", artifact(cli, "noisy.tsv").c_str());
    return 0;
  }

  if (kind == "scores") {
    // probabilistic scores drawn around the gold labels, for exercising the
    // prob pipeline without training
    Workspace w = load_workspace(cli, /*need_split=*/false);
    BetaScoreSpec spec;
    spec.seed = cli.seed;
    spec.pos_alpha = cfg_get(s, "pos_alpha", spec.pos_alpha);
    spec.pos_beta = cfg_get(s, "pos_beta", spec.pos_beta);
    spec.neg_alpha = cfg_get(s, "neg_alpha", spec.neg_alpha);
    spec.neg_beta = cfg_get(s, "neg_beta", spec.neg_beta);
    spec.floor = cfg_get(cli.config, "floor", spec.floor);
    const AssignmentMatrix scores = draw_beta_scores(w.gold, w.ing.vocab.size(), spec);
    save_matrix(scores, w.ing.vocab, artifact(cli, "prob.tsv"), cli.hash);
    std::printf("wrote %s\n", artifact(cli, "prob.tsv").c_str());
    return 0;
  }

  if (kind == "venn") {
    VennDemoConfig cfg;
    cfg.n_docs = cfg_get(s, "n_docs", cfg.n_docs);
    cfg.core = cfg_get(s, "core", cfg.core);
    cfg.a_only = cfg_get(s, "a_only", cfg.a_only);
    cfg.b_only = cfg_get(s, "b_only", cfg.b_only);
    cfg.a_only_kept = cfg_get(s, "a_only_kept", cfg.a_only_kept);
    cfg.b_only_kept = cfg_get(s, "b_only_kept", cfg.b_only_kept);
    cfg.false_a = cfg_get(s, "false_a", cfg.false_a);
    cfg.false_b = cfg_get(s, "false_b", cfg.false_b);
    const VennDemoReport rep = venn_effect_demo(cfg);
    json out;
    out["config_hash"] = cli.hash;
    out["f1_a"] = rep.f1_a;
    out["f1_b"] = rep.f1_b;
    out["f1_and"] = rep.f1_and;
    out["f1_or"] = rep.f1_or;
    out["regions"] = rep.regions;
    write_file(artifact(cli, "venn.json"), out.dump(2) + "\n");
    std::printf("%s\n", out.dump(2).c_str());
    return 0;
  }

  throw ConfigError("simulate.kind must be corpus, noise, scores, or venn");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boolean and probabilistic semantic search over term assignments"};
  app.require_subcommand(1);

  Cli cli;
  app.add_option("--config", cli.config_path, "JSON config file");
  app.add_option("--out-dir", cli.out_dir, "artifact directory (overrides config)");
  app.add_option("--seed", cli.seed, "random seed (overrides config)")
      ->each([&cli](const std::string&) { cli.seed_given = true; });
  app.add_option("--threads", cli.threads, "OpenMP thread count (0 = default)");
  app.add_option("--format", cli.format, "report format: json, csv, or svg")
      ->check(CLI::IsMember({"json", "csv", "svg"}));

  std::string query_id, method = "prob";
  auto* ingest = app.add_subcommand("ingest", "read the corpus, persist vocab and gold matrix");
  auto* split = app.add_subcommand("split", "write a train/validation/test split");
  auto* train = app.add_subcommand("train", "train per-term classifiers and predict");
  auto* predict = app.add_subcommand("predict", "re-run prediction from a saved model");
  auto* search = app.add_subcommand("search", "run one query against the predictions");
  search->add_option("--query-id", query_id, "query id from the query file")->required();
  search->add_option("--method", method, "gold, binary, or prob");
  auto* evaluate = app.add_subcommand("evaluate", "per-query and macro metrics per method");
  auto* correlate = app.add_subcommand("correlate", "metric vs term-feature correlations");
  auto* sweep = app.add_subcommand("sweep", "mixed human/machine indexing curve");
  auto* simulate = app.add_subcommand("simulate", "synthetic corpus, noise, or overlap demo");

  CLI11_PARSE(app, argc, argv);

  try {
    finalize(cli);
    if (ingest->parsed()) return cmd_ingest(cli);
    if (split->parsed()) return cmd_split(cli);
    if (train->parsed()) return cmd_train(cli);
    if (predict->parsed()) return cmd_predict(cli);
    if (search->parsed()) return cmd_search(cli, query_id, method);
    if (evaluate->parsed()) return cmd_evaluate(cli);
    if (correlate->parsed()) return cmd_correlate(cli);
    if (sweep->parsed()) return cmd_sweep(cli);
    if (simulate->parsed()) return cmd_simulate(cli);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const MissingArtifactError& e) {
    std::fprintf(stderr, "missing artifact: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
  return 0;
}
