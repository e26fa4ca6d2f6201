#include "termsearch/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "json.hpp"
#include "termsearch/errors.hpp"
#include "termsearch/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace termsearch {

using nlohmann::json;

double sigmoid(double z) {
  if (z >= 0) {
    const double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double LinearClassifier::decision(const FeatureVector& x) const {
  double z = bias;
  for (const auto& [id, v] : x)
    if (id < static_cast<int>(weights.size())) z += weights[id] * v;
  return z;
}

double LinearClassifier::predict_proba(const FeatureVector& x) const {
  return sigmoid(decision(x));
}

namespace {
constexpr double kProbEps = 1e-12;

double clamp_prob(double p) { return std::min(1.0 - kProbEps, std::max(kProbEps, p)); }
}  // namespace

double example_loss(double z, int label, LossKind kind, double alpha_pos,
                    double alpha_neg, double gamma) {
  const double p = sigmoid(z);
  const double p_t = clamp_prob(label ? p : 1.0 - p);
  const double a_t = label ? alpha_pos : alpha_neg;
  if (kind == LossKind::WeightedCE) return -a_t * std::log(p_t);
  return -a_t * std::pow(1.0 - p_t, gamma) * std::log(p_t);
}

double example_dloss_dz(double z, int label, LossKind kind, double alpha_pos,
                        double alpha_neg, double gamma) {
  const double p = sigmoid(z);
  const double a_t = label ? alpha_pos : alpha_neg;
  if (kind == LossKind::WeightedCE) return a_t * (p - (label ? 1.0 : 0.0));
  const double p_t = clamp_prob(label ? p : 1.0 - p);
  const double one_m = 1.0 - p_t;
  const double dl_dpt =
      a_t * (gamma * std::pow(one_m, gamma - 1.0) * std::log(p_t) - std::pow(one_m, gamma) / p_t);
  const double dpt_dz = label ? p * (1.0 - p) : -p * (1.0 - p);
  return dl_dpt * dpt_dz;
}

std::pair<double, double> weighted_ce_alphas(std::size_t n_pos, std::size_t n_neg) {
  const double n = static_cast<double>(n_pos + n_neg);
  return {n_pos ? n / (2.0 * static_cast<double>(n_pos)) : 0.0,
          n_neg ? n / (2.0 * static_cast<double>(n_neg)) : 0.0};
}

TrainingSubset fair_share_upsample(const std::vector<std::string>& train_ids,
                                   const std::map<int, std::vector<std::string>>& positives_per_class,
                                   int n_classes, double fraction, std::uint64_t seed) {
  if (n_classes < 1) throw Error("n_classes must be >= 1");
  if (train_ids.empty()) throw Error("empty training set");
  TrainingSubset out;
  out.doc_ids = train_ids;
  out.base_size = train_ids.size();
  out.n_classes = n_classes;
  out.fair_share_fraction = fraction;
  const double threshold =
      fraction * static_cast<double>(train_ids.size()) / static_cast<double>(n_classes);
  const auto target = static_cast<std::size_t>(std::ceil(threshold));
  for (const auto& [cls, positives] : positives_per_class) {
    if (static_cast<double>(positives.size()) >= threshold) continue;
    if (positives.empty()) {
      out.classes_without_positives.push_back(cls);
      continue;
    }
    CounterRng rng(seed, static_cast<std::uint64_t>(cls) + 1);
    for (std::size_t count = positives.size(); count < target; ++count)
      out.doc_ids.push_back(positives[rng.next_below(positives.size())]);
  }
  return out;
}

LinearClassifier train_classifier(const std::vector<FeatureVector>& features,
                                  const std::vector<int>& labels, int n_features,
                                  LossKind loss, const Hyperparams& hp,
                                  std::uint64_t seed, const std::string& target) {
  if (features.size() != labels.size()) throw Error("features/labels size mismatch");
  const std::size_t n = features.size();
  const std::size_t n_pos = static_cast<std::size_t>(
      std::count(labels.begin(), labels.end(), 1));
  if (n_pos == 0 || n_pos == n)
    throw DegenerateLabelsError("all labels identical for target " + target);

  double alpha_pos, alpha_neg;
  if (loss == LossKind::WeightedCE) {
    std::tie(alpha_pos, alpha_neg) = weighted_ce_alphas(n_pos, n - n_pos);
  } else {
    alpha_pos = hp.alpha;
    alpha_neg = 1.0 - hp.alpha;
  }

  LinearClassifier clf;
  clf.weights.assign(static_cast<std::size_t>(n_features), 0.0);
  clf.bias = 0.0;
  clf.target = target;
  clf.loss_kind = loss;
  clf.hyperparams = hp;
  clf.seed = seed;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  double prev_epoch_loss = std::numeric_limits<double>::infinity();
  std::vector<double> grad(clf.weights.size());
  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    CounterRng rng(seed, static_cast<std::uint64_t>(epoch) + 0x9e37ULL);
    for (std::size_t i = n; i > 1; --i)
      std::swap(order[i - 1], order[rng.next_below(i)]);

    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(hp.batch_size)) {
      const std::size_t end = std::min(n, start + static_cast<std::size_t>(hp.batch_size));
      const double inv_b = 1.0 / static_cast<double>(end - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      double grad_bias = 0.0;
      for (std::size_t i = start; i < end; ++i) {
        const std::size_t idx = order[i];
        const double z = clf.decision(features[idx]);
        epoch_loss += example_loss(z, labels[idx], loss, alpha_pos, alpha_neg, hp.gamma);
        const double g = example_dloss_dz(z, labels[idx], loss, alpha_pos, alpha_neg, hp.gamma);
        for (const auto& [id, v] : features[idx]) grad[static_cast<std::size_t>(id)] += g * v;
        grad_bias += g;
      }
      for (std::size_t j = 0; j < clf.weights.size(); ++j)
        clf.weights[j] -= hp.learning_rate * (grad[j] * inv_b + hp.l2_lambda * clf.weights[j]);
      clf.bias -= hp.learning_rate * grad_bias * inv_b;
    }
    epoch_loss /= static_cast<double>(n);
    if (!std::isfinite(epoch_loss)) throw DivergedError("non-finite loss for " + target);
    if (std::abs(prev_epoch_loss - epoch_loss) < hp.loss_delta_tol) break;
    prev_epoch_loss = epoch_loss;
  }
  for (double w : clf.weights)
    if (!std::isfinite(w)) throw DivergedError("non-finite weight for " + target);
  return clf;
}

AssignmentMatrix predict_matrix(const std::map<int, LinearClassifier>& per_term,
                                const TfidfModel& tfidf, const Corpus& corpus,
                                const std::vector<std::string>& doc_ids,
                                const TermVocabulary& vocab, double floor) {
  for (const auto& [term, clf] : per_term)
    if (static_cast<int>(clf.weights.size()) != tfidf.n_features())
      throw VocabularyMismatchError("classifier for term " + std::to_string(term) +
                                    " does not match the tfidf model");
  AssignmentMatrix m;
  m.kind = VectorKind::Probabilistic;
  m.vocab_fingerprint = vocab.fingerprint();
  m.floor = floor;
  std::vector<TermVector> rows(doc_ids.size());
  const auto n = static_cast<std::int64_t>(doc_ids.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    const FeatureVector x = tfidf.featurize(corpus.doc(doc_ids[static_cast<std::size_t>(i)]));
    TermVector& row = rows[static_cast<std::size_t>(i)];
    row.kind = VectorKind::Probabilistic;
    for (const auto& [term, clf] : per_term) {
      const double p = clf.predict_proba(x);
      if (p >= floor) row.values.emplace_back(term, p);
    }
  }
  for (std::size_t i = 0; i < doc_ids.size(); ++i) m.rows.emplace(doc_ids[i], std::move(rows[i]));
  return m;
}

AssignmentMatrix binarize_matrix(const AssignmentMatrix& m, double threshold) {
  AssignmentMatrix out;
  out.kind = VectorKind::Binary;
  out.vocab_fingerprint = m.vocab_fingerprint;
  for (const auto& [doc, row] : m.rows) {
    TermVector& r = out.row_mut(doc);
    for (const auto& [term, p] : row.values)
      if (p >= threshold) r.values.emplace_back(term, 1.0);
    r.sort_values();
  }
  return out;
}

LinearClassifier train_query_classifier(const QueryAst& query,
                                        const AssignmentMatrix& gold,
                                        const Corpus& corpus,
                                        const std::vector<std::string>& doc_ids,
                                        const TfidfModel& tfidf, LossKind loss,
                                        const Hyperparams& hp, std::uint64_t seed) {
  std::vector<FeatureVector> feats;
  std::vector<int> labels;
  feats.reserve(doc_ids.size());
  for (const auto& id : doc_ids) {
    feats.push_back(tfidf.featurize(corpus.doc(id)));
    labels.push_back(eval_boolean(query.root, gold.row(id)) ? 1 : 0);
  }
  return train_classifier(feats, labels, tfidf.n_features(), loss, hp, seed, query.query_id);
}

namespace {

json classifier_to_json(const LinearClassifier& c) {
  return json{{"weights", c.weights},
              {"bias", c.bias},
              {"target", c.target},
              {"loss", c.loss_kind == LossKind::WeightedCE ? "weighted_ce" : "focal"},
              {"hyperparams",
               {{"learning_rate", c.hyperparams.learning_rate},
                {"epochs", c.hyperparams.epochs},
                {"batch_size", c.hyperparams.batch_size},
                {"l2_lambda", c.hyperparams.l2_lambda},
                {"gamma", c.hyperparams.gamma},
                {"alpha", c.hyperparams.alpha}}},
              {"seed", c.seed}};
}

LinearClassifier classifier_from_json(const json& j) {
  LinearClassifier c;
  c.weights = j.at("weights").get<std::vector<double>>();
  c.bias = j.at("bias").get<double>();
  c.target = j.value("target", "");
  c.loss_kind = j.value("loss", "weighted_ce") == "focal" ? LossKind::Focal : LossKind::WeightedCE;
  const auto& h = j.at("hyperparams");
  c.hyperparams.learning_rate = h.value("learning_rate", 0.5);
  c.hyperparams.epochs = h.value("epochs", 100);
  c.hyperparams.batch_size = h.value("batch_size", 64);
  c.hyperparams.l2_lambda = h.value("l2_lambda", 1e-4);
  c.hyperparams.gamma = h.value("gamma", 2.0);
  c.hyperparams.alpha = h.value("alpha", 0.25);
  c.seed = j.value("seed", 0ULL);
  return c;
}

}  // namespace

void save_model(const IndexerModel& model, const TermVocabulary& vocab,
                const std::string& path, const std::string& config_hash) {
  json tokens = json::object();
  for (const auto& [tok, id] : model.tfidf.vocabulary_map()) tokens[tok] = id;
  json per_term = json::object();
  for (const auto& [term, clf] : model.per_term)
    per_term[vocab.name(term)] = classifier_to_json(clf);
  json per_query = json::object();
  for (const auto& [qid, clf] : model.per_query) per_query[qid] = classifier_to_json(clf);
  json j{{"format_version", 1},
         {"tfidf", {{"tokens", tokens}, {"idf", model.tfidf.idf()}}},
         {"per_term", per_term},
         {"per_query", per_query},
         {"seed", model.seed}};
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << j.dump() << "\n";
}

IndexerModel load_model(const std::string& path, const TermVocabulary& vocab) {
  std::ifstream f(path);
  if (!f) throw MissingArtifactError("cannot open model file: " + path);
  json j = json::parse(f);
  IndexerModel m;
  std::unordered_map<std::string, int> tokens;
  for (const auto& [tok, id] : j.at("tfidf").at("tokens").items())
    tokens[tok] = id.get<int>();
  m.tfidf.set_state(std::move(tokens), j.at("tfidf").at("idf").get<std::vector<double>>());
  for (const auto& [name, cj] : j.at("per_term").items()) {
    auto id = vocab.find(name);
    if (!id) throw UnknownTermError(name);
    m.per_term.emplace(*id, classifier_from_json(cj));
  }
  for (const auto& [qid, cj] : j.at("per_query").items())
    m.per_query.emplace(qid, classifier_from_json(cj));
  m.seed = j.value("seed", 0ULL);
  return m;
}

}  // namespace termsearch
