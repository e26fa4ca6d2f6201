#include "termsearch/noise.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "termsearch/errors.hpp"
#include "termsearch/rng.hpp"

namespace termsearch {

namespace {

std::uint64_t doc_hash(const std::string& id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

TermVector noisy_row(const TermVector& gold_row, const std::string& doc_id,
                     const NoiseSpec& spec) {
  TermVector out;
  out.kind = VectorKind::Binary;
  const std::uint64_t dh = doc_hash(doc_id);
  for (const auto& [term, rates] : spec.per_term) {
    const bool gold = gold_row.get(term) != 0.0;
    CounterRng rng(spec.seed, dh ^ (static_cast<std::uint64_t>(term) * 0x9e3779b97f4a7c15ULL));
    bool value = gold;
    if (gold && rng.next_bernoulli(rates.flip_pos_rate)) value = false;
    if (!gold && rng.next_bernoulli(rates.flip_neg_rate)) value = true;
    if (value) out.values.emplace_back(term, 1.0);
  }
  // terms outside the spec pass through untouched
  for (const auto& [term, v] : gold_row.values)
    if (v != 0.0 && !spec.per_term.count(term)) out.values.emplace_back(term, 1.0);
  out.sort_values();
  return out;
}

}  // namespace

AssignmentMatrix inject_noise_serial(const AssignmentMatrix& gold, const NoiseSpec& spec) {
  if (gold.kind != VectorKind::Binary)
    throw KindMismatchError("inject_noise requires a Binary matrix");
  for (const auto& [_, r] : spec.per_term)
    if (r.flip_pos_rate < 0 || r.flip_pos_rate > 1 || r.flip_neg_rate < 0 || r.flip_neg_rate > 1)
      throw ConfigError("noise rates must lie in [0, 1]");
  AssignmentMatrix out;
  out.kind = VectorKind::Binary;
  out.vocab_fingerprint = gold.vocab_fingerprint;
  for (const auto& [doc, row] : gold.rows) out.rows.emplace(doc, noisy_row(row, doc, spec));
  return out;
}

AssignmentMatrix inject_noise(const AssignmentMatrix& gold, const NoiseSpec& spec) {
  if (gold.kind != VectorKind::Binary)
    throw KindMismatchError("inject_noise requires a Binary matrix");
  for (const auto& [_, r] : spec.per_term)
    if (r.flip_pos_rate < 0 || r.flip_pos_rate > 1 || r.flip_neg_rate < 0 || r.flip_neg_rate > 1)
      throw ConfigError("noise rates must lie in [0, 1]");
  std::vector<std::pair<const std::string*, const TermVector*>> work;
  work.reserve(gold.rows.size());
  for (const auto& [doc, row] : gold.rows) work.emplace_back(&doc, &row);
  std::vector<TermVector> out_rows(work.size());
  const auto n = static_cast<std::int64_t>(work.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    out_rows[static_cast<std::size_t>(i)] =
        noisy_row(*work[static_cast<std::size_t>(i)].second,
                  *work[static_cast<std::size_t>(i)].first, spec);
  AssignmentMatrix out;
  out.kind = VectorKind::Binary;
  out.vocab_fingerprint = gold.vocab_fingerprint;
  for (std::size_t i = 0; i < work.size(); ++i)
    out.rows.emplace(*work[i].first, std::move(out_rows[i]));
  return out;
}

namespace {

// Marsaglia-Tsang for shape >= 1; boost for shape < 1.
double sample_gamma(CounterRng& rng, double shape) {
  if (shape < 1.0) {
    const double u = rng.next_double();
    return sample_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      // Box-Muller normal
      const double u1 = std::max(rng.next_double(), 1e-300);
      const double u2 = rng.next_double();
      x = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_double();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(std::max(u, 1e-300)) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_beta(CounterRng& rng, double a, double b) {
  const double x = sample_gamma(rng, a);
  const double y = sample_gamma(rng, b);
  return x / (x + y);
}

}  // namespace

AssignmentMatrix draw_beta_scores(const AssignmentMatrix& gold, int n_terms,
                                  const BetaScoreSpec& spec) {
  if (gold.kind != VectorKind::Binary)
    throw KindMismatchError("draw_beta_scores requires a Binary gold matrix");
  AssignmentMatrix out;
  out.kind = VectorKind::Probabilistic;
  out.vocab_fingerprint = gold.vocab_fingerprint;
  out.floor = spec.floor;
  for (const auto& [doc, row] : gold.rows) {
    const std::uint64_t dh = doc_hash(doc);
    TermVector& r = out.row_mut(doc);
    for (int t = 0; t < n_terms; ++t) {
      const bool pos = row.get(t) != 0.0;
      CounterRng rng(spec.seed, dh ^ (static_cast<std::uint64_t>(t) * 0x9e3779b97f4a7c15ULL));
      const double p = pos ? sample_beta(rng, spec.pos_alpha, spec.pos_beta)
                           : sample_beta(rng, spec.neg_alpha, spec.neg_beta);
      if (p >= spec.floor) r.values.emplace_back(t, p);
    }
    r.sort_values();
  }
  return out;
}

IngestResult generate_corpus(const SyntheticCorpusSpec& spec) {
  if (spec.n_docs < 1) throw Error("n_docs must be >= 1");
  for (const auto& t : spec.terms)
    if (t.prevalence <= 0.0 || t.prevalence >= 1.0)
      throw Error("prevalence must lie in (0, 1): " + t.name);

  IngestResult out;
  std::map<std::string, int> term_index;
  for (const auto& t : spec.terms) {
    term_index[t.name] = static_cast<int>(term_index.size());
    out.vocab.add_term(t.name);
  }

  // Coupled pairs sample from an explicit 2x2 joint; each term at most once.
  struct Pair {
    int a, b;
    double p11, p10, p01;
  };
  std::vector<Pair> pairs;
  std::set<int> paired;
  for (const auto& c : spec.correlations) {
    const int a = term_index.at(c.term_a), b = term_index.at(c.term_b);
    if (paired.count(a) || paired.count(b))
      throw Error("a term may appear in at most one correlation pair");
    const double pa = spec.terms[static_cast<std::size_t>(a)].prevalence;
    const double pb = spec.terms[static_cast<std::size_t>(b)].prevalence;
    if (c.joint_prob > std::min(pa, pb) + 1e-12 ||
        c.joint_prob < std::max(0.0, pa + pb - 1.0) - 1e-12)
      throw InfeasibleCorrelationError("requested overlap for " + c.term_a + "/" + c.term_b +
                                       " violates Frechet bounds");
    pairs.push_back({a, b, c.joint_prob, pa - c.joint_prob, pb - c.joint_prob});
    paired.insert(a);
    paired.insert(b);
  }

  const int n_terms = static_cast<int>(spec.terms.size());
  for (int d = 0; d < spec.n_docs; ++d) {
    CounterRng rng(spec.seed, static_cast<std::uint64_t>(d));
    DocumentRecord rec;
    rec.doc_id = "doc" + std::to_string(d);
    rec.title = "synthetic document " + std::to_string(d);

    std::vector<bool> present(static_cast<std::size_t>(n_terms), false);
    for (const auto& p : pairs) {
      const double u = rng.next_double();
      if (u < p.p11) {
        present[static_cast<std::size_t>(p.a)] = present[static_cast<std::size_t>(p.b)] = true;
      } else if (u < p.p11 + p.p10) {
        present[static_cast<std::size_t>(p.a)] = true;
      } else if (u < p.p11 + p.p10 + p.p01) {
        present[static_cast<std::size_t>(p.b)] = true;
      }
    }
    for (int t = 0; t < n_terms; ++t)
      if (!paired.count(t))
        present[static_cast<std::size_t>(t)] =
            rng.next_bernoulli(spec.terms[static_cast<std::size_t>(t)].prevalence);

    std::string text;
    for (int t = 0; t < n_terms; ++t) {
      const auto& ts = spec.terms[static_cast<std::size_t>(t)];
      const double s = ts.signal_strength >= 0 ? ts.signal_strength : spec.text_signal_strength;
      if (present[static_cast<std::size_t>(t)]) {
        rec.gold_terms.insert(t);
        for (int k = 0; k < spec.signature_tokens_per_term; ++k)
          if (rng.next_bernoulli(s))
            text += "term" + std::to_string(t) + "sig" + std::to_string(k) + " ";
      }
    }
    for (int k = 0; k < spec.background_tokens; ++k)
      if (rng.next_bernoulli(0.3)) text += "bg" + std::to_string(k) + " ";
    rec.abstract_text = std::move(text);
    out.corpus.add(std::move(rec));
  }
  return out;
}

VennDemoReport venn_effect_demo(const VennDemoConfig& cfg) {
  if (cfg.core + cfg.a_only + cfg.b_only + cfg.false_a + cfg.false_b > cfg.n_docs)
    throw Error("venn demo regions exceed n_docs");
  if (cfg.a_only_kept > cfg.a_only || cfg.b_only_kept > cfg.b_only)
    throw Error("kept counts exceed their regions");

  // lay out doc index ranges: [core][a_only][b_only][false_a][false_b][rest]
  const int core_end = cfg.core;
  const int a_only_end = core_end + cfg.a_only;
  const int b_only_end = a_only_end + cfg.b_only;
  const int false_a_end = b_only_end + cfg.false_a;
  const int false_b_end = false_a_end + cfg.false_b;

  std::set<std::string> gold_a, gold_b, pred_a, pred_b;
  auto id = [](int i) { return "d" + std::to_string(i); };
  for (int i = 0; i < core_end; ++i) {
    gold_a.insert(id(i));
    gold_b.insert(id(i));
    pred_a.insert(id(i));  // intersection preserved exactly
    pred_b.insert(id(i));
  }
  for (int i = core_end; i < a_only_end; ++i) {
    gold_a.insert(id(i));
    if (i - core_end < cfg.a_only_kept) pred_a.insert(id(i));
  }
  for (int i = a_only_end; i < b_only_end; ++i) {
    gold_b.insert(id(i));
    if (i - a_only_end < cfg.b_only_kept) pred_b.insert(id(i));
  }
  for (int i = b_only_end; i < false_a_end; ++i) pred_a.insert(id(i));
  for (int i = false_a_end; i < false_b_end; ++i) pred_b.insert(id(i));

  auto intersect = [](const std::set<std::string>& x, const std::set<std::string>& y) {
    std::set<std::string> out;
    for (const auto& d : x)
      if (y.count(d)) out.insert(d);
    return out;
  };
  auto unite = [](const std::set<std::string>& x, const std::set<std::string>& y) {
    std::set<std::string> out = x;
    out.insert(y.begin(), y.end());
    return out;
  };

  VennDemoReport rep;
  rep.f1_a = classification_metrics(pred_a, gold_a).f1;
  rep.f1_b = classification_metrics(pred_b, gold_b).f1;
  rep.f1_and = classification_metrics(intersect(pred_a, pred_b), intersect(gold_a, gold_b)).f1;
  rep.f1_or = classification_metrics(unite(pred_a, pred_b), unite(gold_a, gold_b)).f1;
  rep.regions = {
      {"gold_a_and_b", cfg.core},
      {"gold_a_only", cfg.a_only},
      {"gold_b_only", cfg.b_only},
      {"pred_a_and_b", static_cast<int>(intersect(pred_a, pred_b).size())},
      {"pred_a_only", static_cast<int>(pred_a.size() - intersect(pred_a, pred_b).size())},
      {"pred_b_only", static_cast<int>(pred_b.size() - intersect(pred_a, pred_b).size())},
      {"outside", cfg.n_docs - static_cast<int>(unite(unite(gold_a, gold_b),
                                                      unite(pred_a, pred_b)).size())},
  };
  return rep;
}

}  // namespace termsearch
