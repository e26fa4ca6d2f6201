#include "termsearch/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "termsearch/errors.hpp"
#include "termsearch/logic.hpp"

namespace termsearch {

using nlohmann::json;

std::string method_name(Method m) {
  switch (m) {
    case Method::Gold: return "gold";
    case Method::BinaryPred: return "binary";
    case Method::ProbPred: return "prob";
    case Method::QueryClf: return "query_clf";
  }
  return "?";
}

namespace {

void check_ctx(const EvalContext& ctx) {
  if (!ctx.corpus || !ctx.vocab || !ctx.gold || !ctx.split)
    throw MissingArtifactError("evaluation context is incomplete");
  if (ctx.gold->kind != VectorKind::Binary)
    throw KindMismatchError("gold matrix must be Binary");
}

std::map<std::string, double> score_with_matrix(const QueryAst& q,
                                                const AssignmentMatrix& m,
                                                const std::vector<std::string>& docs) {
  std::vector<const TermVector*> rows;
  rows.reserve(docs.size());
  for (const auto& d : docs) rows.push_back(&m.row(d));
  const std::vector<double> scores = score_documents(q.root, rows);
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < docs.size(); ++i) out[docs[i]] = scores[i];
  return out;
}

std::vector<std::string> ranked_docs(const std::map<std::string, double>& scores) {
  std::vector<std::pair<double, const std::string*>> order;
  order.reserve(scores.size());
  for (const auto& [d, s] : scores) order.emplace_back(s, &d);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return *a.second < *b.second;  // deterministic tie break
  });
  std::vector<std::string> out;
  out.reserve(order.size());
  for (const auto& [_, d] : order) out.push_back(*d);
  return out;
}

QueryEvalReport macro_average(const std::vector<QueryEvalReport>& reports) {
  QueryEvalReport m;
  m.query_id = "macro";
  if (reports.empty()) return m;
  const double n = static_cast<double>(reports.size());
  double map_sum = 0, p10_sum = 0, p50_sum = 0, r1000_sum = 0;
  bool has_ranking = true;
  for (const auto& r : reports) {
    m.precision += r.precision / n;
    m.recall += r.recall / n;
    m.f1 += r.f1 / n;
    if (r.map) {
      map_sum += *r.map / n;
      p10_sum += r.p_at_10.value_or(0.0) / n;
      p50_sum += r.p_at_50.value_or(0.0) / n;
      r1000_sum += r.r_at_1000.value_or(0.0) / n;
    } else {
      has_ranking = false;
    }
  }
  if (has_ranking) {
    m.map = map_sum;
    m.p_at_10 = p10_sum;
    m.p_at_50 = p50_sum;
    m.r_at_1000 = r1000_sum;
  }
  return m;
}

using ScoreFn = std::function<std::map<std::string, double>(
    const QueryAst&, const std::vector<std::string>&)>;

MethodEvaluation evaluate_scored(const EvalContext& ctx,
                                 const std::vector<QueryAst>& queries,
                                 const ScoreFn& score_fn, Method method,
                                 const EvalOptions& opts) {
  check_ctx(ctx);
  MethodEvaluation ev;
  ev.method = method;

  std::vector<std::map<std::string, double>> val_scores, test_scores;
  std::vector<std::set<std::string>> rel_val, rel_test;
  for (const auto& q : queries) {
    val_scores.push_back(score_fn(q, ctx.split->validation));
    test_scores.push_back(score_fn(q, ctx.split->test));
    rel_val.push_back(ground_truth_relevance(q, *ctx.gold, ctx.split->validation));
    rel_test.push_back(ground_truth_relevance(q, *ctx.gold, ctx.split->test));
  }

  double global_threshold = 0.0;
  if (!opts.per_query_threshold) {
    // pool validation scores across queries with composite keys
    std::map<std::string, double> pooled;
    std::set<std::string> pooled_rel;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      for (const auto& [d, s] : val_scores[i]) pooled[queries[i].query_id + "\x1f" + d] = s;
      for (const auto& d : rel_val[i]) pooled_rel.insert(queries[i].query_id + "\x1f" + d);
    }
    global_threshold = calibrate_threshold(pooled, pooled_rel).threshold;
  }

  for (std::size_t i = 0; i < queries.size(); ++i) {
    QueryEvalReport rep;
    rep.query_id = queries[i].query_id;
    const double theta = opts.per_query_threshold
                             ? calibrate_threshold(val_scores[i], rel_val[i]).threshold
                             : global_threshold;
    rep.threshold_used = theta;
    std::set<std::string> retrieved;
    for (const auto& [d, s] : test_scores[i])
      if (s >= theta) retrieved.insert(d);
    const PrfMetrics prf = classification_metrics(retrieved, rel_test[i]);
    rep.precision = prf.precision;
    rep.recall = prf.recall;
    rep.f1 = prf.f1;
    const RankingMetrics rm =
        ranking_metrics(ranked_docs(test_scores[i]), rel_test[i], opts.precision_ks, opts.recall_k);
    rep.map = rm.average_precision;
    auto p_at = [&rm](int k) {
      auto it = rm.precision_at.find(k);
      return it == rm.precision_at.end() ? 0.0 : it->second;
    };
    rep.p_at_10 = p_at(10);
    rep.p_at_50 = p_at(50);
    rep.r_at_1000 = rm.recall_at_k;
    ev.per_query.push_back(std::move(rep));
  }
  ev.macro = macro_average(ev.per_query);
  return ev;
}

}  // namespace

MethodEvaluation evaluate_gold(const EvalContext& ctx, const std::vector<QueryAst>& queries,
                               const EvalOptions& opts) {
  check_ctx(ctx);
  return evaluate_scored(
      ctx, queries,
      [&ctx](const QueryAst& q, const std::vector<std::string>& docs) {
        return score_with_matrix(q, *ctx.gold, docs);
      },
      Method::Gold, opts);
}

MethodEvaluation evaluate_binary(const EvalContext& ctx, const std::vector<QueryAst>& queries,
                                 const AssignmentMatrix& binary_pred,
                                 const EvalOptions& opts) {
  check_ctx(ctx);
  if (binary_pred.kind != VectorKind::Binary)
    throw KindMismatchError("evaluate_binary requires a Binary matrix");
  MethodEvaluation ev;
  ev.method = Method::BinaryPred;
  for (const auto& q : queries) {
    QueryEvalReport rep;
    rep.query_id = q.query_id;
    const std::set<std::string> retrieved =
        ground_truth_relevance(q, binary_pred, ctx.split->test);
    const std::set<std::string> relevant = ground_truth_relevance(q, *ctx.gold, ctx.split->test);
    const PrfMetrics prf = classification_metrics(retrieved, relevant);
    rep.precision = prf.precision;
    rep.recall = prf.recall;
    rep.f1 = prf.f1;
    ev.per_query.push_back(std::move(rep));
  }
  ev.macro = macro_average(ev.per_query);
  return ev;
}

MethodEvaluation evaluate_prob(const EvalContext& ctx, const std::vector<QueryAst>& queries,
                               const AssignmentMatrix& prob_pred, const EvalOptions& opts) {
  return evaluate_scored(
      ctx, queries,
      [&prob_pred](const QueryAst& q, const std::vector<std::string>& docs) {
        return score_with_matrix(q, prob_pred, docs);
      },
      Method::ProbPred, opts);
}

MethodEvaluation evaluate_query_clf(const EvalContext& ctx,
                                    const std::vector<QueryAst>& queries,
                                    const std::map<std::string, LinearClassifier>& per_query,
                                    const TfidfModel& tfidf, const EvalOptions& opts) {
  check_ctx(ctx);
  // featurize each doc once, shared across queries
  std::map<std::string, FeatureVector> features;
  auto add_docs = [&](const std::vector<std::string>& docs) {
    for (const auto& d : docs) features.try_emplace(d);
  };
  add_docs(ctx.split->validation);
  add_docs(ctx.split->test);
  {
    std::vector<std::pair<const std::string*, FeatureVector*>> work;
    work.reserve(features.size());
    for (auto& [d, fv] : features) work.emplace_back(&d, &fv);
    const auto n = static_cast<std::int64_t>(work.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i)
      *work[static_cast<std::size_t>(i)].second =
          tfidf.featurize(ctx.corpus->doc(*work[static_cast<std::size_t>(i)].first));
  }
  return evaluate_scored(
      ctx, queries,
      [&](const QueryAst& q, const std::vector<std::string>& docs) {
        auto it = per_query.find(q.query_id);
        if (it == per_query.end())
          throw MissingArtifactError("no query classifier for " + q.query_id);
        std::map<std::string, double> out;
        for (const auto& d : docs) out[d] = it->second.predict_proba(features.at(d));
        return out;
      },
      Method::QueryClf, opts);
}

std::map<int, double> per_term_f1(const AssignmentMatrix& gold,
                                  const AssignmentMatrix& binary_pred,
                                  const std::vector<std::string>& docs,
                                  const std::vector<int>& terms) {
  std::map<int, double> out;
  for (int t : terms) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (const auto& d : docs) {
      const bool g = gold.get(d, t) != 0.0;
      const bool p = binary_pred.get(d, t) != 0.0;
      if (g && p) ++tp;
      else if (!g && p) ++fp;
      else if (g && !p) ++fn;
    }
    const double denom = static_cast<double>(2 * tp + fp + fn);
    out[t] = denom > 0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
  }
  return out;
}

std::map<int, double> term_frequency(const AssignmentMatrix& gold,
                                     const std::vector<std::string>& docs,
                                     const std::vector<int>& terms) {
  std::map<int, double> out;
  for (int t : terms) out[t] = 0.0;
  for (const auto& d : docs)
    for (int t : terms)
      if (gold.get(d, t) != 0.0) out[t] += 1.0;
  return out;
}

TermFeatureAggregates term_feature_table(const QueryAst& query,
                                         const std::map<int, double>& f1_by_term,
                                         const std::map<int, double>& freq_by_term) {
  const std::vector<int> terms = query_terms(query.root);
  if (terms.empty()) throw Error("query has no term leaves: " + query.query_id);
  TermFeatureAggregates agg;
  agg.worst_f1 = 1.0;
  agg.best_f1 = 0.0;
  agg.lowest_term_freq = std::numeric_limits<double>::infinity();
  agg.highest_term_freq = 0.0;
  double f1_sum = 0.0;
  for (int t : terms) {
    auto f1_it = f1_by_term.find(t);
    auto fr_it = freq_by_term.find(t);
    if (f1_it == f1_by_term.end() || fr_it == freq_by_term.end())
      throw MissingTermScoreError("no term-level score for term id " + std::to_string(t));
    agg.worst_f1 = std::min(agg.worst_f1, f1_it->second);
    agg.best_f1 = std::max(agg.best_f1, f1_it->second);
    f1_sum += f1_it->second;
    agg.lowest_term_freq = std::min(agg.lowest_term_freq, fr_it->second);
    agg.highest_term_freq = std::max(agg.highest_term_freq, fr_it->second);
  }
  agg.avg_f1 = f1_sum / static_cast<double>(terms.size());
  const QueryShape shape = query_shape(query);
  agg.n_terms = shape.n_terms;
  agg.n_and = shape.n_and;
  agg.n_or = shape.n_or;
  return agg;
}

void attach_term_features(std::vector<QueryEvalReport>& reports,
                          const std::vector<QueryAst>& queries,
                          const std::map<int, double>& f1_by_term,
                          const std::map<int, double>& freq_by_term) {
  if (reports.size() != queries.size())
    throw LengthMismatchError("reports/queries size mismatch");
  for (std::size_t i = 0; i < reports.size(); ++i) {
    reports[i].term_features = term_feature_table(queries[i], f1_by_term, freq_by_term);
    reports[i].has_term_features = true;
  }
}

namespace {

double feature_value(const TermFeatureAggregates& f, std::size_t idx) {
  switch (idx) {
    case 0: return f.worst_f1;
    case 1: return f.avg_f1;
    case 2: return f.best_f1;
    case 3: return f.highest_term_freq;
    case 4: return f.lowest_term_freq;
    case 5: return f.n_terms;
    case 6: return f.n_and;
    default: return f.n_or;
  }
}

}  // namespace

CorrelationReport correlation_report(const std::vector<QueryEvalReport>& reports,
                                     bool with_permutation_p, int permutation_iterations,
                                     std::uint64_t seed) {
  if (reports.size() < 3) throw Error("correlation_report requires >= 3 queries");
  for (const auto& r : reports)
    if (!r.has_term_features)
      throw MissingTermScoreError("report lacks term features: " + r.query_id);
  CorrelationReport rep;
  rep.feature_names = {"worst_f1", "avg_f1",  "best_f1", "highest_freq",
                       "lowest_freq", "n_terms", "n_and",   "n_or"};
  rep.metric_names = {"precision", "recall"};
  for (std::size_t mi = 0; mi < rep.metric_names.size(); ++mi) {
    std::vector<double> y;
    for (const auto& r : reports) y.push_back(mi == 0 ? r.precision : r.recall);
    std::vector<CorrelationCell> row;
    std::vector<double> perm_row;
    for (std::size_t fi = 0; fi < rep.feature_names.size(); ++fi) {
      std::vector<double> x;
      for (const auto& r : reports) x.push_back(feature_value(r.term_features, fi));
      CorrelationCell cell;
      double perm_p = 1.0;
      try {
        const PearsonResult pr = pearson(x, y);
        cell.r = pr.r;
        cell.p_value = pr.p_value;
        cell.significant_05 = pr.p_value < 0.05;
        cell.significant_10 = pr.p_value >= 0.05 && pr.p_value < 0.1;
        if (with_permutation_p)
          perm_p = pearson_permutation_p(x, y, permutation_iterations,
                                         seed + mi * 131 + fi);
      } catch (const ZeroVarianceError&) {
        cell.zero_variance = true;  // flagged per cell, not fatal
      }
      row.push_back(cell);
      perm_row.push_back(perm_p);
    }
    rep.cells.push_back(std::move(row));
    if (with_permutation_p) rep.permutation_p_values.push_back(std::move(perm_row));
  }
  return rep;
}

std::vector<double> default_sweep_grid(const std::map<int, double>& f1_by_term) {
  std::set<double> grid;
  for (int i = 0; i <= 20; ++i) grid.insert(static_cast<double>(i) * 0.05);
  double max_f1 = 0.0;
  for (const auto& [_, f1] : f1_by_term) {
    grid.insert(f1);
    max_f1 = std::max(max_f1, f1);
  }
  grid.insert(max_f1 + 0.01);  // above every term: the all-manual endpoint
  return {grid.begin(), grid.end()};
}

MixedIndexingCurve mixed_indexing_sweep(const EvalContext& ctx,
                                        const std::vector<QueryAst>& queries,
                                        const AssignmentMatrix& prob_pred,
                                        const std::map<int, double>& f1_by_term,
                                        const std::vector<double>& grid,
                                        const EvalOptions& opts) {
  check_ctx(ctx);
  if (grid.empty()) throw EmptyGridError("mixed_indexing_sweep: empty threshold grid");
  std::set<int> term_set;
  for (const auto& q : queries)
    for (int t : query_terms(q.root)) term_set.insert(t);
  for (int t : term_set)
    if (!f1_by_term.count(t))
      throw MissingTermScoreError("no F1 for term id " + std::to_string(t));

  // gold-positive instance counts per term over the whole corpus
  std::map<int, double> gold_positives;
  for (int t : term_set) gold_positives[t] = 0.0;
  double total_instances = 0.0;
  for (const auto& [doc, row] : ctx.gold->rows)
    for (const auto& [t, v] : row.values)
      if (v != 0.0 && term_set.count(t)) {
        gold_positives[t] += 1.0;
        total_instances += 1.0;
      }

  std::vector<std::string> eval_docs = ctx.split->validation;
  eval_docs.insert(eval_docs.end(), ctx.split->test.begin(), ctx.split->test.end());

  MixedIndexingCurve curve;
  for (double t : grid) {
    std::set<int> replaced;
    for (int term : term_set)
      if (f1_by_term.at(term) < t) replaced.insert(term);

    AssignmentMatrix hybrid;
    hybrid.kind = VectorKind::Probabilistic;
    hybrid.vocab_fingerprint = prob_pred.vocab_fingerprint;
    for (const auto& d : eval_docs) {
      TermVector& row = hybrid.row_mut(d);
      for (int term : term_set) {
        const double v = replaced.count(term) ? ctx.gold->get(d, term)
                                              : prob_pred.get(d, term);
        if (v != 0.0) row.values.emplace_back(term, v);
      }
      row.sort_values();
    }

    const MethodEvaluation ev = evaluate_prob(ctx, queries, hybrid, opts);
    MixedIndexingPoint pt;
    pt.t = t;
    pt.avg_precision = ev.macro.precision;
    pt.avg_recall = ev.macro.recall;
    pt.avg_f1 = ev.macro.f1;
    double manual = 0.0;
    for (int term : replaced) manual += gold_positives.at(term);
    pt.manual_fraction = total_instances > 0 ? manual / total_instances : 0.0;
    curve.points.push_back(pt);
  }
  return curve;
}

namespace {

json report_to_json(const QueryEvalReport& r) {
  json j{{"query_id", r.query_id},
         {"precision", r.precision},
         {"recall", r.recall},
         {"f1", r.f1}};
  if (r.map) j["map"] = *r.map;
  if (r.p_at_10) j["p_at_10"] = *r.p_at_10;
  if (r.p_at_50) j["p_at_50"] = *r.p_at_50;
  if (r.r_at_1000) j["r_at_1000"] = *r.r_at_1000;
  if (r.threshold_used) j["threshold"] = *r.threshold_used;
  if (r.has_term_features) {
    const auto& f = r.term_features;
    j["term_features"] = {{"worst_f1", f.worst_f1},
                          {"avg_f1", f.avg_f1},
                          {"best_f1", f.best_f1},
                          {"highest_freq", f.highest_term_freq},
                          {"lowest_freq", f.lowest_term_freq},
                          {"n_terms", f.n_terms},
                          {"n_and", f.n_and},
                          {"n_or", f.n_or}};
  }
  return j;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

}  // namespace

std::string evaluation_to_json(const std::vector<MethodEvaluation>& evals,
                               const std::vector<SignificanceResult>& significance,
                               const std::string& config_hash) {
  json j;
  j["config_hash"] = config_hash;
  json methods = json::object();
  for (const auto& ev : evals) {
    json per_query = json::array();
    for (const auto& r : ev.per_query) per_query.push_back(report_to_json(r));
    methods[method_name(ev.method)] = {{"per_query", per_query},
                                       {"macro", report_to_json(ev.macro)}};
  }
  j["methods"] = methods;
  json sig = json::array();
  for (const auto& s : significance)
    sig.push_back({{"metric", s.metric_name},
                   {"mean_a", s.mean_a},
                   {"mean_b", s.mean_b},
                   {"p_value", s.p_value},
                   {"iterations", s.n_iterations},
                   {"seed", s.seed}});
  j["significance"] = sig;
  return j.dump(2) + "\n";
}

std::string evaluation_to_csv(const std::vector<MethodEvaluation>& evals,
                              const std::string& config_hash) {
  std::ostringstream out;
  out << "# config_hash=" << config_hash << "\n";
  out << "method,P,R,F1,MAP,P@10,P@50,R@1000\n";
  for (const auto& ev : evals) {
    const auto& m = ev.macro;
    out << method_name(ev.method) << ',' << fmt(m.precision) << ',' << fmt(m.recall) << ','
        << fmt(m.f1) << ',';
    if (m.map)
      out << fmt(*m.map) << ',' << fmt(*m.p_at_10) << ',' << fmt(*m.p_at_50) << ','
          << fmt(*m.r_at_1000);
    else
      out << "-,-,-,-";
    out << "\n";
  }
  return out.str();
}

std::string correlation_to_json(const CorrelationReport& rep, const std::string& config_hash) {
  json j;
  j["config_hash"] = config_hash;
  j["features"] = rep.feature_names;
  json rows = json::object();
  for (std::size_t mi = 0; mi < rep.metric_names.size(); ++mi) {
    json row = json::array();
    for (std::size_t fi = 0; fi < rep.feature_names.size(); ++fi) {
      const auto& c = rep.cells[mi][fi];
      json cell{{"r", c.r},
                {"p_value", c.p_value},
                {"zero_variance", c.zero_variance},
                {"significant_05", c.significant_05},
                {"significant_10", c.significant_10}};
      if (!rep.permutation_p_values.empty())
        cell["permutation_p"] = rep.permutation_p_values[mi][fi];
      row.push_back(cell);
    }
    rows[rep.metric_names[mi]] = row;
  }
  j["correlations"] = rows;
  return j.dump(2) + "\n";
}

std::string correlation_to_csv(const CorrelationReport& rep, const std::string& config_hash) {
  std::ostringstream out;
  out << "# config_hash=" << config_hash << "\n";
  out << "metric";
  for (const auto& f : rep.feature_names) out << ',' << f;
  out << "\n";
  for (std::size_t mi = 0; mi < rep.metric_names.size(); ++mi) {
    out << rep.metric_names[mi];
    for (std::size_t fi = 0; fi < rep.feature_names.size(); ++fi) {
      const auto& c = rep.cells[mi][fi];
      out << ',';
      if (c.zero_variance) {
        out << "NA";
      } else {
        out << fmt(c.r);
        if (c.significant_05)
          out << '*';
        else if (c.significant_10)
          out << '+';
      }
    }
    out << "\n";
  }
  return out.str();
}

std::string curve_to_csv(const MixedIndexingCurve& curve, const std::string& config_hash) {
  std::ostringstream out;
  out << "# config_hash=" << config_hash << "\n";
  out << "t,avg_precision,avg_recall,avg_f1,manual_fraction\n";
  out.precision(10);
  for (const auto& p : curve.points)
    out << p.t << ',' << p.avg_precision << ',' << p.avg_recall << ',' << p.avg_f1 << ','
        << p.manual_fraction << "\n";
  return out.str();
}

std::string curve_to_svg(const MixedIndexingCurve& curve, const std::string& config_hash) {
  const int w = 640, h = 420, ml = 60, mr = 20, mt = 30, mb = 50;
  const double pw = w - ml - mr, ph = h - mt - mb;
  double t_min = 0.0, t_max = 1.0;
  if (!curve.points.empty()) {
    t_min = curve.points.front().t;
    t_max = std::max(curve.points.back().t, t_min + 1e-9);
  }
  auto sx = [&](double t) { return ml + (t - t_min) / (t_max - t_min) * pw; };
  auto sy = [&](double v) { return mt + (1.0 - v) * ph; };
  auto polyline = [&](const char* color, auto getter) {
    std::ostringstream p;
    p << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& pt : curve.points) p << sx(pt.t) << ',' << sy(getter(pt)) << ' ';
    p << "\"/>\n";
    return p.str();
  };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\">\n";
  out << "<!-- config_hash=" << config_hash << " -->\n";
  out << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
      << mt + ph << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double v = i / 5.0;
    out << "<text x=\"" << ml - 8 << "\" y=\"" << sy(v) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << v << "</text>\n";
    const double t = t_min + v * (t_max - t_min);
    out << "<text x=\"" << sx(t) << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(t) << "</text>\n";
  }
  out << polyline("#1f77b4", [](const MixedIndexingPoint& p) { return p.avg_precision; });
  out << polyline("#d62728", [](const MixedIndexingPoint& p) { return p.avg_recall; });
  out << polyline("#2ca02c", [](const MixedIndexingPoint& p) { return p.avg_f1; });
  out << polyline("#7f7f7f", [](const MixedIndexingPoint& p) { return p.manual_fraction; });
  out << "<text x=\"" << ml << "\" y=\"18\" font-size=\"12\">precision (blue), recall (red), "
         "F1 (green), manual fraction (gray) vs term-F1 threshold</text>\n";
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << h - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">term-level F1 threshold t</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace termsearch
