#include "termsearch/tfidf.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "termsearch/errors.hpp"

namespace termsearch {

std::vector<std::string> TfidfModel::tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      if (cur.size() > 1) out.push_back(cur);
      cur.clear();
    }
  }
  if (cur.size() > 1) out.push_back(cur);
  return out;
}

TfidfModel TfidfModel::fit(const std::vector<const DocumentRecord*>& docs) {
  if (docs.empty()) throw EmptyCorpusError();
  std::map<std::string, int> df;  // ordered so feature ids are stable
  for (const auto* d : docs) {
    std::map<std::string, int> seen;
    for (const auto& tok : tokenize(d->title + " " + d->abstract_text)) seen[tok] = 1;
    for (const auto& [tok, _] : seen) df[tok] += 1;
  }
  TfidfModel m;
  const double n = static_cast<double>(docs.size());
  for (const auto& [tok, count] : df) {
    const int id = static_cast<int>(m.idf_.size());
    m.token_ids_[tok] = id;
    m.idf_.push_back(std::log((1.0 + n) / (1.0 + count)) + 1.0);
  }
  return m;
}

TfidfModel TfidfModel::fit(const Corpus& corpus, const std::vector<std::string>& doc_ids) {
  std::vector<const DocumentRecord*> docs;
  docs.reserve(doc_ids.size());
  for (const auto& id : doc_ids) docs.push_back(&corpus.doc(id));
  return fit(docs);
}

FeatureVector TfidfModel::featurize_text(const std::string& text) const {
  std::map<int, double> tf;
  for (const auto& tok : tokenize(text)) {
    auto it = token_ids_.find(tok);
    if (it != token_ids_.end()) tf[it->second] += 1.0;
  }
  FeatureVector v;
  double norm_sq = 0.0;
  for (const auto& [id, count] : tf) {
    const double w = count * idf_[id];
    v.emplace_back(id, w);
    norm_sq += w * w;
  }
  if (norm_sq > 0.0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& [_, w] : v) w *= inv;
  }
  return v;
}

FeatureVector TfidfModel::featurize(const DocumentRecord& doc) const {
  return featurize_text(doc.title + " " + doc.abstract_text);
}

}  // namespace termsearch
