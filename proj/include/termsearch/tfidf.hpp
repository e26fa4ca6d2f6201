#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "termsearch/corpus.hpp"

namespace termsearch {

/// Sparse feature vector, sorted by feature id, L2-normalized.
using FeatureVector = std::vector<std::pair<int, double>>;

/// Bag-of-words TF-IDF. Tokenization: lowercase, split on non-alphanumeric,
/// tokens of length 1 dropped. idf = ln((1+N)/(1+df)) + 1.
class TfidfModel {
 public:
  static TfidfModel fit(const std::vector<const DocumentRecord*>& docs);
  static TfidfModel fit(const Corpus& corpus, const std::vector<std::string>& doc_ids);

  FeatureVector featurize(const DocumentRecord& doc) const;
  FeatureVector featurize_text(const std::string& text) const;

  int n_features() const { return static_cast<int>(idf_.size()); }
  const std::unordered_map<std::string, int>& vocabulary_map() const { return token_ids_; }
  const std::vector<double>& idf() const { return idf_; }

  static std::vector<std::string> tokenize(const std::string& text);

  // model (de)serialization pieces used by the classifier model file
  void set_state(std::unordered_map<std::string, int> token_ids, std::vector<double> idf) {
    token_ids_ = std::move(token_ids);
    idf_ = std::move(idf);
  }

 private:
  std::unordered_map<std::string, int> token_ids_;
  std::vector<double> idf_;
};

}  // namespace termsearch
