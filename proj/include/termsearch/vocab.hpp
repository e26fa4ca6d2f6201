#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace termsearch {

/// Controlled vocabulary: the universe of index terms with dense integer ids.
/// Names are unique case-insensitively; an optional external id (e.g. a MeSH
/// descriptor id like D017934) is accepted as an alias when resolving names.
class TermVocabulary {
 public:
  struct Entry {
    int term_id = -1;
    std::string name;
    std::string external_id;  // empty when absent
  };

  // Returns the id of the added term. Throws on a (case-insensitive) name clash.
  int add_term(const std::string& name, const std::string& external_id = "");

  std::optional<int> find(const std::string& name_or_external_id) const;
  bool contains(const std::string& name_or_external_id) const {
    return find(name_or_external_id).has_value();
  }

  const Entry& entry(int term_id) const { return entries_.at(term_id); }
  const std::string& name(int term_id) const { return entries_.at(term_id).name; }
  int size() const { return static_cast<int>(entries_.size()); }
  const std::vector<Entry>& entries() const { return entries_; }

  std::uint64_t fingerprint() const;

  static std::string normalize_name(const std::string& raw);

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, int> by_key_;  // normalized name and external id
};

}  // namespace termsearch
