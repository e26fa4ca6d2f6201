#include "termsearch/vocab.hpp"

#include <algorithm>
#include <cctype>

#include "termsearch/errors.hpp"

namespace termsearch {

std::string TermVocabulary::normalize_name(const std::string& raw) {
  std::size_t b = 0, e = raw.size();
  while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
  std::string s = raw.substr(b, e - b);
  if (!s.empty() && s.back() == '/') s.pop_back();
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

int TermVocabulary::add_term(const std::string& name, const std::string& external_id) {
  const std::string key = normalize_name(name);
  if (key.empty()) throw Error("empty term name");
  if (by_key_.count(key)) throw Error("duplicate term name: " + name);
  const int id = static_cast<int>(entries_.size());
  entries_.push_back(Entry{id, name, external_id});
  by_key_[key] = id;
  if (!external_id.empty()) {
    const std::string ek = normalize_name(external_id);
    if (by_key_.count(ek)) throw Error("duplicate external id: " + external_id);
    by_key_[ek] = id;
  }
  return id;
}

std::optional<int> TermVocabulary::find(const std::string& name_or_external_id) const {
  auto it = by_key_.find(normalize_name(name_or_external_id));
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t TermVocabulary::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0x1f;
    h *= 0x100000001b3ULL;
  };
  for (const auto& e : entries_) {
    mix(e.name);
    mix(e.external_id);
  }
  return h;
}

}  // namespace termsearch
