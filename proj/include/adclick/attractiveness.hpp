#pragma once
// Word-sharing attractiveness estimator. Every displayed ad contributes its
// copy words (title + description + display URL as one token) to per-word
// shown/clicked counts; an ad's attractiveness is the mean clicked/shown
// ratio of its scorable words. Frequent queries (train volume >= threshold)
// get their own word scope; everything else shares a global scope.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "adclick/session.hpp"

namespace adclick {

class StopWords {
 public:
  static const StopWords& default_list();
  static StopWords from_words(const std::vector<std::string>& words);
  bool contains(const std::string& w) const { return words_.count(w) != 0; }
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string> words_;
};

// Lowercases, splits on non-alphanumeric bytes, drops empties and stop
// words; the display URL is kept verbatim (lowercased) as one token.
// Returns the deduplicated word set of the ad copy.
std::vector<std::string> tokenize_copy(const AdCopy& copy, const StopWords& stop);

struct WordCounts {
  std::uint64_t shown = 0;
  std::uint64_t clicked = 0;
};

class WordStats {
 public:
  // Scans train impressions once. Ads without a copy entry contribute
  // nothing and are counted in missing_copies().
  static WordStats build(const std::vector<Session>& sessions,
                         const std::map<std::string, AdCopy>& copies,
                         const QueryFrequencyTable& table,
                         std::uint64_t freq_threshold,
                         const StopWords& stop = StopWords::default_list());

  // Shard merge; both sides must be built against the same frequency table.
  void merge(const WordStats& other);

  // Mean clicked/shown ratio over the ad's scorable words in the query's
  // scope. Words never shown in that scope are skipped; returns nothing when
  // no word is scorable.
  std::optional<double> score(const std::vector<std::string>& words,
                              const std::string& query) const;

  bool query_scoped(const std::string& query) const { return scoped_.count(query) != 0; }
  const std::map<std::string, WordCounts>* scope(const std::string& scope_key) const;
  std::uint64_t missing_copies() const { return missing_copies_; }

  // Audit dump: word<TAB>scope<TAB>N<TAB>N_clicked (scope "*" = global).
  void dump(std::ostream& out) const;

 private:
  // Scope key "" is the global scope; otherwise the query string.
  std::map<std::string, std::map<std::string, WordCounts>> scopes_;
  std::set<std::string> scoped_;
  std::uint64_t missing_copies_ = 0;
};

struct AttractivenessTable {
  std::map<std::pair<std::string, std::string>, double> theta;  // (query, ad)
  double fallback = 0.5;  // mean theta; covers never-seen (query, ad) pairs

  double get(const std::string& query, const std::string& ad_id) const;
};

// Scores every (query, ad) impression pair of the train split.
AttractivenessTable build_attractiveness_table(
    const std::vector<Session>& sessions,
    const std::map<std::string, AdCopy>& copies,
    const WordStats& stats,
    const StopWords& stop = StopWords::default_list());

} // namespace adclick
