#include "adclick/attractiveness.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

#include "adclick/text.hpp"

namespace adclick {

namespace {

// ~100 high-frequency function words; copy text rarely needs them to carry
// attractiveness signal.
constexpr const char* kDefaultStopWords[] = {
    "a",     "about", "above", "after",  "again", "against", "all",   "am",
    "an",    "and",   "any",   "are",    "as",    "at",      "be",    "because",
    "been",  "before", "being", "below", "between", "both",  "but",   "by",
    "can",   "could", "did",   "do",     "does",  "doing",   "down",  "during",
    "each",  "few",   "for",   "from",   "further", "had",   "has",   "have",
    "having", "he",   "her",   "here",   "hers",  "him",     "his",   "how",
    "i",     "if",    "in",    "into",   "is",    "it",      "its",   "just",
    "me",    "more",  "most",  "my",     "no",    "nor",     "not",   "now",
    "of",    "off",   "on",    "once",   "only",  "or",      "other", "our",
    "ours",  "out",   "over",  "own",    "same",  "she",     "so",    "some",
    "such",  "than",  "that",  "the",    "their", "theirs",  "them",  "then",
    "there", "these", "they",  "this",   "those", "through", "to",    "too",
    "under", "until", "up",    "very",   "was",   "we",      "were",  "what",
    "when",  "where", "which", "while",  "who",   "whom",    "why",   "will",
    "with",  "you",   "your",  "yours"};

void add_tokens(std::vector<std::string>& out, const std::string& text,
                const StopWords& stop) {
  std::string lower = to_lower_ascii(text);
  std::size_t i = 0;
  while (i < lower.size()) {
    while (i < lower.size() && !std::isalnum(static_cast<unsigned char>(lower[i]))) ++i;
    std::size_t b = i;
    while (i < lower.size() && std::isalnum(static_cast<unsigned char>(lower[i]))) ++i;
    if (i > b) {
      std::string word = lower.substr(b, i - b);
      if (!stop.contains(word)) out.push_back(std::move(word));
    }
  }
}

} // namespace

const StopWords& StopWords::default_list() {
  static const StopWords instance = [] {
    StopWords sw;
    for (const char* w : kDefaultStopWords) sw.words_.insert(w);
    return sw;
  }();
  return instance;
}

StopWords StopWords::from_words(const std::vector<std::string>& words) {
  StopWords sw;
  for (const std::string& w : words) sw.words_.insert(to_lower_ascii(w));
  return sw;
}

std::vector<std::string> tokenize_copy(const AdCopy& copy, const StopWords& stop) {
  std::vector<std::string> words;
  add_tokens(words, copy.title, stop);
  add_tokens(words, copy.description, stop);
  std::string url = to_lower_ascii(trim(copy.display_url));
  if (!url.empty() && !stop.contains(url)) words.push_back(url);
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return words;
}

WordStats WordStats::build(const std::vector<Session>& sessions,
                           const std::map<std::string, AdCopy>& copies,
                           const QueryFrequencyTable& table,
                           std::uint64_t freq_threshold,
                           const StopWords& stop) {
  WordStats stats;
  for (const auto& [query, count] : table.counts()) {
    if (count >= freq_threshold) stats.scoped_.insert(query);
  }
  // Word sets are stable per ad; cache them across impressions.
  std::map<std::string, std::vector<std::string>> token_cache;
  for (const Session& s : sessions) {
    const std::string scope_key = stats.scoped_.count(s.query) ? s.query : std::string();
    auto& scope = stats.scopes_[scope_key];
    for (int pos = 1; pos <= s.slate_size(); ++pos) {
      const std::string& ad_id = s.ads[pos - 1];
      auto cached = token_cache.find(ad_id);
      if (cached == token_cache.end()) {
        auto copy_it = copies.find(ad_id);
        if (copy_it == copies.end()) {
          ++stats.missing_copies_;
          continue;
        }
        cached = token_cache.emplace(ad_id, tokenize_copy(copy_it->second, stop)).first;
      }
      bool clicked = std::find(s.clicks.begin(), s.clicks.end(), pos) != s.clicks.end();
      for (const std::string& w : cached->second) {
        WordCounts& wc = scope[w];
        ++wc.shown;
        if (clicked) ++wc.clicked;
      }
    }
  }
  return stats;
}

void WordStats::merge(const WordStats& other) {
  for (const auto& [scope_key, words] : other.scopes_) {
    auto& scope = scopes_[scope_key];
    for (const auto& [w, counts] : words) {
      WordCounts& wc = scope[w];
      wc.shown += counts.shown;
      wc.clicked += counts.clicked;
    }
  }
  scoped_.insert(other.scoped_.begin(), other.scoped_.end());
  missing_copies_ += other.missing_copies_;
}

std::optional<double> WordStats::score(const std::vector<std::string>& words,
                                       const std::string& query) const {
  const std::string scope_key = scoped_.count(query) ? query : std::string();
  auto scope_it = scopes_.find(scope_key);
  if (scope_it == scopes_.end()) return std::nullopt;
  const auto& scope = scope_it->second;
  double sum = 0.0;
  int scored = 0;
  for (const std::string& w : words) {
    auto it = scope.find(w);
    if (it == scope.end() || it->second.shown == 0) continue;
    sum += static_cast<double>(it->second.clicked) / static_cast<double>(it->second.shown);
    ++scored;
  }
  if (scored == 0) return std::nullopt;
  return sum / scored;
}

const std::map<std::string, WordCounts>* WordStats::scope(const std::string& scope_key) const {
  auto it = scopes_.find(scope_key);
  return it == scopes_.end() ? nullptr : &it->second;
}

void WordStats::dump(std::ostream& out) const {
  for (const auto& [scope_key, words] : scopes_) {
    const std::string label = scope_key.empty() ? "*" : scope_key;
    for (const auto& [w, counts] : words) {
      out << w << '\t' << label << '\t' << counts.shown << '\t' << counts.clicked << '\n';
    }
  }
}

double AttractivenessTable::get(const std::string& query, const std::string& ad_id) const {
  auto it = theta.find({query, ad_id});
  return it == theta.end() ? fallback : it->second;
}

AttractivenessTable build_attractiveness_table(const std::vector<Session>& sessions,
                                               const std::map<std::string, AdCopy>& copies,
                                               const WordStats& stats,
                                               const StopWords& stop) {
  AttractivenessTable table;
  std::map<std::string, std::vector<std::string>> token_cache;
  for (const Session& s : sessions) {
    for (const std::string& ad_id : s.ads) {
      auto key = std::make_pair(s.query, ad_id);
      if (table.theta.count(key)) continue;
      auto cached = token_cache.find(ad_id);
      if (cached == token_cache.end()) {
        auto copy_it = copies.find(ad_id);
        if (copy_it == copies.end()) continue;
        cached = token_cache.emplace(ad_id, tokenize_copy(copy_it->second, stop)).first;
      }
      std::optional<double> theta = stats.score(cached->second, s.query);
      if (theta) table.theta[key] = *theta;
    }
  }
  if (!table.theta.empty()) {
    double sum = 0.0;
    for (const auto& [key, v] : table.theta) sum += v;
    table.fallback = sum / static_cast<double>(table.theta.size());
  }
  return table;
}

} // namespace adclick
