#pragma once
// Session-log data model: records, line parsing/serialization, query
// frequency buckets, and corpus-level click statistics.
//
// Log line format (UTF-8, LF, one session per line):
//   session_id<TAB>query<TAB>ad_id,ad_id,...<TAB>click_pos,click_pos,...
// The click field may be empty. Ad copy lines:
//   ad_id<TAB>title<TAB>description<TAB>display_url
// Relevance label lines:
//   query<TAB>ad_id<TAB>{0,1}

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adclick {

// Slates are capped at 8 positions; a typical mainline shows at most 4.
inline constexpr int kMaxSlate = 8;
inline constexpr int kDefaultSlate = 4;

struct Session {
  std::string session_id;
  std::string query;             // normalized (lowercase, collapsed spaces)
  std::vector<std::string> ads;  // position j is ads[j-1], 1-based outside
  std::vector<int> clicks;       // distinct 1-based positions in click order

  int slate_size() const { return static_cast<int>(ads.size()); }
  int click_count() const { return static_cast<int>(clicks.size()); }
  // True when some consecutive click pair moves to a smaller position.
  bool has_reverse_pair() const;
};

struct AdCopy {
  std::string ad_id;
  std::string title;
  std::string description;
  std::string display_url;
};

struct RelevanceLabel {
  std::string query;
  std::string ad_id;
  int label = 0;  // 0 or 1
};

std::string normalize_query(std::string_view raw);

struct ParseIssue {
  std::size_t line_no = 0;
  std::string message;
};

struct ParseReport {
  std::vector<ParseIssue> errors;   // malformed records, skipped
  std::size_t dropped_no_ads = 0;   // well-formed but zero ads shown
  std::size_t oversize_slates = 0;  // slates larger than the typical 4
  std::size_t parsed = 0;           // sessions returned
};

// Returns nothing and fills `error` when the record is malformed.
std::optional<Session> parse_session_line(std::string_view line, std::string* error);
std::string format_session_line(const Session& s);

std::vector<Session> parse_log(std::istream& in, ParseReport* report = nullptr);
std::vector<Session> read_log_file(const std::string& path, ParseReport* report = nullptr);
void write_log_file(const std::string& path, const std::vector<Session>& sessions);

std::optional<AdCopy> parse_ad_copy_line(std::string_view line, std::string* error);
std::string format_ad_copy_line(const AdCopy& c);
std::map<std::string, AdCopy> read_ad_copy_file(const std::string& path);
void write_ad_copy_file(const std::string& path, const std::vector<AdCopy>& copies);

std::vector<RelevanceLabel> read_label_file(const std::string& path);
void write_label_file(const std::string& path, const std::vector<RelevanceLabel>& labels);

struct CorpusSplit {
  std::vector<Session> priors;
  std::vector<Session> train;
  std::vector<Session> test;
  // True when no session_id appears in more than one week.
  bool disjoint() const;
};

// Query volume over the train week, bucketed into the six standard bands.
// Buckets are lower-inclusive: [0,10) [10,50) [50,100) [100,500) [500,1000) [1000,inf).
class QueryFrequencyTable {
 public:
  static QueryFrequencyTable build(const std::vector<Session>& train);

  std::uint64_t count(const std::string& query) const;
  std::string bucket(const std::string& query) const;

  static const std::array<std::string, 6>& bucket_labels();
  static std::string bucket_for_count(std::uint64_t count);

  const std::map<std::string, std::uint64_t>& counts() const { return counts_; }

 private:
  std::map<std::string, std::uint64_t> counts_;
};

// Distribution of consecutive-click distances c_{i+1} - c_i, normalized to
// sum to 1. has_pairs is false (and masses all zero) when no session has two
// or more clicks.
struct ClickDistanceHistogram {
  std::map<int, double> mass;  // distance in [-(kMaxSlate-1), kMaxSlate-1], never 0
  bool has_pairs = false;
};
ClickDistanceHistogram click_distance_histogram(const std::vector<Session>& sessions);

// Fractions of clicked sessions receiving exactly 1..4 clicks, per decile
// and overall. `defined` is false when a decile has no clicked session.
struct MultiClickRow {
  std::array<std::uint64_t, kMaxSlate + 1> by_count{};  // index = click count
  std::uint64_t clicked_sessions = 0;
  std::uint64_t total_sessions = 0;
  bool defined = false;
  double fraction(int k) const;  // of clicked sessions, k in 1..kMaxSlate
};
struct MultiClickStats {
  std::map<std::string, MultiClickRow> per_decile;
  MultiClickRow overall;
};
MultiClickStats multi_click_stats(const std::vector<Session>& sessions,
                                  const QueryFrequencyTable& table);

} // namespace adclick
