#include "adclick/session.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "adclick/text.hpp"

namespace adclick {

bool Session::has_reverse_pair() const {
  for (std::size_t i = 1; i < clicks.size(); ++i) {
    if (clicks[i] < clicks[i - 1]) return true;
  }
  return false;
}

std::string normalize_query(std::string_view raw) {
  return join(split_ws(to_lower_ascii(raw)), ' ');
}

std::optional<Session> parse_session_line(std::string_view line, std::string* error) {
  auto fail = [&](const std::string& msg) -> std::optional<Session> {
    if (error) *error = msg;
    return std::nullopt;
  };
  std::vector<std::string> fields = split(line, '\t');
  if (fields.size() != 4) {
    return fail("expected 4 tab-separated fields, got " + std::to_string(fields.size()));
  }
  Session s;
  s.session_id = fields[0];
  if (s.session_id.empty()) return fail("empty session id");
  s.query = normalize_query(fields[1]);
  if (s.query.empty()) return fail("empty query");

  if (!trim(fields[2]).empty()) {
    for (std::string& ad : split(fields[2], ',')) {
      std::string id = trim(ad);
      if (id.empty()) return fail("empty ad id in slate");
      s.ads.push_back(std::move(id));
    }
  }
  if (static_cast<int>(s.ads.size()) > kMaxSlate) {
    return fail("slate has " + std::to_string(s.ads.size()) + " ads, limit is " +
                std::to_string(kMaxSlate));
  }

  if (!trim(fields[3]).empty()) {
    std::set<int> seen;
    for (const std::string& part : split(fields[3], ',')) {
      int pos = 0;
      if (!parse_int(trim(part), pos)) return fail("malformed click position: " + part);
      if (pos < 1 || pos > static_cast<int>(s.ads.size())) {
        return fail("click position " + std::to_string(pos) + " outside slate of " +
                    std::to_string(s.ads.size()));
      }
      if (!seen.insert(pos).second) {
        return fail("duplicate click position " + std::to_string(pos));
      }
      s.clicks.push_back(pos);
    }
  }
  return s;
}

std::string format_session_line(const Session& s) {
  std::string line = s.session_id;
  line.push_back('\t');
  line += s.query;
  line.push_back('\t');
  line += join(s.ads, ',');
  line.push_back('\t');
  std::vector<std::string> clicks;
  clicks.reserve(s.clicks.size());
  for (int c : s.clicks) clicks.push_back(std::to_string(c));
  line += join(clicks, ',');
  return line;
}

std::vector<Session> parse_log(std::istream& in, ParseReport* report) {
  std::vector<Session> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::string error;
    std::optional<Session> s = parse_session_line(line, &error);
    if (!s) {
      if (report) report->errors.push_back({line_no, error});
      continue;
    }
    if (s->ads.empty()) {
      if (report) ++report->dropped_no_ads;
      continue;
    }
    if (s->slate_size() > kDefaultSlate && report) ++report->oversize_slates;
    out.push_back(std::move(*s));
  }
  if (report) report->parsed = out.size();
  return out;
}

std::vector<Session> read_log_file(const std::string& path, ParseReport* report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open session log: " + path);
  return parse_log(in, report);
}

void write_log_file(const std::string& path, const std::vector<Session>& sessions) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write session log: " + path);
  for (const Session& s : sessions) out << format_session_line(s) << '\n';
}

std::optional<AdCopy> parse_ad_copy_line(std::string_view line, std::string* error) {
  std::vector<std::string> fields = split(line, '\t');
  if (fields.size() != 4) {
    if (error) *error = "expected 4 tab-separated fields, got " + std::to_string(fields.size());
    return std::nullopt;
  }
  AdCopy c;
  c.ad_id = fields[0];
  c.title = fields[1];
  c.description = fields[2];
  c.display_url = fields[3];
  if (c.ad_id.empty()) {
    if (error) *error = "empty ad id";
    return std::nullopt;
  }
  return c;
}

std::string format_ad_copy_line(const AdCopy& c) {
  return c.ad_id + '\t' + c.title + '\t' + c.description + '\t' + c.display_url;
}

std::map<std::string, AdCopy> read_ad_copy_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ad copy file: " + path);
  std::map<std::string, AdCopy> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::string error;
    std::optional<AdCopy> c = parse_ad_copy_line(line, &error);
    if (!c) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + error);
    }
    out[c->ad_id] = std::move(*c);
  }
  return out;
}

void write_ad_copy_file(const std::string& path, const std::vector<AdCopy>& copies) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write ad copy file: " + path);
  for (const AdCopy& c : copies) out << format_ad_copy_line(c) << '\n';
}

std::vector<RelevanceLabel> read_label_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open label file: " + path);
  std::vector<RelevanceLabel> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() != 3 || (fields[2] != "0" && fields[2] != "1")) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed label line");
    }
    out.push_back({normalize_query(fields[0]), fields[1], fields[2] == "1" ? 1 : 0});
  }
  return out;
}

void write_label_file(const std::string& path, const std::vector<RelevanceLabel>& labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write label file: " + path);
  for (const RelevanceLabel& l : labels) {
    out << l.query << '\t' << l.ad_id << '\t' << l.label << '\n';
  }
}

bool CorpusSplit::disjoint() const {
  std::set<std::string> seen;
  for (const auto* week : {&priors, &train, &test}) {
    for (const Session& s : *week) {
      if (!seen.insert(s.session_id).second) return false;
    }
  }
  return true;
}

QueryFrequencyTable QueryFrequencyTable::build(const std::vector<Session>& train) {
  QueryFrequencyTable t;
  for (const Session& s : train) ++t.counts_[s.query];
  return t;
}

std::uint64_t QueryFrequencyTable::count(const std::string& query) const {
  auto it = counts_.find(query);
  return it == counts_.end() ? 0 : it->second;
}

const std::array<std::string, 6>& QueryFrequencyTable::bucket_labels() {
  static const std::array<std::string, 6> labels = {
      "0-10", "10-50", "50-100", "100-500", "500-1000", ">1000"};
  return labels;
}

std::string QueryFrequencyTable::bucket_for_count(std::uint64_t count) {
  if (count < 10) return "0-10";
  if (count < 50) return "10-50";
  if (count < 100) return "50-100";
  if (count < 500) return "100-500";
  if (count < 1000) return "500-1000";
  return ">1000";
}

std::string QueryFrequencyTable::bucket(const std::string& query) const {
  return bucket_for_count(count(query));
}

ClickDistanceHistogram click_distance_histogram(const std::vector<Session>& sessions) {
  ClickDistanceHistogram h;
  std::map<int, std::uint64_t> counts;
  std::uint64_t total = 0;
  for (const Session& s : sessions) {
    for (std::size_t i = 1; i < s.clicks.size(); ++i) {
      ++counts[s.clicks[i] - s.clicks[i - 1]];
      ++total;
    }
  }
  for (int d = -(kMaxSlate - 1); d <= kMaxSlate - 1; ++d) {
    if (d != 0) h.mass[d] = 0.0;
  }
  if (total == 0) return h;
  h.has_pairs = true;
  for (const auto& [d, c] : counts) {
    h.mass[d] = static_cast<double>(c) / static_cast<double>(total);
  }
  return h;
}

double MultiClickRow::fraction(int k) const {
  if (!defined || k < 1 || k > kMaxSlate) return 0.0;
  return static_cast<double>(by_count[k]) / static_cast<double>(clicked_sessions);
}

MultiClickStats multi_click_stats(const std::vector<Session>& sessions,
                                  const QueryFrequencyTable& table) {
  MultiClickStats stats;
  for (const std::string& label : QueryFrequencyTable::bucket_labels()) {
    stats.per_decile[label] = MultiClickRow{};
  }
  auto tally = [](MultiClickRow& row, const Session& s) {
    ++row.total_sessions;
    int k = s.click_count();
    if (k >= 1 && k <= kMaxSlate) {
      ++row.by_count[k];
      ++row.clicked_sessions;
    }
  };
  for (const Session& s : sessions) {
    tally(stats.per_decile[table.bucket(s.query)], s);
    tally(stats.overall, s);
  }
  for (auto& [label, row] : stats.per_decile) row.defined = row.clicked_sessions > 0;
  stats.overall.defined = stats.overall.clicked_sessions > 0;
  return stats;
}

} // namespace adclick
