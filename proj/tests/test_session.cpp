#include <doctest.h>

#include <sstream>

#include "adclick/session.hpp"

using namespace adclick;

namespace {

Session make_session(const std::string& id, const std::string& query, int n,
                     std::vector<int> clicks) {
  Session s;
  s.session_id = id;
  s.query = query;
  for (int j = 1; j <= n; ++j) s.ads.push_back("a" + std::to_string(j));
  s.clicks = std::move(clicks);
  return s;
}

} // namespace

TEST_CASE("session line parses all four fields") {
  std::string error;
  auto s = parse_session_line("s1\tplumber\ta1,a2,a3,a4\t3,1", &error);
  REQUIRE(s.has_value());
  CHECK(s->session_id == "s1");
  CHECK(s->query == "plumber");
  CHECK(s->slate_size() == 4);
  CHECK(s->clicks == std::vector<int>{3, 1});
}

TEST_CASE("empty click field parses to a zero-click session") {
  std::string error;
  auto s = parse_session_line("s2\tplumber\ta1,a2\t", &error);
  REQUIRE(s.has_value());
  CHECK(s->click_count() == 0);
}

TEST_CASE("duplicate click positions are rejected") {
  std::string error;
  auto s = parse_session_line("s3\tplumber\ta1,a2\t2,2", &error);
  CHECK_FALSE(s.has_value());
  CHECK(error.find("duplicate") != std::string::npos);
}

TEST_CASE("click position outside the slate is rejected") {
  std::string error;
  auto s = parse_session_line("s4\tplumber\ta1,a2\t3", &error);
  CHECK_FALSE(s.has_value());
  CHECK_FALSE(error.empty());
}

TEST_CASE("session lines round-trip through format and parse") {
  const Session original = make_session("id9", "fix my sink", 4, {4, 2, 3});
  std::string error;
  auto parsed = parse_session_line(format_session_line(original), &error);
  REQUIRE(parsed.has_value());
  CHECK(parsed->session_id == original.session_id);
  CHECK(parsed->query == original.query);
  CHECK(parsed->ads == original.ads);
  CHECK(parsed->clicks == original.clicks);
}

TEST_CASE("query normalization lowercases and collapses spaces") {
  CHECK(normalize_query("  Fix  MY   Sink ") == "fix my sink");
  CHECK(normalize_query("plumber") == "plumber");
}

TEST_CASE("parse_log skips malformed lines and reports them") {
  std::istringstream in(
      "s1\tq\ta1,a2\t1\n"
      "broken line\n"
      "s2\tq\ta1,a2\t\n"
      "s3\tq\t\t\n");
  ParseReport report;
  auto sessions = parse_log(in, &report);
  CHECK(sessions.size() == 2);
  CHECK(report.errors.size() == 1);
  CHECK(report.errors.front().line_no == 2);
  CHECK(report.dropped_no_ads == 1);
  CHECK(report.parsed == 2);
}

TEST_CASE("reverse pair detection looks at consecutive clicks only") {
  CHECK(make_session("s", "q", 4, {3, 1}).has_reverse_pair());
  CHECK_FALSE(make_session("s", "q", 4, {1, 3}).has_reverse_pair());
  CHECK(make_session("s", "q", 4, {1, 3, 2}).has_reverse_pair());
  CHECK_FALSE(make_session("s", "q", 4, {2}).has_reverse_pair());
  CHECK_FALSE(make_session("s", "q", 4, {}).has_reverse_pair());
}

TEST_CASE("frequency buckets use lower-inclusive boundaries") {
  CHECK(QueryFrequencyTable::bucket_for_count(0) == "0-10");
  CHECK(QueryFrequencyTable::bucket_for_count(9) == "0-10");
  CHECK(QueryFrequencyTable::bucket_for_count(10) == "10-50");
  CHECK(QueryFrequencyTable::bucket_for_count(50) == "50-100");
  CHECK(QueryFrequencyTable::bucket_for_count(100) == "100-500");
  CHECK(QueryFrequencyTable::bucket_for_count(500) == "500-1000");
  CHECK(QueryFrequencyTable::bucket_for_count(1000) == ">1000");
  CHECK(QueryFrequencyTable::bucket_for_count(1001) == ">1000");
}

TEST_CASE("unseen queries fall in the lowest bucket") {
  std::vector<Session> train = {make_session("s1", "hot", 2, {1})};
  auto table = QueryFrequencyTable::build(train);
  CHECK(table.count("cold") == 0);
  CHECK(table.bucket("cold") == "0-10");
  CHECK(table.bucket("hot") == "0-10");
  CHECK(table.count("hot") == 1);
}

TEST_CASE("bucket labels partition every count") {
  const auto& labels = QueryFrequencyTable::bucket_labels();
  CHECK(labels.size() == 6);
  for (std::uint64_t c : {0ull, 5ull, 10ull, 49ull, 50ull, 99ull, 100ull, 499ull, 500ull,
                          999ull, 1000ull, 123456ull}) {
    const std::string b = QueryFrequencyTable::bucket_for_count(c);
    CHECK(std::count(labels.begin(), labels.end(), b) == 1);
  }
}

TEST_CASE("click distance histogram: single reverse session") {
  std::vector<Session> sessions = {make_session("s", "q", 4, {3, 1})};
  auto h = click_distance_histogram(sessions);
  REQUIRE(h.has_pairs);
  CHECK(h.mass.at(-2) == doctest::Approx(1.0).epsilon(1e-12));
  // Every bin except distance 0 is present; the rest carry zero mass.
  CHECK(h.mass.size() == 14);
  CHECK(h.mass.count(0) == 0);
  double total = 0.0;
  for (const auto& [d, m] : h.mass) total += m;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("click distance histogram: mixed corpus") {
  std::vector<Session> sessions = {
      make_session("a", "q", 4, {1, 2}),
      make_session("b", "q", 4, {1, 2}),
      make_session("c", "q", 4, {2, 1}),
      make_session("d", "q", 4, {1}),
  };
  auto h = click_distance_histogram(sessions);
  REQUIRE(h.has_pairs);
  CHECK(h.mass.at(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(h.mass.at(-1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("click distance histogram: no pairs anywhere") {
  std::vector<Session> sessions = {make_session("a", "q", 4, {1})};
  auto h = click_distance_histogram(sessions);
  CHECK_FALSE(h.has_pairs);
  for (const auto& [d, m] : h.mass) CHECK(m == 0.0);
}

TEST_CASE("multi-click fractions: nine single, one double") {
  std::vector<Session> sessions;
  for (int i = 0; i < 9; ++i) sessions.push_back(make_session("s" + std::to_string(i), "q", 4, {1}));
  sessions.push_back(make_session("s9", "q", 4, {1, 2}));
  auto table = QueryFrequencyTable::build(sessions);
  auto stats = multi_click_stats(sessions, table);
  REQUIRE(stats.overall.defined);
  CHECK(stats.overall.clicked_sessions == 10);
  CHECK(stats.overall.fraction(1) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(stats.overall.fraction(2) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(stats.overall.fraction(3) == 0.0);
  CHECK(stats.overall.fraction(4) == 0.0);
}

TEST_CASE("multi-click fractions: zero clicked sessions flagged undefined") {
  std::vector<Session> sessions = {make_session("s", "q", 4, {})};
  auto table = QueryFrequencyTable::build(sessions);
  auto stats = multi_click_stats(sessions, table);
  CHECK_FALSE(stats.overall.defined);
  CHECK(stats.overall.total_sessions == 1);
  CHECK(stats.overall.clicked_sessions == 0);
}

TEST_CASE("ad copy lines round-trip") {
  AdCopy c;
  c.ad_id = "ad7";
  c.title = "Cheap Plumbing Now";
  c.description = "24 hour emergency service";
  c.display_url = "cheap-plumbing.example";
  std::string error;
  auto parsed = parse_ad_copy_line(format_ad_copy_line(c), &error);
  REQUIRE(parsed.has_value());
  CHECK(parsed->ad_id == c.ad_id);
  CHECK(parsed->title == c.title);
  CHECK(parsed->description == c.description);
  CHECK(parsed->display_url == c.display_url);
}

TEST_CASE("corpus split disjointness checks session ids across weeks") {
  CorpusSplit split;
  split.priors = {make_session("p1", "q", 2, {})};
  split.train = {make_session("t1", "q", 2, {1})};
  split.test = {make_session("e1", "q", 2, {})};
  CHECK(split.disjoint());
  split.test.push_back(make_session("t1", "q", 2, {}));
  CHECK_FALSE(split.disjoint());
}
