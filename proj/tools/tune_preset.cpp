// Preset audit: computes the exact large-sample limit of every estimator on
// a synthetic scenario by enumerating the session distribution, then checks
// recovery bias plus a 3-sigma sampling band against the target tolerances.
// Run with no arguments to audit every preset; exit code is the number of
// failed checks.

#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "adclick/generator.hpp"
#include "adclick/model.hpp"

using namespace adclick;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
  std::printf("  %s  %s\n", ok ? "ok  " : "FAIL", what.c_str());
  if (!ok) ++g_failures;
}

// Expected per-session sufficient statistics under one slate's ground truth,
// mirroring what one pass over sampled sessions accumulates.
struct ExpectedStats {
  int n_max = 0;
  std::vector<double> ends;              // expected sessions with exactly j clicks
  std::vector<double> cont;              // expected sessions with more than j clicks
  std::vector<std::vector<double>> trans;  // [prev][next-1] expected transitions
  std::vector<double> clicks_at;         // [pos] expected clicks on the position
  std::vector<double> last_at;           // [pos] expected final clicks on the position
  double clicked = 0.0;                  // expected sessions with >= 1 click
  double multi = 0.0;                    // expected sessions with >= 2 clicks
  double reverse = 0.0;                  // expected sessions with a backward pair

  explicit ExpectedStats(int n)
      : n_max(n),
        ends(n + 1, 0.0),
        cont(n + 1, 0.0),
        trans(n + 1, std::vector<double>(n, 0.0)),
        clicks_at(n + 1, 0.0),
        last_at(n + 1, 0.0) {}

  void accumulate(const ExpectedStats& other, double weight) {
    for (int j = 0; j <= n_max; ++j) {
      ends[j] += weight * other.ends[j];
      cont[j] += weight * other.cont[j];
      clicks_at[j] += weight * other.clicks_at[j];
      last_at[j] += weight * other.last_at[j];
    }
    for (int i = 0; i <= n_max; ++i) {
      for (int j = 0; j < n_max; ++j) trans[i][j] += weight * other.trans[i][j];
    }
    clicked += weight * other.clicked;
    multi += weight * other.multi;
    reverse += weight * other.reverse;
  }
};

ExpectedStats expected_stats_for_slate(const Scenario& s, const QuerySpec& q) {
  ModelParams truth;
  truth.n_max = s.n_max;
  truth.perseverance = s.eta;
  truth.transition = s.gamma;
  std::vector<std::string> ads;
  for (const DocSpec& d : q.slate) {
    truth.satisfaction.rho[{q.query, d.ad_id}] = d.rho;
    truth.attractiveness.theta[{q.query, d.ad_id}] = d.theta;
    ads.push_back(d.ad_id);
  }

  ExpectedStats es(s.n_max);
  for (const SequenceProb& sp : enumerate_sequences(truth, q.query, ads)) {
    const double p = sp.prob;
    const int k = static_cast<int>(sp.clicks.size());
    es.ends[k] += p;
    for (int j = 0; j < k; ++j) es.cont[j] += p;
    int prev = 0;
    bool backward = false;
    for (std::size_t i = 0; i < sp.clicks.size(); ++i) {
      const int c = sp.clicks[i];
      es.trans[prev][c - 1] += p;
      if (i > 0 && c < prev) backward = true;
      prev = c;
      es.clicks_at[c] += p;
      if (i + 1 == sp.clicks.size()) es.last_at[c] += p;
    }
    if (k >= 1) es.clicked += p;
    if (k >= 2) es.multi += p;
    if (backward) es.reverse += p;
  }
  return es;
}

// Signature that groups queries whose slates share the same per-position
// parameters, so each distinct slate is enumerated once.
std::string slate_signature(const QuerySpec& q) {
  std::string sig;
  char buf[64];
  for (const DocSpec& d : q.slate) {
    std::snprintf(buf, sizeof buf, "%.17g:%.17g;", d.theta, d.rho);
    sig += buf;
  }
  return sig;
}

struct DocLimit {
  std::string query;
  std::string ad_id;
  double truth_rho = 0.0;
  double limit_rho = 0.0;
  double expected_clicks = 0.0;
};

struct PresetAudit {
  ExpectedStats pooled;
  std::vector<DocLimit> docs;
  double total_sessions = 0.0;

  explicit PresetAudit(int n_max) : pooled(n_max) {}
};

PresetAudit audit_counts(const Scenario& s) {
  PresetAudit audit(s.n_max);
  std::map<std::string, ExpectedStats> cache;
  for (const QuerySpec& q : s.queries) {
    const std::string sig = slate_signature(q);
    auto it = cache.find(sig);
    if (it == cache.end()) it = cache.emplace(sig, expected_stats_for_slate(s, q)).first;
    const ExpectedStats& es = it->second;
    const double w = static_cast<double>(q.sessions_per_week);
    audit.pooled.accumulate(es, w);
    audit.total_sessions += w;
    for (int j = 1; j <= static_cast<int>(q.slate.size()); ++j) {
      const double psi = w * es.clicks_at[j];
      if (psi <= 0.0) continue;
      DocLimit d;
      d.query = q.query;
      d.ad_id = q.slate[j - 1].ad_id;
      d.truth_rho = q.slate[j - 1].rho;
      d.limit_rho = w * es.last_at[j] / psi;
      d.expected_clicks = psi;
      audit.docs.push_back(d);
    }
  }
  return audit;
}

// Large-sample limit of the two-week pipeline: hyperparameters fitted on the
// priors week (same distribution), then posterior-mean estimates on train.
void audit_recovery(const Scenario& s, const PresetAudit& a) {
  const int n = s.n_max;
  const ExpectedStats& es = a.pooled;

  double worst_eta = 0.0, worst_gamma = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double denom = es.ends[j] + es.cont[j];
    const double prior_ratio = denom > 0.0 ? es.ends[j] / denom : 0.5;
    const double alpha = 10.0 * prior_ratio;
    const double beta = 10.0 - alpha;
    const double limit = (es.ends[j] + alpha) / (es.ends[j] + alpha + es.cont[j] + beta);
    const double sigma = denom > 0.0 ? std::sqrt(limit * (1.0 - limit) / denom) : 0.0;
    const double bias = std::abs(limit - s.eta.eta[j]);
    const double band = bias + 3.0 * sigma;
    char line[160];
    std::snprintf(line, sizeof line,
                  "eta[%d]: truth %.4f limit %.6f bias %.6f +3s %.6f (n=%.0f)", j,
                  s.eta.eta[j], limit, bias, band, denom);
    check(band <= 0.02, line);
    if (band > worst_eta) worst_eta = band;
  }

  for (int i = 0; i <= n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += es.trans[i][j];
    for (int j = 0; j < n; ++j) {
      const double prior_ratio = row > 0.0 ? es.trans[i][j] / row : 1.0 / n;
      const double alpha = 10.0 * prior_ratio;
      const double limit = (es.trans[i][j] + alpha) / (row + 10.0);
      const double sigma = row > 0.0 ? std::sqrt(limit * (1.0 - limit) / row) : 0.0;
      const double bias = std::abs(limit - s.gamma.at(i, j + 1));
      const double band = bias + 3.0 * sigma;
      char line[160];
      std::snprintf(line, sizeof line,
                    "gamma[%d][%d]: truth %.4f limit %.6f bias %.6f +3s %.6f (n=%.0f)", i,
                    j + 1, s.gamma.at(i, j + 1), limit, bias, band, row);
      check(band <= 0.02, line);
      if (band > worst_gamma) worst_gamma = band;
    }
  }
  std::printf("  worst eta band %.6f, worst gamma band %.6f\n", worst_eta, worst_gamma);
}

void audit_satisfaction(const PresetAudit& a, double click_floor) {
  int checked = 0;
  double below_max = 0.0, below_max_sigma = 0.0;
  for (const DocLimit& d : a.docs) {
    const double m = d.expected_clicks;
    if (m >= click_floor) {
      const double sigma = std::sqrt(d.limit_rho * (1.0 - d.limit_rho) / m);
      const double band = std::abs(d.limit_rho - d.truth_rho) + 3.0 * sigma;
      char line[200];
      std::snprintf(line, sizeof line,
                    "rho %s/%s: truth %.4f limit %.6f band %.6f (clicks=%.0f)",
                    d.query.c_str(), d.ad_id.c_str(), d.truth_rho, d.limit_rho, band, m);
      check(band <= 0.03, line);
      ++checked;
    } else if (m > below_max) {
      below_max = m;
      below_max_sigma = std::sqrt(m);
    }
  }
  char line[160];
  std::snprintf(line, sizeof line,
                "doc click-count gap: %d docs above floor %.0f; best below %.0f +5s %.0f",
                checked, click_floor, below_max, below_max + 5.0 * below_max_sigma);
  check(checked > 0 && below_max + 5.0 * below_max_sigma < click_floor, line);
}

void audit_mixed_traffic() {
  std::printf("mixed-traffic\n");
  const Scenario s = scenario_preset("mixed-traffic", 1);
  const PresetAudit a = audit_counts(s);
  std::printf("  sessions/week %.0f, clicked %.4f, multi %.4f of clicked\n", a.total_sessions,
              a.pooled.clicked / a.total_sessions, a.pooled.multi / a.pooled.clicked);
  audit_recovery(s, a);
  audit_satisfaction(a, 500.0);
  const double share = a.pooled.reverse / a.pooled.multi;
  char line[120];
  std::snprintf(line, sizeof line, "reverse share of multi-click %.4f in [0.25, 0.35]", share);
  check(share >= 0.25 && share <= 0.35, line);
}

void audit_single_decile() {
  std::printf("single-decile\n");
  const Scenario s = scenario_preset("single-decile", 1);
  const PresetAudit a = audit_counts(s);
  const double targets[] = {0.9794, 0.019, 0.0015, 0.0001};
  for (int k = 1; k <= 4; ++k) {
    const double frac = a.pooled.ends[k] / a.pooled.clicked;
    char line[140];
    std::snprintf(line, sizeof line, "clicked-session share k=%d: %.6f target %.4f", k, frac,
                  targets[k - 1]);
    check(std::abs(frac - targets[k - 1]) <= 5e-4, line);
  }
}

void audit_reverse_heavy() {
  std::printf("reverse-heavy\n");
  const Scenario s = scenario_preset("reverse-heavy", 1);
  const PresetAudit a = audit_counts(s);
  const double share = a.pooled.reverse / a.pooled.multi;
  const double overall = a.pooled.reverse / a.total_sessions;
  std::printf("  multi share %.4f of clicked\n", a.pooled.multi / a.pooled.clicked);
  char line[140];
  std::snprintf(line, sizeof line, "reverse share of multi-click %.4f, of all sessions %.4f",
                share, overall);
  check(share > 0.30 && overall > 0.05, line);
}

void audit_deterministic() {
  std::printf("deterministic\n");
  const Scenario s = scenario_preset("deterministic", 1);
  ModelParams truth = s.ground_truth();
  const QuerySpec& q = s.queries.front();
  std::vector<std::string> ads;
  for (const DocSpec& d : q.slate) ads.push_back(d.ad_id);
  bool always_first = true;
  for (const SequenceProb& sp : enumerate_sequences(truth, q.query, ads)) {
    if (!sp.clicks.empty() && sp.clicks.front() != 1 && sp.prob > 0.0) always_first = false;
  }
  check(always_first, "every clicked session starts at position 1");
}

} // namespace

int main(int argc, char** argv) {
  const std::string which = argc > 1 ? argv[1] : "all";
  if (which == "all" || which == "mixed-traffic") audit_mixed_traffic();
  if (which == "all" || which == "single-decile") audit_single_decile();
  if (which == "all" || which == "reverse-heavy") audit_reverse_heavy();
  if (which == "all" || which == "deterministic") audit_deterministic();
  std::printf("%d check(s) failed\n", g_failures);
  return g_failures;
}
