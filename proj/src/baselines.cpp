#include "adclick/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adclick {

namespace {

struct CascadeSlate {
  std::vector<double> theta;  // by position-1
  std::vector<double> rho;
  double lambda = 0.0;
  int n() const { return static_cast<int>(theta.size()); }
};

CascadeSlate resolve_cascade(const DbnParams& p, const Session& s) {
  CascadeSlate slate;
  slate.lambda = p.lambda;
  slate.theta.reserve(s.ads.size());
  slate.rho.reserve(s.ads.size());
  for (const std::string& ad : s.ads) {
    slate.theta.push_back(p.get_theta(s.query, ad));
    slate.rho.push_back(p.get_rho(s.query, ad));
  }
  return slate;
}

// P(no click at any of positions i..n | position i examined).
double no_click_tail(const CascadeSlate& slate, int i) {
  double tail = 1.0;
  for (int pos = slate.n(); pos >= i; --pos) {
    tail = (1.0 - slate.theta[pos - 1]) * (slate.lambda * tail + (1.0 - slate.lambda));
  }
  return tail;
}

bool strictly_increasing_in_range(const std::vector<int>& seq, int n) {
  int prev = 0;
  for (int j : seq) {
    if (j <= prev || j > n) return false;
    prev = j;
  }
  return true;
}

double cascade_sequence_probability(const CascadeSlate& slate, const std::vector<int>& seq) {
  const int n = slate.n();
  if (!strictly_increasing_in_range(seq, n)) return 0.0;
  if (seq.empty()) return no_click_tail(slate, 1);
  double prob = 1.0;
  int pos = 1;
  for (std::size_t idx = 0; idx < seq.size(); ++idx) {
    const int j = seq[idx];
    for (int i = pos; i < j; ++i) {
      prob *= (1.0 - slate.theta[i - 1]) * slate.lambda;
    }
    prob *= slate.theta[j - 1];
    const double rho_j = slate.rho[j - 1];
    if (idx + 1 < seq.size()) {
      prob *= (1.0 - rho_j) * slate.lambda;
    } else {
      prob *= rho_j + (1.0 - rho_j) * ((1.0 - slate.lambda) +
                                       slate.lambda * no_click_tail(slate, j + 1));
    }
    pos = j + 1;
  }
  return prob;
}

void increasing_subsets_rec(int n, int k, int from, std::vector<int>& prefix,
                            std::vector<std::vector<int>>& out) {
  if (static_cast<int>(prefix.size()) == k) {
    out.push_back(prefix);
    return;
  }
  const int remaining = k - static_cast<int>(prefix.size());
  for (int j = from; j + remaining - 1 <= n; ++j) {
    prefix.push_back(j);
    increasing_subsets_rec(n, k, j + 1, prefix, out);
    prefix.pop_back();
  }
}

std::vector<std::vector<int>> increasing_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> prefix;
  increasing_subsets_rec(n, k, 1, prefix, out);
  return out;
}

void ordered_subsets_rec(int n, int k, std::uint32_t used, std::vector<int>& prefix,
                         std::vector<std::vector<int>>& out) {
  if (static_cast<int>(prefix.size()) == k) {
    out.push_back(prefix);
    return;
  }
  for (int j = 1; j <= n; ++j) {
    if (used & (1u << (j - 1))) continue;
    prefix.push_back(j);
    ordered_subsets_rec(n, k, used | (1u << (j - 1)), prefix, out);
    prefix.pop_back();
  }
}

// All ordered k-subsets of 1..n in lexicographic order.
std::vector<std::vector<int>> ordered_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> prefix;
  ordered_subsets_rec(n, k, 0, prefix, out);
  return out;
}

struct ScoredSeq {
  std::vector<int> clicks;
  double prob = 0.0;
};

// Sorts descending by probability; equal probabilities keep lexicographic
// order, which the generators above already produce.
std::uint64_t rank_in_scored(std::vector<ScoredSeq>& scored, const std::vector<int>& actual) {
  std::stable_sort(scored.begin(), scored.end(),
                   [](const ScoredSeq& a, const ScoredSeq& b) { return a.prob > b.prob; });
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (scored[i].clicks == actual) return i + 1;
  }
  throw std::invalid_argument("observed sequence is not an ordered subset of the slate");
}

double smoothed_rate(std::uint64_t hits, std::uint64_t trials) {
  return (static_cast<double>(hits) + 1.0) / (static_cast<double>(trials) + 2.0);
}

} // namespace

double DbnParams::get_theta(const std::string& query, const std::string& ad_id) const {
  auto it = theta.find({query, ad_id});
  return it == theta.end() ? theta_default : it->second;
}

double DbnParams::get_rho(const std::string& query, const std::string& ad_id) const {
  auto it = rho.find({query, ad_id});
  return it == rho.end() ? rho_default : it->second;
}

DbnParams dbn_fit(const std::vector<Session>& train, double lambda) {
  std::map<QueryAd, std::uint64_t> impressions;
  std::map<QueryAd, std::uint64_t> clicks;
  std::map<QueryAd, std::uint64_t> last_clicks;
  for (const Session& s : train) {
    for (const std::string& ad : s.ads) ++impressions[{s.query, ad}];
    for (std::size_t i = 0; i < s.clicks.size(); ++i) {
      const QueryAd key{s.query, s.ads[s.clicks[i] - 1]};
      ++clicks[key];
      if (i + 1 == s.clicks.size()) ++last_clicks[key];
    }
  }
  DbnParams p;
  p.lambda = lambda;
  for (const auto& [key, shown] : impressions) {
    auto c_it = clicks.find(key);
    const std::uint64_t c = c_it == clicks.end() ? 0 : c_it->second;
    p.theta[key] = smoothed_rate(c, shown);
    if (c > 0) {
      auto l_it = last_clicks.find(key);
      const std::uint64_t l = l_it == last_clicks.end() ? 0 : l_it->second;
      p.rho[key] = smoothed_rate(l, c);
    }
  }
  return p;
}

double dbn_sequence_probability(const DbnParams& p, const Session& s,
                                const std::vector<int>& seq) {
  return cascade_sequence_probability(resolve_cascade(p, s), seq);
}

std::vector<int> dbn_predict(const DbnParams& p, const Session& s, int k) {
  const int n = s.slate_size();
  if (k < 1 || k > n) throw std::invalid_argument("prediction length outside slate");
  const CascadeSlate slate = resolve_cascade(p, s);
  if (k == 1) {
    int best = 1;
    double best_prob = -1.0;
    double reach = 1.0;
    for (int j = 1; j <= n; ++j) {
      const double prob = reach * slate.theta[j - 1];
      if (prob > best_prob) {
        best_prob = prob;
        best = j;
      }
      reach *= (1.0 - slate.theta[j - 1]) * slate.lambda;
    }
    return {best};
  }
  std::vector<int> best;
  double best_prob = -1.0;
  for (const std::vector<int>& cand : increasing_subsets(n, k)) {
    const double prob = cascade_sequence_probability(slate, cand);
    if (prob > best_prob) {
      best_prob = prob;
      best = cand;
    }
  }
  return best;
}

std::uint64_t dbn_rank_of(const DbnParams& p, const Session& s) {
  const int k = s.click_count();
  if (k == 0) throw std::invalid_argument("session has no clicks to rank");
  const CascadeSlate slate = resolve_cascade(p, s);
  std::vector<ScoredSeq> scored;
  for (std::vector<int>& cand : ordered_subsets(s.slate_size(), k)) {
    const double prob = cascade_sequence_probability(slate, cand);
    scored.push_back({std::move(cand), prob});
  }
  return rank_in_scored(scored, s.clicks);
}

std::vector<double> dbn_click_marginals(const DbnParams& p, const Session& s) {
  const CascadeSlate slate = resolve_cascade(p, s);
  std::vector<double> q(slate.n(), 0.0);
  double examined = 1.0;
  for (int j = 1; j <= slate.n(); ++j) {
    const double theta_j = slate.theta[j - 1];
    q[j - 1] = examined * theta_j;
    examined *= slate.lambda * (theta_j * (1.0 - slate.rho[j - 1]) + (1.0 - theta_j));
  }
  return q;
}

double IcmParams::get_rate(const std::string& query, const std::string& ad_id) const {
  auto it = rate.find({query, ad_id});
  return it == rate.end() ? rate_default : it->second;
}

DbnParams IcmParams::as_cascade() const {
  DbnParams p;
  p.theta = rate;
  p.lambda = 1.0;
  p.theta_default = rate_default;
  p.rho_default = 0.0;
  return p;
}

IcmParams icm_fit(const std::vector<Session>& train) {
  std::map<QueryAd, std::uint64_t> impressions;
  std::map<QueryAd, std::uint64_t> clicks;
  for (const Session& s : train) {
    for (const std::string& ad : s.ads) ++impressions[{s.query, ad}];
    for (int c : s.clicks) ++clicks[{s.query, s.ads[c - 1]}];
  }
  IcmParams p;
  for (const auto& [key, shown] : impressions) {
    auto c_it = clicks.find(key);
    const std::uint64_t c = c_it == clicks.end() ? 0 : c_it->second;
    p.rate[key] = smoothed_rate(c, shown);
  }
  return p;
}

double icm_sequence_probability(const IcmParams& p, const Session& s,
                                const std::vector<int>& seq) {
  return dbn_sequence_probability(p.as_cascade(), s, seq);
}

std::vector<int> icm_predict(const IcmParams& p, const Session& s, int k) {
  const int n = s.slate_size();
  if (k < 1 || k > n) throw std::invalid_argument("prediction length outside slate");
  std::vector<int> order(n);
  for (int j = 1; j <= n; ++j) order[j - 1] = j;
  std::vector<double> rates(n);
  for (int j = 1; j <= n; ++j) rates[j - 1] = p.get_rate(s.query, s.ads[j - 1]);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return rates[a - 1] > rates[b - 1]; });
  std::vector<int> picked(order.begin(), order.begin() + k);
  std::sort(picked.begin(), picked.end());
  return picked;
}

std::uint64_t icm_rank_of(const IcmParams& p, const Session& s) {
  return dbn_rank_of(p.as_cascade(), s);
}

std::vector<double> icm_click_marginals(const IcmParams& p, const Session& s) {
  std::vector<double> q;
  q.reserve(s.ads.size());
  for (const std::string& ad : s.ads) q.push_back(p.get_rate(s.query, ad));
  return q;
}

PmParams PmParams::standard(int n_max) {
  PmParams p;
  p.n_max = n_max;
  p.weights.resize(n_max);
  for (int j = 1; j <= n_max; ++j) p.weights[j - 1] = std::exp2(-j);
  return p;
}

namespace {

std::vector<double> pm_slate_weights(const PmParams& p, int n) {
  std::vector<double> w(n);
  for (int j = 1; j <= n; ++j) {
    w[j - 1] = j <= static_cast<int>(p.weights.size()) ? p.weights[j - 1] : std::exp2(-j);
  }
  return w;
}

} // namespace

std::vector<int> pm_predict(int k) {
  if (k < 1) throw std::invalid_argument("prediction length outside slate");
  std::vector<int> seq(k);
  for (int j = 1; j <= k; ++j) seq[j - 1] = j;
  return seq;
}

std::uint64_t pm_rank_of(const PmParams& p, const Session& s) {
  return weighted_draw_rank(pm_slate_weights(p, s.slate_size()), s.clicks);
}

std::vector<double> pm_click_marginals(const PmParams& p, const Session& s) {
  return pm_slate_weights(p, s.slate_size());
}

std::vector<int> am_predict(const std::vector<double>& slate_theta, int k) {
  const int n = static_cast<int>(slate_theta.size());
  if (k < 1 || k > n) throw std::invalid_argument("prediction length outside slate");
  std::vector<int> order(n);
  for (int j = 1; j <= n; ++j) order[j - 1] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return slate_theta[a - 1] > slate_theta[b - 1]; });
  return {order.begin(), order.begin() + k};
}

namespace {

std::vector<double> am_slate_theta(const AttractivenessTable& theta, const Session& s) {
  std::vector<double> t;
  t.reserve(s.ads.size());
  for (const std::string& ad : s.ads) {
    t.push_back(std::clamp(theta.get(s.query, ad), 0.0, 1.0));
  }
  return t;
}

} // namespace

std::uint64_t am_rank_of(const AttractivenessTable& theta, const Session& s) {
  return weighted_draw_rank(am_slate_theta(theta, s), s.clicks);
}

std::vector<double> am_click_marginals(const AttractivenessTable& theta, const Session& s) {
  return am_slate_theta(theta, s);
}

std::uint64_t weighted_draw_rank(const std::vector<double>& weights,
                                 const std::vector<int>& actual) {
  const int n = static_cast<int>(weights.size());
  const int k = static_cast<int>(actual.size());
  if (k == 0) throw std::invalid_argument("session has no clicks to rank");
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<ScoredSeq> scored;
  for (std::vector<int>& cand : ordered_subsets(n, k)) {
    double prob = 1.0;
    double remaining = total;
    for (int j : cand) {
      const double w = weights[j - 1];
      prob = remaining > 0.0 ? prob * (w / remaining) : 0.0;
      remaining -= w;
    }
    scored.push_back({std::move(cand), prob});
  }
  return rank_in_scored(scored, actual);
}

} // namespace adclick
