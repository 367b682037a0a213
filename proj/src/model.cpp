#include "adclick/model.hpp"

#include <algorithm>
#include <cmath>

namespace adclick {

PerseverancePrior PerseverancePrior::uniform(int n_max, double mass) {
  PerseverancePrior p;
  p.alpha.assign(n_max + 1, mass / 2.0);
  p.beta.assign(n_max + 1, mass / 2.0);
  return p;
}

TransitionMatrix TransitionMatrix::zeros(int n_max) {
  TransitionMatrix m;
  m.n_max = n_max;
  m.v.assign(static_cast<std::size_t>(n_max + 1) * n_max, 0.0);
  return m;
}

TransitionMatrix TransitionMatrix::uniform_rows(int n_max) {
  TransitionMatrix m = zeros(n_max);
  for (double& x : m.v) x = 1.0 / n_max;
  return m;
}

double TransitionMatrix::row_sum(int i) const {
  double sum = 0.0;
  for (int j = 1; j <= n_max; ++j) sum += at(i, j);
  return sum;
}

TransitionPrior TransitionPrior::uniform(int n_max, double row_mass) {
  TransitionPrior p;
  p.alpha = TransitionMatrix::zeros(n_max);
  for (double& x : p.alpha.v) x = row_mass / n_max;
  return p;
}

double SatisfactionTable::get(const std::string& query, const std::string& ad_id) const {
  auto it = rho.find({query, ad_id});
  return it == rho.end() ? default_rho : it->second;
}

SufficientStats::SufficientStats(int n_max_positions) : n_max(n_max_positions) {
  ends_with_exactly.assign(n_max + 1, 0);
  continues_past.assign(n_max + 1, 0);
  transition_counts.assign(static_cast<std::size_t>(n_max + 1) * n_max, 0);
}

void SufficientStats::add(const Session& s) {
  for (int c : s.clicks) {
    if (c > n_max) {
      ++rejected;
      return;
    }
  }
  ++sessions;
  const int k = s.click_count();
  ++ends_with_exactly[k];
  for (int j = 0; j < k && j <= n_max; ++j) ++continues_past[j];
  int prev = 0;
  for (std::size_t i = 0; i < s.clicks.size(); ++i) {
    const int c = s.clicks[i];
    ++transition_counts[static_cast<std::size_t>(prev) * n_max + (c - 1)];
    prev = c;
    const QueryAd key{s.query, s.ads[c - 1]};
    ++doc_clicks[key];
    if (i + 1 == s.clicks.size()) {
      ++doc_clicks_last[key];
    } else {
      ++doc_clicks_not_last[key];
    }
  }
}

void SufficientStats::merge(const SufficientStats& other) {
  if (other.n_max != n_max) {
    throw std::invalid_argument("cannot merge stats with different n_max");
  }
  sessions += other.sessions;
  rejected += other.rejected;
  for (int j = 0; j <= n_max; ++j) {
    ends_with_exactly[j] += other.ends_with_exactly[j];
    continues_past[j] += other.continues_past[j];
  }
  for (std::size_t i = 0; i < transition_counts.size(); ++i) {
    transition_counts[i] += other.transition_counts[i];
  }
  for (const auto& [key, v] : other.doc_clicks) doc_clicks[key] += v;
  for (const auto& [key, v] : other.doc_clicks_not_last) doc_clicks_not_last[key] += v;
  for (const auto& [key, v] : other.doc_clicks_last) doc_clicks_last[key] += v;
}

bool SufficientStats::operator==(const SufficientStats& other) const {
  return n_max == other.n_max && sessions == other.sessions && rejected == other.rejected &&
         ends_with_exactly == other.ends_with_exactly &&
         continues_past == other.continues_past &&
         transition_counts == other.transition_counts && doc_clicks == other.doc_clicks &&
         doc_clicks_not_last == other.doc_clicks_not_last &&
         doc_clicks_last == other.doc_clicks_last;
}

SufficientStats accumulate_stats(const std::vector<Session>& sessions, int n_max) {
  SufficientStats stats(n_max);
  for (const Session& s : sessions) stats.add(s);
  return stats;
}

PerseveranceParams estimate_perseverance(const SufficientStats& stats,
                                         const PerseverancePrior& prior) {
  PerseveranceParams params;
  params.eta.resize(stats.n_max + 1);
  for (int j = 0; j <= stats.n_max; ++j) {
    const double exact = static_cast<double>(stats.ends_with_exactly[j]);
    const double more = static_cast<double>(stats.continues_past[j]);
    params.eta[j] = (exact + prior.alpha[j]) / (exact + prior.alpha[j] + more + prior.beta[j]);
  }
  return params;
}

SatisfactionTable estimate_satisfaction(const SufficientStats& stats, double smoothing,
                                        double default_rho) {
  SatisfactionTable table;
  table.default_rho = default_rho;
  for (const auto& [key, total] : stats.doc_clicks) {
    auto last_it = stats.doc_clicks_last.find(key);
    const double last = last_it == stats.doc_clicks_last.end()
                            ? 0.0
                            : static_cast<double>(last_it->second);
    table.rho[key] = (last + smoothing) / (static_cast<double>(total) + 2.0 * smoothing);
  }
  return table;
}

TransitionMatrix estimate_transition(const SufficientStats& stats, const TransitionPrior& prior) {
  if (prior.alpha.n_max != stats.n_max) {
    throw std::invalid_argument("transition prior has wrong size");
  }
  TransitionMatrix m = TransitionMatrix::zeros(stats.n_max);
  for (int i = 0; i <= stats.n_max; ++i) {
    double denom = 0.0;
    for (int j = 1; j <= stats.n_max; ++j) {
      denom += static_cast<double>(stats.transition(i, j)) + prior.alpha.at(i, j);
    }
    for (int j = 1; j <= stats.n_max; ++j) {
      m.at(i, j) = (static_cast<double>(stats.transition(i, j)) + prior.alpha.at(i, j)) / denom;
    }
  }
  return m;
}

Hyperparameters fit_priors(const std::vector<Session>& priors_sessions, int n_max) {
  Hyperparameters h;
  if (priors_sessions.empty()) {
    h.eta = PerseverancePrior::uniform(n_max, 10.0);
    h.gamma = TransitionPrior::uniform(n_max, 10.0);
    h.from_empty_priors = true;
    return h;
  }
  SufficientStats stats = accumulate_stats(priors_sessions, n_max);
  PerseveranceParams eta_hat =
      estimate_perseverance(stats, PerseverancePrior::uniform(n_max, 1.0));
  TransitionMatrix gamma_hat = estimate_transition(stats, TransitionPrior::uniform(n_max, 1.0));
  h.eta.alpha.resize(n_max + 1);
  h.eta.beta.resize(n_max + 1);
  for (int j = 0; j <= n_max; ++j) {
    h.eta.alpha[j] = 10.0 * eta_hat.eta[j];
    h.eta.beta[j] = 10.0 * (1.0 - eta_hat.eta[j]);
  }
  h.gamma.alpha = TransitionMatrix::zeros(n_max);
  for (int i = 0; i <= n_max; ++i) {
    for (int j = 1; j <= n_max; ++j) {
      h.gamma.alpha.at(i, j) = 10.0 * gamma_hat.at(i, j);
    }
  }
  return h;
}

namespace {

// Per-slate view with document parameters resolved once, so the walk over
// states does arithmetic only.
struct SlateView {
  int n = 0;
  std::vector<double> theta;  // by position-1
  std::vector<double> rho;
  const PerseveranceParams* eta = nullptr;
  const TransitionMatrix* gamma = nullptr;

  double rho_prev(int prev_pos) const { return prev_pos == 0 ? 0.0 : rho[prev_pos - 1]; }
};

SlateView resolve(const ModelParams& params, const std::string& query,
                  const std::vector<std::string>& ads) {
  const int n = static_cast<int>(ads.size());
  if (n < 1) throw std::invalid_argument("empty slate");
  if (n > params.n_max) {
    throw std::invalid_argument("slate of " + std::to_string(n) +
                                " exceeds model positions (" + std::to_string(params.n_max) + ")");
  }
  SlateView view;
  view.n = n;
  view.theta.reserve(n);
  view.rho.reserve(n);
  for (const std::string& ad : ads) {
    view.theta.push_back(params.attractiveness.get(query, ad));
    view.rho.push_back(params.satisfaction.get(query, ad));
  }
  view.eta = &params.perseverance;
  view.gamma = &params.transition;
  return view;
}

// Fills click_prob with the raw theta * gamma masses over unclicked
// positions and returns their sum. A zero sum means the walk cannot
// continue from this state.
double step_masses(const SlateView& view, int prev, std::uint32_t mask,
                   std::vector<double>& click_prob) {
  click_prob.assign(view.n, 0.0);
  double total = 0.0;
  for (int j = 1; j <= view.n; ++j) {
    if (mask & (1u << (j - 1))) continue;
    const double mass = view.theta[j - 1] * view.gamma->at(prev, j);
    click_prob[j - 1] = mass;
    total += mass;
  }
  return total;
}

double continue_prob_at(const SlateView& view, int prev, int k) {
  return (1.0 - view.rho_prev(prev)) * (1.0 - view.eta->eta[k]);
}

// Fills click_prob (renormalized over unclicked positions) and returns the
// continue probability. Throws when every candidate has zero mass.
double step_into(const SlateView& view, int prev, std::uint32_t mask, int k,
                 std::vector<double>& click_prob) {
  const double total = step_masses(view, prev, mask, click_prob);
  if (!(total > 0.0)) {
    throw DegenerateStepError("all candidate positions have zero mass (prev=" +
                              std::to_string(prev) + ")");
  }
  for (double& p : click_prob) p /= total;
  return continue_prob_at(view, prev, k);
}

double stop_prob_at(const SlateView& view, int prev, int k) {
  if (k == 0) return view.eta->eta[0];
  const double rho_prev = view.rho_prev(prev);
  return rho_prev + (1.0 - rho_prev) * view.eta->eta[k];
}

void enumerate_rec(const SlateView& view, int prev, std::uint32_t mask, int k,
                   double reach_prob, std::vector<int>& prefix,
                   std::vector<SequenceProb>& out) {
  const std::uint32_t full = (1u << view.n) - 1;
  std::vector<double> click_prob;
  const double total = mask == full ? 0.0 : step_masses(view, prev, mask, click_prob);
  if (!(total > 0.0)) {
    // Exhausted: every position clicked, or none of the rest has mass.
    out.push_back({prefix, reach_prob});
    return;
  }
  out.push_back({prefix, reach_prob * stop_prob_at(view, prev, k)});
  const double cont = continue_prob_at(view, prev, k);
  for (int j = 1; j <= view.n; ++j) {
    if (mask & (1u << (j - 1))) continue;
    prefix.push_back(j);
    enumerate_rec(view, j, mask | (1u << (j - 1)), k + 1,
                  reach_prob * cont * click_prob[j - 1] / total, prefix, out);
    prefix.pop_back();
  }
}

std::vector<SequenceProb> enumerate_view(const SlateView& view) {
  std::vector<SequenceProb> out;
  std::vector<int> prefix;
  enumerate_rec(view, 0, 0, 0, 1.0, prefix, out);
  return out;
}

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Ordered k-subsets with their generative probabilities, sorted by
// descending probability with lexicographic tie-breaks.
std::vector<SequenceProb> ranked_k_sequences(const ModelParams& params, const Session& s,
                                             int k) {
  SlateView view = resolve(params, s.query, s.ads);
  std::vector<SequenceProb> all = enumerate_view(view);
  std::vector<SequenceProb> k_seqs;
  for (SequenceProb& sp : all) {
    if (static_cast<int>(sp.clicks.size()) == k) k_seqs.push_back(std::move(sp));
  }
  std::sort(k_seqs.begin(), k_seqs.end(), [](const SequenceProb& a, const SequenceProb& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    return lex_less(a.clicks, b.clicks);
  });
  return k_seqs;
}

} // namespace

StepDistribution step_distribution(const ModelParams& params, const std::string& query,
                                   const std::vector<std::string>& ads, int prev_pos,
                                   std::uint32_t clicked_mask, int clicks_so_far) {
  SlateView view = resolve(params, query, ads);
  StepDistribution dist;
  dist.continue_prob = step_into(view, prev_pos, clicked_mask, clicks_so_far, dist.click_prob);
  return dist;
}

double sequence_probability(const ModelParams& params, const Session& s) {
  SlateView view = resolve(params, s.query, s.ads);
  const int n_hat = s.click_count();
  if (n_hat == 0) return view.eta->eta[0];
  double p = 1.0;
  std::uint32_t mask = 0;
  int prev = 0;
  std::vector<double> click_prob;
  for (int i = 0; i < n_hat; ++i) {
    const int c = s.clicks[i];
    const double total = step_masses(view, prev, mask, click_prob);
    if (!(total > 0.0)) return 0.0;
    p *= continue_prob_at(view, prev, i) * click_prob[c - 1] / total;
    mask |= 1u << (c - 1);
    prev = c;
  }
  const double rho_last = view.rho_prev(prev);
  return p * (rho_last + (1.0 - rho_last) * view.eta->eta[n_hat]);
}

std::vector<SequenceProb> enumerate_sequences(const ModelParams& params,
                                              const std::string& query,
                                              const std::vector<std::string>& ads) {
  if (ads.size() > static_cast<std::size_t>(kMaxSlate)) {
    throw EnumerationLimitError("slate too large to enumerate");
  }
  return enumerate_view(resolve(params, query, ads));
}

std::vector<int> predict_sequence(const ModelParams& params, const Session& s, int k) {
  if (k < 1 || k > s.slate_size()) {
    throw std::invalid_argument("prediction length outside slate");
  }
  return ranked_k_sequences(params, s, k).front().clicks;
}

std::uint64_t rank_actual_sequence(const ModelParams& params, const Session& s) {
  const int k = s.click_count();
  if (k == 0) throw std::invalid_argument("session has no clicks to rank");
  std::vector<SequenceProb> ranked = ranked_k_sequences(params, s, k);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (ranked[i].clicks == s.clicks) return i + 1;
  }
  throw std::logic_error("actual sequence missing from enumeration");
}

std::vector<double> position_click_probabilities(const ModelParams& params,
                                                 const std::string& query,
                                                 const std::vector<std::string>& ads) {
  std::vector<SequenceProb> all = enumerate_sequences(params, query, ads);
  std::vector<double> q(ads.size(), 0.0);
  for (const SequenceProb& sp : all) {
    for (int c : sp.clicks) q[c - 1] += sp.prob;
  }
  return q;
}

SampledSession sample_session(const ModelParams& params, const std::string& query,
                              const std::vector<std::string>& ads, RngStream& rng) {
  SlateView view = resolve(params, query, ads);
  SampledSession result;
  result.session.query = query;
  result.session.ads = ads;
  std::uint32_t mask = 0;
  int prev = 0;
  int k = 0;
  std::vector<double> click_prob;
  while (true) {
    const bool full = mask == (1u << view.n) - 1u;
    const double total = full ? 0.0 : step_masses(view, prev, mask, click_prob);
    if (!(total > 0.0)) {
      result.exhausted = true;
      break;
    }
    // At k = 0 the satisfied draw is Bernoulli(0): skipped, recorded false.
    const bool satisfied = k > 0 && rng.bernoulli(view.rho_prev(prev));
    result.satisfied_draws.push_back(satisfied);
    if (satisfied) {
      result.tired_draws.push_back(false);
      break;
    }
    const bool tired = rng.bernoulli(view.eta->eta[k]);
    result.tired_draws.push_back(tired);
    if (tired) break;
    const int pos = static_cast<int>(rng.categorical(click_prob)) + 1;
    result.session.clicks.push_back(pos);
    mask |= 1u << (pos - 1);
    prev = pos;
    ++k;
  }
  return result;
}

double session_perplexity(const std::vector<double>& q, const std::vector<bool>& clicked) {
  if (q.size() != clicked.size() || q.empty()) {
    throw std::invalid_argument("perplexity needs one prediction per position");
  }
  double log_sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double qi = std::clamp(q[i], kPerplexityClamp, 1.0 - kPerplexityClamp);
    log_sum += clicked[i] ? std::log2(qi) : std::log2(1.0 - qi);
  }
  return std::exp2(-log_sum / static_cast<double>(q.size()));
}

} // namespace adclick
