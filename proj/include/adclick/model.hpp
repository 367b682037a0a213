#pragma once
// The multi-click model. A session is a walk over slate positions: from the
// state "k clicks so far, previous click at prev" the user either stops
// (satisfied with probability rho of the previously clicked ad, otherwise
// tired with probability eta_k) or clicks one of the still-unclicked
// positions j with probability proportional to theta_{d_j} * gamma_{prev,j}.
// Row 0 of gamma is the first-click position bias; entries with j < prev
// make reverse click orders reachable. Estimation is closed-form from
// one-pass counters; exact likelihoods come from exhaustive enumeration,
// which is cheap because slates have at most 8 positions.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adclick/attractiveness.hpp"
#include "adclick/rng.hpp"
#include "adclick/session.hpp"

namespace adclick {

class DegenerateStepError : public std::runtime_error {
 public:
  explicit DegenerateStepError(const std::string& what) : std::runtime_error(what) {}
};

class EnumerationLimitError : public std::runtime_error {
 public:
  explicit EnumerationLimitError(const std::string& what) : std::runtime_error(what) {}
};

// eta[k]: probability of abandoning, unsatisfied, at the decision point
// after k clicks; eta[0] is zero-click abandonment.
struct PerseveranceParams {
  std::vector<double> eta;  // size n_max + 1
  int n_max() const { return static_cast<int>(eta.size()) - 1; }
};

struct PerseverancePrior {
  std::vector<double> alpha;  // size n_max + 1
  std::vector<double> beta;
  static PerseverancePrior uniform(int n_max, double mass = 10.0);
};

// gamma(i, j): probability the next click lands on position j given the
// previous click was at position i (i = 0 before any click). Rows sum to 1.
struct TransitionMatrix {
  int n_max = 0;
  std::vector<double> v;  // (n_max + 1) rows of n_max entries

  static TransitionMatrix zeros(int n_max);
  static TransitionMatrix uniform_rows(int n_max);
  double at(int i, int j) const { return v[static_cast<std::size_t>(i) * n_max + (j - 1)]; }
  double& at(int i, int j) { return v[static_cast<std::size_t>(i) * n_max + (j - 1)]; }
  double row_sum(int i) const;
};

struct TransitionPrior {
  TransitionMatrix alpha;  // pseudo-counts, strictly positive
  static TransitionPrior uniform(int n_max, double row_mass = 10.0);
};

struct Hyperparameters {
  PerseverancePrior eta;
  TransitionPrior gamma;
  bool from_empty_priors = false;  // set when fit_priors fell back to uniform
};

using QueryAd = std::pair<std::string, std::string>;

// rho: probability the user is satisfied (stops happily) after clicking the
// ad. Ads never seen in training fall back to default_rho.
struct SatisfactionTable {
  std::map<QueryAd, double> rho;
  double default_rho = 0.5;
  double get(const std::string& query, const std::string& ad_id) const;
};

struct ModelParams {
  int n_max = kDefaultSlate;
  PerseveranceParams perseverance;
  TransitionMatrix transition;
  SatisfactionTable satisfaction;
  AttractivenessTable attractiveness;
  Hyperparameters hyper;  // the priors the estimates were computed under
};

// One-pass counters. All are plain sums, so shards merge associatively.
struct SufficientStats {
  int n_max = kDefaultSlate;
  std::uint64_t sessions = 0;
  std::uint64_t rejected = 0;  // records with a click position beyond n_max

  std::vector<std::uint64_t> ends_with_exactly;  // index j: sessions with exactly j clicks
  std::vector<std::uint64_t> continues_past;     // index j: sessions with more than j clicks
  std::vector<std::uint64_t> transition_counts;  // (n_max + 1) x n_max, row 0 = first click

  std::map<QueryAd, std::uint64_t> doc_clicks;           // clicks per document
  std::map<QueryAd, std::uint64_t> doc_clicks_not_last;  // clicked, session went on
  std::map<QueryAd, std::uint64_t> doc_clicks_last;      // clicked last in the session

  explicit SufficientStats(int n_max_positions = kDefaultSlate);
  std::uint64_t transition(int i, int j) const {
    return transition_counts[static_cast<std::size_t>(i) * n_max + (j - 1)];
  }
  std::uint64_t& transition(int i, int j) {
    return transition_counts[static_cast<std::size_t>(i) * n_max + (j - 1)];
  }
  void add(const Session& s);
  void merge(const SufficientStats& other);
  bool operator==(const SufficientStats& other) const;
};

SufficientStats accumulate_stats(const std::vector<Session>& sessions,
                                 int n_max = kDefaultSlate);

// eta_j = (exact_j + alpha_j) / (exact_j + alpha_j + more_j + beta_j).
PerseveranceParams estimate_perseverance(const SufficientStats& stats,
                                         const PerseverancePrior& prior);

// rho_d = (last_d + s) / (last_d + not_last_d + 2s); s = 0 keeps the raw
// ratio, never-clicked documents get default_rho.
SatisfactionTable estimate_satisfaction(const SufficientStats& stats,
                                        double smoothing = 0.0,
                                        double default_rho = 0.5);

// gamma_{i,j} = (count_{i,j} + alpha_{i,j}) / sum_j (count + alpha).
TransitionMatrix estimate_transition(const SufficientStats& stats,
                                     const TransitionPrior& prior);

// Empirical eta and gamma on the priors week (estimated under a total-mass-1
// uniform prior), scaled to total mass 10 per parameter. Empty input falls
// back to uniform mass-10 hyperparameters and flags it.
Hyperparameters fit_priors(const std::vector<Session>& priors_sessions,
                           int n_max = kDefaultSlate);

// One decision point of the walk. click_prob is indexed by position-1 and is
// zero at already-clicked positions; the rest is renormalized so it sums
// to 1. Throws DegenerateStepError when every candidate has zero mass.
struct StepDistribution {
  double continue_prob = 0.0;          // (1 - rho_prev) * (1 - eta_k)
  std::vector<double> click_prob;      // size = slate size
};
StepDistribution step_distribution(const ModelParams& params,
                                   const std::string& query,
                                   const std::vector<std::string>& ads,
                                   int prev_pos,  // 0 before any click
                                   std::uint32_t clicked_mask,
                                   int clicks_so_far);

// Likelihood of the observed session: product of continue-and-click factors
// for each observed click, times the final stop factor
// rho_last + (1 - rho_last) * eta_{k}; a zero-click session scores eta_0.
// A click on a position with zero remaining mass scores 0.
double sequence_probability(const ModelParams& params, const Session& s);

struct SequenceProb {
  std::vector<int> clicks;
  double prob = 0.0;
};

// All ordered click subsets of the slate (including the empty one) with
// their generative probabilities. At exhausted states (every position
// clicked, or zero mass on every remaining one) the walk stops with
// probability 1, so the list always sums to 1. Slates larger than 8
// positions are refused (109,601 sequences at n = 8).
std::vector<SequenceProb> enumerate_sequences(const ModelParams& params,
                                              const std::string& query,
                                              const std::vector<std::string>& ads);

// Highest-probability ordered k-subset; ties broken lexicographically by
// position sequence.
std::vector<int> predict_sequence(const ModelParams& params, const Session& s, int k);

// 1-based rank of the observed click sequence among all ordered subsets of
// the same length, sorted by descending probability (lexicographic ties).
std::uint64_t rank_actual_sequence(const ModelParams& params, const Session& s);

// Marginal probability that each position receives a click, by exact
// enumeration.
std::vector<double> position_click_probabilities(const ModelParams& params,
                                                 const std::string& query,
                                                 const std::vector<std::string>& ads);

// Generative draw. Latent decision draws are recorded per decision point:
// decision i happens before click i+1 would occur; the session ends at the
// first satisfied/tired draw, or by exhaustion when every position has been
// clicked or no remaining position has mass (no draws for exhausted states).
struct SampledSession {
  Session session;
  std::vector<bool> satisfied_draws;  // one per decision point taken
  std::vector<bool> tired_draws;      // same length
  bool exhausted = false;
};
SampledSession sample_session(const ModelParams& params,
                              const std::string& query,
                              const std::vector<std::string>& ads,
                              RngStream& rng);

// Perplexity of one session: 2^(-mean over positions of the click-indicator
// log-likelihood). Predictions are clamped to [1e-6, 1 - 1e-6].
double session_perplexity(const std::vector<double>& q, const std::vector<bool>& clicked);

inline constexpr double kPerplexityClamp = 1e-6;

} // namespace adclick
