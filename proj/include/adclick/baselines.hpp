#pragma once
// Comparison models. DBN/ICM are forward cascades: the user scans positions
// top to bottom, so any click sequence with a decreasing adjacent pair has
// probability exactly zero. PM always predicts the top positions in order;
// AM predicts the most attractive ads first.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "adclick/attractiveness.hpp"
#include "adclick/model.hpp"
#include "adclick/session.hpp"

namespace adclick {

struct DbnParams {
  std::map<QueryAd, double> theta;  // add-one-smoothed click rate
  std::map<QueryAd, double> rho;    // add-one-smoothed last-click fraction
  double lambda = 0.01;             // continue-after-click perseverance
  double theta_default = 0.5;
  double rho_default = 0.5;

  double get_theta(const std::string& query, const std::string& ad_id) const;
  double get_rho(const std::string& query, const std::string& ad_id) const;
};

DbnParams dbn_fit(const std::vector<Session>& train, double lambda = 0.01);

// Probability that the cascade produces exactly this click set. The
// candidate must be strictly increasing (forward scan); otherwise 0.
double dbn_sequence_probability(const DbnParams& p, const Session& s,
                                const std::vector<int>& seq);

// k = 1 predicts argmax_j of the first-click marginal
// theta_j * lambda^(j-1) * prod_{i<j}(1 - theta_i); k >= 2 is the exhaustive
// argmax of dbn_sequence_probability over increasing k-subsets.
std::vector<int> dbn_predict(const DbnParams& p, const Session& s, int k);

// Rank of the observed sequence among all ordered k-subsets under
// dbn_sequence_probability (reverse orders tie at 0, broken
// lexicographically).
std::uint64_t dbn_rank_of(const DbnParams& p, const Session& s);

// P(click at position j) under the cascade scan.
std::vector<double> dbn_click_marginals(const DbnParams& p, const Session& s);

// ICM is the lambda = 1, rho = 0 cascade: examination never stops, so
// clicks are independent per position with the fitted rate.
struct IcmParams {
  std::map<QueryAd, double> rate;  // add-one-smoothed click rate
  double rate_default = 0.5;
  double get_rate(const std::string& query, const std::string& ad_id) const;
  DbnParams as_cascade() const;
};

IcmParams icm_fit(const std::vector<Session>& train);
double icm_sequence_probability(const IcmParams& p, const Session& s,
                                const std::vector<int>& seq);
// Top-k positions by fitted click rate, emitted in increasing position
// order (rate ties prefer the lower position).
std::vector<int> icm_predict(const IcmParams& p, const Session& s, int k);
std::uint64_t icm_rank_of(const IcmParams& p, const Session& s);
std::vector<double> icm_click_marginals(const IcmParams& p, const Session& s);

// Position model: the first click is at position 1, the next at 2, ...
// Ranking and marginals come from fixed halving position weights.
struct PmParams {
  int n_max = kDefaultSlate;
  std::vector<double> weights;  // weights[j-1] for position j
  static PmParams standard(int n_max = kDefaultSlate);
};

std::vector<int> pm_predict(int k);
std::uint64_t pm_rank_of(const PmParams& p, const Session& s);
std::vector<double> pm_click_marginals(const PmParams& p, const Session& s);

// Attractiveness model: top-k slate positions by theta, most attractive
// first; theta ties prefer the lower position.
std::vector<int> am_predict(const std::vector<double>& slate_theta, int k);
std::uint64_t am_rank_of(const AttractivenessTable& theta, const Session& s);
std::vector<double> am_click_marginals(const AttractivenessTable& theta, const Session& s);

// Rank of the observed sequence among ordered k-subsets drawn sequentially
// in proportion to per-position weights (sampling without replacement).
// Shared by the PM and AM ranking analogues.
std::uint64_t weighted_draw_rank(const std::vector<double>& weights,
                                 const std::vector<int>& actual);

} // namespace adclick
