#pragma once
// Synthetic corpus construction: a Scenario pins ground-truth parameters and
// a query universe; generation samples three weeks of sessions (priors,
// train, test) in session-log format plus a ground-truth parameter sidecar
// and word-consistent ad copies.

#include <cstdint>
#include <string>
#include <vector>

#include "adclick/config.hpp"
#include "adclick/model.hpp"
#include "adclick/session.hpp"

namespace adclick {

struct DocSpec {
  std::string ad_id;
  double theta = 0.5;
  double rho = 0.5;
};

struct QuerySpec {
  std::string query;
  std::vector<DocSpec> slate;
  std::uint64_t sessions_per_week = 0;
};

struct Scenario {
  int n_max = kDefaultSlate;
  PerseveranceParams eta;
  TransitionMatrix gamma;
  std::vector<QuerySpec> queries;
  std::uint64_t seed = 1;

  std::uint64_t sessions_per_week() const;
  // Ground truth assembled as regular model parameters.
  ModelParams ground_truth() const;
  void validate() const;
};

// Scenario presets:
//   mixed-traffic     heavy-top first-click bias, volume mix across all six
//                  query-frequency bands, satisfied-heavy head queries;
//                  tuned so counting estimators recover the ground truth.
//   reverse-heavy  transition rows that send later clicks to earlier
//                  positions, producing a large reverse-order share.
//   deterministic  the first click always lands on position 1.
//   single-decile  one frequency band only, click-fraction mix tunable.
Scenario build_scenario(const KeyValueConfig& cfg, std::uint64_t seed);
Scenario scenario_preset(const std::string& name, std::uint64_t seed);

struct GenerateResult {
  std::string priors_file;
  std::string train_file;
  std::string test_file;
  std::string copies_file;
  std::string truth_file;
  std::uint64_t sessions_written = 0;
};

// Writes <out_dir>/{priors,train,test}.tsv, ad_copies.tsv, ground_truth.params.
// Sessions stream straight to disk; memory stays bounded.
GenerateResult generate_corpus(const Scenario& scenario, const std::string& out_dir);

// In-memory variant for tests: samples one week of sessions. Week tags
// "priors", "train", "test" reproduce generate_corpus's streams exactly.
std::vector<Session> sample_week(const Scenario& scenario, const std::string& week_tag);

// Synthetic ad copies with per-ad exclusive words, so the word estimator
// sees each ad's own clicked/shown ratio.
std::map<std::string, AdCopy> scenario_ad_copies(const Scenario& scenario);

} // namespace adclick
