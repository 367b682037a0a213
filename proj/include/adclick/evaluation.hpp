#pragma once
// Model-agnostic evaluation harness. Every model answers the same three
// questions (predicted k-sequence, rank of the actual sequence, per-position
// click marginals); the harness slices metrics by query-frequency decile and
// by the reverse-click subset, and writes CSV reports.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adclick/baselines.hpp"
#include "adclick/model.hpp"
#include "adclick/session.hpp"

namespace adclick {

class SequencePredictor {
 public:
  virtual ~SequencePredictor() = default;
  virtual std::string name() const = 0;
  virtual std::vector<int> predict(const Session& s, int k) const = 0;
  virtual std::uint64_t rank_of(const Session& s) const = 0;
  virtual std::vector<double> click_marginals(const Session& s) const = 0;
};

class ProposedPredictor : public SequencePredictor {
 public:
  explicit ProposedPredictor(ModelParams params) : params_(std::move(params)) {}
  std::string name() const override { return "ours"; }
  std::vector<int> predict(const Session& s, int k) const override;
  std::uint64_t rank_of(const Session& s) const override;
  std::vector<double> click_marginals(const Session& s) const override;
  const ModelParams& params() const { return params_; }

 private:
  ModelParams params_;
};

class DbnPredictor : public SequencePredictor {
 public:
  explicit DbnPredictor(DbnParams params) : params_(std::move(params)) {}
  std::string name() const override { return "dbn"; }
  std::vector<int> predict(const Session& s, int k) const override;
  std::uint64_t rank_of(const Session& s) const override;
  std::vector<double> click_marginals(const Session& s) const override;
  const DbnParams& params() const { return params_; }

 private:
  DbnParams params_;
};

class IcmPredictor : public SequencePredictor {
 public:
  explicit IcmPredictor(IcmParams params) : params_(std::move(params)) {}
  std::string name() const override { return "icm"; }
  std::vector<int> predict(const Session& s, int k) const override;
  std::uint64_t rank_of(const Session& s) const override;
  std::vector<double> click_marginals(const Session& s) const override;

 private:
  IcmParams params_;
};

class PmPredictor : public SequencePredictor {
 public:
  explicit PmPredictor(PmParams params) : params_(std::move(params)) {}
  std::string name() const override { return "pm"; }
  std::vector<int> predict(const Session& s, int k) const override;
  std::uint64_t rank_of(const Session& s) const override;
  std::vector<double> click_marginals(const Session& s) const override;

 private:
  PmParams params_;
};

class AmPredictor : public SequencePredictor {
 public:
  explicit AmPredictor(AttractivenessTable theta) : theta_(std::move(theta)) {}
  std::string name() const override { return "am"; }
  std::vector<int> predict(const Session& s, int k) const override;
  std::uint64_t rank_of(const Session& s) const override;
  std::vector<double> click_marginals(const Session& s) const override;

 private:
  AttractivenessTable theta_;
};

struct Accuracy {
  std::uint64_t correct = 0;
  std::uint64_t total = 0;
  double value() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

struct RankSummary {
  double mean = 0.0;
  double stddev = 0.0;
  std::uint64_t count = 0;
};

// Sessions with at least one click whose predicted first click matches.
Accuracy eval_first_click(const SequencePredictor& model, const std::vector<Session>& sessions);
// Sessions with exactly k clicks whose full ordered sequence matches.
Accuracy eval_full_sequence(const SequencePredictor& model, const std::vector<Session>& sessions, int k);
// Mean and standard deviation of the actual sequence's rank over sessions
// with exactly k clicks.
RankSummary eval_rank(const SequencePredictor& model, const std::vector<Session>& sessions, int k);
// Set equality of clicked positions, sessions with exactly k clicks.
Accuracy eval_top_positions(const SequencePredictor& model, const std::vector<Session>& sessions, int k);
// Mean session perplexity of the model's click marginals.
struct PerplexitySummary {
  double mean = 0.0;
  std::uint64_t count = 0;
};
PerplexitySummary eval_perplexity(const SequencePredictor& model, const std::vector<Session>& sessions);

// Sessions with at least one adjacent decreasing click pair.
std::vector<Session> reverse_subset(const std::vector<Session>& sessions);

struct PrPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

struct PrCurve {
  std::vector<PrPoint> points;
  double auc = 0.0;
  std::uint64_t used = 0;
};

// Scores labeled (query, ad) pairs by theta * rho, sorts descending (ties
// by ad id, then query), emits one PR point per prefix threshold, and the
// trapezoidal area over recall anchored at (0, first precision).
PrCurve eval_relevance(const AttractivenessTable& theta, const SatisfactionTable& rho,
                       const std::vector<RelevanceLabel>& labels);

// One metric row: model x decile x metric x k. k is 0 for k-less metrics;
// decile "all" aggregates every session.
struct MetricRow {
  std::string model;
  std::string decile;
  std::string metric;
  int k = 0;
  double value = 0.0;
  double stddev = 0.0;
  std::uint64_t count = 0;
};

struct MetricsReport {
  std::vector<MetricRow> rows;
  void add(MetricRow row) { rows.push_back(std::move(row)); }
  // CSV with header model,decile,metric,k,value,stddev,count.
  void write_csv(std::ostream& out) const;
};

// Full protocol for one model: first-click, full-sequence (k = 2..4), rank,
// top-positions (k = 2,3), perplexity; overall, per decile, and on the
// reverse subset (metrics prefixed "reverse_").
MetricsReport evaluate_model(const SequencePredictor& model,
                             const std::vector<Session>& test,
                             const QueryFrequencyTable& table);

} // namespace adclick
