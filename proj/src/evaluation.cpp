#include "adclick/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "adclick/text.hpp"

namespace adclick {

std::vector<int> ProposedPredictor::predict(const Session& s, int k) const {
  return predict_sequence(params_, s, k);
}
std::uint64_t ProposedPredictor::rank_of(const Session& s) const {
  return rank_actual_sequence(params_, s);
}
std::vector<double> ProposedPredictor::click_marginals(const Session& s) const {
  return position_click_probabilities(params_, s.query, s.ads);
}

std::vector<int> DbnPredictor::predict(const Session& s, int k) const {
  return dbn_predict(params_, s, k);
}
std::uint64_t DbnPredictor::rank_of(const Session& s) const {
  return dbn_rank_of(params_, s);
}
std::vector<double> DbnPredictor::click_marginals(const Session& s) const {
  return dbn_click_marginals(params_, s);
}

std::vector<int> IcmPredictor::predict(const Session& s, int k) const {
  return icm_predict(params_, s, k);
}
std::uint64_t IcmPredictor::rank_of(const Session& s) const {
  return icm_rank_of(params_, s);
}
std::vector<double> IcmPredictor::click_marginals(const Session& s) const {
  return icm_click_marginals(params_, s);
}

std::vector<int> PmPredictor::predict(const Session& s, int k) const {
  if (k < 1 || k > s.slate_size()) throw std::invalid_argument("prediction length outside slate");
  return pm_predict(k);
}
std::uint64_t PmPredictor::rank_of(const Session& s) const { return pm_rank_of(params_, s); }
std::vector<double> PmPredictor::click_marginals(const Session& s) const {
  return pm_click_marginals(params_, s);
}

std::vector<int> AmPredictor::predict(const Session& s, int k) const {
  std::vector<double> slate_theta;
  slate_theta.reserve(s.ads.size());
  for (const std::string& ad : s.ads) slate_theta.push_back(theta_.get(s.query, ad));
  return am_predict(slate_theta, k);
}
std::uint64_t AmPredictor::rank_of(const Session& s) const { return am_rank_of(theta_, s); }
std::vector<double> AmPredictor::click_marginals(const Session& s) const {
  return am_click_marginals(theta_, s);
}

Accuracy eval_first_click(const SequencePredictor& model, const std::vector<Session>& sessions) {
  Accuracy acc;
  for (const Session& s : sessions) {
    if (s.click_count() < 1) continue;
    ++acc.total;
    if (model.predict(s, 1).front() == s.clicks.front()) ++acc.correct;
  }
  return acc;
}

Accuracy eval_full_sequence(const SequencePredictor& model, const std::vector<Session>& sessions,
                            int k) {
  Accuracy acc;
  for (const Session& s : sessions) {
    if (s.click_count() != k) continue;
    ++acc.total;
    if (model.predict(s, k) == s.clicks) ++acc.correct;
  }
  return acc;
}

RankSummary eval_rank(const SequencePredictor& model, const std::vector<Session>& sessions,
                      int k) {
  RankSummary summary;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const Session& s : sessions) {
    if (s.click_count() != k) continue;
    const double r = static_cast<double>(model.rank_of(s));
    sum += r;
    sum_sq += r * r;
    ++summary.count;
  }
  if (summary.count > 0) {
    const double n = static_cast<double>(summary.count);
    summary.mean = sum / n;
    const double var = sum_sq / n - summary.mean * summary.mean;
    summary.stddev = var > 0.0 ? std::sqrt(var) : 0.0;
  }
  return summary;
}

Accuracy eval_top_positions(const SequencePredictor& model, const std::vector<Session>& sessions,
                            int k) {
  Accuracy acc;
  for (const Session& s : sessions) {
    if (s.click_count() != k) continue;
    ++acc.total;
    std::vector<int> predicted = model.predict(s, k);
    std::vector<int> actual = s.clicks;
    std::sort(predicted.begin(), predicted.end());
    std::sort(actual.begin(), actual.end());
    if (predicted == actual) ++acc.correct;
  }
  return acc;
}

PerplexitySummary eval_perplexity(const SequencePredictor& model,
                                  const std::vector<Session>& sessions) {
  PerplexitySummary summary;
  double sum = 0.0;
  for (const Session& s : sessions) {
    const std::vector<double> q = model.click_marginals(s);
    std::vector<bool> clicked(s.ads.size(), false);
    for (int c : s.clicks) clicked[c - 1] = true;
    sum += session_perplexity(q, clicked);
    ++summary.count;
  }
  if (summary.count > 0) summary.mean = sum / static_cast<double>(summary.count);
  return summary;
}

std::vector<Session> reverse_subset(const std::vector<Session>& sessions) {
  std::vector<Session> subset;
  for (const Session& s : sessions) {
    if (s.has_reverse_pair()) subset.push_back(s);
  }
  return subset;
}

PrCurve eval_relevance(const AttractivenessTable& theta, const SatisfactionTable& rho,
                       const std::vector<RelevanceLabel>& labels) {
  struct Scored {
    double score;
    std::string ad_id;
    std::string query;
    int label;
  };
  std::vector<Scored> scored;
  scored.reserve(labels.size());
  std::uint64_t relevant_total = 0;
  for (const RelevanceLabel& l : labels) {
    const double score = theta.get(l.query, l.ad_id) * rho.get(l.query, l.ad_id);
    scored.push_back({score, l.ad_id, l.query, l.label});
    if (l.label != 0) ++relevant_total;
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.ad_id != b.ad_id) return a.ad_id < b.ad_id;
    return a.query < b.query;
  });
  PrCurve curve;
  curve.used = scored.size();
  if (scored.empty() || relevant_total == 0) return curve;
  std::uint64_t relevant_seen = 0;
  double prev_recall = 0.0;
  double prev_precision = 0.0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (scored[i].label != 0) ++relevant_seen;
    PrPoint point;
    point.threshold = scored[i].score;
    point.precision = static_cast<double>(relevant_seen) / static_cast<double>(i + 1);
    point.recall = static_cast<double>(relevant_seen) / static_cast<double>(relevant_total);
    if (i == 0) prev_precision = point.precision;  // anchor at (0, p_1)
    curve.auc += (point.recall - prev_recall) * (point.precision + prev_precision) / 2.0;
    prev_recall = point.recall;
    prev_precision = point.precision;
    curve.points.push_back(point);
  }
  return curve;
}

void MetricsReport::write_csv(std::ostream& out) const {
  out << "model,decile,metric,k,value,stddev,count\n";
  for (const MetricRow& row : rows) {
    out << row.model << ',' << row.decile << ',' << row.metric << ',' << row.k << ','
        << fmt_g10(row.value) << ',' << fmt_g10(row.stddev) << ',' << row.count << '\n';
  }
}

namespace {

void metrics_for_subset(const SequencePredictor& model, const std::vector<Session>& sessions,
                        const std::string& decile, const std::string& prefix,
                        MetricsReport& report) {
  const std::string name = model.name();
  const Accuracy first = eval_first_click(model, sessions);
  report.add({name, decile, prefix + "first_click_accuracy", 1, first.value(), 0.0, first.total});
  for (int k = 2; k <= 4; ++k) {
    const Accuracy acc = eval_full_sequence(model, sessions, k);
    report.add({name, decile, prefix + "full_sequence_accuracy", k, acc.value(), 0.0, acc.total});
  }
  for (int k = 2; k <= 4; ++k) {
    const RankSummary rank = eval_rank(model, sessions, k);
    report.add({name, decile, prefix + "mean_rank", k, rank.mean, rank.stddev, rank.count});
  }
  for (int k = 2; k <= 3; ++k) {
    const Accuracy acc = eval_top_positions(model, sessions, k);
    report.add({name, decile, prefix + "top_positions_accuracy", k, acc.value(), 0.0, acc.total});
  }
  const PerplexitySummary perp = eval_perplexity(model, sessions);
  report.add({name, decile, prefix + "perplexity", 0, perp.mean, 0.0, perp.count});
}

} // namespace

MetricsReport evaluate_model(const SequencePredictor& model, const std::vector<Session>& test,
                             const QueryFrequencyTable& table) {
  MetricsReport report;
  metrics_for_subset(model, test, "all", "", report);
  std::map<std::string, std::vector<Session>> by_decile;
  for (const Session& s : test) by_decile[table.bucket(s.query)].push_back(s);
  for (const std::string& label : QueryFrequencyTable::bucket_labels()) {
    auto it = by_decile.find(label);
    static const std::vector<Session> kEmpty;
    metrics_for_subset(model, it == by_decile.end() ? kEmpty : it->second, label, "", report);
  }
  metrics_for_subset(model, reverse_subset(test), "all", "reverse_", report);
  return report;
}

} // namespace adclick
