// Acceptance gate: one PASS/FAIL line per criterion, exit code = number of
// failures. argv[1] is the CLI binary, used by the pipeline determinism check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "adclick/attractiveness.hpp"
#include "adclick/baselines.hpp"
#include "adclick/evaluation.hpp"
#include "adclick/generator.hpp"
#include "adclick/model.hpp"
#include "adclick/rng.hpp"
#include "adclick/session.hpp"
#include "adclick/text.hpp"

using namespace adclick;

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(const std::string& name, bool ok, const std::string& detail) {
  if (!ok) ++g_failures;
  std::cout << (ok ? "PASS: " : "FAIL: ") << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << '\n';
}

template <typename Fn>
void criterion(const std::string& name, Fn&& fn) {
  try {
    fn(name);
  } catch (const std::exception& e) {
    report(name, false, std::string("exception: ") + e.what());
  }
}

std::string fmt_seconds(double s) {
  std::ostringstream out;
  out.precision(2);
  out << std::fixed << s << "s";
  return out.str();
}

Session make_session(const std::string& query, int n, std::vector<int> clicks) {
  static int counter = 0;
  Session s;
  s.session_id = "acc" + std::to_string(counter++);
  s.query = query;
  for (int j = 1; j <= n; ++j) s.ads.push_back("a" + std::to_string(j));
  s.clicks = std::move(clicks);
  return s;
}

ModelParams random_params(int n_max, RngStream& rng) {
  ModelParams p;
  p.n_max = n_max;
  p.perseverance.eta.resize(n_max + 1);
  for (double& e : p.perseverance.eta) e = 0.05 + 0.9 * rng.uniform();
  p.transition = TransitionMatrix::zeros(n_max);
  for (int i = 0; i <= n_max; ++i) {
    double row = 0.0;
    for (int j = 1; j <= n_max; ++j) {
      p.transition.at(i, j) = 0.05 + rng.uniform();
      row += p.transition.at(i, j);
    }
    for (int j = 1; j <= n_max; ++j) p.transition.at(i, j) /= row;
  }
  for (int j = 1; j <= n_max; ++j) {
    const std::string ad = "a" + std::to_string(j);
    p.attractiveness.theta[{"q", ad}] = 0.05 + 0.9 * rng.uniform();
    p.satisfaction.rho[{"q", ad}] = 0.05 + 0.9 * rng.uniform();
  }
  return p;
}

Scenario scaled_preset(const std::string& name, double volume_scale, std::uint64_t seed) {
  std::ostringstream cfg;
  cfg << "preset = " << name << "\nvolume_scale = " << volume_scale << "\n";
  return build_scenario(KeyValueConfig::parse_text(cfg.str()), seed);
}

std::string file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

void check_enumeration_normalizes(const std::string& name) {
  Timer timer;
  RngStream rng(2024, "acceptance-enumeration");
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 4;
    ModelParams p = random_params(n, rng);
    std::vector<std::string> ads;
    for (int j = 1; j <= n; ++j) ads.push_back("a" + std::to_string(j));
    double total = 0.0;
    for (const SequenceProb& sp : enumerate_sequences(p, "q", ads)) total += sp.prob;
    worst = std::max(worst, std::abs(total - 1.0));
  }
  const double elapsed = timer.seconds();
  report(name, worst <= 1e-9 && elapsed < 1.0,
         "worst |sum-1| " + fmt_g10(worst) + ", " + fmt_seconds(elapsed));
}

void check_counters_equal_recount(const std::string& name) {
  Timer timer;
  Scenario s = scaled_preset("single-decile", 0.3, 99);
  std::vector<Session> sessions = sample_week(s, "train");
  Session beyond = make_session("q", 4, {});
  beyond.ads.push_back("a5");
  beyond.clicks = {5, 1};
  sessions.push_back(beyond);

  SufficientStats brute(4);
  for (const Session& sess : sessions) {
    bool out_of_range = false;
    for (int c : sess.clicks) {
      if (c > 4) out_of_range = true;
    }
    if (out_of_range) {
      ++brute.rejected;
      continue;
    }
    ++brute.sessions;
    ++brute.ends_with_exactly[sess.click_count()];
    for (int j = 0; j < sess.click_count(); ++j) ++brute.continues_past[j];
    int prev = 0;
    for (std::size_t i = 0; i < sess.clicks.size(); ++i) {
      const int c = sess.clicks[i];
      ++brute.transition(prev, c);
      prev = c;
      const QueryAd key{sess.query, sess.ads[c - 1]};
      ++brute.doc_clicks[key];
      if (i + 1 == sess.clicks.size()) {
        ++brute.doc_clicks_last[key];
      } else {
        ++brute.doc_clicks_not_last[key];
      }
    }
  }

  const SufficientStats stats = accumulate_stats(sessions, 4);
  const double elapsed = timer.seconds();
  report(name, stats == brute && stats.rejected == 1 && elapsed < 5.0,
         std::to_string(sessions.size()) + " sessions, " + fmt_seconds(elapsed));
}

void check_parameter_recovery(const std::string& name) {
  Timer timer;
  Scenario s = scenario_preset("mixed-traffic", 20240);
  const std::vector<Session> priors = sample_week(s, "priors");
  const std::vector<Session> train = sample_week(s, "train");
  const ModelParams truth = s.ground_truth();

  const Hyperparameters hyper = fit_priors(priors, s.n_max);
  const SufficientStats stats = accumulate_stats(train, s.n_max);
  const PerseveranceParams eta = estimate_perseverance(stats, hyper.eta);
  const TransitionMatrix gamma = estimate_transition(stats, hyper.gamma);
  const SatisfactionTable rho = estimate_satisfaction(stats);

  double worst_eta = 0.0;
  for (int j = 0; j <= s.n_max; ++j) {
    worst_eta = std::max(worst_eta, std::abs(eta.eta[j] - s.eta.eta[j]));
  }
  double worst_gamma = 0.0;
  for (int i = 0; i <= s.n_max; ++i) {
    for (int j = 1; j <= s.n_max; ++j) {
      worst_gamma = std::max(worst_gamma, std::abs(gamma.at(i, j) - s.gamma.at(i, j)));
    }
  }
  double worst_rho = 0.0;
  std::uint64_t rho_docs = 0;
  for (const auto& [key, clicks] : stats.doc_clicks) {
    if (clicks < 500) continue;
    ++rho_docs;
    worst_rho = std::max(
        worst_rho, std::abs(rho.get(key.first, key.second) -
                            truth.satisfaction.get(key.first, key.second)));
  }
  const double elapsed = timer.seconds();
  const bool ok = worst_eta <= 0.02 && worst_gamma <= 0.02 && rho_docs > 0 &&
                  worst_rho <= 0.03 && elapsed < 60.0;
  report(name, ok,
         std::to_string(train.size()) + " sessions, worst eta " + fmt_g10(worst_eta) +
             ", gamma " + fmt_g10(worst_gamma) + ", rho " + fmt_g10(worst_rho) + " over " +
             std::to_string(rho_docs) + " docs, " + fmt_seconds(elapsed));
}

void check_closed_form_fixtures(const std::string& name) {
  std::vector<Session> eta_sessions = {
      make_session("q", 4, {1}),
      make_session("q", 4, {2}),
      make_session("q", 4, {3}),
      make_session("q", 4, {1, 2}),
  };
  const PerseveranceParams eta = estimate_perseverance(
      accumulate_stats(eta_sessions, 4), PerseverancePrior::uniform(4, 2.0));
  const double eta_err = std::abs(eta.eta[1] - 4.0 / 6.0);

  std::vector<Session> rho_sessions;
  for (int i = 0; i < 6; ++i) rho_sessions.push_back(make_session("q", 2, {1, 2}));
  for (int i = 0; i < 2; ++i) rho_sessions.push_back(make_session("q", 2, {2, 1}));
  const SatisfactionTable rho = estimate_satisfaction(accumulate_stats(rho_sessions, 2));
  const double rho_err = std::abs(rho.get("q", "a1") - 0.25);

  std::vector<Session> gamma_sessions = {
      make_session("q", 4, {1, 2}),
      make_session("q", 4, {1, 2}),
      make_session("q", 4, {1, 2}),
      make_session("q", 4, {1, 3}),
  };
  const TransitionMatrix gamma = estimate_transition(
      accumulate_stats(gamma_sessions, 4), TransitionPrior::uniform(4, 10.0));
  const double gamma_err = std::abs(gamma.at(1, 2) - 5.5 / 14.0);

  report(name, eta_err <= 1e-12 && rho_err <= 1e-12 && gamma_err <= 1e-12,
         "eta err " + fmt_g10(eta_err) + ", rho err " + fmt_g10(rho_err) + ", gamma err " +
             fmt_g10(gamma_err));
}

void check_perplexity_closed_forms(const std::string& name) {
  const double coin = session_perplexity({0.5, 0.5, 0.5, 0.5}, {true, false, true, false});
  const double skew = session_perplexity({0.8, 0.2}, {true, false});
  report(name, coin == 2.0 && std::abs(skew - 1.25) <= 1e-12,
         "coin-flip " + fmt_g10(coin) + ", skew " + fmt_g10(skew));
}

void check_reverse_separation(const std::string& name) {
  Timer timer;
  Scenario s = scenario_preset("reverse-heavy", 20246);
  const std::vector<Session> priors = sample_week(s, "priors");
  const std::vector<Session> train = sample_week(s, "train");
  const std::vector<Session> test = sample_week(s, "test");

  const std::map<std::string, AdCopy> copies = scenario_ad_copies(s);
  const QueryFrequencyTable freq = QueryFrequencyTable::build(train);
  const WordStats words = WordStats::build(train, copies, freq, 50);

  ModelParams params;
  params.n_max = s.n_max;
  params.hyper = fit_priors(priors, s.n_max);
  const SufficientStats stats = accumulate_stats(train, s.n_max);
  params.perseverance = estimate_perseverance(stats, params.hyper.eta);
  params.transition = estimate_transition(stats, params.hyper.gamma);
  params.satisfaction = estimate_satisfaction(stats);
  params.attractiveness = build_attractiveness_table(train, copies, words);

  const ProposedPredictor ours(params);
  const DbnPredictor dbn(dbn_fit(train));
  const IcmPredictor icm(icm_fit(train));

  const std::vector<Session> rev = reverse_subset(test);
  std::uint64_t ours_hit = 0, dbn_hit = 0, icm_hit = 0, total = 0;
  for (int k = 2; k <= s.n_max; ++k) {
    const Accuracy a = eval_full_sequence(ours, rev, k);
    const Accuracy b = eval_full_sequence(dbn, rev, k);
    const Accuracy c = eval_full_sequence(icm, rev, k);
    ours_hit += a.correct;
    dbn_hit += b.correct;
    icm_hit += c.correct;
    total += a.total;
  }
  const double elapsed = timer.seconds();
  const bool ok = total > 0 && ours_hit > 0 && dbn_hit == 0 && icm_hit == 0 && elapsed < 60.0;
  report(name, ok,
         std::to_string(rev.size()) + " reverse sessions, hits ours " +
             std::to_string(ours_hit) + " dbn " + std::to_string(dbn_hit) + " icm " +
             std::to_string(icm_hit) + ", " + fmt_seconds(elapsed));
}

void check_oracle_rankings(const std::string& name) {
  Scenario det = scaled_preset("deterministic", 0.2, 20247);
  const ProposedPredictor det_oracle(det.ground_truth());
  const Accuracy first = eval_first_click(det_oracle, sample_week(det, "test"));

  Scenario sto = scaled_preset("mixed-traffic", 0.2, 20248);
  const std::vector<Session> test = sample_week(sto, "test");
  const ModelParams truth = sto.ground_truth();
  const ProposedPredictor ours(truth);
  const PmPredictor pm(PmParams::standard(sto.n_max));
  const AmPredictor am(truth.attractiveness);

  auto pooled_mean_rank = [&test](const SequencePredictor& model, int n_max) {
    double sum = 0.0;
    std::uint64_t count = 0;
    for (int k = 2; k <= n_max; ++k) {
      const RankSummary r = eval_rank(model, test, k);
      sum += r.mean * static_cast<double>(r.count);
      count += r.count;
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
  };
  const double ours_rank = pooled_mean_rank(ours, sto.n_max);
  const double pm_rank = pooled_mean_rank(pm, sto.n_max);
  const double am_rank = pooled_mean_rank(am, sto.n_max);

  const bool ok = first.total > 0 && first.value() == 1.0 && ours_rank < pm_rank &&
                  ours_rank < am_rank;
  report(name, ok,
         "first-click " + fmt_g10(first.value()) + ", mean rank ours " + fmt_g10(ours_rank) +
             " vs pm " + fmt_g10(pm_rank) + ", am " + fmt_g10(am_rank));
}

void check_word_attractiveness(const std::string& name) {
  std::vector<Session> sessions;
  Session s1 = make_session("q", 0, {});
  s1.ads = {"d1", "d2"};
  s1.clicks = {1, 2};
  Session s2 = make_session("q", 0, {});
  s2.ads = {"d1", "d2"};
  s2.clicks = {1};
  sessions.push_back(s1);
  sessions.push_back(s2);

  std::map<std::string, AdCopy> copies;
  copies["d1"] = {"d1", "alpha beta", "", ""};
  copies["d2"] = {"d2", "beta gamma", "", ""};

  auto theta_for = [&copies](const std::vector<Session>& train) {
    const QueryFrequencyTable freq = QueryFrequencyTable::build(train);
    const WordStats words = WordStats::build(train, copies, freq, 1);
    return build_attractiveness_table(train, copies, words);
  };
  const AttractivenessTable base = theta_for(sessions);
  const bool fixture_ok = base.get("q", "d1") == 0.875 && base.get("q", "d2") == 0.625;

  std::vector<Session> injected = sessions;
  for (int i = 0; i < 40; ++i) {
    Session noise = make_session("other query entirely", 0, {});
    noise.ads = {"d2"};
    injected.push_back(noise);
  }
  const AttractivenessTable with_noise = theta_for(injected);
  const bool scoped_ok = with_noise.get("q", "d1") == base.get("q", "d1") &&
                         with_noise.get("q", "d2") == base.get("q", "d2");

  report(name, fixture_ok && scoped_ok,
         "theta d1 " + fmt_g10(base.get("q", "d1")) + ", d2 " + fmt_g10(base.get("q", "d2")) +
             (scoped_ok ? ", scope stable" : ", scope moved"));
}

void check_pr_oracle(const std::string& name) {
  AttractivenessTable theta;
  theta.theta[{"q", "a1"}] = 0.9;
  theta.theta[{"q", "a2"}] = 0.8;
  theta.theta[{"q", "a3"}] = 0.3;
  theta.theta[{"q", "a4"}] = 0.1;
  SatisfactionTable rho;
  rho.default_rho = 1.0;
  const std::vector<RelevanceLabel> labels = {
      {"q", "a1", 1}, {"q", "a2", 1}, {"q", "a3", 0}, {"q", "a4", 1}};
  const PrCurve curve = eval_relevance(theta, rho, labels);

  const double expected_precision[] = {1.0, 1.0, 2.0 / 3.0, 3.0 / 4.0};
  const double expected_recall[] = {1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 1.0};
  bool points_ok = curve.points.size() == 4;
  for (int i = 0; points_ok && i < 4; ++i) {
    points_ok = std::abs(curve.points[i].precision - expected_precision[i]) <= 1e-9 &&
                std::abs(curve.points[i].recall - expected_recall[i]) <= 1e-9;
  }
  const double auc_err = std::abs(curve.auc - 65.0 / 72.0);

  const std::vector<RelevanceLabel> all_relevant = {
      {"q", "a1", 1}, {"q", "a2", 1}, {"q", "a3", 1}, {"q", "a4", 1}};
  const PrCurve degenerate = eval_relevance(theta, rho, all_relevant);

  report(name, points_ok && auc_err <= 1e-9 && degenerate.auc == 1.0,
         "auc err " + fmt_g10(auc_err) + ", all-relevant auc " + fmt_g10(degenerate.auc));
}

int run_command(const std::string& command) {
  return std::system((command + " > /dev/null 2>&1").c_str());
}

void check_pipeline_determinism(const std::string& name, const std::string& cli) {
  if (cli.empty()) {
    report(name, false, "no CLI binary path given");
    return;
  }
  Timer timer;
  const auto root = std::filesystem::temp_directory_path() / "adclick_acceptance";
  std::filesystem::remove_all(root);
  std::filesystem::create_directories(root);

  const std::string gen_cfg = (root / "gen.cfg").string();
  write_text(gen_cfg, "preset = single-decile\nvolume_scale = 0.1\n");

  std::string reports[2];
  for (int r = 0; r < 2; ++r) {
    const auto dir = root / (r == 0 ? "a" : "b");
    const std::string corpus = (dir / "corpus").string();
    const std::string run = (dir / "run").string();
    std::filesystem::create_directories(dir);

    const std::string run_cfg = (dir / "run.cfg").string();
    write_text(run_cfg, "log_priors = " + corpus + "/priors.tsv\n" +
                            "log_train = " + corpus + "/train.tsv\n" +
                            "log_test = " + corpus + "/test.tsv\n" +
                            "ad_copies = " + corpus + "/ad_copies.tsv\n");

    const std::string quoted_cli = "'" + cli + "'";
    if (run_command(quoted_cli + " generate --config '" + gen_cfg + "' --seed 42 --out '" +
                    corpus + "'") != 0 ||
        run_command(quoted_cli + " train --config '" + run_cfg + "' --out '" + run + "'") != 0 ||
        run_command(quoted_cli + " eval --config '" + run_cfg + "' --out '" + run + "'") != 0) {
      report(name, false, "pipeline command failed in run " + std::to_string(r));
      return;
    }
    reports[r] = file_bytes(run + "/report.csv");
  }
  const double elapsed = timer.seconds();
  const bool ok = !reports[0].empty() && reports[0] == reports[1];
  report(name, ok,
         std::to_string(reports[0].size()) + " byte report, " +
             (ok ? "identical" : "DIFFERENT") + ", " + fmt_seconds(elapsed));
  if (ok) std::filesystem::remove_all(root);
}

} // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  criterion("enumeration normalizes over random parameters", check_enumeration_normalizes);
  criterion("one-pass counters equal a brute-force recount", check_counters_equal_recount);
  criterion("estimators recover the generating parameters at 200k sessions",
            check_parameter_recovery);
  criterion("closed-form estimator fixtures", check_closed_form_fixtures);
  criterion("perplexity closed forms", check_perplexity_closed_forms);
  criterion("reverse orders separate the model from forward cascades", check_reverse_separation);
  criterion("oracle parameters ace the deterministic and ranking checks", check_oracle_rankings);
  criterion("word-sharing attractiveness fixture with query scoping", check_word_attractiveness);
  criterion("precision-recall curve matches the hand oracle", check_pr_oracle);
  criterion("same-seed pipelines produce byte-identical reports",
            [&cli](const std::string& name) { check_pipeline_determinism(name, cli); });

  return g_failures;
}
