// Command-line front end: generate | train | eval | stats | predict.
// All outputs land under --out; inputs are never modified.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "adclick/attractiveness.hpp"
#include "adclick/baselines.hpp"
#include "adclick/config.hpp"
#include "adclick/evaluation.hpp"
#include "adclick/generator.hpp"
#include "adclick/model.hpp"
#include "adclick/serialization.hpp"
#include "adclick/session.hpp"
#include "adclick/text.hpp"

namespace {

using namespace adclick;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::string model = "all";
};

const std::vector<std::string> kModelOrder = {"ours", "dbn", "icm", "pm", "am"};

std::vector<std::string> selected_models(const std::string& model) {
  if (model == "all") return kModelOrder;
  for (const std::string& m : kModelOrder) {
    if (m == model) return {m};
  }
  throw ConfigError("unknown model: " + model);
}

RunConfig load_run_config(const CommonArgs& args) {
  RunConfig cfg = RunConfig::from_config(KeyValueConfig::parse_file(args.config_path));
  if (args.seed) cfg.seed = *args.seed;
  if (args.out) cfg.out_dir = *args.out;
  cfg.validate();
  return cfg;
}

std::vector<Session> read_required_log(const std::string& path, const std::string& what) {
  if (path.empty()) throw ConfigError("config is missing the " + what + " path");
  ParseReport report;
  std::vector<Session> sessions = read_log_file(path, &report);
  if (!report.errors.empty()) {
    std::cerr << "note: " << report.errors.size() << " malformed record(s) skipped in " << path
              << " (first at line " << report.errors.front().line_no << ": "
              << report.errors.front().message << ")\n";
  }
  if (report.dropped_no_ads > 0) {
    std::cerr << "note: dropped " << report.dropped_no_ads << " session(s) with no ads in "
              << path << '\n';
  }
  return sessions;
}

std::string params_path(const RunConfig& cfg, const std::string& model) {
  return cfg.out_dir + "/" + model + ".params";
}

int cmd_generate(const CommonArgs& args) {
  KeyValueConfig cfg = KeyValueConfig::parse_file(args.config_path);
  const std::uint64_t seed = args.seed ? *args.seed : cfg.get_u64("seed", 1);
  const std::string out_dir = args.out ? *args.out : cfg.get_str("out_dir", ".");
  Scenario scenario = build_scenario(cfg, seed);
  GenerateResult result = generate_corpus(scenario, out_dir);
  std::cout << "sessions_written\t" << result.sessions_written << '\n'
            << "priors\t" << result.priors_file << '\n'
            << "train\t" << result.train_file << '\n'
            << "test\t" << result.test_file << '\n'
            << "ad_copies\t" << result.copies_file << '\n'
            << "ground_truth\t" << result.truth_file << '\n';
  return 0;
}

int cmd_train(const CommonArgs& args) {
  const RunConfig cfg = load_run_config(args);
  const std::vector<std::string> models = selected_models(args.model);
  std::filesystem::create_directories(cfg.out_dir);
  const std::vector<Session> train = read_required_log(cfg.log_train, "log_train");

  const bool want_ours = std::count(models.begin(), models.end(), "ours") > 0;
  const bool want_am = std::count(models.begin(), models.end(), "am") > 0;

  AttractivenessTable theta;
  if (want_ours || want_am) {
    if (cfg.ad_copies.empty()) throw ConfigError("config is missing the ad_copies path");
    const std::map<std::string, AdCopy> copies = read_ad_copy_file(cfg.ad_copies);
    const QueryFrequencyTable freq = QueryFrequencyTable::build(train);
    const WordStats words = WordStats::build(train, copies, freq, cfg.freq_threshold);
    if (words.missing_copies() > 0) {
      std::cerr << "note: " << words.missing_copies() << " impression(s) lacked an ad copy\n";
    }
    theta = build_attractiveness_table(train, copies, words);
  }

  for (const std::string& model : models) {
    const std::string path = params_path(cfg, model);
    if (model == "ours") {
      std::vector<Session> priors;
      if (!cfg.log_priors.empty()) priors = read_required_log(cfg.log_priors, "log_priors");
      Hyperparameters hyper = fit_priors(priors, cfg.n_max);
      if (hyper.from_empty_priors) {
        std::cerr << "note: empty priors split, using uniform hyperparameters\n";
        hyper.eta = PerseverancePrior::uniform(cfg.n_max, cfg.prior_mass_eta);
        hyper.gamma = TransitionPrior::uniform(cfg.n_max, cfg.prior_mass_gamma);
      }
      const SufficientStats stats = accumulate_stats(train, cfg.n_max);
      if (stats.rejected > 0) {
        std::cerr << "note: " << stats.rejected << " record(s) rejected (click beyond position "
                  << cfg.n_max << ")\n";
      }
      ModelParams params;
      params.n_max = cfg.n_max;
      params.hyper = hyper;
      params.perseverance = estimate_perseverance(stats, hyper.eta);
      params.transition = estimate_transition(stats, hyper.gamma);
      params.satisfaction = estimate_satisfaction(stats, cfg.rho_smoothing, cfg.rho_default);
      params.attractiveness = theta;
      save_model_params(params, path);
    } else if (model == "dbn") {
      save_dbn_params(dbn_fit(train, cfg.dbn_lambda), path);
    } else if (model == "icm") {
      save_icm_params(icm_fit(train), path);
    } else if (model == "pm") {
      save_pm_params(PmParams::standard(cfg.n_max), path);
    } else {
      save_am_params(theta, path);
    }
    std::cout << "trained\t" << model << '\t' << path << '\n';
  }
  return 0;
}

std::unique_ptr<SequencePredictor> load_predictor(const RunConfig& cfg, const std::string& model) {
  const std::string path = params_path(cfg, model);
  if (model == "ours") return std::make_unique<ProposedPredictor>(load_model_params(path));
  if (model == "dbn") return std::make_unique<DbnPredictor>(load_dbn_params(path));
  if (model == "icm") return std::make_unique<IcmPredictor>(load_icm_params(path));
  if (model == "pm") return std::make_unique<PmPredictor>(load_pm_params(path));
  return std::make_unique<AmPredictor>(load_am_params(path));
}

void write_filtered_csv(const MetricsReport& report, const std::string& path,
                        const std::string& metric_name, int k_filter) {
  MetricsReport filtered;
  for (const MetricRow& row : report.rows) {
    if (row.metric == metric_name && (k_filter < 0 || row.k == k_filter)) filtered.add(row);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  filtered.write_csv(out);
}

void write_reverse_csv(const MetricsReport& report, const std::string& path) {
  MetricsReport filtered;
  for (const MetricRow& row : report.rows) {
    if (row.metric.rfind("reverse_", 0) == 0) filtered.add(row);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  filtered.write_csv(out);
}

int cmd_eval(const CommonArgs& args) {
  const RunConfig cfg = load_run_config(args);
  const std::vector<std::string> models = selected_models(args.model);
  std::filesystem::create_directories(cfg.out_dir);
  const std::vector<Session> train = read_required_log(cfg.log_train, "log_train");
  const std::vector<Session> test = read_required_log(cfg.log_test, "log_test");
  const QueryFrequencyTable freq = QueryFrequencyTable::build(train);

  MetricsReport merged;
  for (const std::string& model : models) {
    const std::unique_ptr<SequencePredictor> predictor = load_predictor(cfg, model);
    MetricsReport report = evaluate_model(*predictor, test, freq);
    for (MetricRow& row : report.rows) merged.add(std::move(row));
  }

  const bool want_ours = std::count(models.begin(), models.end(), "ours") > 0;
  if (want_ours && !cfg.labels.empty()) {
    const ModelParams ours = load_model_params(params_path(cfg, "ours"));
    const std::vector<RelevanceLabel> labels = read_label_file(cfg.labels);
    const PrCurve curve = eval_relevance(ours.attractiveness, ours.satisfaction, labels);
    merged.add({"ours", "all", "relevance_auc", 0, curve.auc, 0.0, curve.used});
    std::ofstream pr(cfg.out_dir + "/pr_curve.csv", std::ios::binary);
    if (!pr) throw std::runtime_error("cannot open for writing: " + cfg.out_dir + "/pr_curve.csv");
    pr << "threshold,precision,recall\n";
    for (const PrPoint& p : curve.points) {
      pr << fmt_g10(p.threshold) << ',' << fmt_g10(p.precision) << ',' << fmt_g10(p.recall)
         << '\n';
    }
  }

  const std::string report_path = cfg.out_dir + "/report.csv";
  std::ofstream out(report_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + report_path);
  merged.write_csv(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + report_path);

  write_filtered_csv(merged, cfg.out_dir + "/first_click_by_decile.csv",
                     "first_click_accuracy", 1);
  write_filtered_csv(merged, cfg.out_dir + "/full_sequence_by_decile.csv",
                     "full_sequence_accuracy", -1);
  write_filtered_csv(merged, cfg.out_dir + "/rank_by_decile.csv", "mean_rank", -1);
  write_filtered_csv(merged, cfg.out_dir + "/top_positions_by_decile.csv",
                     "top_positions_accuracy", -1);
  write_filtered_csv(merged, cfg.out_dir + "/perplexity_by_decile.csv", "perplexity", 0);
  write_reverse_csv(merged, cfg.out_dir + "/reverse_subset.csv");
  std::cout << "report\t" << report_path << '\n';
  return 0;
}

int cmd_stats(const CommonArgs& args) {
  const RunConfig cfg = load_run_config(args);
  std::filesystem::create_directories(cfg.out_dir);
  ParseReport parse_report;
  if (cfg.log_train.empty()) throw ConfigError("config is missing the log_train path");
  const std::vector<Session> train = read_log_file(cfg.log_train, &parse_report);
  const QueryFrequencyTable freq = QueryFrequencyTable::build(train);
  const MultiClickStats stats = multi_click_stats(train, freq);

  const std::string fractions_path = cfg.out_dir + "/click_fractions.csv";
  std::ofstream fr(fractions_path, std::ios::binary);
  if (!fr) throw std::runtime_error("cannot open for writing: " + fractions_path);
  fr << "decile,total_sessions,clicked_sessions,frac_1,frac_2,frac_3,frac_4\n";
  auto write_row = [&fr](const std::string& label, const MultiClickRow& row) {
    fr << label << ',' << row.total_sessions << ',' << row.clicked_sessions;
    for (int k = 1; k <= 4; ++k) fr << ',' << fmt_g10(row.fraction(k));
    fr << '\n';
  };
  for (const std::string& label : QueryFrequencyTable::bucket_labels()) {
    auto it = stats.per_decile.find(label);
    write_row(label, it == stats.per_decile.end() ? MultiClickRow{} : it->second);
  }
  write_row("all", stats.overall);

  const ClickDistanceHistogram hist = click_distance_histogram(train);
  const std::string hist_path = cfg.out_dir + "/click_distance.csv";
  std::ofstream hi(hist_path, std::ios::binary);
  if (!hi) throw std::runtime_error("cannot open for writing: " + hist_path);
  hi << "distance,mass\n";
  for (const auto& [distance, mass] : hist.mass) {
    hi << distance << ',' << fmt_g10(mass) << '\n';
  }

  std::cout << "sessions\t" << train.size() << '\n'
            << "dropped_no_ads\t" << parse_report.dropped_no_ads << '\n'
            << "malformed\t" << parse_report.errors.size() << '\n'
            << "oversize_slates\t" << parse_report.oversize_slates << '\n'
            << "click_fractions\t" << fractions_path << '\n'
            << "click_distance\t" << hist_path << '\n';
  if (!hist.has_pairs) std::cout << "note\tno multi-click sessions, histogram is all zero\n";
  return 0;
}

int cmd_predict(const CommonArgs& args, const std::string& input_path) {
  const RunConfig cfg = load_run_config(args);
  const std::string model = args.model == "all" ? "ours" : args.model;
  selected_models(model);  // validates the name
  std::filesystem::create_directories(cfg.out_dir);
  const std::unique_ptr<SequencePredictor> predictor = load_predictor(cfg, model);
  const std::vector<Session> sessions = read_required_log(input_path, "input");

  const std::string out_path = cfg.out_dir + "/predictions_" + model + ".tsv";
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
  out << "session_id\tactual\tpredicted\trank\n";
  auto join_positions = [](const std::vector<int>& seq) {
    std::vector<std::string> parts;
    parts.reserve(seq.size());
    for (int c : seq) parts.push_back(std::to_string(c));
    return join(parts, ',');
  };
  for (const Session& s : sessions) {
    out << s.session_id << '\t' << join_positions(s.clicks) << '\t';
    if (s.click_count() == 0) {
      out << "\t\n";
      continue;
    }
    out << join_positions(predictor->predict(s, s.click_count())) << '\t'
        << predictor->rank_of(s) << '\n';
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + out_path);
  std::cout << "predictions\t" << out_path << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-click model toolkit: generate, train, evaluate, inspect"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string predict_input;

  auto add_common = [&args](CLI::App* sub, bool with_model) {
    sub->add_option("--config", args.config_path, "key = value config file")->required();
    sub->add_option("--seed", args.seed, "override the config seed");
    sub->add_option("--out", args.out, "output directory");
    if (with_model) {
      sub->add_option("--model", args.model, "ours|dbn|icm|pm|am|all (default all)");
    }
  };

  CLI::App* generate = app.add_subcommand("generate", "sample a synthetic three-week corpus");
  add_common(generate, false);
  CLI::App* train = app.add_subcommand("train", "fit models on the train week");
  add_common(train, true);
  CLI::App* eval = app.add_subcommand("eval", "run the metric protocol on the test week");
  add_common(eval, true);
  CLI::App* stats = app.add_subcommand("stats", "corpus click statistics");
  add_common(stats, false);
  CLI::App* predict = app.add_subcommand("predict", "per-session sequence predictions");
  add_common(predict, true);
  predict->add_option("input", predict_input, "session log to predict on")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return cmd_generate(args);
    if (train->parsed()) return cmd_train(args);
    if (eval->parsed()) return cmd_eval(args);
    if (stats->parsed()) return cmd_stats(args);
    if (predict->parsed()) return cmd_predict(args, predict_input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
