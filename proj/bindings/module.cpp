// Python bindings for the click model core: session logs, counting
// estimators, exact sequence enumeration, baselines, evaluation, and the
// synthetic corpus generator.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "adclick/attractiveness.hpp"
#include "adclick/baselines.hpp"
#include "adclick/config.hpp"
#include "adclick/evaluation.hpp"
#include "adclick/generator.hpp"
#include "adclick/model.hpp"
#include "adclick/rng.hpp"
#include "adclick/serialization.hpp"
#include "adclick/session.hpp"

namespace py = pybind11;
using namespace adclick;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-click sponsored-search click model: one-pass counting "
            "estimators, exact sequence enumeration, forward-cascade "
            "baselines, evaluation metrics, and a synthetic corpus generator.";

  py::class_<Session>(m, "Session")
      .def(py::init<>())
      .def_readwrite("session_id", &Session::session_id)
      .def_readwrite("query", &Session::query)
      .def_readwrite("ads", &Session::ads)
      .def_readwrite("clicks", &Session::clicks)
      .def("click_count", &Session::click_count)
      .def("has_reverse_pair", &Session::has_reverse_pair)
      .def("__repr__", [](const Session& s) {
        std::ostringstream out;
        out << "Session(id=" << s.session_id << ", query=" << s.query << ", ads="
            << s.ads.size() << ", clicks=" << s.clicks.size() << ")";
        return out.str();
      });

  py::class_<AdCopy>(m, "AdCopy")
      .def(py::init<>())
      .def(py::init([](std::string ad_id, std::string title, std::string description,
                       std::string display_url) {
             AdCopy c;
             c.ad_id = std::move(ad_id);
             c.title = std::move(title);
             c.description = std::move(description);
             c.display_url = std::move(display_url);
             return c;
           }),
           py::arg("ad_id"), py::arg("title"), py::arg("description") = "",
           py::arg("display_url") = "")
      .def_readwrite("ad_id", &AdCopy::ad_id)
      .def_readwrite("title", &AdCopy::title)
      .def_readwrite("description", &AdCopy::description)
      .def_readwrite("display_url", &AdCopy::display_url);

  py::class_<RelevanceLabel>(m, "RelevanceLabel")
      .def(py::init([](std::string query, std::string ad_id, int label) {
             RelevanceLabel l;
             l.query = std::move(query);
             l.ad_id = std::move(ad_id);
             l.label = label;
             return l;
           }),
           py::arg("query"), py::arg("ad_id"), py::arg("label"))
      .def_readwrite("query", &RelevanceLabel::query)
      .def_readwrite("ad_id", &RelevanceLabel::ad_id)
      .def_readwrite("label", &RelevanceLabel::label);

  m.def("read_log_file",
        [](const std::string& path) { return read_log_file(path); },
        py::arg("path"));
  m.def("write_log_file", &write_log_file, py::arg("path"), py::arg("sessions"));
  m.def("read_ad_copy_file", &read_ad_copy_file, py::arg("path"));
  m.def("read_label_file", &read_label_file, py::arg("path"));
  m.def("normalize_query",
        [](const std::string& raw) { return normalize_query(raw); }, py::arg("raw"));

  py::class_<QueryFrequencyTable>(m, "QueryFrequencyTable")
      .def_static("build", &QueryFrequencyTable::build, py::arg("train"))
      .def("count", &QueryFrequencyTable::count, py::arg("query"))
      .def("bucket", &QueryFrequencyTable::bucket, py::arg("query"))
      .def_static("bucket_for_count", &QueryFrequencyTable::bucket_for_count,
                  py::arg("count"))
      .def_static("bucket_labels",
                  [] { return QueryFrequencyTable::bucket_labels(); });

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::string_view>(), py::arg("master_seed"),
           py::arg("stream_name"))
      .def("uniform", &RngStream::uniform)
      .def("bernoulli", &RngStream::bernoulli, py::arg("p"))
      .def("below", &RngStream::below, py::arg("n"))
      .def("categorical", &RngStream::categorical, py::arg("weights"))
      .def("next_u64", &RngStream::next_u64);

  py::class_<PerseveranceParams>(m, "PerseveranceParams")
      .def(py::init<>())
      .def_readwrite("eta", &PerseveranceParams::eta)
      .def("n_max", &PerseveranceParams::n_max);

  py::class_<PerseverancePrior>(m, "PerseverancePrior")
      .def(py::init<>())
      .def_readwrite("alpha", &PerseverancePrior::alpha)
      .def_readwrite("beta", &PerseverancePrior::beta)
      .def_static("uniform", &PerseverancePrior::uniform, py::arg("n_max"),
                  py::arg("mass") = 10.0);

  py::class_<TransitionMatrix>(m, "TransitionMatrix")
      .def(py::init<>())
      .def_readwrite("n_max", &TransitionMatrix::n_max)
      .def_static("zeros", &TransitionMatrix::zeros, py::arg("n_max"))
      .def_static("uniform_rows", &TransitionMatrix::uniform_rows, py::arg("n_max"))
      .def("get", [](const TransitionMatrix& t, int i, int j) { return t.at(i, j); },
           py::arg("prev"), py::arg("next"))
      .def("set",
           [](TransitionMatrix& t, int i, int j, double v) { t.at(i, j) = v; },
           py::arg("prev"), py::arg("next"), py::arg("value"))
      .def("row_sum", &TransitionMatrix::row_sum, py::arg("prev"))
      .def("rows", [](const TransitionMatrix& t) {
        std::vector<std::vector<double>> rows;
        for (int i = 0; i <= t.n_max; ++i) {
          std::vector<double> row;
          for (int j = 1; j <= t.n_max; ++j) row.push_back(t.at(i, j));
          rows.push_back(std::move(row));
        }
        return rows;
      });

  py::class_<TransitionPrior>(m, "TransitionPrior")
      .def(py::init<>())
      .def_readwrite("alpha", &TransitionPrior::alpha)
      .def_static("uniform", &TransitionPrior::uniform, py::arg("n_max"),
                  py::arg("row_mass") = 10.0);

  py::class_<Hyperparameters>(m, "Hyperparameters")
      .def(py::init<>())
      .def_readwrite("eta", &Hyperparameters::eta)
      .def_readwrite("gamma", &Hyperparameters::gamma)
      .def_readwrite("from_empty_priors", &Hyperparameters::from_empty_priors);

  py::class_<SatisfactionTable>(m, "SatisfactionTable")
      .def(py::init<>())
      .def_readwrite("default_rho", &SatisfactionTable::default_rho)
      .def("get", &SatisfactionTable::get, py::arg("query"), py::arg("ad_id"))
      .def("set",
           [](SatisfactionTable& t, const std::string& query, const std::string& ad_id,
              double v) { t.rho[{query, ad_id}] = v; },
           py::arg("query"), py::arg("ad_id"), py::arg("value"))
      .def("entries", [](const SatisfactionTable& t) { return t.rho; });

  py::class_<AttractivenessTable>(m, "AttractivenessTable")
      .def(py::init<>())
      .def_readwrite("fallback", &AttractivenessTable::fallback)
      .def("get", &AttractivenessTable::get, py::arg("query"), py::arg("ad_id"))
      .def("set",
           [](AttractivenessTable& t, const std::string& query, const std::string& ad_id,
              double v) { t.theta[{query, ad_id}] = v; },
           py::arg("query"), py::arg("ad_id"), py::arg("value"))
      .def("entries", [](const AttractivenessTable& t) { return t.theta; });

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("n_max", &ModelParams::n_max)
      .def_readwrite("perseverance", &ModelParams::perseverance)
      .def_readwrite("transition", &ModelParams::transition)
      .def_readwrite("satisfaction", &ModelParams::satisfaction)
      .def_readwrite("attractiveness", &ModelParams::attractiveness)
      .def_readwrite("hyper", &ModelParams::hyper);

  py::class_<SufficientStats>(m, "SufficientStats")
      .def(py::init<int>(), py::arg("n_max") = kDefaultSlate)
      .def_readonly("n_max", &SufficientStats::n_max)
      .def_readonly("sessions", &SufficientStats::sessions)
      .def_readonly("rejected", &SufficientStats::rejected)
      .def_readonly("ends_with_exactly", &SufficientStats::ends_with_exactly)
      .def_readonly("continues_past", &SufficientStats::continues_past)
      .def("transition",
           [](const SufficientStats& s, int i, int j) { return s.transition(i, j); },
           py::arg("prev"), py::arg("next"))
      .def("doc_clicks", [](const SufficientStats& s) { return s.doc_clicks; })
      .def("doc_clicks_last", [](const SufficientStats& s) { return s.doc_clicks_last; })
      .def("doc_clicks_not_last",
           [](const SufficientStats& s) { return s.doc_clicks_not_last; })
      .def("add", &SufficientStats::add, py::arg("session"))
      .def("merge", &SufficientStats::merge, py::arg("other"))
      .def("__eq__", [](const SufficientStats& a, const SufficientStats& b) {
        return a == b;
      }, py::is_operator());

  m.def("accumulate_stats", &accumulate_stats, py::arg("sessions"),
        py::arg("n_max") = kDefaultSlate);
  m.def("fit_priors", &fit_priors, py::arg("priors_sessions"),
        py::arg("n_max") = kDefaultSlate);
  m.def("estimate_perseverance", &estimate_perseverance, py::arg("stats"),
        py::arg("prior"));
  m.def("estimate_satisfaction", &estimate_satisfaction, py::arg("stats"),
        py::arg("smoothing") = 0.0, py::arg("default_rho") = 0.5);
  m.def("estimate_transition", &estimate_transition, py::arg("stats"), py::arg("prior"));

  py::class_<StepDistribution>(m, "StepDistribution")
      .def_readonly("continue_prob", &StepDistribution::continue_prob)
      .def_readonly("click_prob", &StepDistribution::click_prob);
  m.def("step_distribution", &step_distribution, py::arg("params"), py::arg("query"),
        py::arg("ads"), py::arg("prev_pos"), py::arg("clicked_mask"),
        py::arg("clicks_so_far"));

  py::class_<SequenceProb>(m, "SequenceProb")
      .def_readonly("clicks", &SequenceProb::clicks)
      .def_readonly("prob", &SequenceProb::prob)
      .def("__repr__", [](const SequenceProb& sp) {
        std::ostringstream out;
        out << "SequenceProb(clicks=[";
        for (std::size_t i = 0; i < sp.clicks.size(); ++i) {
          if (i) out << ", ";
          out << sp.clicks[i];
        }
        out << "], prob=" << sp.prob << ")";
        return out.str();
      });

  m.def("sequence_probability", &sequence_probability, py::arg("params"),
        py::arg("session"));
  m.def("enumerate_sequences", &enumerate_sequences, py::arg("params"), py::arg("query"),
        py::arg("ads"));
  m.def("predict_sequence", &predict_sequence, py::arg("params"), py::arg("session"),
        py::arg("k"));
  m.def("rank_actual_sequence", &rank_actual_sequence, py::arg("params"),
        py::arg("session"));
  m.def("position_click_probabilities", &position_click_probabilities,
        py::arg("params"), py::arg("query"), py::arg("ads"));
  m.def("session_perplexity", &session_perplexity, py::arg("predictions"),
        py::arg("clicked"));

  py::class_<SampledSession>(m, "SampledSession")
      .def_readonly("session", &SampledSession::session)
      .def_readonly("satisfied_draws", &SampledSession::satisfied_draws)
      .def_readonly("tired_draws", &SampledSession::tired_draws)
      .def_readonly("exhausted", &SampledSession::exhausted);
  m.def("sample_session", &sample_session, py::arg("params"), py::arg("query"),
        py::arg("ads"), py::arg("rng"));

  py::class_<WordStats>(m, "WordStats")
      .def_static("build",
                  [](const std::vector<Session>& sessions,
                     const std::map<std::string, AdCopy>& copies,
                     const QueryFrequencyTable& table, std::uint64_t freq_threshold) {
                    return WordStats::build(sessions, copies, table, freq_threshold);
                  },
                  py::arg("sessions"), py::arg("copies"), py::arg("table"),
                  py::arg("freq_threshold") = 50)
      .def("score", &WordStats::score, py::arg("words"), py::arg("query"))
      .def("query_scoped", &WordStats::query_scoped, py::arg("query"))
      .def("missing_copies", &WordStats::missing_copies);
  m.def("build_attractiveness_table",
        [](const std::vector<Session>& sessions,
           const std::map<std::string, AdCopy>& copies, const WordStats& stats) {
          return build_attractiveness_table(sessions, copies, stats);
        },
        py::arg("sessions"), py::arg("copies"), py::arg("stats"));

  py::class_<DbnParams>(m, "DbnParams")
      .def(py::init<>())
      .def_readwrite("lambda_", &DbnParams::lambda)
      .def_readwrite("theta_default", &DbnParams::theta_default)
      .def_readwrite("rho_default", &DbnParams::rho_default)
      .def("get_theta", &DbnParams::get_theta, py::arg("query"), py::arg("ad_id"))
      .def("get_rho", &DbnParams::get_rho, py::arg("query"), py::arg("ad_id"));
  m.def("dbn_fit", &dbn_fit, py::arg("train"), py::arg("lambda_") = 0.01);
  m.def("dbn_sequence_probability", &dbn_sequence_probability, py::arg("params"),
        py::arg("session"), py::arg("seq"));

  py::class_<IcmParams>(m, "IcmParams")
      .def(py::init<>())
      .def_readwrite("rate_default", &IcmParams::rate_default)
      .def("get_rate", &IcmParams::get_rate, py::arg("query"), py::arg("ad_id"));
  m.def("icm_fit", &icm_fit, py::arg("train"));

  py::class_<PmParams>(m, "PmParams")
      .def(py::init<>())
      .def_readwrite("n_max", &PmParams::n_max)
      .def_readwrite("weights", &PmParams::weights)
      .def_static("standard", &PmParams::standard, py::arg("n_max") = kDefaultSlate);

  py::class_<SequencePredictor>(m, "SequencePredictor")
      .def("name", &SequencePredictor::name)
      .def("predict", &SequencePredictor::predict, py::arg("session"), py::arg("k"))
      .def("rank_of", &SequencePredictor::rank_of, py::arg("session"))
      .def("click_marginals", &SequencePredictor::click_marginals, py::arg("session"));
  py::class_<ProposedPredictor, SequencePredictor>(m, "ProposedPredictor")
      .def(py::init<ModelParams>(), py::arg("params"));
  py::class_<DbnPredictor, SequencePredictor>(m, "DbnPredictor")
      .def(py::init<DbnParams>(), py::arg("params"));
  py::class_<IcmPredictor, SequencePredictor>(m, "IcmPredictor")
      .def(py::init<IcmParams>(), py::arg("params"));
  py::class_<PmPredictor, SequencePredictor>(m, "PmPredictor")
      .def(py::init<PmParams>(), py::arg("params"));
  py::class_<AmPredictor, SequencePredictor>(m, "AmPredictor")
      .def(py::init<AttractivenessTable>(), py::arg("theta"));

  py::class_<Accuracy>(m, "Accuracy")
      .def_readonly("correct", &Accuracy::correct)
      .def_readonly("total", &Accuracy::total)
      .def("value", &Accuracy::value);
  py::class_<RankSummary>(m, "RankSummary")
      .def_readonly("mean", &RankSummary::mean)
      .def_readonly("stddev", &RankSummary::stddev)
      .def_readonly("count", &RankSummary::count);
  py::class_<PerplexitySummary>(m, "PerplexitySummary")
      .def_readonly("mean", &PerplexitySummary::mean)
      .def_readonly("count", &PerplexitySummary::count);

  m.def("eval_first_click", &eval_first_click, py::arg("model"), py::arg("sessions"));
  m.def("eval_full_sequence", &eval_full_sequence, py::arg("model"), py::arg("sessions"),
        py::arg("k"));
  m.def("eval_rank", &eval_rank, py::arg("model"), py::arg("sessions"), py::arg("k"));
  m.def("eval_top_positions", &eval_top_positions, py::arg("model"), py::arg("sessions"),
        py::arg("k"));
  m.def("eval_perplexity", &eval_perplexity, py::arg("model"), py::arg("sessions"));
  m.def("reverse_subset", &reverse_subset, py::arg("sessions"));

  py::class_<PrPoint>(m, "PrPoint")
      .def_readonly("threshold", &PrPoint::threshold)
      .def_readonly("precision", &PrPoint::precision)
      .def_readonly("recall", &PrPoint::recall);
  py::class_<PrCurve>(m, "PrCurve")
      .def_readonly("points", &PrCurve::points)
      .def_readonly("auc", &PrCurve::auc)
      .def_readonly("used", &PrCurve::used);
  m.def("eval_relevance", &eval_relevance, py::arg("theta"), py::arg("rho"),
        py::arg("labels"));

  py::class_<MetricRow>(m, "MetricRow")
      .def_readonly("model", &MetricRow::model)
      .def_readonly("decile", &MetricRow::decile)
      .def_readonly("metric", &MetricRow::metric)
      .def_readonly("k", &MetricRow::k)
      .def_readonly("value", &MetricRow::value)
      .def_readonly("stddev", &MetricRow::stddev)
      .def_readonly("count", &MetricRow::count);
  py::class_<MetricsReport>(m, "MetricsReport")
      .def_readonly("rows", &MetricsReport::rows)
      .def("csv", [](const MetricsReport& r) {
        std::ostringstream out;
        r.write_csv(out);
        return out.str();
      });
  m.def("evaluate_model", &evaluate_model, py::arg("model"), py::arg("test"),
        py::arg("table"));

  py::class_<DocSpec>(m, "DocSpec")
      .def_readwrite("ad_id", &DocSpec::ad_id)
      .def_readwrite("theta", &DocSpec::theta)
      .def_readwrite("rho", &DocSpec::rho);
  py::class_<QuerySpec>(m, "QuerySpec")
      .def_readwrite("query", &QuerySpec::query)
      .def_readwrite("slate", &QuerySpec::slate)
      .def_readwrite("sessions_per_week", &QuerySpec::sessions_per_week);
  py::class_<Scenario>(m, "Scenario")
      .def_readwrite("n_max", &Scenario::n_max)
      .def_readwrite("eta", &Scenario::eta)
      .def_readwrite("gamma", &Scenario::gamma)
      .def_readwrite("queries", &Scenario::queries)
      .def_readwrite("seed", &Scenario::seed)
      .def("sessions_per_week", &Scenario::sessions_per_week)
      .def("ground_truth", &Scenario::ground_truth)
      .def("validate", &Scenario::validate);
  m.def("scenario_preset", &scenario_preset, py::arg("name"), py::arg("seed"));
  m.def("build_scenario",
        [](const std::map<std::string, std::string>& entries, std::uint64_t seed) {
          KeyValueConfig cfg;
          for (const auto& [k, v] : entries) cfg.set(k, v);
          return build_scenario(cfg, seed);
        },
        py::arg("config"), py::arg("seed"));
  m.def("sample_week", &sample_week, py::arg("scenario"), py::arg("week_tag"));
  m.def("scenario_ad_copies", &scenario_ad_copies, py::arg("scenario"));

  py::class_<GenerateResult>(m, "GenerateResult")
      .def_readonly("priors_file", &GenerateResult::priors_file)
      .def_readonly("train_file", &GenerateResult::train_file)
      .def_readonly("test_file", &GenerateResult::test_file)
      .def_readonly("copies_file", &GenerateResult::copies_file)
      .def_readonly("truth_file", &GenerateResult::truth_file)
      .def_readonly("sessions_written", &GenerateResult::sessions_written);
  m.def("generate_corpus", &generate_corpus, py::arg("scenario"), py::arg("out_dir"));

  m.def("save_model_params", &save_model_params, py::arg("params"), py::arg("path"));
  m.def("load_model_params", &load_model_params, py::arg("path"));
  m.def("peek_model_tag", &peek_model_tag, py::arg("path"));
}
