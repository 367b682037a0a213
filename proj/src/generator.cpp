#include "adclick/generator.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "adclick/serialization.hpp"
#include "adclick/text.hpp"

namespace adclick {

std::uint64_t Scenario::sessions_per_week() const {
  std::uint64_t total = 0;
  for (const QuerySpec& q : queries) total += q.sessions_per_week;
  return total;
}

ModelParams Scenario::ground_truth() const {
  ModelParams params;
  params.n_max = n_max;
  params.perseverance = eta;
  params.transition = gamma;
  params.hyper.eta = PerseverancePrior::uniform(n_max, 10.0);
  params.hyper.gamma = TransitionPrior::uniform(n_max, 10.0);
  double theta_sum = 0.0;
  std::uint64_t docs = 0;
  for (const QuerySpec& q : queries) {
    for (const DocSpec& d : q.slate) {
      params.satisfaction.rho[{q.query, d.ad_id}] = d.rho;
      params.attractiveness.theta[{q.query, d.ad_id}] = d.theta;
      theta_sum += d.theta;
      ++docs;
    }
  }
  if (docs > 0) params.attractiveness.fallback = theta_sum / docs;
  return params;
}

void Scenario::validate() const {
  if (n_max < 1 || n_max > kMaxSlate) throw ConfigError("scenario n_max out of range");
  if (static_cast<int>(eta.eta.size()) != n_max + 1) {
    throw ConfigError("scenario eta needs n_max + 1 entries");
  }
  for (double e : eta.eta) {
    if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("scenario eta entry outside [0,1]");
  }
  if (gamma.n_max != n_max) throw ConfigError("scenario gamma has wrong size");
  for (int i = 0; i <= n_max; ++i) {
    for (int j = 1; j <= n_max; ++j) {
      if (!(gamma.at(i, j) >= 0.0)) throw ConfigError("scenario gamma entry negative");
    }
    if (std::abs(gamma.row_sum(i) - 1.0) > 1e-9) {
      throw ConfigError("scenario gamma row " + std::to_string(i) + " does not sum to 1");
    }
  }
  if (queries.empty()) throw ConfigError("scenario has no queries");
  std::set<std::string> seen_queries;
  for (const QuerySpec& q : queries) {
    if (q.query.empty()) throw ConfigError("scenario query name empty");
    if (!seen_queries.insert(q.query).second) {
      throw ConfigError("duplicate scenario query: " + q.query);
    }
    if (q.slate.empty() || static_cast<int>(q.slate.size()) > n_max) {
      throw ConfigError("scenario slate size out of range for query " + q.query);
    }
    std::set<std::string> seen_ads;
    for (const DocSpec& d : q.slate) {
      if (d.ad_id.empty()) throw ConfigError("scenario ad id empty");
      if (!seen_ads.insert(d.ad_id).second) {
        throw ConfigError("duplicate ad id in slate of " + q.query);
      }
      if (!(d.theta >= 0.0 && d.theta <= 1.0) || !(d.rho >= 0.0 && d.rho <= 1.0)) {
        throw ConfigError("scenario doc probability outside [0,1] for " + d.ad_id);
      }
    }
  }
}

namespace {

struct Band {
  std::uint64_t query_count;
  std::uint64_t sessions_per_week;
  bool head;  // head bands take the head satisfaction value
};

PerseveranceParams make_eta(std::initializer_list<double> values) {
  PerseveranceParams p;
  p.eta.assign(values);
  return p;
}

TransitionMatrix make_gamma(int n_max, std::initializer_list<std::initializer_list<double>> rows) {
  TransitionMatrix m = TransitionMatrix::zeros(n_max);
  int i = 0;
  for (const auto& row : rows) {
    int j = 1;
    for (double x : row) m.at(i, j++) = x;
    ++i;
  }
  return m;
}

void fill_queries(Scenario& s, const std::vector<Band>& bands, double theta, double rho_tail,
                  double rho_head) {
  std::uint64_t qi = 0;
  for (const Band& band : bands) {
    for (std::uint64_t b = 0; b < band.query_count; ++b, ++qi) {
      QuerySpec q;
      char buf[16];
      std::snprintf(buf, sizeof buf, "q%05llu", static_cast<unsigned long long>(qi));
      q.query = buf;
      q.sessions_per_week = band.sessions_per_week;
      const double rho = band.head ? rho_head : rho_tail;
      for (int d = 1; d <= s.n_max; ++d) {
        q.slate.push_back({q.query + "a" + std::to_string(d), theta, rho});
      }
      s.queries.push_back(std::move(q));
    }
  }
}

// Recovery-tuned volume mix: per-query weekly volumes land mid-band in every
// frequency bucket, and the two high-volume bands carry the high-satisfaction
// documents that accumulate enough clicks for per-document checks.
Scenario mixed_traffic(std::uint64_t seed) {
  Scenario s;
  s.n_max = 4;
  s.seed = seed;
  s.eta = make_eta({0.30, 0.80, 0.70, 0.99, 0.99});
  s.gamma = make_gamma(4, {{0.708, 0.163, 0.0787, 0.0503},
                           {0.005, 0.300, 0.005, 0.690},
                           {0.003, 0.003, 0.005, 0.989},
                           {0.003, 0.991, 0.003, 0.003},
                           {0.003, 0.020, 0.974, 0.003}});
  const std::vector<Band> bands = {
      {6, 1400, true}, {18, 700, false},  {100, 300, false},
      {430, 70, false}, {2000, 25, false}, {11500, 6, false},
  };
  fill_queries(s, bands, 0.7, 0.02, 0.985);
  return s;
}

Scenario reverse_heavy(std::uint64_t seed) {
  Scenario s;
  s.n_max = 4;
  s.seed = seed;
  s.eta = make_eta({0.30, 0.35, 0.55, 0.75, 0.95});
  s.gamma = make_gamma(4, {{0.05, 0.10, 0.15, 0.70},
                           {0.01, 0.39, 0.30, 0.30},
                           {0.90, 0.01, 0.04, 0.05},
                           {0.10, 0.85, 0.01, 0.04},
                           {0.04, 0.06, 0.89, 0.01}});
  fill_queries(s, {{150, 220, false}}, 0.7, 0.05, 0.05);
  return s;
}

Scenario deterministic(std::uint64_t seed) {
  Scenario s;
  s.n_max = 4;
  s.seed = seed;
  s.eta = make_eta({0.25, 0.85, 0.90, 0.95, 0.99});
  s.gamma = make_gamma(4, {{1.0, 0.0, 0.0, 0.0},
                           {0.25, 0.25, 0.25, 0.25},
                           {0.25, 0.25, 0.25, 0.25},
                           {0.25, 0.25, 0.25, 0.25},
                           {0.25, 0.25, 0.25, 0.25}});
  fill_queries(s, {{40, 250, false}}, 0.7, 0.4, 0.4);
  return s;
}

// Click-count mix of the highest-volume bucket: stop factors chosen so the
// clicked-session fractions are 97.94 / 1.90 / 0.15 / 0.01 percent.
Scenario single_decile(std::uint64_t seed) {
  Scenario s;
  s.n_max = 4;
  s.seed = seed;
  s.eta = make_eta({0.30, 0.9706, 0.889, 0.9107, 0.99});
  s.gamma = make_gamma(4, {{0.708, 0.163, 0.0787, 0.0503},
                           {0.25, 0.25, 0.25, 0.25},
                           {0.25, 0.25, 0.25, 0.25},
                           {0.25, 0.25, 0.25, 0.25},
                           {0.25, 0.25, 0.25, 0.25}});
  fill_queries(s, {{25, 1400, false}}, 0.7, 0.3, 0.3);
  return s;
}

void scale_volumes(Scenario& s, double scale) {
  if (!(scale > 0.0)) throw ConfigError("volume_scale must be positive");
  for (QuerySpec& q : s.queries) {
    const double scaled = std::ceil(static_cast<double>(q.sessions_per_week) * scale);
    q.sessions_per_week = scaled < 1.0 ? 1 : static_cast<std::uint64_t>(scaled);
  }
}

void apply_overrides(Scenario& s, const KeyValueConfig& cfg) {
  if (cfg.has("volume_scale")) scale_volumes(s, cfg.get_double("volume_scale", 1.0));
  if (cfg.has("eta")) {
    const std::vector<double> e = cfg.get_doubles("eta");
    if (static_cast<int>(e.size()) != s.n_max + 1) {
      throw ConfigError("eta override needs n_max + 1 values");
    }
    s.eta.eta = e;
  }
  for (int i = 0; i <= s.n_max; ++i) {
    const std::string key = "gamma." + std::to_string(i);
    if (!cfg.has(key)) continue;
    const std::vector<double> row = cfg.get_doubles(key);
    if (static_cast<int>(row.size()) != s.n_max) {
      throw ConfigError(key + " override needs n_max values");
    }
    for (int j = 1; j <= s.n_max; ++j) s.gamma.at(i, j) = row[j - 1];
  }
  const bool has_theta = cfg.has("theta");
  const bool has_rho = cfg.has("rho");
  const double theta = cfg.get_double("theta", 0.0);
  const double rho = cfg.get_double("rho", 0.0);
  for (QuerySpec& q : s.queries) {
    for (DocSpec& d : q.slate) {
      if (has_theta) d.theta = theta;
      if (has_rho) d.rho = rho;
    }
  }
}

} // namespace

Scenario scenario_preset(const std::string& name, std::uint64_t seed) {
  if (name == "mixed-traffic") return mixed_traffic(seed);
  if (name == "reverse-heavy") return reverse_heavy(seed);
  if (name == "deterministic") return deterministic(seed);
  if (name == "single-decile") return single_decile(seed);
  throw ConfigError("unknown scenario preset: " + name);
}

Scenario build_scenario(const KeyValueConfig& cfg, std::uint64_t seed) {
  Scenario s = scenario_preset(cfg.require_str("preset"), seed);
  apply_overrides(s, cfg);
  s.validate();
  return s;
}

namespace {

std::string week_stream_name(const std::string& week_tag, const std::string& query) {
  return week_tag + ":" + query;
}

std::string session_id_for(const std::string& week_tag, std::uint64_t qi, std::uint64_t t) {
  return week_tag + "_" + std::to_string(qi) + "_" + std::to_string(t);
}

} // namespace

GenerateResult generate_corpus(const Scenario& scenario, const std::string& out_dir) {
  scenario.validate();
  const ModelParams truth = scenario.ground_truth();
  std::filesystem::create_directories(out_dir);
  GenerateResult result;
  result.priors_file = out_dir + "/priors.tsv";
  result.train_file = out_dir + "/train.tsv";
  result.test_file = out_dir + "/test.tsv";
  result.copies_file = out_dir + "/ad_copies.tsv";
  result.truth_file = out_dir + "/ground_truth.params";

  static const char* kWeeks[] = {"priors", "train", "test"};
  const std::string* files[] = {&result.priors_file, &result.train_file, &result.test_file};
  for (int w = 0; w < 3; ++w) {
    std::ofstream out(*files[w], std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + *files[w]);
    for (std::size_t qi = 0; qi < scenario.queries.size(); ++qi) {
      const QuerySpec& q = scenario.queries[qi];
      std::vector<std::string> ads;
      ads.reserve(q.slate.size());
      for (const DocSpec& d : q.slate) ads.push_back(d.ad_id);
      RngStream rng(scenario.seed, week_stream_name(kWeeks[w], q.query));
      for (std::uint64_t t = 0; t < q.sessions_per_week; ++t) {
        SampledSession draw = sample_session(truth, q.query, ads, rng);
        draw.session.session_id = session_id_for(kWeeks[w], qi, t);
        out << format_session_line(draw.session) << '\n';
        ++result.sessions_written;
      }
    }
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + *files[w]);
  }

  std::vector<AdCopy> copies;
  for (const auto& [ad_id, copy] : scenario_ad_copies(scenario)) copies.push_back(copy);
  write_ad_copy_file(result.copies_file, copies);
  save_model_params(truth, result.truth_file);
  return result;
}

std::vector<Session> sample_week(const Scenario& scenario, const std::string& week_tag) {
  scenario.validate();
  const ModelParams truth = scenario.ground_truth();
  std::vector<Session> sessions;
  sessions.reserve(scenario.sessions_per_week());
  for (std::size_t qi = 0; qi < scenario.queries.size(); ++qi) {
    const QuerySpec& q = scenario.queries[qi];
    std::vector<std::string> ads;
    ads.reserve(q.slate.size());
    for (const DocSpec& d : q.slate) ads.push_back(d.ad_id);
    RngStream rng(scenario.seed, week_stream_name(week_tag, q.query));
    for (std::uint64_t t = 0; t < q.sessions_per_week; ++t) {
      SampledSession draw = sample_session(truth, q.query, ads, rng);
      draw.session.session_id = session_id_for(week_tag, qi, t);
      sessions.push_back(std::move(draw.session));
    }
  }
  return sessions;
}

std::map<std::string, AdCopy> scenario_ad_copies(const Scenario& scenario) {
  std::map<std::string, AdCopy> copies;
  for (const QuerySpec& q : scenario.queries) {
    for (const DocSpec& d : q.slate) {
      AdCopy copy;
      copy.ad_id = d.ad_id;
      copy.title = "w" + d.ad_id + "t1 w" + d.ad_id + "t2 w" + d.ad_id + "t3";
      copy.description = "w" + d.ad_id + "d1 w" + d.ad_id + "d2";
      copy.display_url = d.ad_id + ".example";
      copies[d.ad_id] = std::move(copy);
    }
  }
  return copies;
}

} // namespace adclick
