#include "adclick/serialization.hpp"

#include <fstream>
#include <vector>

#include "adclick/text.hpp"

namespace adclick {

namespace {

int parse_int(const std::string& s) {
  int v = 0;
  if (!adclick::parse_int(s, v)) throw SerializationError("bad integer field: " + s);
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  unsigned long long v = 0;
  if (!adclick::parse_u64(s, v)) throw SerializationError("bad count field: " + s);
  return v;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  if (!adclick::parse_double(s, v)) throw SerializationError("bad numeric field: " + s);
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SerializationError("cannot open for writing: " + path);
  return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw SerializationError("write failed: " + path);
}

std::vector<std::vector<std::string>> read_rows(const std::string& path,
                                                const char* expected_tag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SerializationError("cannot open: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split(line, '\t'));
  }
  if (rows.empty()) throw SerializationError("empty file: " + path);
  const auto& header = rows.front();
  if (header.size() != 3 || header[0] != "format") {
    throw SerializationError("missing format header: " + path);
  }
  if (header[1] != expected_tag) {
    throw SerializationError("unexpected file kind '" + header[1] + "' in " + path);
  }
  if (parse_int(header[2]) > kFormatVersion) {
    throw SerializationError("file version " + header[2] + " is newer than supported: " + path);
  }
  return rows;
}

void expect_fields(const std::vector<std::string>& row, std::size_t n,
                   const std::string& path) {
  if (row.size() != n) {
    throw SerializationError("malformed '" + row[0] + "' line in " + path);
  }
}

std::string model_tag(const std::vector<std::vector<std::string>>& rows,
                      const std::string& path) {
  for (const auto& row : rows) {
    if (row[0] == "model") {
      expect_fields(row, 2, path);
      return row[1];
    }
  }
  throw SerializationError("missing model line: " + path);
}

void require_model(const std::vector<std::vector<std::string>>& rows,
                   const std::string& expected, const std::string& path) {
  const std::string tag = model_tag(rows, path);
  if (tag != expected) {
    throw SerializationError("expected model '" + expected + "' but file holds '" + tag +
                             "': " + path);
  }
}

void write_header(std::ofstream& out, const char* tag, const std::string& model) {
  out << "format\t" << tag << '\t' << kFormatVersion << '\n';
  if (!model.empty()) out << "model\t" << model << '\n';
}

} // namespace

void save_model_params(const ModelParams& params, const std::string& path) {
  std::ofstream out = open_out(path);
  write_header(out, kParamsFormatTag, "ours");
  out << "n_max\t" << params.n_max << '\n';
  out << "from_empty_priors\t" << (params.hyper.from_empty_priors ? 1 : 0) << '\n';
  for (int j = 0; j <= params.n_max; ++j) {
    out << "eta\t" << j << '\t' << fmt_g17(params.perseverance.eta[j]) << '\n';
  }
  for (int j = 0; j <= params.n_max; ++j) {
    out << "eta_alpha\t" << j << '\t' << fmt_g17(params.hyper.eta.alpha[j]) << '\n';
    out << "eta_beta\t" << j << '\t' << fmt_g17(params.hyper.eta.beta[j]) << '\n';
  }
  for (int i = 0; i <= params.n_max; ++i) {
    for (int j = 1; j <= params.n_max; ++j) {
      out << "gamma\t" << i << '\t' << j << '\t' << fmt_g17(params.transition.at(i, j)) << '\n';
    }
  }
  for (int i = 0; i <= params.n_max; ++i) {
    for (int j = 1; j <= params.n_max; ++j) {
      out << "gamma_alpha\t" << i << '\t' << j << '\t'
          << fmt_g17(params.hyper.gamma.alpha.at(i, j)) << '\n';
    }
  }
  out << "rho_default\t" << fmt_g17(params.satisfaction.default_rho) << '\n';
  for (const auto& [key, v] : params.satisfaction.rho) {
    out << "rho\t" << key.first << '\t' << key.second << '\t' << fmt_g17(v) << '\n';
  }
  out << "theta_fallback\t" << fmt_g17(params.attractiveness.fallback) << '\n';
  for (const auto& [key, v] : params.attractiveness.theta) {
    out << "theta\t" << key.first << '\t' << key.second << '\t' << fmt_g17(v) << '\n';
  }
  finish_out(out, path);
}

ModelParams load_model_params(const std::string& path) {
  const auto rows = read_rows(path, kParamsFormatTag);
  require_model(rows, "ours", path);
  int n_max = -1;
  for (const auto& row : rows) {
    if (row[0] == "n_max") {
      expect_fields(row, 2, path);
      n_max = parse_int(row[1]);
    }
  }
  if (n_max < 1 || n_max > kMaxSlate) {
    throw SerializationError("missing or invalid n_max line: " + path);
  }
  ModelParams params;
  params.n_max = n_max;
  params.perseverance.eta.assign(n_max + 1, 0.0);
  params.hyper.eta.alpha.assign(n_max + 1, 0.0);
  params.hyper.eta.beta.assign(n_max + 1, 0.0);
  params.transition = TransitionMatrix::zeros(n_max);
  params.hyper.gamma.alpha = TransitionMatrix::zeros(n_max);
  auto eta_index = [&](const std::string& field) {
    const int j = parse_int(field);
    if (j < 0 || j > n_max) throw SerializationError("eta index out of range: " + path);
    return j;
  };
  auto gamma_index = [&](const std::string& fi, const std::string& fj) {
    const int i = parse_int(fi);
    const int j = parse_int(fj);
    if (i < 0 || i > n_max || j < 1 || j > n_max) {
      throw SerializationError("gamma index out of range: " + path);
    }
    return std::pair<int, int>{i, j};
  };
  for (const auto& row : rows) {
    const std::string& key = row[0];
    if (key == "format" || key == "model" || key == "n_max") continue;
    if (key == "from_empty_priors") {
      expect_fields(row, 2, path);
      params.hyper.from_empty_priors = parse_int(row[1]) != 0;
    } else if (key == "eta") {
      expect_fields(row, 3, path);
      params.perseverance.eta[eta_index(row[1])] = parse_double(row[2]);
    } else if (key == "eta_alpha") {
      expect_fields(row, 3, path);
      params.hyper.eta.alpha[eta_index(row[1])] = parse_double(row[2]);
    } else if (key == "eta_beta") {
      expect_fields(row, 3, path);
      params.hyper.eta.beta[eta_index(row[1])] = parse_double(row[2]);
    } else if (key == "gamma") {
      expect_fields(row, 4, path);
      const auto [i, j] = gamma_index(row[1], row[2]);
      params.transition.at(i, j) = parse_double(row[3]);
    } else if (key == "gamma_alpha") {
      expect_fields(row, 4, path);
      const auto [i, j] = gamma_index(row[1], row[2]);
      params.hyper.gamma.alpha.at(i, j) = parse_double(row[3]);
    } else if (key == "rho_default") {
      expect_fields(row, 2, path);
      params.satisfaction.default_rho = parse_double(row[1]);
    } else if (key == "rho") {
      expect_fields(row, 4, path);
      params.satisfaction.rho[{row[1], row[2]}] = parse_double(row[3]);
    } else if (key == "theta_fallback") {
      expect_fields(row, 2, path);
      params.attractiveness.fallback = parse_double(row[1]);
    } else if (key == "theta") {
      expect_fields(row, 4, path);
      params.attractiveness.theta[{row[1], row[2]}] = parse_double(row[3]);
    } else {
      throw SerializationError("unknown line '" + key + "' in " + path);
    }
  }
  return params;
}

void save_dbn_params(const DbnParams& params, const std::string& path) {
  std::ofstream out = open_out(path);
  write_header(out, kParamsFormatTag, "dbn");
  out << "lambda\t" << fmt_g17(params.lambda) << '\n';
  out << "theta_default\t" << fmt_g17(params.theta_default) << '\n';
  out << "rho_default\t" << fmt_g17(params.rho_default) << '\n';
  for (const auto& [key, v] : params.theta) {
    out << "theta\t" << key.first << '\t' << key.second << '\t' << fmt_g17(v) << '\n';
  }
  for (const auto& [key, v] : params.rho) {
    out << "rho\t" << key.first << '\t' << key.second << '\t' << fmt_g17(v) << '\n';
  }
  finish_out(out, path);
}

DbnParams load_dbn_params(const std::string& path) {
  const auto rows = read_rows(path, kParamsFormatTag);
  require_model(rows, "dbn", path);
  DbnParams params;
  for (const auto& row : rows) {
    const std::string& key = row[0];
    if (key == "format" || key == "model") continue;
    if (key == "lambda") {
      expect_fields(row, 2, path);
      params.lambda = parse_double(row[1]);
    } else if (key == "theta_default") {
      expect_fields(row, 2, path);
      params.theta_default = parse_double(row[1]);
    } else if (key == "rho_default") {
      expect_fields(row, 2, path);
      params.rho_default = parse_double(row[1]);
    } else if (key == "theta") {
      expect_fields(row, 4, path);
      params.theta[{row[1], row[2]}] = parse_double(row[3]);
    } else if (key == "rho") {
      expect_fields(row, 4, path);
      params.rho[{row[1], row[2]}] = parse_double(row[3]);
    } else {
      throw SerializationError("unknown line '" + key + "' in " + path);
    }
  }
  return params;
}

void save_icm_params(const IcmParams& params, const std::string& path) {
  std::ofstream out = open_out(path);
  write_header(out, kParamsFormatTag, "icm");
  out << "rate_default\t" << fmt_g17(params.rate_default) << '\n';
  for (const auto& [key, v] : params.rate) {
    out << "rate\t" << key.first << '\t' << key.second << '\t' << fmt_g17(v) << '\n';
  }
  finish_out(out, path);
}

IcmParams load_icm_params(const std::string& path) {
  const auto rows = read_rows(path, kParamsFormatTag);
  require_model(rows, "icm", path);
  IcmParams params;
  for (const auto& row : rows) {
    const std::string& key = row[0];
    if (key == "format" || key == "model") continue;
    if (key == "rate_default") {
      expect_fields(row, 2, path);
      params.rate_default = parse_double(row[1]);
    } else if (key == "rate") {
      expect_fields(row, 4, path);
      params.rate[{row[1], row[2]}] = parse_double(row[3]);
    } else {
      throw SerializationError("unknown line '" + key + "' in " + path);
    }
  }
  return params;
}

void save_pm_params(const PmParams& params, const std::string& path) {
  std::ofstream out = open_out(path);
  write_header(out, kParamsFormatTag, "pm");
  out << "n_max\t" << params.n_max << '\n';
  for (std::size_t j = 1; j <= params.weights.size(); ++j) {
    out << "weight\t" << j << '\t' << fmt_g17(params.weights[j - 1]) << '\n';
  }
  finish_out(out, path);
}

PmParams load_pm_params(const std::string& path) {
  const auto rows = read_rows(path, kParamsFormatTag);
  require_model(rows, "pm", path);
  PmParams params;
  params.weights.clear();
  for (const auto& row : rows) {
    const std::string& key = row[0];
    if (key == "format" || key == "model") continue;
    if (key == "n_max") {
      expect_fields(row, 2, path);
      params.n_max = parse_int(row[1]);
      if (params.n_max < 1 || params.n_max > kMaxSlate) {
        throw SerializationError("invalid n_max: " + path);
      }
      params.weights.resize(params.n_max, 0.0);
    } else if (key == "weight") {
      expect_fields(row, 3, path);
      const int j = parse_int(row[1]);
      if (j < 1 || j > static_cast<int>(params.weights.size())) {
        throw SerializationError("weight index out of range: " + path);
      }
      params.weights[j - 1] = parse_double(row[2]);
    } else {
      throw SerializationError("unknown line '" + key + "' in " + path);
    }
  }
  return params;
}

void save_am_params(const AttractivenessTable& params, const std::string& path) {
  std::ofstream out = open_out(path);
  write_header(out, kParamsFormatTag, "am");
  out << "theta_fallback\t" << fmt_g17(params.fallback) << '\n';
  for (const auto& [key, v] : params.theta) {
    out << "theta\t" << key.first << '\t' << key.second << '\t' << fmt_g17(v) << '\n';
  }
  finish_out(out, path);
}

AttractivenessTable load_am_params(const std::string& path) {
  const auto rows = read_rows(path, kParamsFormatTag);
  require_model(rows, "am", path);
  AttractivenessTable params;
  for (const auto& row : rows) {
    const std::string& key = row[0];
    if (key == "format" || key == "model") continue;
    if (key == "theta_fallback") {
      expect_fields(row, 2, path);
      params.fallback = parse_double(row[1]);
    } else if (key == "theta") {
      expect_fields(row, 4, path);
      params.theta[{row[1], row[2]}] = parse_double(row[3]);
    } else {
      throw SerializationError("unknown line '" + key + "' in " + path);
    }
  }
  return params;
}

void save_stats(const SufficientStats& stats, const std::string& path) {
  std::ofstream out = open_out(path);
  write_header(out, kStatsFormatTag, "");
  out << "n_max\t" << stats.n_max << '\n';
  out << "sessions\t" << stats.sessions << '\n';
  out << "rejected\t" << stats.rejected << '\n';
  for (int j = 0; j <= stats.n_max; ++j) {
    out << "ends_with_exactly\t" << j << '\t' << stats.ends_with_exactly[j] << '\n';
    out << "continues_past\t" << j << '\t' << stats.continues_past[j] << '\n';
  }
  for (int i = 0; i <= stats.n_max; ++i) {
    for (int j = 1; j <= stats.n_max; ++j) {
      out << "transition\t" << i << '\t' << j << '\t' << stats.transition(i, j) << '\n';
    }
  }
  auto dump_map = [&](const char* name, const std::map<QueryAd, std::uint64_t>& m) {
    for (const auto& [key, v] : m) {
      out << name << '\t' << key.first << '\t' << key.second << '\t' << v << '\n';
    }
  };
  dump_map("doc_clicks", stats.doc_clicks);
  dump_map("doc_clicks_not_last", stats.doc_clicks_not_last);
  dump_map("doc_clicks_last", stats.doc_clicks_last);
  finish_out(out, path);
}

SufficientStats load_stats(const std::string& path) {
  const auto rows = read_rows(path, kStatsFormatTag);
  int n_max = -1;
  for (const auto& row : rows) {
    if (row[0] == "n_max") {
      expect_fields(row, 2, path);
      n_max = parse_int(row[1]);
    }
  }
  if (n_max < 1 || n_max > kMaxSlate) {
    throw SerializationError("missing or invalid n_max line: " + path);
  }
  SufficientStats stats(n_max);
  for (const auto& row : rows) {
    const std::string& key = row[0];
    if (key == "format" || key == "n_max") continue;
    if (key == "sessions") {
      expect_fields(row, 2, path);
      stats.sessions = parse_u64(row[1]);
    } else if (key == "rejected") {
      expect_fields(row, 2, path);
      stats.rejected = parse_u64(row[1]);
    } else if (key == "ends_with_exactly" || key == "continues_past") {
      expect_fields(row, 3, path);
      const int j = parse_int(row[1]);
      if (j < 0 || j > n_max) throw SerializationError("count index out of range: " + path);
      auto& v = key[0] == 'e' ? stats.ends_with_exactly : stats.continues_past;
      v[j] = parse_u64(row[2]);
    } else if (key == "transition") {
      expect_fields(row, 4, path);
      const int i = parse_int(row[1]);
      const int j = parse_int(row[2]);
      if (i < 0 || i > n_max || j < 1 || j > n_max) {
        throw SerializationError("transition index out of range: " + path);
      }
      stats.transition(i, j) = parse_u64(row[3]);
    } else if (key == "doc_clicks" || key == "doc_clicks_not_last" ||
               key == "doc_clicks_last") {
      expect_fields(row, 4, path);
      auto& m = key == "doc_clicks"            ? stats.doc_clicks
                : key == "doc_clicks_not_last" ? stats.doc_clicks_not_last
                                               : stats.doc_clicks_last;
      m[{row[1], row[2]}] = parse_u64(row[3]);
    } else {
      throw SerializationError("unknown line '" + key + "' in " + path);
    }
  }
  return stats;
}

std::string peek_model_tag(const std::string& path) {
  return model_tag(read_rows(path, kParamsFormatTag), path);
}

} // namespace adclick
