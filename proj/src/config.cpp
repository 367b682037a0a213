#include "adclick/config.hpp"

#include <fstream>
#include <sstream>

#include "adclick/text.hpp"

namespace adclick {

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

KeyValueConfig KeyValueConfig::parse_text(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": missing '='");
    }
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    cfg.entries_[key] = value;
  }
  return cfg;
}

bool KeyValueConfig::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

std::string KeyValueConfig::get_str(const std::string& key, const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

std::string KeyValueConfig::require_str(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  unsigned long long v = 0;
  if (!parse_u64(it->second, v)) throw ConfigError("config key " + key + ": not an integer");
  return v;
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  int v = 0;
  if (!parse_int(it->second, v)) throw ConfigError("config key " + key + ": not an integer");
  return v;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  double v = 0;
  if (!parse_double(it->second, v)) throw ConfigError("config key " + key + ": not a number");
  return v;
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return {};
  std::vector<double> out;
  for (const std::string& part : split(it->second, ',')) {
    double v = 0;
    if (!parse_double(trim(part), v)) {
      throw ConfigError("config key " + key + ": not a number list");
    }
    out.push_back(v);
  }
  return out;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

RunConfig RunConfig::from_config(const KeyValueConfig& cfg) {
  RunConfig rc;
  rc.log_priors = cfg.get_str("log_priors", "");
  rc.log_train = cfg.get_str("log_train", "");
  rc.log_test = cfg.get_str("log_test", "");
  rc.ad_copies = cfg.get_str("ad_copies", "");
  rc.labels = cfg.get_str("labels", "");
  rc.out_dir = cfg.get_str("out_dir", rc.out_dir);
  rc.n_max = cfg.get_int("n_max", rc.n_max);
  rc.prior_mass_eta = cfg.get_double("prior_mass_eta", rc.prior_mass_eta);
  rc.prior_mass_gamma = cfg.get_double("prior_mass_gamma", rc.prior_mass_gamma);
  rc.freq_threshold = cfg.get_u64("freq_threshold", rc.freq_threshold);
  rc.dbn_lambda = cfg.get_double("dbn_lambda", rc.dbn_lambda);
  rc.rho_default = cfg.get_double("rho_default", rc.rho_default);
  rc.rho_smoothing = cfg.get_double("rho_smoothing", rc.rho_smoothing);
  rc.seed = cfg.get_u64("seed", rc.seed);
  rc.validate();
  return rc;
}

void RunConfig::validate() const {
  if (n_max < 1 || n_max > 8) throw ConfigError("n_max must be in 1..8");
  if (prior_mass_eta <= 0 || prior_mass_gamma <= 0) {
    throw ConfigError("prior masses must be positive");
  }
  if (dbn_lambda < 0 || dbn_lambda > 1) throw ConfigError("dbn_lambda must be in [0,1]");
  if (rho_default < 0 || rho_default > 1) throw ConfigError("rho_default must be in [0,1]");
  if (rho_smoothing < 0) throw ConfigError("rho_smoothing must be nonnegative");
}

} // namespace adclick
