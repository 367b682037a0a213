#pragma once
// Flat key-value config files: one `key = value` per line, `#` comments.
// Also the RunConfig consumed by the CLI commands.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace adclick {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_text(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_str(const std::string& key, const std::string& fallback) const;
  std::string require_str(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  int get_int(const std::string& key, int fallback) const;
  double get_double(const std::string& key, double fallback) const;
  // Comma-separated doubles.
  std::vector<double> get_doubles(const std::string& key) const;

  void set(const std::string& key, const std::string& value);
  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

struct RunConfig {
  std::string log_priors;
  std::string log_train;
  std::string log_test;
  std::string ad_copies;
  std::string labels;
  std::string out_dir = ".";
  int n_max = 4;
  double prior_mass_eta = 10.0;
  double prior_mass_gamma = 10.0;
  std::uint64_t freq_threshold = 50;
  double dbn_lambda = 0.01;
  double rho_default = 0.5;
  double rho_smoothing = 0.0;
  std::uint64_t seed = 1;

  static RunConfig from_config(const KeyValueConfig& cfg);
  void validate() const;
};

} // namespace adclick
