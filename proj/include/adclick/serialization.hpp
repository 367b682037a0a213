#pragma once
// Versioned flat-text parameter files: `name<TAB>index...<TAB>value` lines
// under a `format` header. Counters round-trip bit-exactly (integers);
// probabilities are written with 17 significant digits so doubles
// round-trip exactly too.

#include <string>

#include "adclick/baselines.hpp"
#include "adclick/model.hpp"

namespace adclick {

class SerializationError : public std::runtime_error {
 public:
  explicit SerializationError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr const char* kParamsFormatTag = "clickmodel-params";
inline constexpr const char* kStatsFormatTag = "clickmodel-stats";
inline constexpr int kFormatVersion = 1;

void save_model_params(const ModelParams& params, const std::string& path);
ModelParams load_model_params(const std::string& path);

void save_dbn_params(const DbnParams& params, const std::string& path);
DbnParams load_dbn_params(const std::string& path);

void save_icm_params(const IcmParams& params, const std::string& path);
IcmParams load_icm_params(const std::string& path);

void save_pm_params(const PmParams& params, const std::string& path);
PmParams load_pm_params(const std::string& path);

void save_am_params(const AttractivenessTable& params, const std::string& path);
AttractivenessTable load_am_params(const std::string& path);

void save_stats(const SufficientStats& stats, const std::string& path);
SufficientStats load_stats(const std::string& path);

// Reads just the `model` line so callers can dispatch on file kind.
std::string peek_model_tag(const std::string& path);

} // namespace adclick
