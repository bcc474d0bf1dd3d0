#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "starfd/baselines.hpp"
#include "starfd/sca_ms.hpp"

namespace starfd {

enum class Scheme { kEs, kMs, kConvRis, kHd };
inline constexpr Scheme kAllSchemes[] = {Scheme::kEs, Scheme::kMs, Scheme::kConvRis, Scheme::kHd};

std::string_view to_string(Scheme s);  // es, ms, conv, hd
Scheme parse_scheme(std::string_view name);
std::vector<Scheme> parse_scheme_list(std::string_view csv);

// effective: gamma2_bar is the nominal post-SI value gamma/2.
// explicit_si: gamma2_bar = (P2/s^2) / (P1 |g_ap|^2 / s^2 + 1) per draw.
enum class UplinkSnrMode { kEffective, kExplicitSi };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  channel::ScenarioGeometry scenario;
  channel::FadingParams fading;
  std::vector<Index> m_elems{16, 32, 48, 64, 96, 128};
  std::vector<double> snr_db{0, 5, 10, 15, 20, 25, 30};
  rate::Weights weights;
  double qos_kappa = 0.1;
  UplinkSnrMode uplink_snr_mode = UplinkSnrMode::kEffective;
  double si_power_db = -110.0;  // variance of g_ap, used by explicit_si only
  std::vector<Scheme> schemes{Scheme::kEs, Scheme::kMs, Scheme::kConvRis, Scheme::kHd};
  int trials = 100;
  std::uint64_t base_seed = 1;
  int workers = 0;  // 0: hardware concurrency
  sca::ScaSettings sca;
  sca::InitMode init = sca::InitMode::kRemark1;
  sca::PenaltySettings penalty;
  std::optional<Index> conv_m_r;  // unset: even split
  baselines::ConvRisOptions conv;
  double bandwidth_hz = 10e6;
  double noise1_dbm = -84.0;  // downlink receiver
  double noise2_dbm = -84.0;  // AP receiver
  bool absolute = false;

  void validate() const;
};

ExperimentConfig default_config();

// Flat `key = value` lines, `#` comments. Unknown keys and malformed values
// throw ConfigError.
void apply_config_text(ExperimentConfig& cfg, const std::string& text);
ExperimentConfig load_config(const std::string& path);

std::vector<double> parse_double_list(std::string_view csv);
std::vector<Index> parse_index_list(std::string_view csv);

}  // namespace starfd
