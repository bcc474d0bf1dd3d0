#include "starfd/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace starfd {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::kEs: return "es";
    case Scheme::kMs: return "ms";
    case Scheme::kConvRis: return "conv";
    case Scheme::kHd: return "hd";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    const auto end = comma == std::string_view::npos ? csv.size() : comma;
    std::string item = trim(csv.substr(start, end - start));
    if (item.empty()) throw ConfigError("empty item in list '" + std::string(csv) + "'");
    out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

long long parse_int(const std::string& s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("not an integer: '" + s + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("not an unsigned integer: '" + s + "'");
  }
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("not a boolean: '" + s + "'");
}

}  // namespace

std::vector<Scheme> parse_scheme_list(std::string_view csv) {
  std::vector<Scheme> out;
  for (const auto& item : split(csv)) {
    const Scheme s = parse_scheme(item);
    bool dup = false;
    for (Scheme t : out) dup = dup || t == s;
    if (!dup) out.push_back(s);
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view csv) {
  std::vector<double> out;
  for (const auto& item : split(csv)) out.push_back(parse_double(item));
  return out;
}

std::vector<Index> parse_index_list(std::string_view csv) {
  std::vector<Index> out;
  for (const auto& item : split(csv)) out.push_back(static_cast<Index>(parse_int(item)));
  return out;
}

void ExperimentConfig::validate() const {
  try {
    scenario.validate();
    fading.validate();
    weights.validate();
    sca.validate();
    penalty.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (m_elems.empty() || snr_db.empty()) throw ConfigError("sweep lists must be non-empty");
  for (Index m : m_elems) {
    if (m < 1) throw ConfigError("element counts must be positive");
    if (conv_m_r && (*conv_m_r < 0 || *conv_m_r > m)) {
      throw ConfigError("conv.m_r exceeds the element count");
    }
  }
  if (!(qos_kappa >= 0.0)) throw ConfigError("qos.kappa must be non-negative");
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (workers < 0) throw ConfigError("workers must be non-negative");
  if (schemes.empty()) throw ConfigError("no schemes selected");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth must be positive");
}

ExperimentConfig default_config() { return ExperimentConfig{}; }

void apply_config_text(ExperimentConfig& cfg, const std::string& text) {
  using Setter = std::function<void(const std::string&)>;
  auto real = [](double& dst) -> Setter { return [&dst](const std::string& v) { dst = parse_double(v); }; };
  auto integer = [](int& dst) -> Setter {
    return [&dst](const std::string& v) { dst = static_cast<int>(parse_int(v)); };
  };
  auto flag = [](bool& dst) -> Setter { return [&dst](const std::string& v) { dst = parse_bool(v); }; };

  const std::map<std::string, Setter> keys{
      {"scenario.d_ap_ris", real(cfg.scenario.d_ap_ris)},
      {"scenario.d_ap_u1", real(cfg.scenario.d_ap_u1)},
      {"scenario.d_ris_u1", real(cfg.scenario.d_ris_u1)},
      {"scenario.d_ris_u2", real(cfg.scenario.d_ris_u2)},
      {"scenario.zeta0_db", real(cfg.scenario.zeta0_db)},
      {"scenario.nu", real(cfg.scenario.nu)},
      {"fading.m_f", real(cfg.fading.m_f)},
      {"fading.m_g", real(cfg.fading.m_g)},
      {"fading.m_u", real(cfg.fading.m_u)},
      {"fading.m_v", real(cfg.fading.m_v)},
      {"sweep.m", [&](const std::string& v) { cfg.m_elems = parse_index_list(v); }},
      {"sweep.snr_db", [&](const std::string& v) { cfg.snr_db = parse_double_list(v); }},
      {"weights.w1", [&](const std::string& v) { cfg.weights = rate::Weights::from_w1(parse_double(v)); }},
      {"qos.kappa", real(cfg.qos_kappa)},
      {"link.uplink_snr_mode",
       [&](const std::string& v) {
         if (v == "effective") {
           cfg.uplink_snr_mode = UplinkSnrMode::kEffective;
         } else if (v == "explicit_si") {
           cfg.uplink_snr_mode = UplinkSnrMode::kExplicitSi;
         } else {
           throw ConfigError("link.uplink_snr_mode must be effective or explicit_si");
         }
       }},
      {"link.si_power_db", real(cfg.si_power_db)},
      {"run.schemes", [&](const std::string& v) { cfg.schemes = parse_scheme_list(v); }},
      {"run.trials", integer(cfg.trials)},
      {"run.seed", [&](const std::string& v) { cfg.base_seed = parse_u64(v); }},
      {"run.workers", integer(cfg.workers)},
      {"sca.eps1", real(cfg.sca.eps1)},
      {"sca.i_max", integer(cfg.sca.i_max)},
      {"sca.init",
       [&](const std::string& v) {
         if (v == "random") {
           cfg.init = sca::InitMode::kRandom;
         } else if (v == "remark1") {
           cfg.init = sca::InitMode::kRemark1;
         } else {
           throw ConfigError("sca.init must be random or remark1");
         }
       }},
      {"sca.bounds",
       [&](const std::string& v) {
         if (v == "tangent") {
           cfg.sca.bounds = sca::BoundVariant::kTangent;
         } else if (v == "as_printed") {
           cfg.sca.bounds = sca::BoundVariant::kAsPrinted;
         } else {
           throw ConfigError("sca.bounds must be tangent or as_printed");
         }
       }},
      {"penalty.form",
       [&](const std::string& v) {
         if (v == "delta") {
           cfg.penalty.form = sca::PenaltyForm::kDelta;
         } else if (v == "amplitude") {
           cfg.penalty.form = sca::PenaltyForm::kAmplitude;
         } else {
           throw ConfigError("penalty.form must be delta or amplitude");
         }
       }},
      {"penalty.mu0", real(cfg.penalty.mu0)},
      {"penalty.omega", real(cfg.penalty.omega)},
      {"penalty.eps2", real(cfg.penalty.eps2)},
      {"penalty.max_outer", integer(cfg.penalty.max_outer)},
      {"solver.feasibility_tol", real(cfg.sca.solver.feasibility_tol)},
      {"solver.kkt_tol", real(cfg.sca.solver.kkt_tol)},
      {"solver.gap_tol", real(cfg.sca.solver.gap_tol)},
      {"solver.max_newton_steps", integer(cfg.sca.solver.max_newton_steps)},
      {"solver.max_barrier_rounds", integer(cfg.sca.solver.max_barrier_rounds)},
      {"conv.m_r", [&](const std::string& v) { cfg.conv_m_r = static_cast<Index>(parse_int(v)); }},
      {"conv.hard_projection", flag(cfg.conv.hard_projection)},
      {"conv.closed_form", flag(cfg.conv.closed_form)},
      {"report.bandwidth_hz", real(cfg.bandwidth_hz)},
      {"report.noise1_dbm", real(cfg.noise1_dbm)},
      {"report.noise2_dbm", real(cfg.noise2_dbm)},
      {"report.absolute", flag(cfg.absolute)},
  };

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end()) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    try {
      it->second(value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + " (" + key + "): " + e.what());
    } catch (const std::exception& e) {
      throw ConfigError("line " + std::to_string(lineno) + " (" + key + "): " + e.what());
    }
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::ios_base::failure("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  ExperimentConfig cfg = default_config();
  apply_config_text(cfg, buf.str());
  return cfg;
}

}  // namespace starfd
