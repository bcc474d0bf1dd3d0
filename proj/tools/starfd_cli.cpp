// Command-line front end: Monte Carlo sweeps, single verbose trials, self-test.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "starfd/harness.hpp"
#include "starfd/selftest.hpp"

namespace {

using namespace starfd;

struct Overrides {
  std::string config_path;
  std::string out_path;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::string schemes;
  std::string m;
  std::string snr_db;
  std::optional<int> workers;
  bool absolute = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "key = value configuration file");
  cmd->add_option("--trials", o.trials, "Monte Carlo trials per point");
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--schemes", o.schemes, "comma list of es,ms,conv,hd");
  cmd->add_option("--m", o.m, "element count(s)");
  cmd->add_option("--snr-db", o.snr_db, "average transmit SNR(s) in dB");
  cmd->add_option("--workers", o.workers, "worker threads");
  cmd->add_flag("--absolute", o.absolute, "report bit/s (rates times bandwidth)");
}

ExperimentConfig build_config(const Overrides& o) {
  ExperimentConfig cfg = o.config_path.empty() ? default_config() : load_config(o.config_path);
  if (o.trials) cfg.trials = *o.trials;
  if (o.seed) cfg.base_seed = *o.seed;
  if (!o.schemes.empty()) cfg.schemes = parse_scheme_list(o.schemes);
  if (!o.m.empty()) cfg.m_elems = parse_index_list(o.m);
  if (!o.snr_db.empty()) cfg.snr_db = parse_double_list(o.snr_db);
  if (o.workers) cfg.workers = *o.workers;
  if (o.absolute) cfg.absolute = true;
  cfg.validate();
  return cfg;
}

int run_sweep_cmd(const Overrides& o, SweepAxis axis) {
  ExperimentConfig cfg = build_config(o);
  const auto& fixed = axis == SweepAxis::kSnr ? cfg.m_elems.size() : cfg.snr_db.size();
  if (fixed != 1) {
    throw ConfigError(axis == SweepAxis::kSnr ? "sweep-snr needs exactly one --m value"
                                              : "sweep-m needs exactly one --snr-db value");
  }
  const SweepResult res = run_sweep(cfg, axis, [](std::size_t done, std::size_t total) {
    std::fprintf(stderr, "\r%zu/%zu trials", done, total);
    if (done == total) std::fprintf(stderr, "\n");
  });
  const double scale = cfg.absolute ? cfg.bandwidth_hz : 1.0;
  if (o.out_path.empty()) {
    std::cout << format_csv(res, scale);
  } else {
    emit_csv(res, o.out_path, scale);
  }
  return 0;
}

int run_trial_cmd(const Overrides& o, std::uint64_t index) {
  ExperimentConfig cfg = build_config(o);
  if (cfg.m_elems.size() != 1 || cfg.snr_db.size() != 1) {
    throw ConfigError("trial needs exactly one --m and one --snr-db value");
  }
  const Index m = cfg.m_elems.front();
  const double snr = cfg.snr_db.front();
  const TrialRecord rec = run_trial(cfg, m, snr, index);
  const double scale = cfg.absolute ? cfg.bandwidth_hz : 1.0;
  const char* unit = cfg.absolute ? "bit/s" : "bit/s/Hz";
  const auto qos = qos_thresholds(cfg, snr);
  std::printf("trial %llu  seed %llu  M=%lld  snr=%.2f dB\n",
              static_cast<unsigned long long>(index), static_cast<unsigned long long>(cfg.base_seed),
              static_cast<long long>(m), snr);
  std::printf("qos thresholds: R1 >= %.4f, R2 >= %.4f %s\n", qos.r1_th * scale, qos.r2_th * scale,
              unit);
  for (Scheme s : cfg.schemes) {
    const auto& r = rec[s];
    if (!r) continue;
    std::printf("  %-4s  wsr %.6g  R1 %.6g  R2 %.6g  %s  iters %d  %.3f s\n",
                std::string(to_string(s)).c_str(), r->weighted_sum_rate * scale, r->r1 * scale,
                r->r2 * scale, std::string(sca::to_string(r->status)).c_str(), r->iterations,
                r->wall_time_s);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STAR-RIS full-duplex beamforming simulator"};
  app.require_subcommand(1);
  Overrides o;
  std::uint64_t trial_index = 0;

  auto* snr = app.add_subcommand("sweep-snr", "weighted sum rate versus SNR at one M");
  add_common(snr, o);
  snr->add_option("--out", o.out_path, "CSV output path (stdout if omitted)");
  auto* msweep = app.add_subcommand("sweep-m", "weighted sum rate versus M at one SNR");
  add_common(msweep, o);
  msweep->add_option("--out", o.out_path, "CSV output path (stdout if omitted)");
  auto* trial = app.add_subcommand("trial", "one verbose trial");
  add_common(trial, o);
  trial->add_option("--index", trial_index, "trial index within the seed");
  auto* self = app.add_subcommand("selftest", "run the invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  try {
    if (*snr) return run_sweep_cmd(o, SweepAxis::kSnr);
    if (*msweep) return run_sweep_cmd(o, SweepAxis::kM);
    if (*trial) return run_trial_cmd(o, trial_index);
    if (*self) return run_selftest(std::cout) ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
