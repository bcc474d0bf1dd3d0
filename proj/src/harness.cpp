#include "starfd/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <thread>

namespace starfd {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

template <class F>
SchemeResult timed(F&& run) {
  const auto t0 = std::chrono::steady_clock::now();
  SchemeResult r = run();
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

SchemeResult from_report(const sca::ScaReport& rep) {
  SchemeResult r;
  r.status = rep.status;
  r.iterations = rep.iterations;
  if (rep.status != sca::ScaStatus::kInfeasible) {
    r.r1 = rep.rates.r1;
    r.r2 = rep.rates.r2;
    r.weighted_sum_rate = rep.weighted_sum_rate;
  }
  return r;
}

}  // namespace

rate::LinkBudget link_budget(const ExperimentConfig& cfg, double snr_db, cd g_ap) {
  const double g = db_to_linear(snr_db);
  rate::LinkBudget b;
  b.gamma1_bar = g;
  b.gamma2p_bar = g / 2.0;
  b.gamma2_bar = cfg.uplink_snr_mode == UplinkSnrMode::kEffective
                     ? g / 2.0
                     : rate::effective_uplink_snr(g / 2.0, g, g_ap);
  return b;
}

rate::QosThresholds qos_thresholds(const ExperimentConfig& cfg, double snr_db) {
  const double g = db_to_linear(snr_db);
  return {std::log2(1.0 + cfg.qos_kappa * g), std::log2(1.0 + cfg.qos_kappa * g / 2.0)};
}

TrialRecord run_trial(const ExperimentConfig& cfg, Index m, double snr_db,
                      std::uint64_t trial_index) {
  TrialRecord rec;
  rec.seed = cfg.base_seed;
  rec.trial_index = trial_index;
  rec.m = m;
  rec.snr_db = snr_db;

  RngStream ch_rng(cfg.base_seed, trial_index, StreamPurpose::kChannel);
  const channel::ChannelRealization real = channel::sample_realization(
      cfg.scenario, cfg.fading, m, db_to_linear(cfg.si_power_db), ch_rng.engine());
  const channel::CompositeChannels ch = channel::compose(real);
  const rate::LinkBudget budget = link_budget(cfg, snr_db, real.g_ap);
  sca::ScaSettings settings = cfg.sca;
  settings.weights = cfg.weights;
  settings.qos = qos_thresholds(cfg, snr_db);

  RngStream init_rng(cfg.base_seed, trial_index, StreamPurpose::kInit);
  const rate::StarProfile init = sca::initialize_es(ch, cfg.init, init_rng);

  for (Scheme s : cfg.schemes) {
    SchemeResult r;
    try {
      switch (s) {
        case Scheme::kEs:
          r = timed([&] { return from_report(sca::run_algorithm1(ch, budget, settings, init)); });
          break;
        case Scheme::kMs:
          r = timed([&] {
            const sca::MsReport rep = sca::run_algorithm2(ch, budget, settings, cfg.penalty, init);
            SchemeResult out;
            out.status = rep.status;
            out.iterations = rep.inner_iterations_total;
            if (rep.status != sca::ScaStatus::kInfeasible) {
              out.r1 = rep.rates.r1;
              out.r2 = rep.rates.r2;
              out.weighted_sum_rate = rep.weighted_sum_rate;
            }
            return out;
          });
          break;
        case Scheme::kConvRis:
          r = timed([&] {
            const baselines::PartitionSpec part =
                cfg.conv_m_r ? baselines::PartitionSpec{*cfg.conv_m_r, m - *cfg.conv_m_r}
                             : baselines::PartitionSpec::even(m);
            return from_report(baselines::conventional_ris(ch, budget, settings, part, cfg.conv, init));
          });
          break;
        case Scheme::kHd:
          r = timed([&] {
            // No self-interference in half duplex: the uplink sees P2 / s^2.
            rate::LinkBudget hd = budget;
            hd.gamma2_bar = budget.gamma2p_bar;
            const baselines::HdReport rep = baselines::solve_p5(ch, hd, settings.weights, settings.qos);
            SchemeResult out;
            out.status = rep.status;
            out.r1 = rep.rates.r1;
            out.r2 = rep.rates.r2;
            out.weighted_sum_rate = rep.weighted_sum_rate;
            return out;
          });
          break;
      }
    } catch (const std::exception&) {
      r = SchemeResult{};
      r.status = sca::ScaStatus::kMaxIter;
    }
    rec.results[static_cast<std::size_t>(s)] = r;
  }
  return rec;
}

SchemeSummary summarize(const std::vector<TrialRecord>& records, Scheme s) {
  SchemeSummary out;
  std::vector<double> v;
  int infeasible = 0;
  for (const auto& rec : records) {
    const auto& r = rec[s];
    if (!r) continue;
    v.push_back(r->weighted_sum_rate);
    if (r->status == sca::ScaStatus::kInfeasible) ++infeasible;
  }
  out.trials = static_cast<int>(v.size());
  if (v.empty()) return out;
  double sum = 0.0;
  for (double x : v) sum += x;
  out.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.stderr_ = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  out.infeasible_frac = static_cast<double>(infeasible) / static_cast<double>(v.size());
  return out;
}

int resolve_workers(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("STARFD_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  if (cfg.workers > 0) return cfg.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult run_sweep(const ExperimentConfig& cfg, SweepAxis axis, const ProgressFn& progress) {
  cfg.validate();
  SweepResult res;
  res.axis = axis;
  res.schemes = cfg.schemes;
  const std::size_t n_points = axis == SweepAxis::kSnr ? cfg.snr_db.size() : cfg.m_elems.size();
  const std::size_t n_trials = static_cast<std::size_t>(cfg.trials);
  res.records.assign(n_points, std::vector<TrialRecord>(n_trials));

  const std::size_t total = n_points * n_trials;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mu;
  auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const std::size_t p = job / n_trials;
      const std::size_t t = job % n_trials;
      const Index m = axis == SweepAxis::kM ? cfg.m_elems[p] : cfg.m_elems.front();
      const double snr = axis == SweepAxis::kSnr ? cfg.snr_db[p] : cfg.snr_db.front();
      res.records[p][t] = run_trial(cfg, m, snr, t);
      const std::size_t d = ++done;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mu);
        progress(d, total);
      }
    }
  };
  const int n_workers = std::min<int>(resolve_workers(cfg), static_cast<int>(std::max<std::size_t>(total, 1)));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (std::size_t p = 0; p < n_points; ++p) {
    SweepPoint pt;
    pt.axis = axis == SweepAxis::kSnr ? cfg.snr_db[p] : static_cast<double>(cfg.m_elems[p]);
    for (Scheme s : cfg.schemes) pt.summaries[static_cast<std::size_t>(s)] = summarize(res.records[p], s);
    res.points.push_back(pt);
  }
  return res;
}

std::string format_csv(const SweepResult& result, double scale) {
  std::string out = "axis,scheme,mean_wsr_bps_hz,stderr,infeasible_frac,trials\n";
  char buf[256];
  for (const auto& pt : result.points) {
    for (Scheme s : result.schemes) {
      const auto& sum = pt.summaries[static_cast<std::size_t>(s)];
      if (!sum) continue;
      std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g,%.17g,%.17g,%d\n", pt.axis,
                    std::string(to_string(s)).c_str(), sum->mean * scale, sum->stderr_ * scale,
                    sum->infeasible_frac, sum->trials);
      out += buf;
    }
  }
  return out;
}

void emit_csv(const SweepResult& result, const std::string& path, double scale) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::ios_base::failure("cannot open '" + path + "' for writing");
  const std::string text = format_csv(result, scale);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.flush();
  if (!f) throw std::ios_base::failure("write to '" + path + "' failed");
}

}  // namespace starfd
