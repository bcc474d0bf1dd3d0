#pragma once

#include <cmath>

#include "starfd/channel.hpp"
#include "starfd/rate.hpp"
#include "starfd/rng.hpp"
#include "starfd/sca_es.hpp"

namespace testing {

using namespace starfd;

// Nakagami links without path loss: every entry has unit mean-square gain.
inline channel::CompositeChannels unit_gain(Index m, RngStream& rng) {
  channel::ScenarioGeometry g;
  g.zeta0_db = 0.0;
  g.nu = 0.0;
  return channel::compose(channel::sample_realization(g, {}, m, 0.0, rng.engine()));
}

inline rate::StarProfile random_profile(Index m, RngStream& rng) {
  rate::StarProfile p = rate::StarProfile::zeros(m);
  for (Index i = 0; i < m; ++i) {
    const double beta = rng.uniform01();
    p.s_r[i] = std::polar(std::sqrt(beta), rng.uniform_phase());
    p.s_t[i] = std::polar(std::sqrt(1.0 - beta), rng.uniform_phase());
  }
  return p;
}

inline cd random_cd(RngStream& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng.engine()), n(rng.engine())};
}

inline CVec random_cvec(Index m, RngStream& rng) {
  CVec v(m);
  for (Index i = 0; i < m; ++i) v[i] = random_cd(rng);
  return v;
}

inline rate::LinkBudget budget_db(double snr_db) {
  const double g = std::pow(10.0, snr_db / 10.0);
  return {g, g / 2.0, g / 2.0};
}

inline rate::QosThresholds qos_for(const rate::LinkBudget& b, double kappa = 0.1) {
  return {std::log2(1.0 + kappa * b.gamma1_bar), std::log2(1.0 + kappa * b.gamma2_bar)};
}

// Plain loop, independent of the Eigen expressions used by the library.
inline cd bilinear(const CVec& a, const CVec& b) {
  cd acc = 0.0;
  for (Index i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double sum_power_gap(const rate::StarProfile& p) {
  double worst = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    worst = std::max(worst, std::abs(1.0 - std::norm(p.s_r[i]) - std::norm(p.s_t[i])));
  }
  return worst;
}

}  // namespace testing
