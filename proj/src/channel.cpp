#include "starfd/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace starfd::channel {

void ScenarioGeometry::validate() const {
  for (double d : {d_ap_ris, d_ap_u1, d_ris_u1, d_ris_u2}) {
    if (!(d > 0.0)) throw std::domain_error("link distance must be positive");
  }
  if (!(nu >= 0.0)) throw std::domain_error("path-loss exponent must be nonnegative");
  if (!std::isfinite(zeta0_db)) throw std::domain_error("reference path loss must be finite");
}

void FadingParams::validate() const {
  for (double m : {m_f, m_g, m_u, m_v}) {
    if (!(m >= 0.5)) throw std::domain_error("Nakagami shape must be >= 0.5");
  }
}

double path_loss_linear(double d, double zeta0_db, double nu) {
  if (!(d > 0.0)) throw std::domain_error("path_loss_linear: distance must be positive");
  return std::pow(10.0, -(zeta0_db + 10.0 * nu * std::log10(d)) / 10.0);
}

double sample_nakagami_envelope(double shape, double mean_square, std::mt19937_64& rng) {
  if (!(shape >= 0.5)) throw std::domain_error("Nakagami shape must be >= 0.5");
  if (!(mean_square > 0.0) || !std::isfinite(mean_square)) {
    throw std::domain_error("Nakagami spread must be positive");
  }
  std::gamma_distribution<double> gamma(shape, mean_square / shape);
  return std::sqrt(gamma(rng));
}

namespace {

CVec sample_link(Index m, double shape, double zeta, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  CVec out(m);
  for (Index i = 0; i < m; ++i) {
    const double env = sample_nakagami_envelope(shape, zeta, rng);
    out[i] = std::polar(env, -phase(rng));
  }
  return out;
}

}  // namespace

ChannelRealization sample_realization(const ScenarioGeometry& geom, const FadingParams& fading,
                                      Index m_elems, double si_power, std::mt19937_64& rng) {
  if (m_elems < 1) throw std::domain_error("element count must be >= 1");
  if (!(si_power >= 0.0)) throw std::domain_error("SI power must be nonnegative");
  geom.validate();
  fading.validate();

  const double zeta_g = path_loss_linear(geom.d_ap_ris, geom.zeta0_db, geom.nu);
  const double zeta_f = path_loss_linear(geom.d_ap_u1, geom.zeta0_db, geom.nu);
  const double zeta_v = path_loss_linear(geom.d_ris_u1, geom.zeta0_db, geom.nu);
  const double zeta_u = path_loss_linear(geom.d_ris_u2, geom.zeta0_db, geom.nu);

  ChannelRealization r;
  // Draw order is part of the reproducibility contract.
  r.g_d = sample_link(m_elems, fading.m_g, zeta_g, rng);
  r.g_u = sample_link(m_elems, fading.m_g, zeta_g, rng);
  r.u = sample_link(m_elems, fading.m_u, zeta_u, rng);
  r.v = sample_link(m_elems, fading.m_v, zeta_v, rng);
  {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double env = sample_nakagami_envelope(fading.m_f, zeta_f, rng);
    r.f = std::polar(env, -phase(rng));
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(si_power / 2.0);
  const double re = normal(rng);
  const double im = normal(rng);
  r.g_ap = cd(sd * re, sd * im);
  return r;
}

CompositeChannels compose(const ChannelRealization& real) {
  CompositeChannels c;
  c.h = real.v.cwiseProduct(real.g_d);
  c.q = real.v.cwiseProduct(real.u);
  c.z = real.g_u.cwiseProduct(real.u);
  c.f = real.f;
  return c;
}

}  // namespace starfd::channel
