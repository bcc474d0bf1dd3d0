#pragma once

#include <random>

#include "starfd/types.hpp"

namespace starfd::channel {

// Link distances and large-scale fading model.
struct ScenarioGeometry {
  double d_ap_ris = 80.0;   // AP <-> RIS, used by both g_d and g_u
  double d_ap_u1 = 100.0;   // direct AP -> U1
  double d_ris_u1 = 30.0;   // RIS -> U1 (v)
  double d_ris_u2 = 20.0;   // U2 -> RIS (u)
  double zeta0_db = 42.0;   // reference path loss at 1 m
  double nu = 3.5;          // path-loss exponent

  void validate() const;
};

// Nakagami shape per link family; m_g applies to both g_d and g_u.
struct FadingParams {
  double m_f = 1.0;
  double m_g = 4.0;
  double m_u = 3.0;
  double m_v = 2.0;

  void validate() const;
};

struct ChannelRealization {
  CVec g_d;  // AP -> RIS
  CVec g_u;  // RIS -> AP
  CVec u;    // U2 -> RIS
  CVec v;    // RIS -> U1
  cd f{0.0, 0.0};     // AP -> U1 direct
  cd g_ap{0.0, 0.0};  // residual self-interference

  Index size() const { return g_d.size(); }
};

// Cascaded vectors: h = v .* g_d, q = v .* u, z = g_u .* u.
struct CompositeChannels {
  CVec h;
  CVec q;
  CVec z;
  cd f{0.0, 0.0};

  Index size() const { return h.size(); }
};

/// Linear power gain 10^(-(zeta0_db + 10 nu log10 d) / 10). Throws
/// std::domain_error for d <= 0.
double path_loss_linear(double d, double zeta0_db, double nu);

/// Nakagami-m envelope with E[X^2] = mean_square, drawn as the square root of a
/// Gamma(shape, mean_square / shape) variate.
double sample_nakagami_envelope(double shape, double mean_square, std::mt19937_64& rng);

/// One draw of every link. Entries are envelope * exp(-j psi) with psi uniform
/// on [0, 2 pi); g_ap ~ CN(0, si_power).
ChannelRealization sample_realization(const ScenarioGeometry& geom, const FadingParams& fading,
                                      Index m_elems, double si_power, std::mt19937_64& rng);

CompositeChannels compose(const ChannelRealization& real);

}  // namespace starfd::channel
