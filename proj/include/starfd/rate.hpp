#pragma once

#include "starfd/channel.hpp"
#include "starfd/types.hpp"

namespace starfd::rate {

using channel::CompositeChannels;

// Reflection (s_r) and transmission (s_t) coefficients of the surface.
struct StarProfile {
  CVec s_r;
  CVec s_t;

  Index size() const { return s_r.size(); }
  static StarProfile zeros(Index m) { return {CVec::Zero(m), CVec::Zero(m)}; }
};

// Linear SNRs: gamma1_bar = P1/s1^2, gamma2_bar is the post-SI uplink SNR and
// gamma2p_bar = P2/s1^2 scales the inter-user interference at U1.
struct LinkBudget {
  double gamma1_bar = 1.0;
  double gamma2_bar = 1.0;
  double gamma2p_bar = 1.0;

  void validate() const;
};

struct Weights {
  double w1 = 0.7;
  double w2 = 0.3;

  // w2 is derived so that the pair sums to one exactly.
  static Weights from_w1(double w1);
  void validate() const;
};

struct QosThresholds {
  double r1_th = 0.0;
  double r2_th = 0.0;

  void validate() const;
};

struct RatePair {
  double r1 = 0.0;
  double r2 = 0.0;
};

enum class Protocol { kEnergySplitting, kModeSwitching };

double sinr_downlink(const StarProfile& p, const CompositeChannels& ch, const LinkBudget& b);
double sinr_uplink(const StarProfile& p, const CompositeChannels& ch, const LinkBudget& b);

// (P2/s2^2) / (P1 |g_ap|^2 / s2^2 + 1)
double effective_uplink_snr(double p2_over_sigma2, double p1_over_sigma2, cd g_ap);

RatePair rate_pair(const StarProfile& p, const CompositeChannels& ch, const LinkBudget& b);
double weighted_sum(const RatePair& r, const Weights& w);
bool qos_satisfied(const RatePair& r, const QosThresholds& th, double slack = 1e-6);

struct ConstraintReport {
  double sum_power = 0.0;   // max_m | |s_r|^2 + |s_t|^2 - 1 |
  double amplitude = 0.0;   // max amount any |s| leaves [0, 1]
  double binariness = 0.0;  // max (|s| - |s|^2); only meaningful for MS
  Protocol protocol = Protocol::kEnergySplitting;

  double max_violation() const;
};

ConstraintReport profile_constraint_report(const StarProfile& p, Protocol protocol);

// Reduce an angle to [0, 2 pi).
double wrap_phase(double angle);

// psi_f - (psi_v + psi_gd), reduced to [0, 2 pi).
double co_phase_angle(double psi_f, double psi_v, double psi_gd);

struct CoPhasing {
  RVec phases;
  bool direct_path_absent = false;
};

// Reflection phases that co-phase every cascaded path with the direct link.
// The phase of each coefficient is read with Arg(.). With f == 0 the paths are
// aligned to a zero reference phase and direct_path_absent is set.
CoPhasing remark1_phases(cd f, const CVec& v, const CVec& g_d);

// Same phases from the cascaded vector h = v .* g_d.
CoPhasing remark1_phases(cd f, const CVec& h);

}  // namespace starfd::rate
