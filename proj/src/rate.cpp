#include "starfd/rate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace starfd::rate {

void LinkBudget::validate() const {
  if (!(gamma1_bar >= 0.0) || !(gamma2_bar >= 0.0) || !(gamma2p_bar >= 0.0)) {
    throw std::domain_error("link budget SNRs must be nonnegative");
  }
}

Weights Weights::from_w1(double w1) {
  Weights w{w1, 1.0 - w1};
  w.validate();
  return w;
}

void Weights::validate() const {
  if (!(w1 >= 0.0 && w1 <= 1.0 && w2 >= 0.0 && w2 <= 1.0) || w1 + w2 != 1.0) {
    throw std::domain_error("weights must lie in [0,1] and sum to one");
  }
}

void QosThresholds::validate() const {
  if (!(r1_th >= 0.0) || !(r2_th >= 0.0)) {
    throw std::domain_error("QoS thresholds must be nonnegative");
  }
}

namespace {

void check_dims(const StarProfile& p, const CompositeChannels& ch) {
  if (p.s_r.size() != ch.h.size() || p.s_t.size() != ch.q.size() ||
      p.s_t.size() != ch.z.size()) {
    throw std::invalid_argument("profile and channel dimensions differ");
  }
}

}  // namespace

double sinr_downlink(const StarProfile& p, const CompositeChannels& ch, const LinkBudget& b) {
  check_dims(p, ch);
  const cd signal = ch.f + p.s_r.cwiseProduct(ch.h).sum();
  const cd interference = p.s_t.cwiseProduct(ch.q).sum();
  return b.gamma1_bar * std::norm(signal) / (b.gamma2p_bar * std::norm(interference) + 1.0);
}

double sinr_uplink(const StarProfile& p, const CompositeChannels& ch, const LinkBudget& b) {
  check_dims(p, ch);
  const cd signal = p.s_t.cwiseProduct(ch.z).sum();
  return b.gamma2_bar * std::norm(signal);
}

double effective_uplink_snr(double p2_over_sigma2, double p1_over_sigma2, cd g_ap) {
  return p2_over_sigma2 / (p1_over_sigma2 * std::norm(g_ap) + 1.0);
}

RatePair rate_pair(const StarProfile& p, const CompositeChannels& ch, const LinkBudget& b) {
  return {std::log2(1.0 + sinr_downlink(p, ch, b)), std::log2(1.0 + sinr_uplink(p, ch, b))};
}

double weighted_sum(const RatePair& r, const Weights& w) { return w.w1 * r.r1 + w.w2 * r.r2; }

bool qos_satisfied(const RatePair& r, const QosThresholds& th, double slack) {
  return r.r1 >= th.r1_th - slack && r.r2 >= th.r2_th - slack;
}

double ConstraintReport::max_violation() const {
  if (protocol == Protocol::kModeSwitching) return std::max({sum_power, amplitude, binariness});
  return std::max(sum_power, amplitude);
}

ConstraintReport profile_constraint_report(const StarProfile& p, Protocol protocol) {
  if (p.s_r.size() != p.s_t.size()) throw std::invalid_argument("profile halves differ in size");
  ConstraintReport rep;
  rep.protocol = protocol;
  for (Index m = 0; m < p.size(); ++m) {
    const double ar = std::abs(p.s_r[m]);
    const double at = std::abs(p.s_t[m]);
    rep.sum_power = std::max(rep.sum_power, std::abs(ar * ar + at * at - 1.0));
    rep.amplitude = std::max({rep.amplitude, ar - 1.0, at - 1.0});
    rep.binariness = std::max({rep.binariness, ar - ar * ar, at - at * at});
  }
  return rep;
}

double wrap_phase(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double co_phase_angle(double psi_f, double psi_v, double psi_gd) {
  return wrap_phase(psi_f - (psi_v + psi_gd));
}

CoPhasing remark1_phases(cd f, const CVec& v, const CVec& g_d) {
  if (v.size() != g_d.size()) throw std::invalid_argument("v and g_d differ in size");
  CoPhasing out;
  out.direct_path_absent = (f == cd(0.0, 0.0));
  const double psi_f = out.direct_path_absent ? 0.0 : std::arg(f);
  out.phases.resize(v.size());
  for (Index m = 0; m < v.size(); ++m) {
    out.phases[m] = co_phase_angle(psi_f, std::arg(v[m]), std::arg(g_d[m]));
  }
  return out;
}

CoPhasing remark1_phases(cd f, const CVec& h) {
  return remark1_phases(f, h, CVec::Ones(h.size()));
}

}  // namespace starfd::rate
