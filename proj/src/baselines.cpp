#include "starfd/baselines.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace starfd::baselines {

PartitionSpec PartitionSpec::even(Index m) {
  if (m < 0) throw std::invalid_argument("partition: negative element count");
  return {(m + 1) / 2, m / 2};
}

void PartitionSpec::validate(Index m) const {
  if (m_r < 0 || m_t < 0 || m_r + m_t != m) {
    throw std::invalid_argument("partition must split the surface exactly");
  }
}

CompositeChannels mask_channels(const CompositeChannels& ch, const PartitionSpec& part) {
  part.validate(ch.size());
  CompositeChannels out = ch;
  out.h.tail(part.m_t).setZero();
  out.q.head(part.m_r).setZero();
  out.z.head(part.m_r).setZero();
  return out;
}

StarProfile conventional_closed_form(const CompositeChannels& ch, const PartitionSpec& part) {
  part.validate(ch.size());
  const rate::CoPhasing cp = rate::remark1_phases(ch.f, ch.h);
  StarProfile p = StarProfile::zeros(ch.size());
  for (Index i = 0; i < part.m_r; ++i) p.s_r[i] = std::polar(1.0, cp.phases[i]);
  for (Index i = part.m_r; i < ch.size(); ++i) p.s_t[i] = std::polar(1.0, -std::arg(ch.z[i]));
  return p;
}

namespace {

void apply_partition(StarProfile& p, const PartitionSpec& part, bool unit) {
  for (Index i = 0; i < p.size(); ++i) {
    cd& on = i < part.m_r ? p.s_r[i] : p.s_t[i];
    cd& off = i < part.m_r ? p.s_t[i] : p.s_r[i];
    off = 0.0;
    if (unit) on = std::polar(1.0, std::arg(on));
  }
}

}  // namespace

sca::ScaReport conventional_ris(const CompositeChannels& ch, const LinkBudget& b,
                                const sca::ScaSettings& settings, const PartitionSpec& part,
                                const ConvRisOptions& options,
                                const std::optional<StarProfile>& init) {
  part.validate(ch.size());
  StarProfile start = init ? *init : conventional_closed_form(ch, part);
  if (start.size() != ch.size()) throw std::invalid_argument("conventional_ris: init size");
  apply_partition(start, part, true);

  if (options.closed_form) {
    sca::ScaReport rep;
    rep.final_profile = start;
    rep.rates = rate::rate_pair(start, ch, b);
    rep.status = sca::ScaStatus::kConverged;
    if (!rate::qos_satisfied(rep.rates, settings.qos)) {
      rep.rates = {};
      rep.status = sca::ScaStatus::kInfeasible;
    }
    rep.weighted_sum_rate = rate::weighted_sum(rep.rates, settings.weights);
    rep.objective_trajectory.push_back(rep.weighted_sum_rate);
    return rep;
  }

  const CompositeChannels masked = mask_channels(ch, part);
  sca::ProfileHook hook;
  if (options.hard_projection) {
    hook = [&part](StarProfile& p) { apply_partition(p, part, true); };
  }
  sca::ScaReport rep = sca::run_algorithm1(masked, b, settings, start, hook);
  if (rep.status == sca::ScaStatus::kInfeasible) return rep;
  apply_partition(rep.final_profile, part, false);
  rep.rates = rate::rate_pair(rep.final_profile, ch, b);
  rep.weighted_sum_rate = rate::weighted_sum(rep.rates, settings.weights);
  return rep;
}

HdCoefficients hd_closed_form(const ChannelRealization& real) {
  const Index m = real.size();
  HdCoefficients c{CVec(m), CVec(m)};
  const double psi_f = std::arg(real.f);
  for (Index i = 0; i < m; ++i) {
    c.s_r_h[i] = std::polar(1.0, psi_f - (std::arg(real.v[i]) + std::arg(real.g_d[i])));
    c.s_t_h[i] = std::polar(1.0, -(std::arg(real.u[i]) + std::arg(real.g_u[i])));
  }
  return c;
}

HdCoefficients hd_closed_form(const CompositeChannels& ch) {
  const Index m = ch.size();
  HdCoefficients c{CVec(m), CVec(m)};
  const double psi_f = std::arg(ch.f);
  for (Index i = 0; i < m; ++i) {
    c.s_r_h[i] = std::polar(1.0, psi_f - std::arg(ch.h[i]));
    c.s_t_h[i] = std::polar(1.0, -std::arg(ch.z[i]));
  }
  return c;
}

double time_shared_rate(double lambda, double c) {
  if (!(lambda > 0.0)) return 0.0;
  return lambda * std::log2(1.0 + c / lambda);
}

std::pair<double, double> exact_split(double lambda1) {
  if (!(lambda1 >= 0.0 && lambda1 <= 1.0)) throw std::domain_error("time fraction outside [0,1]");
  if (lambda1 >= 0.5) return {lambda1, 1.0 - lambda1};
  const double l2 = 1.0 - lambda1;
  return {1.0 - l2, l2};
}

namespace {

struct HdGains {
  double c1 = 0.0;
  double c2 = 0.0;
};

HdGains hd_gains(const HdAllocation& alloc, const CompositeChannels& ch, const LinkBudget& b) {
  return {b.gamma1_bar * std::norm(ch.f + cd(alloc.s_r_h.transpose() * ch.h)),
          b.gamma2_bar * std::norm(cd(alloc.s_t_h.transpose() * ch.z))};
}

}  // namespace

RatePair hd_rates(const HdAllocation& alloc, const CompositeChannels& ch, const LinkBudget& b) {
  if (alloc.lambda1 < 0.0 || alloc.lambda2 < 0.0 || alloc.lambda1 + alloc.lambda2 != 1.0) {
    throw std::domain_error("time fractions must be non-negative and sum to one");
  }
  const HdGains g = hd_gains(alloc, ch, b);
  return {time_shared_rate(alloc.lambda1, g.c1), time_shared_rate(alloc.lambda2, g.c2)};
}

HdReport solve_p5(const CompositeChannels& ch, const LinkBudget& b, const Weights& w,
                  const QosThresholds& qos) {
  w.validate();
  qos.validate();
  HdReport rep;
  const HdCoefficients coef = hd_closed_form(ch);
  rep.alloc.s_r_h = coef.s_r_h;
  rep.alloc.s_t_h = coef.s_t_h;
  const HdGains g = hd_gains(rep.alloc, ch, b);
  auto r1 = [&](double l1) { return time_shared_rate(l1, g.c1); };
  auto r2 = [&](double l1) { return time_shared_rate(exact_split(l1).second, g.c2); };
  auto phi = [&](double l1) { return w.w1 * r1(l1) + w.w2 * r2(l1); };

  // r1 rises and r2 falls with lambda1, so the QoS set is an interval.
  const bool feasible = r1(1.0) >= qos.r1_th && r2(0.0) >= qos.r2_th;
  double lo = 0.0;
  double hi = 1.0;
  if (feasible && r1(0.0) < qos.r1_th) {
    double a = 0.0;
    double c = 1.0;
    for (int k = 0; k < 200 && c - a > 1e-15; ++k) {
      const double mid = 0.5 * (a + c);
      (r1(mid) >= qos.r1_th ? c : a) = mid;
    }
    lo = c;
  }
  if (feasible && r2(1.0) < qos.r2_th) {
    double a = 0.0;
    double c = 1.0;
    for (int k = 0; k < 200 && c - a > 1e-15; ++k) {
      const double mid = 0.5 * (a + c);
      (r2(mid) >= qos.r2_th ? a : c) = mid;
    }
    hi = a;
  }
  if (!feasible || lo > hi) {
    rep.status = sca::ScaStatus::kInfeasible;
    rep.rates = {};
    rep.weighted_sum_rate = 0.0;
    return rep;
  }

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double c = hi;
  double x1 = c - inv_phi * (c - a);
  double x2 = a + inv_phi * (c - a);
  double f1 = phi(x1);
  double f2 = phi(x2);
  for (int k = 0; k < 200 && c - a > 1e-12; ++k) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (c - a);
      f2 = phi(x2);
    } else {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - inv_phi * (c - a);
      f1 = phi(x1);
    }
  }
  double best = 0.5 * (a + c);
  for (double cand : {lo, hi}) {
    if (phi(cand) > phi(best)) best = cand;
  }
  const auto [l1, l2] = exact_split(best);
  rep.alloc.lambda1 = l1;
  rep.alloc.lambda2 = l2;
  rep.rates = hd_rates(rep.alloc, ch, b);
  rep.weighted_sum_rate = rate::weighted_sum(rep.rates, w);
  rep.status = sca::ScaStatus::kConverged;
  return rep;
}

}  // namespace starfd::baselines
