#include "starfd/sca_es.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace starfd::sca {

using convex::RealQuadForm;

namespace {

constexpr double kInvLn2 = 1.0 / std::numbers::ln2;

std::vector<Index> iota(Index begin, Index count) {
  std::vector<Index> v(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) v[i] = begin + i;
  return v;
}

}  // namespace

void ScaSettings::validate() const {
  if (!(eps1 > 0.0)) throw std::domain_error("eps1 must be positive");
  if (i_max < 1) throw std::domain_error("i_max must be at least 1");
  weights.validate();
  qos.validate();
}

std::string_view to_string(ScaStatus s) {
  switch (s) {
    case ScaStatus::kConverged: return "converged";
    case ScaStatus::kMaxIter: return "max_iter";
    case ScaStatus::kInfeasible: return "infeasible";
  }
  return "?";
}

BoundPoint bound_point(const StarProfile& p, const CompositeChannels& ch, const LinkBudget& b) {
  if (p.s_r.size() != ch.h.size() || p.s_t.size() != ch.q.size()) {
    throw std::invalid_argument("bound_point: dimension mismatch");
  }
  BoundPoint pt;
  pt.psi = std::sqrt(b.gamma1_bar) * (ch.f + cd(p.s_r.transpose() * ch.h));
  pt.kappa = b.gamma2p_bar * std::norm(cd(p.s_t.transpose() * ch.q)) + 1.0;
  pt.chi = std::sqrt(b.gamma2_bar) * cd(p.s_t.transpose() * ch.z);
  return pt;
}

double lb_rate1(const StarProfile& p, const BoundPoint& pt, const CompositeChannels& ch,
                const LinkBudget& b, BoundVariant variant) {
  const double psi2 = std::norm(pt.psi);
  const double k = pt.kappa;
  const double c = psi2 / (k * (k + psi2));
  const cd signal = ch.f + cd(p.s_r.transpose() * ch.h);
  const double lin = 2.0 * std::sqrt(b.gamma1_bar) * (std::conj(pt.psi) * signal).real() / k;
  double coupled = b.gamma1_bar * std::norm(signal);
  if (variant == BoundVariant::kTangent) {
    coupled += b.gamma2p_bar * std::norm(cd(p.s_t.transpose() * ch.q)) + 1.0;
  } else {
    coupled += b.gamma2_bar * std::norm(cd(p.s_t.transpose() * ch.z));
  }
  return kInvLn2 * (std::log1p(psi2 / k) + lin - c * coupled - psi2 / k);
}

double lb_rate2(const StarProfile& p, const BoundPoint& pt, const CompositeChannels& ch,
                const LinkBudget& b, BoundVariant variant) {
  const double chi2 = std::norm(pt.chi);
  const double sg2 = std::sqrt(b.gamma2_bar);
  const cd link = cd(p.s_t.transpose() * ch.z);
  const double cross = variant == BoundVariant::kTangent
                           ? 2.0 * (std::conj(pt.chi) * (sg2 * link - pt.chi)).real()
                           : 2.0 * sg2 * (std::conj(pt.chi) * (link - pt.chi)).real();
  const double d = chi2 / (1.0 + chi2);
  return kInvLn2 * (std::log1p(chi2) + cross - d * (b.gamma2_bar * std::norm(link) - chi2));
}

RVec embed_profile(const StarProfile& p) {
  const Index m = p.s_r.size();
  RVec x(4 * m);
  x << p.s_r.real(), p.s_r.imag(), p.s_t.real(), p.s_t.imag();
  return x;
}

StarProfile extract_profile(const RVec& x, Index m) {
  StarProfile p;
  p.s_r.resize(m);
  p.s_t.resize(m);
  for (Index i = 0; i < m; ++i) {
    p.s_r[i] = cd(x[i], x[m + i]);
    p.s_t[i] = cd(x[2 * m + i], x[3 * m + i]);
  }
  return p;
}

RealQuadForm lb_rate1_form(const BoundPoint& pt, const CompositeChannels& ch, const LinkBudget& b,
                           BoundVariant variant) {
  const Index m = ch.h.size();
  const double psi2 = std::norm(pt.psi);
  const double k = pt.kappa;
  const double c = psi2 / (k * (k + psi2));
  const auto r_idx = iota(0, 2 * m);
  const auto t_idx = iota(2 * m, 2 * m);

  RealQuadForm down = convex::embed_complex_linear(
      ch.h, ch.f, kInvLn2 * 2.0 * std::sqrt(b.gamma1_bar) * std::conj(pt.psi) / k);
  down += convex::embed_complex_quadratic(ch.h, ch.f, -kInvLn2 * c * b.gamma1_bar);
  RealQuadForm form = convex::place(down, 4 * m, r_idx);
  if (variant == BoundVariant::kTangent) {
    form += convex::place(convex::embed_complex_quadratic(ch.q, 0.0, -kInvLn2 * c * b.gamma2p_bar),
                          4 * m, t_idx);
    form.constant += kInvLn2 * (std::log1p(psi2 / k) - psi2 / k - c);
  } else {
    form += convex::place(convex::embed_complex_quadratic(ch.z, 0.0, -kInvLn2 * c * b.gamma2_bar),
                          4 * m, t_idx);
    form.constant += kInvLn2 * (std::log1p(psi2 / k) - psi2 / k);
  }
  return form;
}

RealQuadForm lb_rate2_form(const BoundPoint& pt, const CompositeChannels& ch, const LinkBudget& b,
                           BoundVariant variant) {
  const Index m = ch.z.size();
  const double chi2 = std::norm(pt.chi);
  const double sg2 = std::sqrt(b.gamma2_bar);
  const double d = chi2 / (1.0 + chi2);
  RealQuadForm up =
      convex::embed_complex_linear(ch.z, 0.0, kInvLn2 * 2.0 * sg2 * std::conj(pt.chi));
  up += convex::embed_complex_quadratic(ch.z, 0.0, -kInvLn2 * d * b.gamma2_bar);
  const double cross_const = variant == BoundVariant::kTangent ? -2.0 * chi2 : -2.0 * sg2 * chi2;
  up.constant += kInvLn2 * (std::log1p(chi2) + cross_const + d * chi2);
  const auto t_idx = iota(2 * m, 2 * m);
  RealQuadForm form = convex::place(up, 4 * m, t_idx);
  return form;
}

namespace {

RealQuadForm element_ball(Index m, Index elem, Index dim) {
  RealQuadForm f = RealQuadForm::zero(dim);
  std::vector<Eigen::Triplet<double>> t;
  for (Index off : {Index{0}, m, 2 * m, 3 * m}) t.emplace_back(off + elem, off + elem, 1.0);
  f.quad.setFromTriplets(t.begin(), t.end());
  f.constant = -1.0;
  return f;
}

RealQuadForm lift(const RealQuadForm& profile_form, Index dim) {
  return convex::place(profile_form, dim, iota(0, profile_form.dim));
}

}  // namespace

convex::ConvexProgram assemble_p2(const BoundPoint& pt, const CompositeChannels& ch,
                                  const LinkBudget& b, const ScaSettings& settings) {
  const Index m = ch.h.size();
  const Index n = 4 * m + 2;
  const Index aux1 = 4 * m;
  const Index aux2 = 4 * m + 1;
  const RealQuadForm lb1 = lift(lb_rate1_form(pt, ch, b, settings.bounds), n);
  const RealQuadForm lb2 = lift(lb_rate2_form(pt, ch, b, settings.bounds), n);

  convex::ConvexProgram prog;
  prog.dim = n;
  prog.objective = RealQuadForm::zero(n);
  prog.objective.lin[aux1] = settings.weights.w1;
  prog.objective.lin[aux2] = settings.weights.w2;

  RealQuadForm cap1 = -1.0 * lb1;
  cap1.lin[aux1] += 1.0;
  RealQuadForm cap2 = -1.0 * lb2;
  cap2.lin[aux2] += 1.0;
  prog.ineq.push_back(std::move(cap1));
  prog.ineq.push_back(std::move(cap2));
  for (Index e = 0; e < m; ++e) prog.ineq.push_back(element_ball(m, e, n));
  RealQuadForm qos1 = -1.0 * lb1;
  qos1.constant += settings.qos.r1_th;
  RealQuadForm qos2 = -1.0 * lb2;
  qos2.constant += settings.qos.r2_th;
  prog.ineq.push_back(std::move(qos1));
  prog.ineq.push_back(std::move(qos2));

  convex::Box box;
  box.lower = RVec::Constant(n, -std::numeric_limits<double>::infinity());
  box.upper = RVec::Constant(n, std::numeric_limits<double>::infinity());
  box.lower[aux1] = settings.qos.r1_th - 1.0;
  box.lower[aux2] = settings.qos.r2_th - 1.0;
  prog.box = box;
  prog.validate();
  return prog;
}

namespace detail {

bool degenerate(const CompositeChannels& ch) {
  return ch.h.isZero(0.0) && ch.z.isZero(0.0);
}

StarProfile remark1_reinit(const StarProfile& init, const CompositeChannels& ch) {
  const rate::CoPhasing cp = rate::remark1_phases(ch.f, ch.h);
  StarProfile p = init;
  const double amp = std::sqrt(0.5);
  for (Index i = 0; i < p.size(); ++i) {
    p.s_r[i] = std::polar(amp, cp.phases[i]);
    p.s_t[i] = std::polar(amp, std::arg(init.s_t[i]));
  }
  return p;
}

bool qos_unreachable(const CompositeChannels& ch, const LinkBudget& b, const QosThresholds& qos) {
  // Interference-free, fully co-phased SINRs bound every profile from above.
  const double a1 = std::abs(ch.f) + ch.h.cwiseAbs().sum();
  const double a2 = ch.z.cwiseAbs().sum();
  const double r1 = std::log2(1.0 + b.gamma1_bar * a1 * a1);
  const double r2 = std::log2(1.0 + b.gamma2_bar * a2 * a2);
  return r1 < qos.r1_th * (1.0 - 1e-12) || r2 < qos.r2_th * (1.0 - 1e-12);
}

std::optional<StarProfile> feasible_start(const StarProfile& init, const CompositeChannels& ch,
                                          const LinkBudget& b, const ScaSettings& settings) {
  const Index m = init.size();
  if (qos_unreachable(ch, b, settings.qos)) return std::nullopt;
  const BoundPoint pt = bound_point(init, ch, b);
  const RealQuadForm lb1 = lb_rate1_form(pt, ch, b, settings.bounds);
  const RealQuadForm lb2 = lb_rate2_form(pt, ch, b, settings.bounds);

  std::vector<RealQuadForm> cons;
  for (int k = 0; k < 2; ++k) {
    RealQuadForm q = -1.0 * (k == 0 ? lb1 : lb2);
    q.constant += k == 0 ? settings.qos.r1_th : settings.qos.r2_th;
    if (q.is_constant()) {
      if (q.constant > settings.solver.feasibility_tol) return std::nullopt;
      continue;
    }
    cons.push_back(std::move(q));
  }
  for (Index e = 0; e < m; ++e) cons.push_back(element_ball(m, e, 4 * m));

  const RVec x0 = embed_profile(init) * (1.0 - 1e-6);
  bool strict = true;
  for (const auto& c : cons) strict = strict && c.value(x0) < 0.0;
  if (strict) return extract_profile(x0, m);

  const convex::Phase1Result p1 =
      convex::phase1_feasible_point(cons, {}, std::nullopt, 4 * m, settings.solver, &x0, true);
  if (!(p1.max_slack > 0.0)) return std::nullopt;
  return extract_profile(p1.x, m);
}

}  // namespace detail

ScaReport run_algorithm1(const CompositeChannels& ch, const LinkBudget& b,
                         const ScaSettings& settings, const StarProfile& init,
                         const ProfileHook& hook) {
  settings.validate();
  b.validate();
  const Index m = ch.h.size();
  if (init.size() != m) throw std::invalid_argument("run_algorithm1: init has wrong size");
  auto objective = [&](const StarProfile& p) {
    return rate::weighted_sum(rate::rate_pair(p, ch, b), settings.weights);
  };

  ScaReport rep;
  if (detail::degenerate(ch)) {
    rep.final_profile = init;
    rep.status = ScaStatus::kConverged;
    rep.rates = rate::rate_pair(init, ch, b);
    rep.weighted_sum_rate = rate::weighted_sum(rep.rates, settings.weights);
    rep.objective_trajectory.push_back(rep.weighted_sum_rate);
    return rep;
  }

  std::optional<StarProfile> start = detail::feasible_start(init, ch, b, settings);
  if (!start) start = detail::feasible_start(detail::remark1_reinit(init, ch), ch, b, settings);
  if (!start) {
    rep.final_profile = init;
    rep.status = ScaStatus::kInfeasible;
    return rep;
  }

  StarProfile current = *start;
  double obj = objective(current);
  rep.objective_trajectory.push_back(obj);
  rep.status = ScaStatus::kMaxIter;
  const Index n = 4 * m + 2;
  for (int it = 0; it < settings.i_max; ++it) {
    const BoundPoint pt = bound_point(current, ch, b);
    const convex::ConvexProgram prog = assemble_p2(pt, ch, b, settings);
    RVec warm(n);
    warm.head(4 * m) = embed_profile(current);
    warm[4 * m] = lb_rate1(current, pt, ch, b, settings.bounds) - 0.5;
    warm[4 * m + 1] = lb_rate2(current, pt, ch, b, settings.bounds) - 0.5;
    const convex::Solution sol = convex::solve(prog, settings.solver, warm);
    ++rep.iterations;
    if (sol.status != convex::SolveStatus::kOptimal) {
      rep.status = ScaStatus::kMaxIter;
      break;
    }
    StarProfile cand = extract_profile(sol.x, m);
    if (hook) hook(cand);
    const double next = objective(cand);
    if (!(next >= obj)) {
      // No ascent left beyond solver accuracy.
      rep.status = ScaStatus::kConverged;
      break;
    }
    const double rel = (next - obj) / std::max(std::abs(obj), 1e-12);
    current = std::move(cand);
    obj = next;
    rep.objective_trajectory.push_back(obj);
    if (rel < settings.eps1) {
      rep.status = ScaStatus::kConverged;
      break;
    }
  }
  rep.final_profile = current;
  rep.rates = rate::rate_pair(current, ch, b);
  rep.weighted_sum_rate = rate::weighted_sum(rep.rates, settings.weights);
  return rep;
}

StarProfile initialize_es(const CompositeChannels& ch, InitMode mode, RngStream& rng) {
  const Index m = ch.h.size();
  StarProfile p = StarProfile::zeros(m);
  if (mode == InitMode::kRemark1) {
    const rate::CoPhasing cp = rate::remark1_phases(ch.f, ch.h);
    const double amp = std::sqrt(0.5);
    for (Index i = 0; i < m; ++i) {
      p.s_r[i] = std::polar(amp, cp.phases[i]);
      p.s_t[i] = std::polar(amp, rng.uniform_phase());
    }
  } else {
    for (Index i = 0; i < m; ++i) {
      const double beta_r = rng.uniform01();
      const double th_r = rng.uniform_phase();
      const double th_t = rng.uniform_phase();
      p.s_r[i] = std::polar(std::sqrt(beta_r), th_r);
      p.s_t[i] = std::polar(std::sqrt(1.0 - beta_r), th_t);
    }
  }
  return p;
}

}  // namespace starfd::sca
