#include "starfd/sca_ms.hpp"

#include <cmath>
#include <stdexcept>

namespace starfd::sca {

using convex::RealQuadForm;

void PenaltySettings::validate() const {
  if (!(mu0 > 0.0)) throw std::domain_error("mu0 must be positive");
  if (!(omega > 1.0)) throw std::domain_error("omega must exceed 1");
  if (!(eps2 > 0.0)) throw std::domain_error("eps2 must be positive");
  if (max_outer < 1) throw std::domain_error("max_outer must be at least 1");
}

double penalty_bound(double delta, double delta_i) {
  return delta_i * delta_i + (1.0 - 2.0 * delta_i) * delta;
}

double binariness(const StarProfile& p) {
  double worst = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    for (cd s : {p.s_r[i], p.s_t[i]}) {
      const double a = std::abs(s);
      worst = std::max(worst, a - a * a);
    }
  }
  return worst;
}

namespace {

std::vector<Index> iota(Index begin, Index count) {
  std::vector<Index> v(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) v[i] = begin + i;
  return v;
}

double penalty_sum(const MsIterate& it) {
  if (it.form == PenaltyForm::kAmplitude) {
    return it.delta_r.sum() + it.delta_t.sum() - it.profile.s_r.squaredNorm() -
           it.profile.s_t.squaredNorm();
  }
  return (it.delta_r.array() - it.delta_r.array().square()).sum() +
         (it.delta_t.array() - it.delta_t.array().square()).sum();
}

MsIterate extract_iterate(const RVec& x, Index m, double mu, PenaltyForm form) {
  MsIterate it;
  it.form = form;
  it.profile = extract_profile(x.head(4 * m), m);
  it.delta_r = x.segment(4 * m, m);
  it.delta_t = x.segment(5 * m, m);
  it.mu = mu;
  return it;
}

RVec warm_point(const MsIterate& it, const BoundPoint& pt, const CompositeChannels& ch,
                const LinkBudget& b, BoundVariant variant) {
  const Index m = it.profile.size();
  RVec x(6 * m + 2);
  x.head(4 * m) = embed_profile(it.profile);
  x.segment(4 * m, m) = it.delta_r;
  x.segment(5 * m, m) = it.delta_t;
  x[6 * m] = lb_rate1(it.profile, pt, ch, b, variant) - 0.5;
  x[6 * m + 1] = lb_rate2(it.profile, pt, ch, b, variant) - 0.5;
  return x;
}

// Amplitude bounds just above |s| that keep the delta balls strict.
MsIterate lift_to_deltas(const StarProfile& p, double mu, PenaltyForm form) {
  const Index m = p.size();
  MsIterate it{p, RVec(m), RVec(m), mu, form};
  for (Index i = 0; i < m; ++i) {
    const double a = std::abs(p.s_r[i]);
    const double c = std::abs(p.s_t[i]);
    const double slack = std::max(0.0, 1.0 - a * a - c * c);
    const double eta = slack / (4.0 * (a + c + 1.0));
    it.delta_r[i] = a + eta;
    it.delta_t[i] = c + eta;
  }
  return it;
}

}  // namespace

double penalized_objective(const MsIterate& it, const CompositeChannels& ch, const LinkBudget& b,
                           const Weights& w) {
  return rate::weighted_sum(rate::rate_pair(it.profile, ch, b), w) - it.mu * penalty_sum(it);
}

convex::ConvexProgram assemble_p4(const BoundPoint& pt, const MsIterate& it,
                                  const CompositeChannels& ch, const LinkBudget& b,
                                  const ScaSettings& settings) {
  const Index m = ch.h.size();
  if (it.profile.size() != m || it.delta_r.size() != m || it.delta_t.size() != m) {
    throw std::invalid_argument("assemble_p4: iterate dimension mismatch");
  }
  const Index n = 6 * m + 2;
  const Index aux1 = 6 * m;
  const Index aux2 = 6 * m + 1;
  const auto prof_idx = iota(0, 4 * m);
  const RealQuadForm lb1 = convex::place(lb_rate1_form(pt, ch, b, settings.bounds), n, prof_idx);
  const RealQuadForm lb2 = convex::place(lb_rate2_form(pt, ch, b, settings.bounds), n, prof_idx);

  convex::ConvexProgram prog;
  prog.dim = n;
  prog.objective = RealQuadForm::zero(n);
  prog.objective.lin[aux1] = settings.weights.w1;
  prog.objective.lin[aux2] = settings.weights.w2;
  if (it.form == PenaltyForm::kAmplitude) {
    // -mu * (delta - 2 Re(s_i^* s) + |s_i|^2), the tangent of -mu (delta - |s|^2)
    const RVec si = embed_profile(it.profile);
    prog.objective.lin.head(4 * m) = 2.0 * it.mu * si;
    prog.objective.lin.segment(4 * m, 2 * m).setConstant(-it.mu);
    prog.objective.constant = -it.mu * si.squaredNorm();
  } else {
    for (Index i = 0; i < m; ++i) {
      const double dr = it.delta_r[i];
      const double dt = it.delta_t[i];
      prog.objective.lin[4 * m + i] = -it.mu * (1.0 - 2.0 * dr);
      prog.objective.lin[5 * m + i] = -it.mu * (1.0 - 2.0 * dt);
      prog.objective.constant -= it.mu * (dr * dr + dt * dt);
    }
  }

  RealQuadForm cap1 = -1.0 * lb1;
  cap1.lin[aux1] += 1.0;
  RealQuadForm cap2 = -1.0 * lb2;
  cap2.lin[aux2] += 1.0;
  prog.ineq.push_back(std::move(cap1));
  prog.ineq.push_back(std::move(cap2));
  RealQuadForm qos1 = -1.0 * lb1;
  qos1.constant += settings.qos.r1_th;
  RealQuadForm qos2 = -1.0 * lb2;
  qos2.constant += settings.qos.r2_th;
  prog.ineq.push_back(std::move(qos1));
  prog.ineq.push_back(std::move(qos2));

  for (Index e = 0; e < m; ++e) {
    RealQuadForm ball = RealQuadForm::zero(n);
    std::vector<Eigen::Triplet<double>> t;
    t.emplace_back(4 * m + e, 4 * m + e, 1.0);
    t.emplace_back(5 * m + e, 5 * m + e, 1.0);
    ball.quad.setFromTriplets(t.begin(), t.end());
    ball.constant = -1.0;
    prog.ineq.push_back(std::move(ball));
  }

  Eigen::MatrixXd p(2, 3);
  p << 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
  RVec c(3);
  c << 0.0, 0.0, 1.0;
  for (int mode = 0; mode < 2; ++mode) {
    const Index re0 = mode == 0 ? 0 : 2 * m;
    const Index d0 = mode == 0 ? 4 * m : 5 * m;
    for (Index e = 0; e < m; ++e) {
      convex::SecondOrderCone cone;
      cone.support = {re0 + e, re0 + m + e, d0 + e};
      cone.p_mat = p;
      cone.p_off = RVec::Zero(2);
      cone.c = c;
      prog.cones.push_back(std::move(cone));
    }
  }

  convex::Box box;
  box.lower = RVec::Constant(n, -std::numeric_limits<double>::infinity());
  box.upper = RVec::Constant(n, std::numeric_limits<double>::infinity());
  box.lower[aux1] = settings.qos.r1_th - 1.0;
  box.lower[aux2] = settings.qos.r2_th - 1.0;
  prog.box = box;
  prog.validate();
  return prog;
}

InnerResult run_inner(const MsIterate& start, const CompositeChannels& ch, const LinkBudget& b,
                      const ScaSettings& settings) {
  const Index m = start.profile.size();
  InnerResult res;
  res.iterate = start;
  res.round.mu = start.mu;
  double f = penalized_objective(start, ch, b, settings.weights);
  res.round.penalized_trajectory.push_back(f);
  res.round.wsr_trajectory.push_back(
      rate::weighted_sum(rate::rate_pair(start.profile, ch, b), settings.weights));

  for (int k = 0; k < settings.i_max; ++k) {
    const MsIterate& cur = res.iterate;
    const BoundPoint pt = bound_point(cur.profile, ch, b);
    const convex::ConvexProgram prog = assemble_p4(pt, cur, ch, b, settings);
    const convex::Solution sol =
        convex::solve(prog, settings.solver, warm_point(cur, pt, ch, b, settings.bounds));
    ++res.round.inner_iterations;
    if (sol.status != convex::SolveStatus::kOptimal) {
      res.solver_failed = true;
      break;
    }
    MsIterate cand = extract_iterate(sol.x, m, cur.mu, cur.form);
    const double next = penalized_objective(cand, ch, b, settings.weights);
    if (!(next >= f)) break;
    const double rel = (next - f) / std::max(std::abs(f), 1e-12);
    res.iterate = std::move(cand);
    f = next;
    res.round.penalized_trajectory.push_back(f);
    res.round.wsr_trajectory.push_back(
        rate::weighted_sum(rate::rate_pair(res.iterate.profile, ch, b), settings.weights));
    if (rel < settings.eps1) break;
  }
  res.round.binariness = binariness(res.iterate.profile);
  return res;
}

StarProfile binarize(const MsIterate& it) {
  const Index m = it.profile.size();
  StarProfile p = StarProfile::zeros(m);
  const auto modes = mode_assignment(it);
  for (Index i = 0; i < m; ++i) {
    if (modes[i] == Mode::kReflect) {
      p.s_r[i] = std::polar(1.0, std::arg(it.profile.s_r[i]));
    } else {
      p.s_t[i] = std::polar(1.0, std::arg(it.profile.s_t[i]));
    }
  }
  return p;
}

std::vector<Mode> mode_assignment(const MsIterate& it) {
  std::vector<Mode> modes(static_cast<std::size_t>(it.profile.size()));
  for (Index i = 0; i < it.profile.size(); ++i) {
    modes[i] = it.delta_r[i] >= it.delta_t[i] ? Mode::kReflect : Mode::kTransmit;
  }
  return modes;
}

MsReport run_algorithm2(const CompositeChannels& ch, const LinkBudget& b,
                        const ScaSettings& settings, const PenaltySettings& penalty,
                        const StarProfile& init) {
  settings.validate();
  penalty.validate();
  b.validate();
  const Index m = ch.h.size();
  if (init.size() != m) throw std::invalid_argument("run_algorithm2: init has wrong size");

  MsReport rep;
  MsIterate it;
  if (detail::degenerate(ch)) {
    it = lift_to_deltas(init, penalty.mu0, penalty.form);
    rep.status = ScaStatus::kConverged;
  } else {
    std::optional<StarProfile> start = detail::feasible_start(init, ch, b, settings);
    if (!start) start = detail::feasible_start(detail::remark1_reinit(init, ch), ch, b, settings);
    if (!start) {
      rep.final_profile = init;
      rep.pre_binarize_profile = init;
      rep.status = ScaStatus::kInfeasible;
      return rep;
    }
    it = lift_to_deltas(*start, penalty.mu0, penalty.form);
    rep.status = ScaStatus::kMaxIter;
    double mu = penalty.mu0;
    for (int outer = 0; outer < penalty.max_outer; ++outer) {
      it.mu = mu;
      InnerResult inner = run_inner(it, ch, b, settings);
      it = std::move(inner.iterate);
      ++rep.outer_rounds;
      rep.inner_iterations_total += inner.round.inner_iterations;
      rep.rounds.push_back(std::move(inner.round));
      if (inner.solver_failed) break;
      if (binariness(it.profile) <= penalty.eps2) {
        rep.status = ScaStatus::kConverged;
        break;
      }
      mu *= penalty.omega;
    }
  }

  rep.pre_binarize_profile = it.profile;
  rep.mode_assignment = mode_assignment(it);
  const StarProfile bin = binarize(it);
  const RatePair bin_rates = rate::rate_pair(bin, ch, b);
  if (rate::qos_satisfied(bin_rates, settings.qos)) {
    rep.final_profile = bin;
  } else {
    rep.final_profile = it.profile;
    rep.qos_warning = true;
  }
  rep.rates = rate::rate_pair(rep.final_profile, ch, b);
  rep.weighted_sum_rate = rate::weighted_sum(rep.rates, settings.weights);
  return rep;
}

}  // namespace starfd::sca
