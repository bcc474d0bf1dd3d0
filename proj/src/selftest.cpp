#include "starfd/selftest.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "starfd/baselines.hpp"
#include "starfd/sca_ms.hpp"

namespace starfd {

namespace {

channel::CompositeChannels unit_gain_channels(Index m, RngStream& rng) {
  channel::ScenarioGeometry g;
  g.zeta0_db = 0.0;
  g.nu = 0.0;
  return channel::compose(channel::sample_realization(g, {}, m, 0.0, rng.engine()));
}

rate::StarProfile random_profile(Index m, RngStream& rng) {
  rate::StarProfile p = rate::StarProfile::zeros(m);
  for (Index i = 0; i < m; ++i) {
    const double beta = rng.uniform01();
    p.s_r[i] = std::polar(std::sqrt(beta), rng.uniform_phase());
    p.s_t[i] = std::polar(std::sqrt(1.0 - beta), rng.uniform_phase());
  }
  return p;
}

rate::LinkBudget budget_db(double snr_db) {
  const double g = std::pow(10.0, snr_db / 10.0);
  return {g, g / 2.0, g / 2.0};
}

bool check_tangency() {
  RngStream rng(11, {1});
  for (int k = 0; k < 60; ++k) {
    const Index m = std::array<Index, 3>{1, 4, 8}[k % 3];
    const auto ch = unit_gain_channels(m, rng);
    const auto b = budget_db(-10.0 + 30.0 * rng.uniform01());
    const auto p = random_profile(m, rng);
    const auto pt = sca::bound_point(p, ch, b);
    const auto r = rate::rate_pair(p, ch, b);
    if (std::abs(sca::lb_rate1(p, pt, ch, b) - r.r1) > 1e-9) return false;
    if (std::abs(sca::lb_rate2(p, pt, ch, b) - r.r2) > 1e-9) return false;
  }
  return true;
}

bool check_lower_bound() {
  RngStream rng(11, {2});
  for (int k = 0; k < 1000; ++k) {
    const Index m = 1 + static_cast<Index>(k % 6);
    const auto ch = unit_gain_channels(m, rng);
    const auto b = budget_db(-10.0 + 30.0 * rng.uniform01());
    const auto expansion = random_profile(m, rng);
    const auto p = random_profile(m, rng);
    const auto pt = sca::bound_point(expansion, ch, b);
    const auto r = rate::rate_pair(p, ch, b);
    if (sca::lb_rate1(p, pt, ch, b) > r.r1 + 1e-9) return false;
    if (sca::lb_rate2(p, pt, ch, b) > r.r2 + 1e-9) return false;
  }
  return true;
}

bool check_penalty_bound() {
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const double d = i / 100.0;
      const double di = j / 100.0;
      if (d - d * d > sca::penalty_bound(d, di) + 1e-15) return false;
    }
  }
  return true;
}

bool check_hd_identity() {
  RngStream rng(11, {3});
  for (int k = 0; k < 100; ++k) {
    channel::ScenarioGeometry g;
    const auto real = channel::sample_realization(g, {}, 8, 0.0, rng.engine());
    const auto ch = channel::compose(real);
    const auto c = baselines::hd_closed_form(real);
    const double lhs = std::abs(ch.f + cd(c.s_r_h.transpose() * ch.h));
    const double rhs = std::abs(real.f) + (real.v.cwiseAbs().array() * real.g_d.cwiseAbs().array()).sum();
    if (std::abs(lhs - rhs) > 1e-10 * std::max(1.0, rhs)) return false;
    const double up = std::abs(cd(c.s_t_h.transpose() * ch.z));
    const double up_rhs = (real.g_u.cwiseAbs().array() * real.u.cwiseAbs().array()).sum();
    if (std::abs(up - up_rhs) > 1e-10 * std::max(1.0, up_rhs)) return false;
  }
  return true;
}

bool check_solver() {
  convex::ConvexProgram prog;
  prog.dim = 1;
  prog.objective = convex::RealQuadForm::zero(1);
  prog.objective.lin[0] = 2.0;
  std::vector<Eigen::Triplet<double>> t{{0, 0, -1.0}};
  prog.objective.quad.setFromTriplets(t.begin(), t.end());
  RVec a(1);
  a << 1.0;
  prog.ineq.push_back(convex::RealQuadForm::linear(a, -0.5));
  const auto sol = convex::solve(prog);
  return sol.status == convex::SolveStatus::kOptimal && std::abs(sol.objective_value - 0.75) < 1e-6;
}

bool check_monotone() {
  for (std::uint64_t k = 0; k < 3; ++k) {
    RngStream rng(11, {4, k});
    const auto ch = unit_gain_channels(8, rng);
    const auto b = budget_db(-10.0);
    sca::ScaSettings s;
    s.qos = {std::log2(1.0 + 0.1 * b.gamma1_bar), std::log2(1.0 + 0.1 * b.gamma2_bar)};
    const auto rep = sca::run_algorithm1(ch, b, s, sca::initialize_es(ch, sca::InitMode::kRandom, rng));
    if (rep.status == sca::ScaStatus::kInfeasible) return false;
    for (std::size_t i = 1; i < rep.objective_trajectory.size(); ++i) {
      if (rep.objective_trajectory[i] < rep.objective_trajectory[i - 1] - 1e-8) return false;
    }
    const auto ms = sca::run_algorithm2(ch, b, s, {}, sca::initialize_es(ch, sca::InitMode::kRandom, rng));
    for (const auto& round : ms.rounds) {
      for (std::size_t i = 1; i < round.penalized_trajectory.size(); ++i) {
        if (round.penalized_trajectory[i] < round.penalized_trajectory[i - 1] - 1e-8) return false;
      }
    }
  }
  return true;
}

bool check_p5() {
  RngStream rng(11, {5});
  for (int k = 0; k < 10; ++k) {
    const auto ch = unit_gain_channels(4, rng);
    const auto b = budget_db(10.0 * rng.uniform01());
    const rate::Weights w;
    const rate::QosThresholds qos{0.5, 0.5};
    const auto rep = baselines::solve_p5(ch, b, w, qos);
    baselines::HdAllocation alloc = rep.alloc;
    double grid = -1.0;
    for (int i = 0; i <= 2000; ++i) {
      const auto [l1, l2] = baselines::exact_split(i / 2000.0);
      alloc.lambda1 = l1;
      alloc.lambda2 = l2;
      const auto r = baselines::hd_rates(alloc, ch, b);
      if (rate::qos_satisfied(r, qos, 0.0)) grid = std::max(grid, rate::weighted_sum(r, w));
    }
    if (grid >= 0.0 && rep.weighted_sum_rate < grid - 1e-6) return false;
  }
  return true;
}

}  // namespace

bool run_selftest(std::ostream& out) {
  const std::pair<const char*, std::function<bool()>> checks[] = {
      {"bound tangency", check_tangency},
      {"bounds are global minorants", check_lower_bound},
      {"penalty bound majorizes", check_penalty_bound},
      {"co-phasing identities", check_hd_identity},
      {"solver boundary optimum", check_solver},
      {"sca monotone ascent", check_monotone},
      {"time split vs grid", check_p5},
  };
  bool all = true;
  for (const auto& [name, fn] : checks) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      out << "error in " << name << ": " << e.what() << "\n";
    }
    out << (ok ? "PASS " : "FAIL ") << name << "\n";
    all = all && ok;
  }
  return all;
}

}  // namespace starfd
