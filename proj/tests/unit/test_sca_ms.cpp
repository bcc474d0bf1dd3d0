#include <doctest.h>

#include "starfd/sca_ms.hpp"
#include "support.hpp"

using namespace starfd;
using namespace starfd::sca;

namespace {

ScaSettings settings_for(const LinkBudget& b) {
  ScaSettings s;
  s.qos = testing::qos_for(b);
  return s;
}

MsIterate iterate_of(const StarProfile& p, double mu) {
  MsIterate it{p, p.s_r.cwiseAbs(), p.s_t.cwiseAbs(), mu};
  return it;
}

}  // namespace

TEST_SUITE("sca_ms") {

TEST_CASE("penalty bound is a tangent majorant") {
  RngStream rng(51, {1});
  for (int k = 0; k < 1000; ++k) {
    const double di = rng.uniform01();
    const double d = rng.uniform01();
    CHECK(penalty_bound(d, di) >= d - d * d - 1e-15);
    CHECK(penalty_bound(di, di) == doctest::Approx(di - di * di).epsilon(1e-14));
  }
  CHECK(penalty_bound(0.5, 0.5) == doctest::Approx(0.25));
  CHECK(penalty_bound(1.0, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("binariness") {
  StarProfile p = StarProfile::zeros(2);
  p.s_r[0] = 1.0;
  p.s_t[1] = cd(0.0, -1.0);
  CHECK(binariness(p) == doctest::Approx(0.0).epsilon(1e-15));
  p.s_r[1] = 0.5;
  CHECK(binariness(p) == doctest::Approx(0.25));
  StarProfile h = StarProfile::zeros(2);
  h.s_r.setConstant(std::sqrt(0.5));
  h.s_t.setConstant(std::sqrt(0.5));
  CHECK(binariness(h) == doctest::Approx(std::sqrt(0.5) - 0.5));
}

TEST_CASE("loose eps2 stops after one round from the half-split start") {
  RngStream rng(51, {8});
  const auto ch = testing::unit_gain(3, rng);
  const LinkBudget b = testing::budget_db(-10.0);
  PenaltySettings ps;
  ps.eps2 = 0.25;
  StarProfile h = StarProfile::zeros(3);
  h.s_r.setConstant(std::sqrt(0.5));
  h.s_t.setConstant(std::sqrt(0.5));
  const MsReport rep = run_algorithm2(ch, b, settings_for(b), ps, h);
  CHECK(rep.outer_rounds == 1);
}

TEST_CASE("penalized objective") {
  RngStream rng(51, {2});
  const auto ch = testing::unit_gain(3, rng);
  const LinkBudget b = testing::budget_db(0.0);
  StarProfile p = StarProfile::zeros(3);
  p.s_r.setConstant(1.0);
  const Weights w;
  const double wsr = rate::weighted_sum(rate::rate_pair(p, ch, b), w);
  CHECK(penalized_objective(iterate_of(p, 7.0), ch, b, w) == doctest::Approx(wsr));
  StarProfile h = StarProfile::zeros(3);
  h.s_r.setConstant(std::sqrt(0.5));
  h.s_t.setConstant(std::sqrt(0.5));
  const double wsr_h = rate::weighted_sum(rate::rate_pair(h, ch, b), w);
  const double pen = 6.0 * (std::sqrt(0.5) - 0.5);
  CHECK(penalized_objective(iterate_of(h, 2.0), ch, b, w) == doctest::Approx(wsr_h - 2.0 * pen));
}

TEST_CASE("penalized subproblem layout") {
  RngStream rng(51, {3});
  const auto ch = testing::unit_gain(3, rng);
  const LinkBudget b = testing::budget_db(-10.0);
  const StarProfile p = testing::random_profile(3, rng);
  const MsIterate it = iterate_of(p, 1.0);
  const convex::ConvexProgram prog = assemble_p4(bound_point(p, ch, b), it, ch, b, settings_for(b));
  CHECK(prog.dim == 6 * 3 + 2);
  CHECK(prog.ineq.size() == 2 + 2 + 3);
  CHECK(prog.cones.size() == 6);
  CHECK_NOTHROW(prog.validate());
}

TEST_CASE("binarize and mode assignment") {
  StarProfile p = StarProfile::zeros(3);
  p.s_r << std::polar(0.9, 0.3), std::polar(0.2, 1.0), std::polar(0.5, 2.0);
  p.s_t << std::polar(0.1, -0.3), std::polar(0.8, 0.7), std::polar(0.5, 1.5);
  const MsIterate it = iterate_of(p, 1.0);
  const auto modes = mode_assignment(it);
  CHECK(modes[0] == Mode::kReflect);
  CHECK(modes[1] == Mode::kTransmit);
  CHECK(modes[2] == Mode::kReflect);
  const StarProfile q = binarize(it);
  CHECK(std::abs(q.s_r[0]) == doctest::Approx(1.0));
  CHECK(std::arg(q.s_r[0]) == doctest::Approx(0.3));
  CHECK(q.s_t[0] == cd(0.0, 0.0));
  CHECK(std::abs(q.s_t[1]) == doctest::Approx(1.0));
  CHECK(std::arg(q.s_t[1]) == doctest::Approx(0.7));
  CHECK(q.s_r[1] == cd(0.0, 0.0));
  CHECK(binariness(q) <= 1e-15);
}

TEST_CASE("mode switching rounds are monotone and end binary") {
  RngStream rng(51, {4});
  for (PenaltyForm form : {PenaltyForm::kDelta, PenaltyForm::kAmplitude}) {
    for (int k = 0; k < 4; ++k) {
      const Index m = 4 + 2 * k;
      const auto ch = testing::unit_gain(m, rng);
      const LinkBudget b = testing::budget_db(-10.0);
      const ScaSettings s = settings_for(b);
      PenaltySettings ps;
      ps.form = form;
      RngStream init_rng(51, {100, static_cast<std::uint64_t>(k)});
      const MsReport rep =
          run_algorithm2(ch, b, s, ps, initialize_es(ch, InitMode::kRandom, init_rng));
      REQUIRE(rep.status != ScaStatus::kInfeasible);
      // non-binary amplitudes can survive the relaxation; rounding then may break qos
      if (rep.status == ScaStatus::kConverged) {
        CHECK(binariness(rep.pre_binarize_profile) <= ps.eps2);
      }
      if (!rep.qos_warning) {
        CHECK(binariness(rep.final_profile) <= 1e-12);
        CHECK(rate::qos_satisfied(rep.rates, s.qos, 1e-9));
      }
      CHECK(rep.mode_assignment.size() == static_cast<std::size_t>(m));
      CHECK(rep.rounds.size() <= static_cast<std::size_t>(ps.max_outer));
      for (const MsRound& r : rep.rounds) {
        for (std::size_t i = 1; i < r.penalized_trajectory.size(); ++i) {
          CHECK(r.penalized_trajectory[i] >= r.penalized_trajectory[i - 1] - 1e-8);
        }
      }
      for (std::size_t i = 1; i < rep.rounds.size(); ++i) {
        CHECK(rep.rounds[i].mu == doctest::Approx(10.0 * rep.rounds[i - 1].mu));
      }
      CHECK(rep.weighted_sum_rate ==
            doctest::Approx(rate::weighted_sum(rate::rate_pair(rep.final_profile, ch, b), s.weights)));
    }
  }
}

TEST_CASE("amplitude penalty layout and value") {
  RngStream rng(51, {7});
  const auto ch = testing::unit_gain(3, rng);
  const LinkBudget b = testing::budget_db(-10.0);
  const StarProfile p = testing::random_profile(3, rng);
  MsIterate it = iterate_of(p, 2.0);
  it.form = PenaltyForm::kAmplitude;
  const convex::ConvexProgram prog = assemble_p4(bound_point(p, ch, b), it, ch, b, settings_for(b));
  CHECK(prog.dim == 6 * 3 + 2);
  CHECK(prog.cones.size() == 6);
  CHECK_NOTHROW(prog.validate());
  const double wsr = rate::weighted_sum(rate::rate_pair(p, ch, b), Weights{});
  // tight bounds: both forms agree
  double tight = 0.0;
  for (Index i = 0; i < 3; ++i) {
    for (double a : {std::abs(p.s_r[i]), std::abs(p.s_t[i])}) tight += a - a * a;
  }
  CHECK(penalized_objective(it, ch, b, {}) == doctest::Approx(wsr - 2.0 * tight));
  // loose bounds: only the amplitude form charges the slack
  it.delta_r.setConstant(1.0);
  it.delta_t.setConstant(1.0);
  const double loose = 6.0 - p.s_r.squaredNorm() - p.s_t.squaredNorm();
  CHECK(penalized_objective(it, ch, b, {}) == doctest::Approx(wsr - 2.0 * loose));
  it.form = PenaltyForm::kDelta;
  CHECK(penalized_objective(it, ch, b, {}) == doctest::Approx(wsr));
}

TEST_CASE("mode switching on a zero channel") {
  CompositeChannels ch{CVec::Zero(2), CVec::Zero(2), CVec::Zero(2), 0.0};
  RngStream rng(51, {5});
  const MsReport rep =
      run_algorithm2(ch, testing::budget_db(0.0), {}, {}, testing::random_profile(2, rng));
  CHECK(rep.status == ScaStatus::kConverged);
  CHECK(rep.weighted_sum_rate == 0.0);
}

TEST_CASE("mode switching reports infeasible qos") {
  RngStream rng(51, {6});
  const auto ch = testing::unit_gain(3, rng);
  const LinkBudget b = testing::budget_db(-10.0);
  ScaSettings s = settings_for(b);
  s.qos = {20.0, 20.0};
  const MsReport rep = run_algorithm2(ch, b, s, {}, testing::random_profile(3, rng));
  CHECK(rep.status == ScaStatus::kInfeasible);
  CHECK(rep.weighted_sum_rate == 0.0);
}

TEST_CASE("penalty settings validation") {
  PenaltySettings p;
  CHECK_NOTHROW(p.validate());
  p.omega = 1.0;
  CHECK_THROWS(p.validate());
  p = {};
  p.mu0 = 0.0;
  CHECK_THROWS(p.validate());
  p = {};
  p.eps2 = -1.0;
  CHECK_THROWS(p.validate());
}

}  // TEST_SUITE
