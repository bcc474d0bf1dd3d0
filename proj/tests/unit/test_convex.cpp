#include <doctest.h>

#include "oracles.hpp"

using namespace starfd;
using namespace starfd::convex;

namespace {

RealQuadForm ball(Index n, const RVec& center, double radius) {
  RealQuadForm f = RealQuadForm::zero(n);
  f.quad = Eigen::MatrixXd::Identity(n, n).sparseView();
  f.lin = -2.0 * center;
  f.constant = center.squaredNorm() - radius * radius;
  return f;
}

RVec vec(std::initializer_list<double> v) {
  RVec x(static_cast<Index>(v.size()));
  Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

void check_solution(const ConvexProgram& prog, const Solution& sol) {
  REQUIRE(sol.status == SolveStatus::kOptimal);
  CHECK(prog.max_violation(sol.x) <= 1e-8);
  for (std::size_t i = 1; i < sol.round_objectives.size(); ++i) {
    CHECK(sol.round_objectives[i] >= sol.round_objectives[i - 1] - 1e-9);
  }
}

}  // namespace

TEST_SUITE("convex") {

TEST_CASE("complex quadratic embedding examples") {
  const RealQuadForm c = embed_complex_quadratic(CVec::Zero(1), cd(2.0, 0.0), 1.0);
  CHECK(c.is_constant());
  CHECK(c.constant == doctest::Approx(4.0));
  const RealQuadForm f = embed_complex_quadratic(CVec::Ones(1), 0.0, 1.0);
  CHECK(f.value(vec({1.0, 1.0})) == doctest::Approx(2.0));
}

TEST_CASE("embeddings match complex evaluation") {
  RngStream rng(31, {1});
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const Index m = 1 + k % 4;
    const CVec a = testing::random_cvec(m, rng);
    const cd d = testing::random_cd(rng);
    const cd w = testing::random_cd(rng);
    const double s = rng.uniform01() * 4.0 - 2.0;
    const CVec x = testing::random_cvec(m, rng);
    RVec xr(2 * m);
    xr << x.real(), x.imag();
    const cd lin = d + testing::bilinear(a, x);
    const double q_direct = s * std::norm(lin);
    const double l_direct = (w * lin).real();
    const double q_emb = embed_complex_quadratic(a, d, s).value(xr);
    const double l_emb = embed_complex_linear(a, d, w).value(xr);
    worst = std::max(worst, std::abs(q_emb - q_direct) / std::max(1.0, std::abs(q_direct)));
    worst = std::max(worst, std::abs(l_emb - l_direct) / std::max(1.0, std::abs(l_direct)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("placement moves coordinates") {
  RealQuadForm f = embed_complex_quadratic(CVec::Ones(1), cd(1.0, 0.0), 1.0);
  const std::vector<Index> where{3, 1};
  const RealQuadForm g = place(f, 4, where);
  CHECK(g.value(vec({9.0, 0.5, -7.0, 2.0})) == doctest::Approx(f.value(vec({2.0, 0.5}))));
  CHECK_THROWS_AS(place(f, 4, std::vector<Index>{0}), std::invalid_argument);
}

TEST_CASE("gradient matches finite differences") {
  RngStream rng(31, {2});
  const CVec a = testing::random_cvec(2, rng);
  const RealQuadForm f = embed_complex_quadratic(a, testing::random_cd(rng), -0.7) +
                         embed_complex_linear(a, 0.3, testing::random_cd(rng));
  const RVec x = vec({0.1, -0.4, 0.7, 0.2});
  const RVec g = f.gradient(x);
  for (Index i = 0; i < 4; ++i) {
    RVec e = RVec::Zero(4);
    e[i] = 1e-6;
    CHECK(g[i] == doctest::Approx((f.value(x + e) - f.value(x - e)) / 2e-6).epsilon(1e-6));
  }
}

TEST_CASE("unconstrained concave maximum") {
  ConvexProgram prog;
  prog.dim = 4;
  prog.objective = RealQuadForm::zero(4);
  prog.objective.quad = (-Eigen::MatrixXd::Identity(4, 4)).sparseView();
  const Solution sol = solve(prog);
  check_solution(prog, sol);
  CHECK(sol.x.norm() <= 1e-6);
  CHECK(sol.objective_value == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("active boundary") {
  ConvexProgram prog;
  prog.dim = 1;
  prog.objective = RealQuadForm::zero(1);
  prog.objective.quad = (-Eigen::MatrixXd::Identity(1, 1)).sparseView();
  prog.objective.lin = vec({2.0});
  prog.ineq.push_back(RealQuadForm::linear(vec({1.0}), -0.5));
  const Solution sol = solve(prog);
  check_solution(prog, sol);
  CHECK(sol.x[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(sol.objective_value == doctest::Approx(0.75).epsilon(1e-6));
}

TEST_CASE("projection onto a ball") {
  RngStream rng(31, {3});
  for (int k = 0; k < 20; ++k) {
    const Index n = 2 + k % 5;
    RVec c(n);
    for (Index i = 0; i < n; ++i) c[i] = 4.0 * rng.uniform01() - 2.0;
    if (c.norm() < 1.2) c *= 1.5 / c.norm();
    // maximize -|x - c|^2 s.t. |x|^2 <= 1  ->  x = c/|c|
    ConvexProgram prog;
    prog.dim = n;
    prog.objective = RealQuadForm::zero(n);
    prog.objective.quad = (-Eigen::MatrixXd::Identity(n, n)).sparseView();
    prog.objective.lin = 2.0 * c;
    prog.objective.constant = -c.squaredNorm();
    prog.ineq.push_back(ball(n, RVec::Zero(n), 1.0));
    const Solution sol = solve(prog);
    check_solution(prog, sol);
    const double exact = -(c.norm() - 1.0) * (c.norm() - 1.0);
    CHECK(std::abs(sol.objective_value - exact) <= 1e-6);
    CHECK((sol.x - c / c.norm()).norm() <= 1e-3);
  }
}

TEST_CASE("trust-region subproblem") {
  RngStream rng(31, {4});
  for (int k = 0; k < 20; ++k) {
    const Index n = 3;
    RVec b(n);
    for (Index i = 0; i < n; ++i) b[i] = 2.0 * rng.uniform01() - 1.0;
    const double r = 0.5 + rng.uniform01();
    ConvexProgram prog;
    prog.dim = n;
    prog.objective = RealQuadForm::linear(b, 0.0);
    prog.ineq.push_back(ball(n, RVec::Zero(n), r));
    const Solution sol = solve(prog);
    check_solution(prog, sol);
    CHECK(std::abs(sol.objective_value - r * b.norm()) <= 1e-6);
  }
}

TEST_CASE("second-order cone") {
  // maximize x0 + x1 s.t. |(x0, x1)| <= 1
  ConvexProgram prog;
  prog.dim = 2;
  prog.objective = RealQuadForm::linear(vec({1.0, 1.0}), 0.0);
  SecondOrderCone k;
  k.support = {0, 1};
  k.p_mat = Eigen::MatrixXd::Identity(2, 2);
  k.p_off = RVec::Zero(2);
  k.c = RVec::Zero(2);
  k.d = 1.0;
  prog.cones.push_back(k);
  const Solution sol = solve(prog);
  check_solution(prog, sol);
  CHECK(std::abs(sol.objective_value - std::sqrt(2.0)) <= 1e-6);
}

TEST_CASE("cone with a variable bound") {
  // maximize -t + 0.5 x s.t. |x| <= t, x <= 2: optimum t = x = 2... objective -1
  ConvexProgram prog;
  prog.dim = 2;
  prog.objective = RealQuadForm::linear(vec({0.5, -1.0}), 0.0);
  prog.objective.quad = (-0.1 * Eigen::MatrixXd::Identity(2, 2)).sparseView();
  SecondOrderCone k;
  k.support = {0, 1};
  k.p_mat = Eigen::MatrixXd(1, 2);
  k.p_mat << 1.0, 0.0;
  k.p_off = RVec::Zero(1);
  k.c = vec({0.0, 1.0});
  prog.cones.push_back(k);
  const Solution sol = solve(prog);
  check_solution(prog, sol);
  CHECK(sol.x[1] + 1e-7 >= std::abs(sol.x[0]));
  // grid oracle on x >= 0 with t = x
  double best = -1e9;
  for (double x = 0.0; x <= 3.0; x += 1e-4) best = std::max(best, -0.5 * x - 0.2 * x * x);
  CHECK(std::abs(sol.objective_value - best) <= 1e-6);
}

TEST_CASE("box constraints") {
  ConvexProgram prog;
  prog.dim = 2;
  prog.objective = RealQuadForm::linear(vec({1.0, -1.0}), 0.0);
  prog.objective.quad = (-0.01 * Eigen::MatrixXd::Identity(2, 2)).sparseView();
  Box box;
  box.lower = vec({-std::numeric_limits<double>::infinity(), -1.0});
  box.upper = vec({3.0, std::numeric_limits<double>::infinity()});
  prog.box = box;
  const Solution sol = solve(prog);
  check_solution(prog, sol);
  CHECK(sol.x[0] == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(sol.x[1] == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("random 2-variable QCQPs against grid search") {
  RngStream rng(31, {5});
  for (int k = 0; k < 10; ++k) {
    const testing::Qcqp2 q = testing::random_qcqp(rng);
    const ConvexProgram prog = testing::to_program(q);
    const Solution sol = solve(prog);
    check_solution(prog, sol);
    const double grid = testing::grid_optimum(q);
    CHECK(sol.objective_value >= grid - 1e-6);
    CHECK(sol.objective_value - grid <= 1e-3);
  }
}

TEST_CASE("warm start and phase 1 agree") {
  RngStream rng(31, {6});
  const testing::Qcqp2 q = testing::random_qcqp(rng);
  const ConvexProgram prog = testing::to_program(q);
  const Solution cold = solve(prog);
  const Solution warm = solve(prog, {}, cold.x * 0.5 + q.centers[0] * 0.5);
  CHECK(std::abs(cold.objective_value - warm.objective_value) <= 1e-6);
}

TEST_CASE("infeasible program") {
  ConvexProgram prog;
  prog.dim = 1;
  prog.objective = RealQuadForm::linear(vec({1.0}), 0.0);
  prog.ineq.push_back(RealQuadForm::linear(vec({1.0}), 1.0));   // x <= -1
  prog.ineq.push_back(RealQuadForm::linear(vec({-1.0}), 1.0));  // x >= 1
  CHECK(solve(prog).status == SolveStatus::kInfeasible);
}

TEST_CASE("constant constraints are decided up front") {
  ConvexProgram prog;
  prog.dim = 1;
  prog.objective = RealQuadForm::zero(1);
  prog.objective.quad = (-Eigen::MatrixXd::Identity(1, 1)).sparseView();
  prog.ineq.push_back(RealQuadForm::linear(vec({0.0}), -1.0));
  CHECK(solve(prog).status == SolveStatus::kOptimal);
  prog.ineq.push_back(RealQuadForm::linear(vec({0.0}), 0.5));
  CHECK(solve(prog).status == SolveStatus::kInfeasible);
}

TEST_CASE("curvature errors surface at validation") {
  ConvexProgram prog;
  prog.dim = 1;
  prog.objective = RealQuadForm::zero(1);
  prog.objective.quad = Eigen::MatrixXd::Identity(1, 1).sparseView();  // convex objective
  CHECK_THROWS_AS(prog.validate(), std::invalid_argument);
  CHECK_THROWS_AS(solve(prog), std::invalid_argument);

  ConvexProgram bad;
  bad.dim = 1;
  bad.objective = RealQuadForm::zero(1);
  RealQuadForm c = RealQuadForm::zero(1);
  c.quad = (-Eigen::MatrixXd::Identity(1, 1)).sparseView();  // concave constraint
  bad.ineq.push_back(c);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("phase 1 examples") {
  const Phase1Result a = phase1_feasible_point({ball(2, RVec::Zero(2), 1.0)}, std::nullopt);
  CHECK(a.max_slack == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(a.x.norm() <= 1e-3);
  const Phase1Result b = phase1_feasible_point(
      {RealQuadForm::linear(vec({1.0}), 1.0), RealQuadForm::linear(vec({-1.0}), 1.0)},
      std::nullopt);
  CHECK(b.max_slack <= -1.0 + 1e-6);
}

TEST_CASE("phase 1 sign agrees with a grid") {
  RngStream rng(31, {7});
  for (int k = 0; k < 30; ++k) {
    std::vector<RealQuadForm> cons;
    std::vector<std::pair<Eigen::Vector2d, double>> balls;
    for (int i = 0; i < 2; ++i) {
      Eigen::Vector2d c(4.0 * rng.uniform01() - 2.0, 4.0 * rng.uniform01() - 2.0);
      const double r = 0.3 + 1.5 * rng.uniform01();
      balls.emplace_back(c, r);
      cons.push_back(ball(2, c, r));
    }
    // Skip near-tangent pairs whose sign a grid cannot resolve.
    const double gap = (balls[0].first - balls[1].first).norm() - balls[0].second - balls[1].second;
    if (std::abs(gap) < 0.02) continue;
    const Phase1Result p = phase1_feasible_point(cons, std::nullopt);
    bool grid = false;
    for (double x = -4.0; x <= 4.0 && !grid; x += 5e-3) {
      for (double y = -4.0; y <= 4.0 && !grid; y += 5e-3) {
        const Eigen::Vector2d v(x, y);
        grid = (v - balls[0].first).norm() < balls[0].second &&
               (v - balls[1].first).norm() < balls[1].second;
      }
    }
    CHECK((p.max_slack > 0.0) == grid);
  }
}

TEST_CASE("settings defaults") {
  const SolverSettings s;
  CHECK(s.feasibility_tol == 1e-8);
  CHECK(s.kkt_tol == 1e-7);
  CHECK(s.gap_tol == 1e-7);
  CHECK(s.barrier_mu_update == 10.0);
  CHECK(s.armijo_alpha == 0.3);
  CHECK(s.armijo_beta == 0.5);
}

}  // TEST_SUITE
