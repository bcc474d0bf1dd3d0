#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Sparse>

#include "starfd/types.hpp"

namespace starfd::convex {

using SpMat = Eigen::SparseMatrix<double>;

// x' A x + b' x + c with A symmetric.
struct RealQuadForm {
  Index dim = 0;
  SpMat quad;
  RVec lin;
  double constant = 0.0;

  static RealQuadForm zero(Index n);
  static RealQuadForm linear(const RVec& b, double c);

  double value(const RVec& x) const;
  RVec gradient(const RVec& x) const;
  Eigen::MatrixXd dense_quad() const;
  bool is_constant() const;

  RealQuadForm& operator+=(const RealQuadForm& other);
  RealQuadForm& operator-=(const RealQuadForm& other);
  RealQuadForm& operator*=(double s);
};

RealQuadForm operator+(RealQuadForm a, const RealQuadForm& b);
RealQuadForm operator-(RealQuadForm a, const RealQuadForm& b);
RealQuadForm operator*(double s, RealQuadForm a);

/// s * |d + a' x|^2 over complex x, as a real form in [Re x; Im x] (dim 2M).
RealQuadForm embed_complex_quadratic(const CVec& a, cd d, double s);

/// Re(w * (d + a' x)) over complex x, as a real affine form in [Re x; Im x].
RealQuadForm embed_complex_linear(const CVec& a, cd d, cd w);

/// Moves a form onto a larger variable space: local coordinate i becomes
/// coordinate placement[i] of a dim-dimensional vector.
RealQuadForm place(const RealQuadForm& local, Index dim, std::span<const Index> placement);

// || P x_S + p ||_2 <= c' x_S + d over the coordinates S = support.
struct SecondOrderCone {
  std::vector<Index> support;
  Eigen::MatrixXd p_mat;
  RVec p_off;
  RVec c;
  double d = 0.0;

  double margin(const RVec& x) const;  // (c'x + d) - ||Px + p||
};

struct Box {
  RVec lower;  // -inf where unbounded
  RVec upper;  // +inf where unbounded
};

// maximize objective (concave) s.t. every ineq <= 0 (convex), every cone, box.
struct ConvexProgram {
  Index dim = 0;
  RealQuadForm objective;
  std::vector<RealQuadForm> ineq;
  std::vector<SecondOrderCone> cones;
  std::optional<Box> box;

  // Throws std::invalid_argument on dimension or curvature errors.
  void validate() const;
  double max_violation(const RVec& x) const;
};

enum class SolveStatus { kOptimal, kInfeasible, kMaxIter };
std::string_view to_string(SolveStatus s);

struct SolverSettings {
  double barrier_t0 = 0.0;  // 0 picks t so the first gap bound is ~1
  double barrier_mu_update = 10.0;
  double newton_tol = 1e-10;  // on lambda^2 / 2
  double feasibility_tol = 1e-8;
  double kkt_tol = 1e-7;
  double gap_tol = 1e-7;
  int max_newton_steps = 100;  // per centering
  int max_barrier_rounds = 40;
  double armijo_alpha = 0.3;
  double armijo_beta = 0.5;
};

struct Solution {
  RVec x;
  double objective_value = 0.0;
  SolveStatus status = SolveStatus::kMaxIter;
  double kkt_residual = 0.0;  // Newton decrement lambda^2/2 of the final centering
  double duality_gap = 0.0;
  double max_violation = 0.0;
  int iterations = 0;  // Newton steps, phase 1 included
  std::vector<double> round_objectives;
};

struct Phase1Result {
  RVec x;
  double max_slack = 0.0;
  int iterations = 0;
};

/// Maximizes t subject to f_i(x) + t <= 0 for every form and cone (the box is
/// kept strict). max_slack > 0 means x is strictly feasible. When
/// stop_when_feasible is set the search ends at the first centered point with
/// positive slack, or once the slack is certified negative.
Phase1Result phase1_feasible_point(const std::vector<RealQuadForm>& ineq,
                                   const std::vector<SecondOrderCone>& cones,
                                   const std::optional<Box>& box, Index dim,
                                   const SolverSettings& settings = {},
                                   const RVec* start = nullptr, bool stop_when_feasible = false);

Phase1Result phase1_feasible_point(const std::vector<RealQuadForm>& ineq,
                                   const std::optional<Box>& box,
                                   const SolverSettings& settings = {});

/// Log-barrier interior-point solve. A warm start is used when strictly
/// feasible; otherwise phase 1 runs first.
Solution solve(const ConvexProgram& prog, const SolverSettings& settings = {},
               const std::optional<RVec>& warm_start = std::nullopt);

}  // namespace starfd::convex
