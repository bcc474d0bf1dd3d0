#include "starfd/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace starfd::convex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Triplet = Eigen::Triplet<double>;

SpMat from_dense(const Eigen::MatrixXd& a) {
  std::vector<Triplet> t;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (a(i, j) != 0.0) t.emplace_back(i, j, a(i, j));
    }
  }
  SpMat s(a.rows(), a.cols());
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// RealQuadForm

RealQuadForm RealQuadForm::zero(Index n) {
  RealQuadForm f;
  f.dim = n;
  f.quad = SpMat(n, n);
  f.lin = RVec::Zero(n);
  return f;
}

RealQuadForm RealQuadForm::linear(const RVec& b, double c) {
  RealQuadForm f = zero(b.size());
  f.lin = b;
  f.constant = c;
  return f;
}

double RealQuadForm::value(const RVec& x) const {
  return x.dot(quad * x) + lin.dot(x) + constant;
}

RVec RealQuadForm::gradient(const RVec& x) const { return 2.0 * (quad * x) + lin; }

Eigen::MatrixXd RealQuadForm::dense_quad() const { return Eigen::MatrixXd(quad); }

bool RealQuadForm::is_constant() const {
  for (Index k = 0; k < quad.outerSize(); ++k) {
    for (SpMat::InnerIterator it(quad, k); it; ++it) {
      if (it.value() != 0.0) return false;
    }
  }
  return (lin.array() == 0.0).all();
}

RealQuadForm& RealQuadForm::operator+=(const RealQuadForm& other) {
  if (other.dim != dim) throw std::invalid_argument("quadratic form dimensions differ");
  quad += other.quad;
  lin += other.lin;
  constant += other.constant;
  return *this;
}

RealQuadForm& RealQuadForm::operator-=(const RealQuadForm& other) {
  if (other.dim != dim) throw std::invalid_argument("quadratic form dimensions differ");
  quad -= other.quad;
  lin -= other.lin;
  constant -= other.constant;
  return *this;
}

RealQuadForm& RealQuadForm::operator*=(double s) {
  quad *= s;
  lin *= s;
  constant *= s;
  return *this;
}

RealQuadForm operator+(RealQuadForm a, const RealQuadForm& b) { return a += b; }
RealQuadForm operator-(RealQuadForm a, const RealQuadForm& b) { return a -= b; }
RealQuadForm operator*(double s, RealQuadForm a) { return a *= s; }

RealQuadForm embed_complex_quadratic(const CVec& a, cd d, double s) {
  const Index m = a.size();
  // Re(d + a'x) = Re d + p'[xr; xi],  Im(d + a'x) = Im d + r'[xr; xi]
  RVec p(2 * m), r(2 * m);
  p << a.real(), -a.imag();
  r << a.imag(), a.real();
  RealQuadForm f;
  f.dim = 2 * m;
  f.quad = from_dense(s * (p * p.transpose() + r * r.transpose()));
  f.lin = 2.0 * s * (d.real() * p + d.imag() * r);
  f.constant = s * std::norm(d);
  return f;
}

RealQuadForm embed_complex_linear(const CVec& a, cd d, cd w) {
  const CVec e = w * a;
  RVec b(2 * e.size());
  b << e.real(), -e.imag();
  return RealQuadForm::linear(b, (w * d).real());
}

RealQuadForm place(const RealQuadForm& local, Index dim, std::span<const Index> placement) {
  if (static_cast<Index>(placement.size()) != local.dim) {
    throw std::invalid_argument("placement size does not match form dimension");
  }
  RealQuadForm f = RealQuadForm::zero(dim);
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(local.quad.nonZeros()));
  for (Index k = 0; k < local.quad.outerSize(); ++k) {
    for (SpMat::InnerIterator it(local.quad, k); it; ++it) {
      t.emplace_back(placement[it.row()], placement[it.col()], it.value());
    }
  }
  f.quad.setFromTriplets(t.begin(), t.end());
  for (Index i = 0; i < local.dim; ++i) f.lin[placement[i]] += local.lin[i];
  f.constant = local.constant;
  return f;
}

// ---------------------------------------------------------------------------
// SecondOrderCone / ConvexProgram

double SecondOrderCone::margin(const RVec& x) const {
  RVec xs(static_cast<Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) xs[i] = x[support[i]];
  return c.dot(xs) + d - (p_mat * xs + p_off).norm();
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kMaxIter: return "max_iter";
  }
  return "?";
}

namespace {

// Dense restriction of a form to the coordinates it touches.
struct LocalForm {
  std::vector<Index> idx;
  Eigen::MatrixXd a;
  RVec b;
  double c = 0.0;

  RVec gather(const RVec& x) const {
    RVec xs(static_cast<Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) xs[i] = x[idx[i]];
    return xs;
  }
  double value(const RVec& x) const {
    const RVec xs = gather(x);
    return xs.dot(a * xs) + b.dot(xs) + c;
  }
};

LocalForm localize(const RealQuadForm& f) {
  std::vector<char> used(static_cast<std::size_t>(f.dim), 0);
  for (Index k = 0; k < f.quad.outerSize(); ++k) {
    for (SpMat::InnerIterator it(f.quad, k); it; ++it) {
      if (it.value() != 0.0) {
        used[it.row()] = 1;
        used[it.col()] = 1;
      }
    }
  }
  for (Index i = 0; i < f.dim; ++i) {
    if (f.lin[i] != 0.0) used[i] = 1;
  }
  LocalForm lf;
  std::vector<Index> pos(static_cast<std::size_t>(f.dim), -1);
  for (Index i = 0; i < f.dim; ++i) {
    if (used[i]) {
      pos[i] = static_cast<Index>(lf.idx.size());
      lf.idx.push_back(i);
    }
  }
  const Index s = static_cast<Index>(lf.idx.size());
  lf.a = Eigen::MatrixXd::Zero(s, s);
  lf.b = RVec(s);
  for (Index k = 0; k < f.quad.outerSize(); ++k) {
    for (SpMat::InnerIterator it(f.quad, k); it; ++it) {
      if (it.value() != 0.0) lf.a(pos[it.row()], pos[it.col()]) += it.value();
    }
  }
  for (Index i = 0; i < s; ++i) lf.b[i] = f.lin[lf.idx[i]];
  lf.c = f.constant;
  return lf;
}

// Smallest eigenvalue proxy of a symmetric matrix via pivoted LDLT.
double min_pivot(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  return ldlt.vectorD().minCoeff();
}

void check_curvature(const RealQuadForm& f, bool concave, const std::string& what) {
  const LocalForm lf = localize(f);
  if (lf.a.size() == 0) return;
  const Eigen::MatrixXd sym = 0.5 * (lf.a + lf.a.transpose());
  if ((sym - lf.a).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, lf.a.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument(what + ": quadratic part is not symmetric");
  }
  const double scale = std::max(1.0, sym.cwiseAbs().maxCoeff());
  const double low = min_pivot(concave ? Eigen::MatrixXd(-sym) : sym);
  if (low < -1e-9 * scale) {
    throw std::invalid_argument(what + (concave ? ": objective is not concave"
                                                : ": constraint is not convex"));
  }
}

void check_form_dims(const RealQuadForm& f, Index n, const std::string& what) {
  if (f.dim != n || f.lin.size() != n || f.quad.rows() != n || f.quad.cols() != n) {
    throw std::invalid_argument(what + ": dimension mismatch");
  }
  if (!f.lin.allFinite() || !std::isfinite(f.constant)) {
    throw std::invalid_argument(what + ": non-finite coefficients");
  }
}

}  // namespace

void ConvexProgram::validate() const {
  check_form_dims(objective, dim, "objective");
  check_curvature(objective, true, "objective");
  for (std::size_t i = 0; i < ineq.size(); ++i) {
    const std::string what = "constraint " + std::to_string(i);
    check_form_dims(ineq[i], dim, what);
    check_curvature(ineq[i], false, what);
  }
  for (const auto& k : cones) {
    const Index s = static_cast<Index>(k.support.size());
    if (k.p_mat.cols() != s || k.c.size() != s || k.p_mat.rows() != k.p_off.size()) {
      throw std::invalid_argument("cone: dimension mismatch");
    }
    for (Index i : k.support) {
      if (i < 0 || i >= dim) throw std::invalid_argument("cone: support index out of range");
    }
  }
  if (box) {
    if (box->lower.size() != dim || box->upper.size() != dim) {
      throw std::invalid_argument("box: dimension mismatch");
    }
    if (!(box->lower.array() < box->upper.array()).all()) {
      throw std::invalid_argument("box: empty interior");
    }
  }
}

double ConvexProgram::max_violation(const RVec& x) const {
  double v = 0.0;
  for (const auto& f : ineq) v = std::max(v, f.value(x));
  for (const auto& k : cones) v = std::max(v, -k.margin(x));
  if (box) {
    v = std::max(v, (box->lower - x).maxCoeff());
    v = std::max(v, (x - box->upper).maxCoeff());
  }
  return v;
}

// ---------------------------------------------------------------------------
// Barrier machinery

namespace {

struct LocalCone {
  std::vector<Index> idx;
  Eigen::MatrixXd p;
  RVec p_off;
  RVec c;
  double d = 0.0;
};

class BarrierProblem {
 public:
  BarrierProblem(const ConvexProgram& prog, const std::vector<bool>& keep) : n_(prog.dim) {
    objective_ = localize(-1.0 * prog.objective);  // minimize -f0
    for (std::size_t i = 0; i < prog.ineq.size(); ++i) {
      if (keep[i]) ineq_.push_back(localize(prog.ineq[i]));
    }
    for (const auto& k : prog.cones) {
      cones_.push_back({k.support, k.p_mat, k.p_off, k.c, k.d});
    }
    if (prog.box) {
      for (Index i = 0; i < n_; ++i) {
        if (std::isfinite(prog.box->lower[i])) lo_.emplace_back(i, prog.box->lower[i]);
        if (std::isfinite(prog.box->upper[i])) hi_.emplace_back(i, prog.box->upper[i]);
      }
    }
  }

  Index dim() const { return n_; }

  double theta() const {
    return static_cast<double>(ineq_.size() + 2 * cones_.size() + lo_.size() + hi_.size());
  }

  double objective(const RVec& x) const { return -objective_.value(x); }

  bool in_domain(const RVec& x) const {
    for (const auto& f : ineq_) {
      if (!(f.value(x) < 0.0)) return false;
    }
    for (const auto& k : cones_) {
      const RVec xs = gather(k.idx, x);
      const double tau = k.c.dot(xs) + k.d;
      const RVec y = k.p * xs + k.p_off;
      if (!(tau > 0.0) || !(tau * tau - y.squaredNorm() > 0.0)) return false;
    }
    for (const auto& [i, l] : lo_) {
      if (!(x[i] > l)) return false;
    }
    for (const auto& [i, u] : hi_) {
      if (!(x[i] < u)) return false;
    }
    return true;
  }

  // t * (-f0) + barrier; +inf outside the domain.
  double merit(const RVec& x, double t) const {
    double v = t * objective_.value(x);
    for (const auto& f : ineq_) {
      const double fv = f.value(x);
      if (!(fv < 0.0)) return kInf;
      v -= std::log(-fv);
    }
    for (const auto& k : cones_) {
      const RVec xs = gather(k.idx, x);
      const double tau = k.c.dot(xs) + k.d;
      const double dd = tau * tau - (k.p * xs + k.p_off).squaredNorm();
      if (!(tau > 0.0) || !(dd > 0.0)) return kInf;
      v -= std::log(dd);
    }
    for (const auto& [i, l] : lo_) {
      if (!(x[i] > l)) return kInf;
      v -= std::log(x[i] - l);
    }
    for (const auto& [i, u] : hi_) {
      if (!(x[i] < u)) return kInf;
      v -= std::log(u - x[i]);
    }
    return v;
  }

  void derivatives(const RVec& x, double t, RVec& g, Eigen::MatrixXd& h) const {
    g = RVec::Zero(n_);
    h = Eigen::MatrixXd::Zero(n_, n_);
    add_form(objective_, x, t, 0.0, g, h);
    for (const auto& f : ineq_) {
      const double fv = f.value(x);
      add_form(f, x, 1.0 / (-fv), 1.0 / (fv * fv), g, h);
    }
    for (const auto& k : cones_) {
      const RVec xs = gather(k.idx, x);
      const double tau = k.c.dot(xs) + k.d;
      const RVec y = k.p * xs + k.p_off;
      const double dd = tau * tau - y.squaredNorm();
      const RVec w = tau * k.c - k.p.transpose() * y;
      const RVec gl = -2.0 * w / dd;
      const Eigen::MatrixXd hl = 4.0 * w * w.transpose() / (dd * dd) -
                                 (2.0 / dd) * (k.c * k.c.transpose() - k.p.transpose() * k.p);
      scatter(k.idx, gl, hl, g, h);
    }
    for (const auto& [i, l] : lo_) {
      const double s = x[i] - l;
      g[i] -= 1.0 / s;
      h(i, i) += 1.0 / (s * s);
    }
    for (const auto& [i, u] : hi_) {
      const double s = u - x[i];
      g[i] += 1.0 / s;
      h(i, i) += 1.0 / (s * s);
    }
  }

  // Gradient of -f0 alone (for KKT scaling).
  RVec objective_gradient(const RVec& x) const {
    RVec g = RVec::Zero(n_);
    const RVec xs = objective_.gather(x);
    const RVec gl = 2.0 * objective_.a * xs + objective_.b;
    for (std::size_t i = 0; i < objective_.idx.size(); ++i) g[objective_.idx[i]] += gl[i];
    return g;
  }

 private:
  static RVec gather(const std::vector<Index>& idx, const RVec& x) {
    RVec xs(static_cast<Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) xs[i] = x[idx[i]];
    return xs;
  }

  static void scatter(const std::vector<Index>& idx, const RVec& gl, const Eigen::MatrixXd& hl,
                      RVec& g, Eigen::MatrixXd& h) {
    const Index s = static_cast<Index>(idx.size());
    for (Index a = 0; a < s; ++a) {
      g[idx[a]] += gl[a];
      for (Index b = 0; b < s; ++b) h(idx[a], idx[b]) += hl(a, b);
    }
  }

  // g += scale_grad * grad f;  h += scale_grad * hess f + scale_outer * grad grad'
  static void add_form(const LocalForm& f, const RVec& x, double scale_grad, double scale_outer,
                       RVec& g, Eigen::MatrixXd& h) {
    if (f.idx.empty()) return;
    const RVec xs = f.gather(x);
    const RVec gl = 2.0 * f.a * xs + f.b;
    Eigen::MatrixXd hl = (2.0 * scale_grad) * f.a;
    if (scale_outer != 0.0) hl.noalias() += scale_outer * gl * gl.transpose();
    scatter(f.idx, scale_grad * gl, hl, g, h);
  }

  Index n_;
  LocalForm objective_;
  std::vector<LocalForm> ineq_;
  std::vector<LocalCone> cones_;
  std::vector<std::pair<Index, double>> lo_;
  std::vector<std::pair<Index, double>> hi_;
};

RVec newton_direction(const Eigen::MatrixXd& h, const RVec& g) {
  Eigen::LLT<Eigen::MatrixXd> llt(h);
  if (llt.info() == Eigen::Success) return llt.solve(-g);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
  if (ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 0.0).all()) {
    return ldlt.solve(-g);
  }
  const double reg = 1e-12 * std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
  Eigen::MatrixXd hr = h;
  hr.diagonal().array() += reg;
  return hr.ldlt().solve(-g);
}

struct CenterResult {
  int steps = 0;
  double decrement = 0.0;  // lambda^2 / 2 at the last evaluated point
  bool converged = false;
};

CenterResult center(const BarrierProblem& bp, RVec& x, double t, const SolverSettings& s) {
  CenterResult out;
  RVec g;
  Eigen::MatrixXd h;
  double prev = std::numeric_limits<double>::infinity();
  for (; out.steps < s.max_newton_steps;) {
    bp.derivatives(x, t, g, h);
    const RVec dx = newton_direction(h, g);
    const double slope = g.dot(dx);
    if (!std::isfinite(slope)) break;
    out.decrement = -slope / 2.0;
    // The second test catches the round-off floor: in the quadratic region
    // the decrement must shrink fast, so stalling there means no progress.
    if (out.decrement <= s.newton_tol ||
        (out.decrement <= s.kkt_tol && out.decrement > 0.25 * prev)) {
      out.converged = true;
      break;
    }
    prev = out.decrement;
    ++out.steps;
    double step = 1.0;
    for (int k = 0; k < 80 && !bp.in_domain(x + step * dx); ++k) step *= s.armijo_beta;
    if (-slope < 0.1 && step == 1.0) {
      // Quadratic-convergence region of a self-concordant barrier: the full
      // step decreases the merit even when the change is below its resolution.
      x += dx;
      continue;
    }
    const double m0 = bp.merit(x, t);
    bool accepted = false;
    for (int k = 0; k < 80; ++k) {
      const double m1 = bp.merit(x + step * dx, t);
      if (m1 <= m0 + s.armijo_alpha * step * slope) {
        accepted = true;
        break;
      }
      step *= s.armijo_beta;
    }
    if (!accepted) {
      // Merit differences are below floating-point resolution.
      out.converged = true;
      break;
    }
    x += step * dx;
  }
  return out;
}

RVec strict_box_point(const std::optional<Box>& box, const RVec& x) {
  if (!box) return x;
  RVec y = x;
  for (Index i = 0; i < y.size(); ++i) {
    const double l = box->lower[i];
    const double u = box->upper[i];
    const bool lf = std::isfinite(l);
    const bool uf = std::isfinite(u);
    if (lf && uf) {
      const double pad = 1e-3 * (u - l);
      if (!(y[i] > l + pad && y[i] < u - pad)) y[i] = 0.5 * (l + u);
    } else if (lf && !(y[i] > l)) {
      y[i] = l + 1.0;
    } else if (uf && !(y[i] < u)) {
      y[i] = u - 1.0;
    }
  }
  return y;
}

constexpr double kSlackCap = 1e6;

}  // namespace

Phase1Result phase1_feasible_point(const std::vector<RealQuadForm>& ineq,
                                   const std::vector<SecondOrderCone>& cones,
                                   const std::optional<Box>& box, Index dim,
                                   const SolverSettings& settings, const RVec* start,
                                   bool stop_when_feasible) {
  const Index n = dim;
  RVec x0 = start ? *start : RVec::Zero(n);
  if (x0.size() != n) throw std::invalid_argument("phase 1: start has wrong dimension");
  x0 = strict_box_point(box, x0);

  double worst = -kInf;
  for (const auto& f : ineq) worst = std::max(worst, f.value(x0));
  for (const auto& k : cones) worst = std::max(worst, -k.margin(x0));
  if (ineq.empty() && cones.empty()) return {x0, kSlackCap, 0};

  // Variables [x; s], maximize s subject to f_i(x) + s <= 0.
  std::vector<Index> ident(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) ident[i] = i;
  ConvexProgram p1;
  p1.dim = n + 1;
  p1.objective = RealQuadForm::zero(n + 1);
  p1.objective.lin[n] = 1.0;
  for (const auto& f : ineq) {
    RealQuadForm g = place(f, n + 1, ident);
    g.lin[n] = 1.0;
    p1.ineq.push_back(std::move(g));
  }
  for (const auto& k : cones) {
    SecondOrderCone c = k;
    c.support.push_back(n);
    c.p_mat.conservativeResize(Eigen::NoChange, c.p_mat.cols() + 1);
    c.p_mat.col(c.p_mat.cols() - 1).setZero();
    c.c.conservativeResize(c.c.size() + 1);
    c.c[c.c.size() - 1] = -1.0;
    p1.cones.push_back(std::move(c));
  }
  Box b;
  b.lower = RVec::Constant(n + 1, -kInf);
  b.upper = RVec::Constant(n + 1, kInf);
  if (box) {
    b.lower.head(n) = box->lower;
    b.upper.head(n) = box->upper;
  }
  b.upper[n] = kSlackCap;
  p1.box = b;

  RVec x(n + 1);
  x.head(n) = x0;
  x[n] = std::min(-worst - 1.0, kSlackCap - 1.0);

  const BarrierProblem bp(p1, std::vector<bool>(p1.ineq.size(), true));
  const double theta = bp.theta();
  double t = settings.barrier_t0 > 0.0 ? settings.barrier_t0 : theta;
  Phase1Result out;
  for (int round = 0; round < settings.max_barrier_rounds; ++round) {
    const CenterResult cr = center(bp, x, t, settings);
    out.iterations += cr.steps;
    const double gap = theta / t;
    if (stop_when_feasible && (x[n] > 0.0 || x[n] + gap < 0.0)) break;
    if (gap <= settings.gap_tol) break;
    t *= settings.barrier_mu_update;
  }
  out.x = x.head(n);
  out.max_slack = x[n];
  return out;
}

Phase1Result phase1_feasible_point(const std::vector<RealQuadForm>& ineq,
                                   const std::optional<Box>& box, const SolverSettings& settings) {
  if (ineq.empty()) throw std::invalid_argument("phase 1 needs at least one constraint");
  return phase1_feasible_point(ineq, {}, box, ineq.front().dim, settings);
}

Solution solve(const ConvexProgram& prog, const SolverSettings& settings,
               const std::optional<RVec>& warm_start) {
  prog.validate();
  const Index n = prog.dim;
  Solution sol;

  // Constant constraints are decided here and kept out of the barrier.
  std::vector<bool> keep(prog.ineq.size(), true);
  std::vector<RealQuadForm> active;
  for (std::size_t i = 0; i < prog.ineq.size(); ++i) {
    if (prog.ineq[i].is_constant()) {
      keep[i] = false;
      if (prog.ineq[i].constant > settings.feasibility_tol) {
        sol.x = warm_start ? *warm_start : RVec::Zero(n);
        sol.status = SolveStatus::kInfeasible;
        sol.max_violation = prog.ineq[i].constant;
        sol.objective_value = prog.objective.value(sol.x);
        return sol;
      }
    } else {
      active.push_back(prog.ineq[i]);
    }
  }

  ConvexProgram reduced;
  reduced.dim = n;
  reduced.objective = prog.objective;
  reduced.ineq = active;
  reduced.cones = prog.cones;
  reduced.box = prog.box;
  const BarrierProblem bp(reduced, std::vector<bool>(active.size(), true));

  RVec x;
  if (warm_start && warm_start->size() == n && bp.in_domain(*warm_start)) {
    x = *warm_start;
  } else {
    const Phase1Result p1 = phase1_feasible_point(active, prog.cones, prog.box, n, settings,
                                                  warm_start ? &*warm_start : nullptr, true);
    sol.iterations += p1.iterations;
    if (!(p1.max_slack > 0.0) || !bp.in_domain(p1.x)) {
      sol.x = p1.x;
      sol.status = SolveStatus::kInfeasible;
      sol.max_violation = -p1.max_slack;
      sol.objective_value = prog.objective.value(p1.x);
      return sol;
    }
    x = p1.x;
  }

  const double theta = bp.theta();
  double t = settings.barrier_t0 > 0.0 ? settings.barrier_t0 : std::max(theta, 1.0);
  bool gap_reached = false;
  bool centered = true;
  for (int round = 0; round < settings.max_barrier_rounds; ++round) {
    const CenterResult cr = center(bp, x, t, settings);
    sol.iterations += cr.steps;
    centered = cr.converged;
    sol.round_objectives.push_back(bp.objective(x));
    if (theta == 0.0 || theta / t <= settings.gap_tol) {
      gap_reached = true;
      break;
    }
    t *= settings.barrier_mu_update;
  }

  {
    RVec g;
    Eigen::MatrixXd h;
    bp.derivatives(x, t, g, h);
    const double dec = -g.dot(newton_direction(h, g)) / 2.0;
    sol.kkt_residual = std::isfinite(dec) ? std::max(dec, 0.0) : dec;
  }
  sol.duality_gap = theta / t;
  sol.x = x;
  sol.objective_value = prog.objective.value(x);
  sol.max_violation = prog.max_violation(x);
  const bool ok = gap_reached && centered && sol.kkt_residual <= settings.kkt_tol &&
                  sol.max_violation <= settings.feasibility_tol;
  sol.status = ok ? SolveStatus::kOptimal : SolveStatus::kMaxIter;
  return sol;
}

}  // namespace starfd::convex
