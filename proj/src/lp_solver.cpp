#include "onebit/lp_solver.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace onebit {

namespace {

constexpr double kTol = 1e-8;
constexpr double kStepDamping = 0.99;
constexpr int kMaxIterations = 200;
constexpr double kDiagReg = 1e-13;

// Largest step alpha <= 1 keeping v + alpha*dv >= 0 for the masked entries.
double max_step(const RVector& v, const RVector& dv,
                const Eigen::Array<bool, Eigen::Dynamic, 1>& mask) {
  double alpha = 1.0;
  for (Index i = 0; i < v.size(); ++i)
    if (mask(i) && dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
  return alpha;
}

double max_step(const RVector& v, const RVector& dv) {
  double alpha = 1.0;
  for (Index i = 0; i < v.size(); ++i)
    if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
  return alpha;
}

// Factorization of the normal matrix N = A^T Dw A + diag(d). When every
// variable carries at least one finite bound, d is strictly positive and N
// is inverted through the m x m system S = Dw^{-1} + A d^{-1} A^T, which is
// far smaller than N for the wide instances this solver exists for. The
// split is well conditioned only while no d entry is tiny relative to the
// row scalings; late iterations (and instances with free variables) go
// through the dense n x n factorization instead.
class NormalSolver {
 public:
  void factor(const RMatrix& a, const RVector& dw, const RVector& d,
              bool all_bounded) {
    const Index n = d.size();
    const Index m = a.rows();
    a_ = &a;
    d_ = (d.array() + kDiagReg).matrix();
    dw_ = dw;
    const double split_cond =
        m == 0 ? 0.0 : (1.0 + dw.maxCoeff()) / d_.minCoeff();
    woodbury_ = (all_bounded && split_cond < 1e12) || m == 0;
    if (woodbury_) {
      d_inv_ = d_.cwiseInverse();
      if (m > 0) {
        RMatrix s = a * d_inv_.asDiagonal() * a.transpose();
        s.diagonal() += dw.cwiseInverse();
        inner_.compute(s);
      }
    } else {
      RMatrix n_mat = RMatrix::Zero(n, n);
      if (m > 0) n_mat = a.transpose() * dw.asDiagonal() * a;
      n_mat.diagonal() += d_;
      dense_.compute(n_mat);
    }
  }

  RVector apply(const RVector& v) const {
    RVector out = d_.cwiseProduct(v);
    if (a_->rows() > 0)
      out += a_->transpose() * (dw_.cwiseProduct(*a_ * v));
    return out;
  }

  RVector solve(const RVector& rhs) const {
    RVector dz = solve_raw(rhs);
    // One refinement pass keeps the directions usable when the barrier
    // scalings span many orders of magnitude late in the iteration.
    RVector res = rhs - apply(dz);
    if (res.lpNorm<Eigen::Infinity>() >
        1e-12 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>()))
      dz += solve_raw(res);
    return dz;
  }

 private:
  RVector solve_raw(const RVector& rhs) const {
    if (!woodbury_) return dense_.solve(rhs);
    RVector u = d_inv_.cwiseProduct(rhs);
    if (a_->rows() == 0) return u;
    RVector corr = inner_.solve(*a_ * u);
    return u - d_inv_.cwiseProduct(a_->transpose() * corr);
  }

  const RMatrix* a_ = nullptr;
  RVector d_, dw_, d_inv_;
  bool woodbury_ = false;
  Eigen::LDLT<RMatrix> inner_;
  Eigen::LDLT<RMatrix> dense_;
};

struct Iterate {
  RVector z, w, y;       // primal, row slacks, row duals
  RVector p, zl, q, zu;  // bound slacks and duals (masked entries inert)
};

}  // namespace

bool LinearProgram::well_formed() const {
  const Index n = num_vars();
  const Index m = num_rows();
  if (n < 1) return false;
  if (ineq_a.cols() != n && m > 0) return false;
  if (ineq_b.size() != m) return false;
  if (lower.size() != n || upper.size() != n) return false;
  for (Index i = 0; i < n; ++i) {
    if (std::isnan(lower(i)) || std::isnan(upper(i))) return false;
    if (lower(i) >= upper(i)) return false;
  }
  if (m > 0 && !ineq_a.allFinite()) return false;
  if (m > 0 && !ineq_b.allFinite()) return false;
  if (!objective.allFinite()) return false;
  return true;
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kNumericalFailure:
      return "numerical-failure";
  }
  return "unknown";
}

LpSolution solve_lp(const LinearProgram& lp) {
  if (!lp.well_formed())
    throw std::invalid_argument("malformed linear program");

  const Index n = lp.num_vars();
  const Index m = lp.num_rows();
  const RVector& c = lp.objective;
  const RMatrix& a = lp.ineq_a;
  const RVector& b = lp.ineq_b;

  Eigen::Array<bool, Eigen::Dynamic, 1> has_lo(n), has_hi(n);
  Index n_lo = 0, n_hi = 0;
  for (Index i = 0; i < n; ++i) {
    has_lo(i) = std::isfinite(lp.lower(i));
    has_hi(i) = std::isfinite(lp.upper(i));
    n_lo += has_lo(i);
    n_hi += has_hi(i);
  }
  const double ncomp = static_cast<double>(m + n_lo + n_hi);

  LpSolution sol;
  sol.z = RVector::Zero(n);

  if (ncomp == 0) {
    // Unconstrained: optimal at any point iff the gradient vanishes.
    if (c.lpNorm<Eigen::Infinity>() < 1e-14) {
      sol.status = LpStatus::kOptimal;
      sol.objective = 0.0;
      sol.primal_residual = 0.0;
      sol.relative_gap = 0.0;
    } else {
      sol.status = LpStatus::kUnbounded;
    }
    return sol;
  }

  // Finite-bound values with zeros at masked entries, so masked terms drop
  // out of products without branching.
  RVector lo_f = RVector::Zero(n), hi_f = RVector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    if (has_lo(i)) lo_f(i) = lp.lower(i);
    if (has_hi(i)) hi_f(i) = lp.upper(i);
  }

  // Interior-ish start: center of the box where available, unit slacks and
  // duals elsewhere. Primal equality residuals are worked off by the
  // iteration itself.
  Iterate it;
  it.z = RVector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    if (has_lo(i) && has_hi(i))
      it.z(i) = 0.5 * (lo_f(i) + hi_f(i));
    else if (has_lo(i))
      it.z(i) = lo_f(i) + 1.0;
    else if (has_hi(i))
      it.z(i) = hi_f(i) - 1.0;
  }
  it.w = RVector::Ones(m);
  it.y = RVector::Ones(m);
  if (m > 0) {
    RVector slack = b - a * it.z;
    for (Index i = 0; i < m; ++i) it.w(i) = std::max(1.0, slack(i));
  }
  it.p = RVector::Ones(n);
  it.zl = RVector::Zero(n);
  it.q = RVector::Ones(n);
  it.zu = RVector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    if (has_lo(i)) {
      it.p(i) = std::max(1.0, it.z(i) - lo_f(i));
      it.zl(i) = 1.0;
    }
    if (has_hi(i)) {
      it.q(i) = std::max(1.0, hi_f(i) - it.z(i));
      it.zu(i) = 1.0;
    }
  }

  const double bound_scale =
      1.0 + std::max({m > 0 ? b.lpNorm<Eigen::Infinity>() : 0.0,
                      lo_f.lpNorm<Eigen::Infinity>(),
                      hi_f.lpNorm<Eigen::Infinity>()});
  const double obj_scale = 1.0 + c.lpNorm<Eigen::Infinity>();

  NormalSolver normal;
  const bool all_bounded = (n_lo + n_hi > 0) &&
                           (has_lo || has_hi).all();

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    // Residuals of the perturbed KKT system.
    RVector rb = m > 0 ? RVector(b - a * it.z - it.w) : RVector(0);
    RVector rl = RVector::Zero(n), ru = RVector::Zero(n);
    for (Index i = 0; i < n; ++i) {
      if (has_lo(i)) rl(i) = lo_f(i) - it.z(i) + it.p(i);
      if (has_hi(i)) ru(i) = hi_f(i) - it.z(i) - it.q(i);
    }
    RVector rd = c + it.zl - it.zu;
    if (m > 0) rd -= a.transpose() * it.y;

    const double mu =
        ((m > 0 ? it.w.dot(it.y) : 0.0) + it.p.dot(it.zl) + it.q.dot(it.zu)) /
        ncomp;

    const double pinf =
        std::max({m > 0 ? rb.lpNorm<Eigen::Infinity>() : 0.0,
                  rl.lpNorm<Eigen::Infinity>(), ru.lpNorm<Eigen::Infinity>()}) /
        bound_scale;
    const double dinf = rd.lpNorm<Eigen::Infinity>() / obj_scale;

    const double pobj = c.dot(it.z);
    double dobj = m > 0 ? b.dot(it.y) : 0.0;
    for (Index i = 0; i < n; ++i) {
      if (has_lo(i)) dobj -= lo_f(i) * it.zl(i);
      if (has_hi(i)) dobj += hi_f(i) * it.zu(i);
    }
    const double rel_gap = std::abs(dobj - pobj) / (1.0 + std::abs(pobj));

    sol.iterations = iter;
    sol.primal_residual = pinf;
    sol.relative_gap = rel_gap;

    if (pinf <= kTol && dinf <= kTol && rel_gap <= kTol) {
      sol.status = LpStatus::kOptimal;
      sol.z = it.z;
      sol.objective = pobj;
      return sol;
    }

    // Infeasibility certificate: a nonnegative dual combination proving the
    // constraint system empty. Checked on the normalized duals.
    {
      const double dual_norm1 = it.zl.lpNorm<1>() + it.zu.lpNorm<1>() +
                                (m > 0 ? it.y.lpNorm<1>() : 0.0);
      if (dual_norm1 > 1.0) {
        RVector yn = m > 0 ? RVector(it.y / dual_norm1) : RVector(0);
        RVector zln = it.zl / dual_norm1;
        RVector zun = it.zu / dual_norm1;
        RVector comb = zun - zln;
        if (m > 0) comb += a.transpose() * yn;
        double val = m > 0 ? b.dot(yn) : 0.0;
        for (Index i = 0; i < n; ++i) {
          if (has_lo(i)) val -= lo_f(i) * zln(i);
          if (has_hi(i)) val += hi_f(i) * zun(i);
        }
        if (comb.lpNorm<Eigen::Infinity>() <= 1e-9 && val <= -1e-9) {
          sol.status = LpStatus::kInfeasible;
          return sol;
        }
      }
    }

    // Unboundedness certificate: a diverging primal iterate whose direction
    // stays feasible and improves the objective.
    {
      const double znorm = it.z.lpNorm<Eigen::Infinity>();
      if (znorm > 1e8) {
        RVector ray = it.z / znorm;
        bool feasible_ray = true;
        if (m > 0 && (a * ray).maxCoeff() > 1e-8) feasible_ray = false;
        for (Index i = 0; i < n && feasible_ray; ++i) {
          if (has_hi(i) && ray(i) > 1e-8) feasible_ray = false;
          if (has_lo(i) && ray(i) < -1e-8) feasible_ray = false;
        }
        if (feasible_ray && c.dot(ray) > 1e-9) {
          sol.status = LpStatus::kUnbounded;
          return sol;
        }
      }
    }

    // Barrier scalings.
    RVector dw = m > 0 ? RVector(it.y.cwiseQuotient(it.w)) : RVector(0);
    RVector dl = it.zl.cwiseQuotient(it.p);
    RVector du = it.zu.cwiseQuotient(it.q);
    normal.factor(a, dw, dl + du, all_bounded);

    auto solve_directions = [&](const RVector& rwy, const RVector& rpz,
                                const RVector& rqz, Iterate& d) {
      RVector rhs = rd + rpz.cwiseQuotient(it.p) + dl.cwiseProduct(rl) -
                    rqz.cwiseQuotient(it.q) + du.cwiseProduct(ru);
      if (m > 0)
        rhs += a.transpose() *
               (dw.cwiseProduct(rb) - rwy.cwiseQuotient(it.w));
      d.z = normal.solve(rhs);
      if (m > 0) {
        d.w = rb - a * d.z;
        d.y = (rwy - it.y.cwiseProduct(d.w)).cwiseQuotient(it.w);
      } else {
        d.w.resize(0);
        d.y.resize(0);
      }
      d.p = RVector::Zero(n);
      d.zl = RVector::Zero(n);
      d.q = RVector::Zero(n);
      d.zu = RVector::Zero(n);
      for (Index i = 0; i < n; ++i) {
        if (has_lo(i)) {
          d.p(i) = d.z(i) - rl(i);
          d.zl(i) = (rpz(i) - it.zl(i) * d.p(i)) / it.p(i);
        }
        if (has_hi(i)) {
          d.q(i) = ru(i) - d.z(i);
          d.zu(i) = (rqz(i) - it.zu(i) * d.q(i)) / it.q(i);
        }
      }
    };

    // Predictor: pure Newton step toward complementarity zero.
    Iterate aff;
    {
      RVector rwy = m > 0
                        ? RVector(-(it.w.cwiseProduct(it.y)))
                        : RVector(0);
      RVector rpz = RVector::Zero(n), rqz = RVector::Zero(n);
      for (Index i = 0; i < n; ++i) {
        if (has_lo(i)) rpz(i) = -it.p(i) * it.zl(i);
        if (has_hi(i)) rqz(i) = -it.q(i) * it.zu(i);
      }
      solve_directions(rwy, rpz, rqz, aff);
    }

    double ap_aff = std::min(max_step(it.p, aff.p, has_lo),
                             max_step(it.q, aff.q, has_hi));
    double ad_aff = std::min(max_step(it.zl, aff.zl, has_lo),
                             max_step(it.zu, aff.zu, has_hi));
    if (m > 0) {
      ap_aff = std::min(ap_aff, max_step(it.w, aff.w));
      ad_aff = std::min(ad_aff, max_step(it.y, aff.y));
    }

    double mu_aff = 0.0;
    if (m > 0)
      mu_aff += (it.w + ap_aff * aff.w).dot(it.y + ad_aff * aff.y);
    for (Index i = 0; i < n; ++i) {
      if (has_lo(i))
        mu_aff += (it.p(i) + ap_aff * aff.p(i)) *
                  (it.zl(i) + ad_aff * aff.zl(i));
      if (has_hi(i))
        mu_aff += (it.q(i) + ap_aff * aff.q(i)) *
                  (it.zu(i) + ad_aff * aff.zu(i));
    }
    mu_aff /= ncomp;
    const double sigma =
        std::clamp(std::pow(mu_aff / std::max(mu, 1e-300), 3.0), 0.0, 1.0);

    // Corrector: recenter toward sigma*mu and cancel the second-order
    // product terms of the predictor.
    Iterate dir;
    {
      RVector rwy(m), rpz = RVector::Zero(n), rqz = RVector::Zero(n);
      if (m > 0)
        rwy = (sigma * mu - it.w.array() * it.y.array() -
               aff.w.array() * aff.y.array())
                  .matrix();
      for (Index i = 0; i < n; ++i) {
        if (has_lo(i))
          rpz(i) =
              sigma * mu - it.p(i) * it.zl(i) - aff.p(i) * aff.zl(i);
        if (has_hi(i))
          rqz(i) =
              sigma * mu - it.q(i) * it.zu(i) - aff.q(i) * aff.zu(i);
      }
      solve_directions(rwy, rpz, rqz, dir);
    }

    double ap = std::min(max_step(it.p, dir.p, has_lo),
                         max_step(it.q, dir.q, has_hi));
    double ad = std::min(max_step(it.zl, dir.zl, has_lo),
                         max_step(it.zu, dir.zu, has_hi));
    if (m > 0) {
      ap = std::min(ap, max_step(it.w, dir.w));
      ad = std::min(ad, max_step(it.y, dir.y));
    }
    ap = std::min(1.0, kStepDamping * ap);
    ad = std::min(1.0, kStepDamping * ad);

    it.z += ap * dir.z;
    if (m > 0) {
      it.w += ap * dir.w;
      it.y += ad * dir.y;
    }
    for (Index i = 0; i < n; ++i) {
      if (has_lo(i)) {
        it.p(i) += ap * dir.p(i);
        it.zl(i) += ad * dir.zl(i);
      }
      if (has_hi(i)) {
        it.q(i) += ap * dir.q(i);
        it.zu(i) += ad * dir.zu(i);
      }
    }

    if (!it.z.allFinite()) break;
  }

  sol.status = LpStatus::kNumericalFailure;
  sol.z = it.z;
  return sol;
}

}  // namespace onebit
