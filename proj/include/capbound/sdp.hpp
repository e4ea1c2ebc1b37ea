// Copyright (c) 2026 capbound contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "capbound/matrix.hpp"

namespace capbound::sdp {

// --- svec utilities ---------------------------------------------------------
// Symmetric vectorization with sqrt(2) off-diagonal scaling, so that
// <M,N>_F = svec(M).dot(svec(N)). Upper triangle, column-major.

inline int svec_dim(int n) { return n * (n + 1) / 2; }

inline rvec svec(const rmat& m) {
  const int n = static_cast<int>(m.rows());
  static const double rt2 = std::sqrt(2.0);
  rvec v(svec_dim(n));
  int k = 0;
  for (int c = 0; c < n; ++c)
    for (int r = 0; r <= c; ++r) v(k++) = (r == c) ? m(r, c) : rt2 * m(r, c);
  return v;
}

inline rmat smat(const rvec& v, int n) {
  static const double irt2 = 1.0 / std::sqrt(2.0);
  rmat m(n, n);
  int k = 0;
  for (int c = 0; c < n; ++c)
    for (int r = 0; r <= c; ++r) {
      double x = v(k++);
      if (r == c) {
        m(r, c) = x;
      } else {
        m(r, c) = x * irt2;
        m(c, r) = x * irt2;
      }
    }
  return m;
}

// --- problem data -----------------------------------------------------------

// Real linear functional over the PSD blocks (svec coordinates) and the free
// scalar variables.
struct LinearFunctional {
  std::vector<rvec> block_coeffs;  // one svec vector per block
  rvec free_coeffs;                // length = free_vars
};

// Standard form:
//   minimize   sum_j <C_j, X_j> + c_u . u
//   subject to sum_j <A_ij, X_j> + g_i . u = b_i   (i = 1..m)
//              X_j >= 0 (real symmetric PSD), u free.
struct SdpProblem {
  std::vector<std::pair<std::string, int>> blocks;  // (name, side)
  int free_vars = 0;
  LinearFunctional objective;
  std::vector<std::pair<LinearFunctional, double>> equalities;

  LinearFunctional zero_functional() const {
    LinearFunctional f;
    for (const auto& [name, n] : blocks) f.block_coeffs.push_back(rvec::Zero(svec_dim(n)));
    f.free_coeffs = rvec::Zero(free_vars);
    return f;
  }
};

enum class SdpStatus { optimal, infeasible, max_iter };

struct SdpSolution {
  SdpStatus status = SdpStatus::max_iter;
  double primal_value = 0.0;
  double dual_value = 0.0;
  std::vector<rmat> block_values;  // primal optimizers per block
  rvec free_values;
  int iterations = 0;

  // certification data
  double gap = 0.0;             // |primal - dual|
  double primal_residual = 0.0; // ||A(X) + G u - b||_inf
  double dual_residual = 0.0;
  std::string note;             // e.g. which infeasibility certificate fired
};

// Optional process-wide observer, invoked after every solve. Used by the
// acceptance suite and the verify command to certify all solved instances.
namespace detail {
inline std::mutex& observer_mutex() {
  static std::mutex m;
  return m;
}
inline std::function<void(const SdpSolution&)>& observer_slot() {
  static std::function<void(const SdpSolution&)> fn;
  return fn;
}
}  // namespace detail

inline void set_solve_observer(std::function<void(const SdpSolution&)> fn) {
  std::lock_guard<std::mutex> lock(detail::observer_mutex());
  detail::observer_slot() = std::move(fn);
}

inline void notify_observer(const SdpSolution& sol) {
  std::lock_guard<std::mutex> lock(detail::observer_mutex());
  if (detail::observer_slot()) detail::observer_slot()(sol);
}

// Debug dump: plain-text sparse triplets (block, row, col, value) per
// constraint; not a stability contract.
inline void dump_problem(const SdpProblem& p, std::ostream& os) {
  auto dump_functional = [&](const LinearFunctional& f) {
    for (size_t j = 0; j < p.blocks.size(); ++j) {
      rmat m = smat(f.block_coeffs[j], p.blocks[j].second);
      for (int r = 0; r < m.rows(); ++r)
        for (int c = r; c < m.cols(); ++c)
          if (std::abs(m(r, c)) > 1e-14)
            os << p.blocks[j].first << ' ' << r << ' ' << c << ' ' << m(r, c) << '\n';
    }
    for (int k = 0; k < p.free_vars; ++k)
      if (std::abs(f.free_coeffs(k)) > 1e-14) os << "_free " << k << " 0 " << f.free_coeffs(k) << '\n';
  };
  os << "objective\n";
  dump_functional(p.objective);
  for (size_t i = 0; i < p.equalities.size(); ++i) {
    os << "constraint " << i << " rhs " << p.equalities[i].second << '\n';
    dump_functional(p.equalities[i].first);
  }
}

// --- interior-point solver ----------------------------------------------------
// Mehrotra predictor-corrector with Nesterov-Todd scaling on the homogeneous
// self-dual embedding
//   A x + G u - b tau          = 0
//   -A^T y + c_s tau - z       = 0
//   -G^T y + c_u tau           = 0
//   b^T y - c^T (x,u) - kappa  = 0
//   x, z in PSD cone, tau, kappa >= 0.

namespace detail {

struct Scaling {
  rmat R, Rinv;
  rvec lambda;
};

// NT scaling from X = Lx Lx^T, Z = Lz Lz^T via SVD of Lz^T Lx.
inline Scaling nt_scaling(const rmat& X, const rmat& Z) {
  Eigen::LLT<rmat> lx(X), lz(Z);
  rmat Lx, Lz;
  if (lx.info() == Eigen::Success) {
    Lx = lx.matrixL();
  } else {
    Eigen::SelfAdjointEigenSolver<rmat> es(X);
    rvec ev = es.eigenvalues().cwiseMax(1e-14);
    Lx = es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
  }
  if (lz.info() == Eigen::Success) {
    Lz = lz.matrixL();
  } else {
    Eigen::SelfAdjointEigenSolver<rmat> es(Z);
    rvec ev = es.eigenvalues().cwiseMax(1e-14);
    Lz = es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
  }
  Eigen::JacobiSVD<rmat> svd(Lz.transpose() * Lx, Eigen::ComputeFullU | Eigen::ComputeFullV);
  rvec lam = svd.singularValues().cwiseMax(1e-150);
  rvec lam_isqrt = lam.cwiseSqrt().cwiseInverse();
  Scaling s;
  s.lambda = lam;
  s.R = Lx * svd.matrixV() * lam_isqrt.asDiagonal();
  s.Rinv = lam_isqrt.asDiagonal() * svd.matrixU().transpose() * Lz.transpose();
  return s;
}

// largest a in (0, cap] with Lambda + a * Dtilde >= 0
inline double max_step(const rvec& lambda, const rmat& dtilde, double cap) {
  rvec isq = lambda.cwiseSqrt().cwiseInverse();
  rmat m = isq.asDiagonal() * dtilde * isq.asDiagonal();
  Eigen::SelfAdjointEigenSolver<rmat> es(0.5 * (m + m.transpose()),
                                         Eigen::EigenvaluesOnly);
  double lmin = es.eigenvalues()(0);
  if (lmin >= 0.0) return cap;
  return std::min(cap, -1.0 / lmin);
}

}  // namespace detail

inline SdpSolution solve(const SdpProblem& prob, double tol = 1e-8, int max_iters = 200) {
  using detail::Scaling;

  const int nb = static_cast<int>(prob.blocks.size());
  require(nb > 0, "sdp: problem has no PSD blocks");
  int total_side = 0;
  for (const auto& [name, n] : prob.blocks) total_side += n;
  require(total_side <= 160, "sdp: total block dimension exceeds solver limit");

  std::vector<int> sides(nb), offs(nb);
  int ns = 0;
  for (int j = 0; j < nb; ++j) {
    sides[j] = prob.blocks[j].second;
    offs[j] = ns;
    ns += svec_dim(sides[j]);
  }
  const int nu = prob.free_vars;
  const int m = static_cast<int>(prob.equalities.size());
  require(m > 0, "sdp: problem has no constraints");

  auto flatten = [&](const LinearFunctional& f) {
    rvec v(ns);
    for (int j = 0; j < nb; ++j) v.segment(offs[j], svec_dim(sides[j])) = f.block_coeffs[j];
    return v;
  };

  rmat As(m, ns);
  rmat Au(m, std::max(nu, 0));
  rvec b(m);
  for (int i = 0; i < m; ++i) {
    As.row(i) = flatten(prob.equalities[i].first).transpose();
    if (nu > 0) Au.row(i) = prob.equalities[i].first.free_coeffs.transpose();
    b(i) = prob.equalities[i].second;
  }
  rvec cs = flatten(prob.objective);
  rvec cu = nu > 0 ? prob.objective.free_coeffs : rvec(0);

  // iterates
  rvec x(ns), z(ns);
  for (int j = 0; j < nb; ++j) {
    rvec e = svec(rmat::Identity(sides[j], sides[j]));
    x.segment(offs[j], e.size()) = e;
    z.segment(offs[j], e.size()) = e;
  }
  rvec u = rvec::Zero(nu);
  rvec y = rvec::Zero(m);
  double tau = 1.0, kappa = 1.0;

  const double nu_bar = static_cast<double>(total_side) + 1.0;
  const double bnorm = 1.0 + b.norm();
  const double cnorm = 1.0 + std::sqrt(cs.squaredNorm() + cu.squaredNorm());

  auto block_of = [&](const rvec& v, int j) { return smat(v.segment(offs[j], svec_dim(sides[j])), sides[j]); };

  SdpSolution sol;
  auto finalize = [&](SdpStatus st, int iters, const std::string& note) {
    sol.status = st;
    sol.iterations = iters;
    sol.note = note;
    double t = std::max(tau, 1e-300);
    sol.free_values = u / t;
    sol.block_values.clear();
    for (int j = 0; j < nb; ++j) sol.block_values.push_back(block_of(x, j) / t);
    sol.primal_value = (cs.dot(x) + (nu > 0 ? cu.dot(u) : 0.0)) / t;
    sol.dual_value = b.dot(y) / t;
    sol.gap = std::abs(sol.primal_value - sol.dual_value);
    rvec rp = As * x - b * tau;
    if (nu > 0) rp += Au * u;
    sol.primal_residual = rp.lpNorm<Eigen::Infinity>() / t;
    rvec rd = -As.transpose() * y + cs * tau - z;
    double rdf = nu > 0 ? (-Au.transpose() * y + cu * tau).lpNorm<Eigen::Infinity>() : 0.0;
    sol.dual_residual = std::max(rd.lpNorm<Eigen::Infinity>(), rdf) / t;
    notify_observer(sol);
    return sol;
  };

  int iter = 0;
  for (; iter < max_iters; ++iter) {
    // residuals
    rvec rp = As * x - b * tau;
    if (nu > 0) rp += Au * u;
    rvec rd = -As.transpose() * y + cs * tau - z;
    rvec rdf = nu > 0 ? rvec(-Au.transpose() * y + cu * tau) : rvec(0);
    double rg = b.dot(y) - cs.dot(x) - (nu > 0 ? cu.dot(u) : 0.0) - kappa;
    double mu = (x.dot(z) + tau * kappa) / nu_bar;

    // convergence / certificates
    double pobj = (cs.dot(x) + (nu > 0 ? cu.dot(u) : 0.0)) / tau;
    double dobj = b.dot(y) / tau;
    double pres = rp.norm() / tau / bnorm;
    double dres = std::sqrt(rd.squaredNorm() + (nu > 0 ? rdf.squaredNorm() : 0.0)) / tau / cnorm;
    double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (pres <= tol && dres <= tol && relgap <= tol)
      return finalize(SdpStatus::optimal, iter, "");

    if (b.dot(y) > 0) {
      double scale = b.dot(y);
      double inf_res = std::sqrt((As.transpose() * y + z).squaredNorm() +
                                 (nu > 0 ? (Au.transpose() * y).squaredNorm() : 0.0)) / scale;
      if (inf_res <= 1e-9 && tau <= 1e-8 * std::max(1.0, kappa))
        return finalize(SdpStatus::infeasible, iter, "primal infeasibility certificate");
    }
    double neg_cx = -(cs.dot(x) + (nu > 0 ? cu.dot(u) : 0.0));
    if (neg_cx > 0) {
      rvec ax = As * x;
      if (nu > 0) ax += Au * u;
      if (ax.norm() / neg_cx <= 1e-9 && tau <= 1e-8 * std::max(1.0, kappa))
        return finalize(SdpStatus::infeasible, iter, "dual infeasibility certificate (primal unbounded)");
    }

    // NT scaling per block
    std::vector<Scaling> sc(nb);
    for (int j = 0; j < nb; ++j) sc[j] = detail::nt_scaling(block_of(x, j), block_of(z, j));

    // K_W applied to constraint rows and to the objective
    auto apply_W = [&](const rvec& v) {
      rvec out(ns);
      for (int j = 0; j < nb; ++j) {
        rmat M = smat(v.segment(offs[j], svec_dim(sides[j])), sides[j]);
        rmat W = sc[j].R * sc[j].R.transpose();
        rmat WMW = W * M * W;
        out.segment(offs[j], svec_dim(sides[j])) = svec(0.5 * (WMW + WMW.transpose()));
      }
      return out;
    };
    rmat WA(ns, m);
    for (int i = 0; i < m; ++i) WA.col(i) = apply_W(As.row(i).transpose());
    rvec Wc = apply_W(cs);

    const int dim = m + nu + 1;
    rmat sys(dim, dim);
    sys.setZero();
    sys.topLeftCorner(m, m) = As * WA;
    if (nu > 0) {
      sys.block(0, m, m, nu) = Au;
      sys.block(m, 0, nu, m) = Au.transpose();
      sys.block(m, m + nu, nu, 1) = -cu;
      sys.block(m + nu, m, 1, nu) = -cu.transpose();
    }
    rvec AsWc = As * Wc;
    sys.block(0, m + nu, m, 1) = -(AsWc + b);
    sys.block(m + nu, 0, 1, m) = (b - AsWc).transpose();
    sys(m + nu, m + nu) = cs.dot(Wc) + kappa / tau;

    Eigen::PartialPivLU<rmat> lu(sys);

    // One Newton solve for given sigma and optional Mehrotra corrector terms.
    auto newton = [&](double sigma, const std::vector<rmat>* corr, double corr_tk,
                      rvec& dx, rvec& du, rvec& dy, rvec& dz, double& dtau, double& dkappa) {
      double one_minus = 1.0 - sigma;
      rvec rp_s = one_minus * rp;
      rvec rd_s = one_minus * rd;
      rvec rdf_s = nu > 0 ? rvec(one_minus * rdf) : rvec(0);
      double rg_s = one_minus * rg;
      double rhs_tk = sigma * mu - tau * kappa - corr_tk;

      // complementarity RHS in scaled space, mapped through R . R^T
      rvec ex(ns);
      for (int j = 0; j < nb; ++j) {
        const auto& s = sc[j];
        int n = sides[j];
        rmat rhs_c = rmat::Zero(n, n);
        for (int i = 0; i < n; ++i) rhs_c(i, i) = sigma * mu - s.lambda(i) * s.lambda(i);
        if (corr) rhs_c -= (*corr)[j];
        rmat E(n, n);
        for (int r = 0; r < n; ++r)
          for (int c = 0; c < n; ++c)
            E(r, c) = rhs_c(r, c) / (0.5 * (s.lambda(r) + s.lambda(c)));
        rmat M = s.R * E * s.R.transpose();
        ex.segment(offs[j], svec_dim(n)) = svec(0.5 * (M + M.transpose()));
      }

      rvec rhs(dim);
      rhs.head(m) = -rp_s - As * ex + WA.transpose() * rd_s;
      if (nu > 0) rhs.segment(m, nu) = rdf_s;
      rhs(m + nu) = -rg_s + cs.dot(ex) - Wc.dot(rd_s) + rhs_tk / tau;

      rvec solv = lu.solve(rhs);
      // one round of iterative refinement on the reduced system
      rvec resid = rhs - sys * solv;
      solv += lu.solve(resid);

      dy = solv.head(m);
      du = nu > 0 ? rvec(solv.segment(m, nu)) : rvec(0);
      dtau = solv(m + nu);
      dz = -As.transpose() * dy + cs * dtau + rd_s;
      dx = ex - apply_W(dz);
      dkappa = (rhs_tk - kappa * dtau) / tau;
    };

    auto step_bound = [&](const rvec& dx, const rvec& dz, double dtau, double dkappa) {
      double a = 1.0;
      for (int j = 0; j < nb; ++j) {
        const auto& s = sc[j];
        rmat dxt = s.Rinv * block_of(dx, j) * s.Rinv.transpose();
        rmat dzt = s.R.transpose() * block_of(dz, j) * s.R;
        a = detail::max_step(s.lambda, dxt, a);
        a = detail::max_step(s.lambda, dzt, a);
      }
      if (dtau < 0) a = std::min(a, -tau / dtau);
      if (dkappa < 0) a = std::min(a, -kappa / dkappa);
      return a;
    };

    // predictor
    rvec dx, du, dy, dz;
    double dtau, dkappa;
    newton(0.0, nullptr, 0.0, dx, du, dy, dz, dtau, dkappa);
    double a_aff = step_bound(dx, dz, dtau, dkappa);
    double mu_aff = ((x + a_aff * dx).dot(z + a_aff * dz) +
                     (tau + a_aff * dtau) * (kappa + a_aff * dkappa)) / nu_bar;
    double sigma = std::pow(std::max(0.0, mu_aff / mu), 3.0);
    sigma = std::min(std::max(sigma, 1e-8), 0.999);

    // corrector terms H(dXt_aff dZt_aff) per block
    std::vector<rmat> corr(nb);
    for (int j = 0; j < nb; ++j) {
      const auto& s = sc[j];
      rmat dxt = s.Rinv * block_of(dx, j) * s.Rinv.transpose();
      rmat dzt = s.R.transpose() * block_of(dz, j) * s.R;
      rmat h = dxt * dzt;
      corr[j] = 0.5 * (h + h.transpose());
    }
    double corr_tk = dtau * dkappa;

    newton(sigma, &corr, corr_tk, dx, du, dy, dz, dtau, dkappa);
    double alpha = 0.98 * step_bound(dx, dz, dtau, dkappa);
    alpha = std::min(alpha, 1.0);

    x += alpha * dx;
    z += alpha * dz;
    if (nu > 0) u += alpha * du;
    y += alpha * dy;
    tau += alpha * dtau;
    kappa += alpha * dkappa;
  }
  return finalize(SdpStatus::max_iter, iter, "iteration limit reached");
}

}  // namespace capbound::sdp
