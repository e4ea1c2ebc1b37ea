// Copyright (c) 2026 capbound contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "capbound/channel.hpp"
#include "capbound/herm_sdp.hpp"

namespace capbound {

namespace detail {

inline cmat ptrace_second(const cmat& x, int d1, int d2) {
  return partial_trace(MultipartiteOperator(x, {d1, d2}, {"_1", "_2"}), {"_2"}).mat;
}

inline cmat ptranspose_second(const cmat& x, int d1, int d2) {
  return partial_transpose(MultipartiteOperator(x, {d1, d2}, {"_1", "_2"}), "_2").mat;
}

inline void check_solved(const sdp::SdpSolution& s, const std::string& what) {
  require(s.status == sdp::SdpStatus::optimal, what + ": SDP solver did not reach optimality (" +
                                                   (s.note.empty() ? "max_iter" : s.note) + ")");
}

}  // namespace detail

struct DiamondResult {
  double value = 0.0;  // (1/2) ||N - M||_diamond
  sdp::SdpSolution raw;
};

// Half diamond-norm distance between two channels given as Choi operators:
//   minimize mu  s.t.  tr_B Z <= mu 1_A,  Z >= N - M,  Z >= 0.
inline DiamondResult diamond_distance_full(const ChoiOperator& n, const ChoiOperator& m,
                                           double tol = 1e-8) {
  require(n.dim_in == m.dim_in && n.dim_out == m.dim_out,
          "diamond_distance: channel dimensions differ");
  const int da = n.dim_in, db = n.dim_out;
  sdp::HermitianSdpBuilder bld;
  int z = bld.add_var("Z", da * db);
  int mu = bld.add_free_var();

  sdp::HermExpr cap(da);
  cap.add(z, [da, db](const cmat& x) { return cmat(-detail::ptrace_second(x, da, db)); });
  cap.add_free(mu, cmat::Identity(da, da));
  bld.add_psd("S", cap);

  sdp::HermExpr lower(da * db);
  lower.add(z, sdp::sop_identity());
  lower.add_const(-(n.op.mat - m.op.mat));
  bld.add_psd("W", lower);

  bld.set_objective_free(mu, 1.0);
  auto res = bld.solve(tol);
  detail::check_solved(res.raw, "diamond_distance");
  return {std::max(0.0, res.free_values(0)), res.raw};
}

inline double diamond_distance(const ChoiOperator& n, const ChoiOperator& m, double tol = 1e-8) {
  return diamond_distance_full(n, m, tol).value;
}

inline double diamond_distance(const Channel& n, const Channel& m, double tol = 1e-8) {
  return diamond_distance(choi_from_kraus(n), choi_from_kraus(m), tol);
}

struct EbResult {
  double value = 0.0;
  ChoiOperator closest_eb;  // PPT Choi operator of the nearest EB channel
  sdp::SdpSolution raw;
};

// Entanglement-breaking parameter (PPT is exact for |A||B| <= 6):
//   minimize mu  s.t.  tr_B Z <= mu 1_A,  Z >= N - M,  Z >= 0,
//                      M >= 0, tr_B M = 1_A, M^{T_B} >= 0.
inline EbResult eb_parameter_full(const ChoiOperator& n, double tol = 1e-8) {
  const int da = n.dim_in, db = n.dim_out;
  require(da * db <= 6,
          "eb_parameter: |A||B| > 6, PPT no longer characterizes separability");
  sdp::HermitianSdpBuilder bld;
  int z = bld.add_var("Z", da * db);
  int mvar = bld.add_var("M", da * db);
  int mu = bld.add_free_var();

  sdp::HermExpr cap(da);
  cap.add(z, [da, db](const cmat& x) { return cmat(-detail::ptrace_second(x, da, db)); });
  cap.add_free(mu, cmat::Identity(da, da));
  bld.add_psd("S", cap);

  sdp::HermExpr lower(da * db);
  lower.add(z, sdp::sop_identity()).add(mvar, sdp::sop_identity());
  lower.add_const(-n.op.mat);
  bld.add_psd("W", lower);

  sdp::HermExpr marg(da);
  marg.add(mvar, [da, db](const cmat& x) { return detail::ptrace_second(x, da, db); });
  marg.add_const(-cmat::Identity(da, da));
  bld.add_eq_zero(marg);

  sdp::HermExpr ppt(da * db);
  ppt.add(mvar, [da, db](const cmat& x) { return detail::ptranspose_second(x, da, db); });
  bld.add_psd("P", ppt);

  bld.set_objective_free(mu, 1.0);
  auto res = bld.solve(tol);
  detail::check_solved(res.raw, "eb_parameter");
  return {std::max(0.0, res.free_values(0)), ChoiOperator(res.vars[mvar], da, db, 1e-6), res.raw};
}

inline double eb_parameter(const ChoiOperator& n, double tol = 1e-8) {
  return eb_parameter_full(n, tol).value;
}

// Choi operator of the Hadamard channel with Gram matrix gamma over the
// input vectors S: sum_kl Gamma_kl |conj(psi_k)><conj(psi_l)| (x) |k><l|.
inline cmat hadamard_choi_from_gram(const cmat& gamma, const std::vector<cvec>& s, int dim_out) {
  const int k_count = static_cast<int>(s.size());
  const int da = static_cast<int>(s[0].size());
  cmat out = cmat::Zero(da * dim_out, da * dim_out);
  for (int k = 0; k < k_count; ++k)
    for (int l = 0; l < k_count; ++l) {
      if (gamma(k, l) == cplx(0, 0)) continue;
      cvec vk = kron_vec(s[k].conjugate(), ket(k, dim_out));
      cvec vl = kron_vec(s[l].conjugate(), ket(l, dim_out));
      out += gamma(k, l) * vk * vl.adjoint();
    }
  return out;
}

struct HadamardSResult {
  double value = 0.0;
  cmat gram;  // PSD with unit diagonal
  sdp::SdpSolution raw;
};

// Had_S parameter for a fixed overcomplete set S:
//   minimize mu  s.t.  tr_B Z <= mu 1_A,  Z >= N - O^Gamma,  Z >= 0,
//                      Gamma >= 0, <k|Gamma|k> = 1.
inline HadamardSResult hadamard_s_parameter_full(const ChoiOperator& n,
                                                 const std::vector<cvec>& s, double tol = 1e-8) {
  const int da = n.dim_in, db = n.dim_out;
  require(!s.empty(), "hadamard_s: empty vector set");
  const int kc = static_cast<int>(s.size());
  require(kc <= db, "hadamard_s: more vectors than output dimensions");
  cmat resolution = cmat::Zero(da, da);
  for (const auto& v : s) {
    require(static_cast<int>(v.size()) == da, "hadamard_s: vector dimension mismatch");
    resolution += v * v.adjoint();
  }
  require(max_abs(resolution - cmat::Identity(da, da)) <= 1e-9,
          "hadamard_s: vectors do not resolve the identity");

  sdp::HermitianSdpBuilder bld;
  int z = bld.add_var("Z", da * db);
  int gv = bld.add_var("Gamma", kc);
  int mu = bld.add_free_var();

  sdp::HermExpr cap(da);
  cap.add(z, [da, db](const cmat& x) { return cmat(-detail::ptrace_second(x, da, db)); });
  cap.add_free(mu, cmat::Identity(da, da));
  bld.add_psd("S", cap);

  sdp::HermExpr lower(da * db);
  lower.add(z, sdp::sop_identity());
  lower.add(gv, [&s, db](const cmat& g) { return hadamard_choi_from_gram(g, s, db); });
  lower.add_const(-n.op.mat);
  bld.add_psd("W", lower);

  for (int k = 0; k < kc; ++k) {
    cmat ekk = cmat::Zero(kc, kc);
    ekk(k, k) = 1.0;
    bld.add_scalar_eq({{gv, ekk}}, {}, 1.0);
  }

  bld.set_objective_free(mu, 1.0);
  auto res = bld.solve(tol);
  detail::check_solved(res.raw, "hadamard_s_parameter");
  return {std::max(0.0, res.free_values(0)), res.vars[gv], res.raw};
}

inline double hadamard_s_parameter(const ChoiOperator& n, const std::vector<cvec>& s,
                                   double tol = 1e-8) {
  return hadamard_s_parameter_full(n, s, tol).value;
}

inline std::vector<cvec> computational_basis_set(int d) {
  std::vector<cvec> s;
  for (int i = 0; i < d; ++i) s.push_back(ket(i, d));
  return s;
}

// Choi operator of D o N on A(x)E, linear in D_BE:
//   tr_B[ (N_AB^{T_B} (x) 1_E) (1_A (x) D_BE) ].
inline cmat compose_choi_link(const cmat& n_ab, const cmat& d_be, int da, int db, int de) {
  cmat nt = detail::ptranspose_second(n_ab, da, db);
  MultipartiteOperator left(kron(nt, cmat::Identity(de, de)), {da, db, de}, {"A", "B", "E"});
  MultipartiteOperator right(kron(cmat::Identity(da, da), d_be), {da, db, de}, {"A", "B", "E"});
  MultipartiteOperator prod(left.mat * right.mat, {da, db, de}, {"A", "B", "E"});
  return partial_trace(prod, {"B"}).mat;
}

struct HadamardDegResult {
  double value = 0.0;
  ChoiOperator degrading;  // Choi of the PPT degrading map D: B -> E
  sdp::SdpSolution raw;
};

// Had_deg parameter via the degrading-map SDP (E = minimal environment):
//   minimize mu  s.t.  tr_E Z <= mu 1_A,  Z >= N_c - J(D o N),  Z >= 0,
//                      D >= 0, tr_E D = 1_B, D^{T_E} >= 0.
inline HadamardDegResult hadamard_deg_parameter_full(const Channel& ch, double tol = 1e-8) {
  const int da = ch.dim_in, db = ch.dim_out;
  ChoiOperator choi = choi_from_kraus(ch);
  Channel min_ch = ch;
  {
    // composed channels can carry redundant Kraus operators; the environment
    // must be the minimal one
    auto eig = eig_hermitian(choi.op.mat);
    int rank = 0;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i)
      if (eig.values(i) > 1e-10) ++rank;
    if (rank < static_cast<int>(ch.kraus.size())) min_ch = kraus_from_choi(choi);
  }
  const int de = static_cast<int>(min_ch.kraus.size());
  require(db * de <= 6,
          "hadamard_deg: |B||E| > 6, PPT no longer characterizes separability");
  cmat n_ab = choi_from_kraus(min_ch).op.mat;
  cmat n_ae = choi_from_kraus(complementary(min_ch)).op.mat;

  sdp::HermitianSdpBuilder bld;
  int z = bld.add_var("Z", da * de);
  int dv = bld.add_var("D", db * de);
  int mu = bld.add_free_var();

  sdp::HermExpr cap(da);
  cap.add(z, [da, de](const cmat& x) { return cmat(-detail::ptrace_second(x, da, de)); });
  cap.add_free(mu, cmat::Identity(da, da));
  bld.add_psd("S", cap);

  sdp::HermExpr lower(da * de);
  lower.add(z, sdp::sop_identity());
  lower.add(dv, [n_ab, da, db, de](const cmat& d) {
    return compose_choi_link(n_ab, d, da, db, de);
  });
  lower.add_const(-n_ae);
  bld.add_psd("W", lower);

  sdp::HermExpr marg(db);
  marg.add(dv, [db, de](const cmat& x) { return detail::ptrace_second(x, db, de); });
  marg.add_const(-cmat::Identity(db, db));
  bld.add_eq_zero(marg);

  sdp::HermExpr ppt(db * de);
  ppt.add(dv, [db, de](const cmat& x) { return detail::ptranspose_second(x, db, de); });
  bld.add_psd("P", ppt);

  bld.set_objective_free(mu, 1.0);
  auto res = bld.solve(tol);
  detail::check_solved(res.raw, "hadamard_deg_parameter");
  return {std::max(0.0, res.free_values(0)), ChoiOperator(res.vars[dv], db, de, 1e-6), res.raw};
}

inline double hadamard_deg_parameter(const Channel& ch, double tol = 1e-8) {
  return hadamard_deg_parameter_full(ch, tol).value;
}

struct CBetaResult {
  double value_bits = 0.0;  // log2 of the SDP optimum
  double beta = 1.0;
  sdp::SdpSolution raw;
};

// Strong-converse bound C_beta = log2 beta(N):
//   minimize tr(S_B)  s.t.  -R <= N^{T_B} <= R,  -1 (x) S <= R^{T_B} <= 1 (x) S.
// Any feasible (R, S) is automatically PSD, so both are declared as cone
// variables directly.
inline CBetaResult c_beta_full(const ChoiOperator& n, double tol = 1e-8) {
  const int da = n.dim_in, db = n.dim_out;
  cmat nt = detail::ptranspose_second(n.op.mat, da, db);

  sdp::HermitianSdpBuilder bld;
  int sv = bld.add_var("S", db);
  int rv = bld.add_var("R", da * db);

  sdp::HermExpr up(da * db);
  up.add(rv, sdp::sop_identity()).add_const(-nt);
  bld.add_psd("W1", up);
  sdp::HermExpr dn(da * db);
  dn.add(rv, sdp::sop_identity()).add_const(nt);
  bld.add_psd("W2", dn);

  auto lift = [da](const cmat& x) { return kron(cmat::Identity(da, da), x); };
  sdp::HermExpr up2(da * db);
  up2.add(sv, lift).add(rv, [da, db](const cmat& x) {
    return cmat(-detail::ptranspose_second(x, da, db));
  });
  bld.add_psd("W3", up2);
  sdp::HermExpr dn2(da * db);
  dn2.add(sv, lift).add(rv, [da, db](const cmat& x) {
    return detail::ptranspose_second(x, da, db);
  });
  bld.add_psd("W4", dn2);

  bld.set_objective_term(sv, cmat::Identity(db, db));
  auto res = bld.solve(tol);
  detail::check_solved(res.raw, "c_beta");
  double beta = res.raw.primal_value;
  return {std::log2(beta), beta, res.raw};
}

inline double c_beta(const ChoiOperator& n, double tol = 1e-8) { return c_beta_full(n, tol).value_bits; }

// --- analytic certificates for the amplitude damping channel -----------------

inline double eb_ampdamp_lower_bound(double p) {
  require_prob(p);
  // (1-p)(2 sqrt(1-p) - p) / (4(1-p) - p^2), simplified
  return (1.0 - p) / (2.0 * std::sqrt(1.0 - p) + p);
}

struct EbPrimalCertificate {
  double value = 0.0;  // objective of the feasible point, equals the closed form
  cmat n_ab, p_ab, h_a, m_a;
  double max_violation = 0.0;
};

// Feasible point of the primal EB SDP for A_p built from the one-parameter
// ansatz q1 = (1+u)^2/2, q2 = (1-u)^2/2, r = (1-u^2)/2 at the maximizing
// u = p / (2 sqrt(1-p) + p).
inline EbPrimalCertificate eb_primal_certificate_ampdamp(double p) {
  require_prob(p);
  double sq = std::sqrt(1.0 - p);
  double u = p / (2.0 * sq + p);
  double q1 = 0.5 * (1.0 + u) * (1.0 + u);
  double q2 = 0.5 * (1.0 - u) * (1.0 - u);
  double r = 0.5 * (1.0 - u * u);

  EbPrimalCertificate cert;
  cert.n_ab = cmat::Zero(4, 4);
  cert.n_ab(0, 0) = q1;
  cert.n_ab(3, 3) = q2;
  cert.n_ab(0, 3) = r;
  cert.n_ab(3, 0) = r;
  cert.p_ab = cmat::Zero(4, 4);
  cert.p_ab(1, 1) = q1;
  cert.p_ab(2, 2) = q2;
  cert.p_ab(1, 2) = -r;
  cert.p_ab(2, 1) = -r;
  cert.h_a = cmat::Zero(2, 2);
  cert.h_a(0, 0) = q1;
  cert.h_a(1, 1) = q2;
  cert.m_a = cmat::Zero(2, 2);
  cert.m_a(0, 0) = q1 + r;
  cert.m_a(1, 1) = q2 + r;

  cmat ap = choi_from_kraus(amplitude_damping(p)).op.mat;
  cert.value = 0.5 * ((cert.n_ab.adjoint() * ap).trace().real() - cert.h_a.trace().real());

  auto min_eig = [](const cmat& m) {
    Eigen::SelfAdjointEigenSolver<cmat> es(hermitize(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  };
  double viol = 0.0;
  viol = std::max(viol, cert.m_a.trace().real() - 2.0);
  viol = std::max(viol, -min_eig(cert.m_a));
  viol = std::max(viol, -min_eig(cert.n_ab));
  viol = std::max(viol, -min_eig(cert.p_ab));
  viol = std::max(viol, -min_eig(kron(cert.m_a, cmat::Identity(2, 2)) - cert.n_ab));
  cmat ptb = detail::ptranspose_second(cert.p_ab, 2, 2);
  viol = std::max(viol, -min_eig(kron(cert.h_a, cmat::Identity(2, 2)) - cert.n_ab - ptb));
  cert.max_violation = std::max(viol, 0.0);
  return cert;
}

struct DiamondDualCertificate {
  cmat z_ab;
  double bound = 0.0;       // certified upper bound on (1/2) ||id - A_p||_diamond
  double max_violation = 0.0;
  double marginal_error = 0.0;  // || tr_B Z - p 1 ||_max
};

// Analytic dual feasible point certifying (1/2)||id - A_p||_diamond <= p.
inline DiamondDualCertificate ampdamp_diamond_dual_certificate(double p) {
  require(p > 0.0 && p <= 1.0, "dual certificate requires p in (0,1]");
  double q = 1.0 - std::sqrt(1.0 - p);
  DiamondDualCertificate cert;
  cert.z_ab = cmat::Zero(4, 4);
  cert.z_ab(0, 0) = q * q / p;
  cert.z_ab(1, 1) = p - q * q / p;
  cert.z_ab(3, 3) = p;
  cert.z_ab(0, 3) = q;
  cert.z_ab(3, 0) = q;
  cert.bound = p;

  cmat gamma = gamma_vec(2) * gamma_vec(2).adjoint();
  cmat ap = choi_from_kraus(amplitude_damping(p)).op.mat;
  auto min_eig = [](const cmat& m) {
    Eigen::SelfAdjointEigenSolver<cmat> es(hermitize(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  };
  double viol = 0.0;
  viol = std::max(viol, -min_eig(cert.z_ab));
  viol = std::max(viol, -min_eig(cert.z_ab - (gamma - ap)));
  cert.max_violation = std::max(viol, 0.0);
  cert.marginal_error =
      max_abs(detail::ptrace_second(cert.z_ab, 2, 2) - p * cmat::Identity(2, 2));
  return cert;
}

}  // namespace capbound
