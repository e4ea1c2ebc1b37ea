// Copyright (c) 2026 capbound contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "capbound/linalg.hpp"

namespace capbound {

// Completely positive trace-preserving map held as a Kraus list.
struct Channel {
  int dim_in = 0;
  int dim_out = 0;
  std::vector<cmat> kraus;

  Channel() = default;

  Channel(int din, int dout, std::vector<cmat> ks, double tp_tol = 1e-9)
      : dim_in(din), dim_out(dout), kraus(std::move(ks)) {
    require(!kraus.empty(), "channel: empty Kraus list");
    cmat acc = cmat::Zero(dim_in, dim_in);
    for (const auto& k : kraus) {
      require(k.rows() == dim_out && k.cols() == dim_in,
              "channel: Kraus operator has wrong shape");
      acc += k.adjoint() * k;
    }
    require(max_abs(acc - cmat::Identity(dim_in, dim_in)) <= tp_tol,
            "channel: Kraus operators are not trace preserving");
  }

  cmat apply(const cmat& rho) const {
    require(rho.rows() == dim_in && rho.cols() == dim_in, "apply: state dimension mismatch");
    cmat out = cmat::Zero(dim_out, dim_out);
    for (const auto& k : kraus) out += k * rho * k.adjoint();
    return out;
  }
};

// Unnormalized Choi operator (id (x) N)(gamma); first factor is the input
// copy A, second the output B.
struct ChoiOperator {
  MultipartiteOperator op;  // labels {A, B}
  int dim_in = 0;
  int dim_out = 0;

  ChoiOperator() = default;

  ChoiOperator(cmat m, int din, int dout, double tol = 1e-9)
      : op(std::move(m), {din, dout}, {"A", "B"}), dim_in(din), dim_out(dout) {
    require(is_hermitian(op.mat, tol), "choi: not Hermitian");
    Eigen::SelfAdjointEigenSolver<cmat> es(hermitize(op.mat));
    require(es.eigenvalues()(0) >= -tol, "choi: not positive semidefinite");
    cmat marg = partial_trace(op, {"B"}).mat;
    require(max_abs(marg - cmat::Identity(din, din)) <= tol,
            "choi: partial trace over B is not the identity");
  }
};

struct StinespringIsometry {
  cmat v;  // (dim_out * dim_env) x dim_in, row index = b * dim_env + e
  int dim_env = 0;
};

inline MultipartiteOperator apply_to_subsystem(const Channel& ch,
                                               const MultipartiteOperator& op,
                                               const std::string& sub) {
  int pos = op.index_of(sub);
  require(op.dims[pos] == ch.dim_in, "apply_to_subsystem: dimension mismatch");
  long left = 1, right = 1;
  for (int k = 0; k < pos; ++k) left *= op.dims[k];
  for (size_t k = pos + 1; k < op.dims.size(); ++k) right *= op.dims[k];
  cmat il = cmat::Identity(left, left), ir = cmat::Identity(right, right);
  long dnew = left * ch.dim_out * right;
  cmat res = cmat::Zero(dnew, dnew);
  for (const auto& k : ch.kraus) {
    cmat big = kron(kron(il, k), ir);
    res += big * op.mat * big.adjoint();
  }
  std::vector<int> dims = op.dims;
  dims[pos] = ch.dim_out;
  return MultipartiteOperator(std::move(res), std::move(dims), op.labels);
}

inline ChoiOperator choi_from_kraus(const Channel& ch) {
  cmat c = cmat::Zero(ch.dim_in * ch.dim_out, ch.dim_in * ch.dim_out);
  for (const auto& k : ch.kraus) {
    cvec v(ch.dim_in * ch.dim_out);
    for (int i = 0; i < ch.dim_in; ++i) v.segment(i * ch.dim_out, ch.dim_out) = k.col(i);
    c += v * v.adjoint();
  }
  return ChoiOperator(hermitize(c), ch.dim_in, ch.dim_out);
}

inline Channel kraus_from_choi(const ChoiOperator& choi, double rank_cutoff = 1e-10) {
  auto [vals, vecs] = eig_hermitian(choi.op.mat, 1e-8);
  std::vector<cmat> ks;
  for (Eigen::Index m = vals.size() - 1; m >= 0; --m) {
    if (vals(m) <= rank_cutoff) break;
    double w = std::sqrt(vals(m));
    cmat k(choi.dim_out, choi.dim_in);
    for (int i = 0; i < choi.dim_in; ++i)
      for (int j = 0; j < choi.dim_out; ++j)
        k(j, i) = w * vecs(i * choi.dim_out + j, m);
    ks.push_back(std::move(k));
  }
  require(!ks.empty(), "kraus_from_choi: Choi operator has numerical rank zero");
  // exact trace preservation: right-multiply by (sum K^dag K)^{-1/2} to absorb
  // the O(solver tolerance) drift of Choi operators produced by SDP solves
  cmat s = cmat::Zero(choi.dim_in, choi.dim_in);
  for (const auto& k : ks) s += k.adjoint() * k;
  require(max_abs(s - cmat::Identity(choi.dim_in, choi.dim_in)) <= 1e-6,
          "kraus_from_choi: Choi marginal too far from the identity");
  Eigen::SelfAdjointEigenSolver<cmat> es(hermitize(s));
  cmat s_isqrt = es.eigenvectors() *
                 es.eigenvalues().cwiseMax(1e-12).cwiseSqrt().cwiseInverse().asDiagonal() *
                 es.eigenvectors().adjoint();
  for (auto& k : ks) k = k * s_isqrt;
  return Channel(choi.dim_in, choi.dim_out, std::move(ks), 1e-9);
}

inline StinespringIsometry stinespring(const Channel& ch) {
  int denv = static_cast<int>(ch.kraus.size());
  cmat v = cmat::Zero(ch.dim_out * denv, ch.dim_in);
  for (int e = 0; e < denv; ++e)
    for (int b = 0; b < ch.dim_out; ++b)
      v.row(static_cast<long>(b) * denv + e) = ch.kraus[e].row(b);
  return {v, denv};
}

// Complementary channel A -> E obtained by tracing out B from the minimal
// Stinespring dilation. Kraus operator j collects row j of every K_k.
inline Channel complementary(const Channel& ch) {
  int denv = static_cast<int>(ch.kraus.size());
  std::vector<cmat> ks;
  ks.reserve(ch.dim_out);
  for (int b = 0; b < ch.dim_out; ++b) {
    cmat l(denv, ch.dim_in);
    for (int e = 0; e < denv; ++e) l.row(e) = ch.kraus[e].row(b);
    ks.push_back(std::move(l));
  }
  return Channel(ch.dim_in, denv, std::move(ks));
}

inline Channel compose(const Channel& n, const Channel& m) {
  require(n.dim_in == m.dim_out, "compose: inner dimensions do not match");
  std::vector<cmat> ks;
  ks.reserve(n.kraus.size() * m.kraus.size());
  for (const auto& kn : n.kraus)
    for (const auto& km : m.kraus) ks.push_back(kn * km);
  return Channel(m.dim_in, n.dim_out, std::move(ks));
}

inline Channel tensor(const Channel& n, const Channel& m) {
  std::vector<cmat> ks;
  ks.reserve(n.kraus.size() * m.kraus.size());
  for (const auto& kn : n.kraus)
    for (const auto& km : m.kraus) ks.push_back(kron(kn, km));
  return Channel(n.dim_in * m.dim_in, n.dim_out * m.dim_out, std::move(ks));
}

inline Channel convex_mix(const std::vector<Channel>& chs, const std::vector<double>& probs) {
  require(!chs.empty() && chs.size() == probs.size(), "convex_mix: size mismatch");
  double sum = 0.0;
  for (double p : probs) {
    require(p >= -1e-12, "convex_mix: negative probability");
    sum += p;
  }
  require(std::abs(sum - 1.0) <= 1e-9, "convex_mix: probabilities do not sum to one");
  int din = chs[0].dim_in, dout = chs[0].dim_out;
  std::vector<cmat> ks;
  for (size_t i = 0; i < chs.size(); ++i) {
    require(chs[i].dim_in == din && chs[i].dim_out == dout,
            "convex_mix: channel dimension mismatch");
    double w = std::sqrt(std::max(0.0, probs[i]));
    for (const auto& k : chs[i].kraus) ks.push_back(w * k);
  }
  return Channel(din, dout, std::move(ks));
}

// --- named constructors -----------------------------------------------------

inline void require_prob(double p) {
  require(p >= 0.0 && p <= 1.0, "channel parameter p must lie in [0,1]");
}

inline Channel identity_channel(int d) {
  return Channel(d, d, {cmat::Identity(d, d)});
}

inline Channel amplitude_damping(double p) {
  require_prob(p);
  cmat k1(2, 2), k2(2, 2);
  k1 << 1, 0, 0, std::sqrt(1.0 - p);
  k2 << 0, std::sqrt(p), 0, 0;
  if (p == 0.0) return Channel(2, 2, {k1});
  return Channel(2, 2, {k1, k2});
}

inline Channel depolarizing_qubit(double p) {
  require_prob(p);
  std::vector<cmat> ks;
  ks.push_back(std::sqrt(1.0 - p) * cmat::Identity(2, 2));
  if (p > 0.0) {
    double w = std::sqrt(p / 3.0);
    ks.push_back(w * pauli_x());
    ks.push_back(w * pauli_y());
    ks.push_back(w * pauli_z());
  }
  return Channel(2, 2, std::move(ks));
}

inline Channel dephasing_z(double p) {
  require_prob(p);
  std::vector<cmat> ks;
  ks.push_back(std::sqrt(1.0 - p) * cmat::Identity(2, 2));
  if (p > 0.0) ks.push_back(std::sqrt(p) * pauli_z());
  return Channel(2, 2, std::move(ks));
}

// N_p = p A_p + (1-p) D_p
inline Channel mix_ad_depol(double p) {
  require_prob(p);
  if (p == 0.0) return depolarizing_qubit(0.0);
  if (p == 1.0) return amplitude_damping(1.0);
  return convex_mix({amplitude_damping(p), depolarizing_qubit(p)}, {p, 1.0 - p});
}

// M_p = A_p o Z_p
inline Channel ad_after_dephasing(double p) {
  require_prob(p);
  return compose(amplitude_damping(p), dephasing_z(p));
}

inline bool choi_close(const Channel& a, const Channel& b, double tol = 1e-8) {
  if (a.dim_in != b.dim_in || a.dim_out != b.dim_out) return false;
  return max_abs(choi_from_kraus(a).op.mat - choi_from_kraus(b).op.mat) <= tol;
}

}  // namespace capbound
