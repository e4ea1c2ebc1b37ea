// Copyright (c) 2026 capbound contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace capbound {

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rmat = Eigen::MatrixXd;
using rvec = Eigen::VectorXd;

inline cmat dag(const cmat& m) { return m.adjoint(); }

inline cmat kron(const cmat& a, const cmat& b) {
  cmat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline cvec kron_vec(const cvec& a, const cvec& b) {
  cvec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline cvec ket(int i, int dim) {
  cvec v = cvec::Zero(dim);
  v(i) = 1.0;
  return v;
}

inline cmat proj(const cvec& v) { return v * v.adjoint(); }

inline cmat pauli_x() {
  cmat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline cmat pauli_y() {
  cmat m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

inline cmat pauli_z() {
  cmat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

// Unnormalized maximally entangled vector sum_i |i>|i> on dim^2.
inline cvec gamma_vec(int dim) {
  cvec v = cvec::Zero(dim * dim);
  for (int i = 0; i < dim; ++i) v(i * dim + i) = 1.0;
  return v;
}

// Normalized maximally entangled state |Phi><Phi|.
inline cmat max_entangled_state(int dim) {
  cvec v = gamma_vec(dim) / std::sqrt(static_cast<double>(dim));
  return proj(v);
}

inline double max_abs(const cmat& m) { return m.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const cmat& m, double tol = 1e-10) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

inline cmat hermitize(const cmat& m) { return 0.5 * (m + m.adjoint()); }

inline bool is_unitary(const cmat& m, double tol = 1e-10) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m.adjoint() * m - cmat::Identity(m.rows(), m.cols())) <= tol;
}

inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace capbound
