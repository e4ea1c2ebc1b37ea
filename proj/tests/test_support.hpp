// Copyright (c) 2026 capbound contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>

#include "capbound/channel.hpp"

namespace test_support {

using namespace capbound;

inline cmat ginibre(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  cmat g(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) g(r, c) = cplx(gauss(rng), gauss(rng));
  return g;
}

inline cmat random_hermitian(std::mt19937_64& rng, int n) {
  return hermitize(ginibre(rng, n, n));
}

inline cmat random_density(std::mt19937_64& rng, int n, int rank = 0) {
  cmat g = ginibre(rng, n, rank == 0 ? n : rank);
  cmat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline cvec random_pure(std::mt19937_64& rng, int n) {
  cvec v = ginibre(rng, n, 1).col(0);
  return v / v.norm();
}

// Haar-distributed unitary via QR of a Ginibre matrix with the R diagonal
// phases absorbed.
inline cmat haar_unitary(std::mt19937_64& rng, int n) {
  cmat g = ginibre(rng, n, n);
  Eigen::HouseholderQR<cmat> qr(g);
  cmat q = qr.householderQ();
  cmat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    cplx d = r(i, i);
    q.col(i) *= (std::abs(d) > 1e-14) ? d / std::abs(d) : cplx(1, 0);
  }
  return q;
}

// Random channel from a Ginibre Choi operator with normalized marginal.
inline Channel random_channel(std::mt19937_64& rng, int din, int dout, int kraus_rank) {
  cmat g = ginibre(rng, din * dout, kraus_rank);
  cmat w = g * g.adjoint();
  MultipartiteOperator wop(w, {din, dout}, {"A", "B"});
  cmat marg = partial_trace(wop, {"B"}).mat;
  Eigen::SelfAdjointEigenSolver<cmat> es(hermitize(marg));
  cmat isqrt = es.eigenvectors() *
               es.eigenvalues().cwiseMax(1e-12).cwiseSqrt().cwiseInverse().asDiagonal() *
               es.eigenvectors().adjoint();
  cmat lift = kron(isqrt, cmat::Identity(dout, dout));
  cmat c = hermitize(lift * w * lift.adjoint());
  return kraus_from_choi(ChoiOperator(c, din, dout, 1e-7));
}

// half trace-distance of the two channel outputs on the maximally entangled
// input, a lower bound on the half diamond distance
inline double trace_dist_at_phi(const ChoiOperator& n, const ChoiOperator& m) {
  return 0.5 * trace_norm((n.op.mat - m.op.mat) / static_cast<double>(n.dim_in));
}

}  // namespace test_support
