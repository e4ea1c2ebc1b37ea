// Copyright (c) 2026 capbound contributors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "capbound/capacity.hpp"
#include "test_support.hpp"

using namespace capbound;
using test_support::ginibre;
using test_support::random_density;
using test_support::random_hermitian;

TEST_CASE("kron basics") {
  cmat i2 = cmat::Identity(2, 2);
  CHECK(max_abs(kron(i2, i2) - cmat::Identity(4, 4)) == 0.0);

  cmat zz = kron(pauli_z(), pauli_z());
  cvec diag(4);
  diag << 1, -1, -1, 1;
  CHECK(max_abs(zz - cmat(diag.asDiagonal())) == 0.0);

  cmat p0x = kron(proj(ket(0, 2)), pauli_x());
  CHECK(max_abs(p0x.topLeftCorner(2, 2) - pauli_x()) == 0.0);
  CHECK(p0x.bottomRightCorner(2, 2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("partial trace examples") {
  // maximally entangled marginal is maximally mixed
  MultipartiteOperator phi(max_entangled_state(2), {2, 2}, {"R", "A"});
  cmat marg = partial_trace(phi, {"R"}).mat;
  CHECK(max_abs(marg - 0.5 * cmat::Identity(2, 2)) < 1e-14);

  // product state
  std::mt19937_64 rng(11);
  cmat rho = random_density(rng, 2), sigma = random_density(rng, 3);
  MultipartiteOperator prod(kron(rho, sigma), {2, 3}, {"A", "B"});
  CHECK(max_abs(partial_trace(prod, {"B"}).mat - rho) < 1e-14);

  // Choi of A_p has identity marginal on A
  ChoiOperator choi = choi_from_kraus(amplitude_damping(0.37));
  CHECK(max_abs(partial_trace(choi.op, {"B"}).mat - cmat::Identity(2, 2)) < 1e-12);

  CHECK_THROWS_AS(partial_trace(phi, {"nope"}), std::invalid_argument);
}

TEST_CASE("partial trace composes") {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    cmat m = random_hermitian(rng, 12);
    MultipartiteOperator op(m, {2, 3, 2}, {"R", "X", "A"});
    cmat both = partial_trace(op, {"R", "X"}).mat;
    cmat seq = partial_trace(partial_trace(op, {"R"}), {"X"}).mat;
    CHECK(max_abs(both - seq) < 1e-12);
  }
}

TEST_CASE("partial transpose") {
  std::mt19937_64 rng(13);
  cmat m = random_hermitian(rng, 6);
  MultipartiteOperator op(m, {2, 3}, {"A", "B"});
  CHECK(max_abs(partial_transpose(partial_transpose(op, "B"), "B").mat - m) == 0.0);

  cmat rho = random_density(rng, 2), sigma = random_density(rng, 3);
  MultipartiteOperator prod(kron(rho, sigma), {2, 3}, {"A", "B"});
  CHECK(max_abs(partial_transpose(prod, "B").mat - kron(rho, sigma.transpose())) < 1e-14);

  // Phi^{T_B} = F/2 with minimum eigenvalue -1/2
  MultipartiteOperator phi(max_entangled_state(2), {2, 2}, {"A", "B"});
  auto eig = eig_hermitian(partial_transpose(phi, "B").mat);
  CHECK(eig.values(0) == Catch::Approx(-0.5).margin(1e-12));

  CHECK_THROWS_AS(partial_transpose(prod, "nope"), std::invalid_argument);
}

TEST_CASE("eig_hermitian") {
  auto ez = eig_hermitian(pauli_z());
  CHECK(ez.values(0) == Catch::Approx(-1.0).margin(1e-14));
  CHECK(ez.values(1) == Catch::Approx(1.0).margin(1e-14));

  auto epi = eig_hermitian(0.5 * cmat::Identity(2, 2));
  CHECK(epi.values(0) == Catch::Approx(0.5).margin(1e-14));
  CHECK(epi.values(1) == Catch::Approx(0.5).margin(1e-14));

  // nonzero spectrum of the A_{1/2} Choi operator: {0, 0, 1/2, 3/2}
  auto ec = eig_hermitian(choi_from_kraus(amplitude_damping(0.5)).op.mat);
  CHECK(ec.values(0) == Catch::Approx(0.0).margin(1e-12));
  CHECK(ec.values(1) == Catch::Approx(0.0).margin(1e-12));
  CHECK(ec.values(2) == Catch::Approx(0.5).margin(1e-12));
  CHECK(ec.values(3) == Catch::Approx(1.5).margin(1e-12));

  cmat bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(eig_hermitian(bad), std::invalid_argument);
}

TEST_CASE("eig_hermitian reconstruction up to dim 16") {
  std::mt19937_64 rng(14);
  for (int n : {2, 5, 9, 16}) {
    cmat m = random_hermitian(rng, n);
    auto e = eig_hermitian(m);
    cmat rec = e.vectors * e.values.asDiagonal() * e.vectors.adjoint();
    CHECK(max_abs(rec - m) < 1e-9);
  }
}

TEST_CASE("trace norm") {
  CHECK(trace_norm(pauli_z()) == Catch::Approx(2.0).margin(1e-14));

  std::mt19937_64 rng(15);
  for (int rep = 0; rep < 10; ++rep)
    CHECK(trace_norm(random_density(rng, 4)) == Catch::Approx(1.0).margin(1e-12));

  // || A_p(Phi) - X A_p(X Phi X) X ||_1 = 2p
  double p = 0.3;
  Channel ap = amplitude_damping(p);
  MultipartiteOperator phi(max_entangled_state(2), {2, 2}, {"R", "A"});
  cmat out = apply_to_subsystem(ap, phi, "A").mat;
  cmat x2 = kron(cmat::Identity(2, 2), pauli_x());
  MultipartiteOperator phix(x2 * phi.mat * x2, {2, 2}, {"R", "A"});
  cmat out_conj = x2 * apply_to_subsystem(ap, phix, "A").mat * x2;
  CHECK(trace_norm(out - out_conj) == Catch::Approx(2.0 * p).margin(1e-12));

  // half diamond distance of id and A_p is attained on |11>
  cmat v11 = proj(kron_vec(ket(1, 2), ket(1, 2)));
  MultipartiteOperator in(v11, {2, 2}, {"R", "A"});
  CHECK(trace_norm(v11 - apply_to_subsystem(ap, in, "A").mat) ==
        Catch::Approx(2.0 * p).margin(1e-12));

  // and its value on Phi follows the analytic trace-distance expression
  double q = 1.0 - std::sqrt(1.0 - p);
  double at_phi = p / 2 + 2 * std::sqrt(p * p / 16 + q * q / 4);
  CHECK(trace_norm(phi.mat - out) == Catch::Approx(at_phi).margin(1e-12));
}

TEST_CASE("trace norm dominates trace") {
  std::mt19937_64 rng(16);
  for (int rep = 0; rep < 50; ++rep) {
    cmat m = random_hermitian(rng, 5);
    CHECK(trace_norm(m) >= std::abs(m.trace().real()) - 1e-12);
  }
}

TEST_CASE("von Neumann entropy") {
  std::mt19937_64 rng(17);
  CHECK(von_neumann_entropy(proj(test_support::random_pure(rng, 4))) ==
        Catch::Approx(0.0).margin(1e-9));
  CHECK(von_neumann_entropy(0.5 * cmat::Identity(2, 2)) == Catch::Approx(1.0).margin(1e-12));

  cmat d(2, 2);
  d << 0.25, 0, 0, 0.75;
  CHECK(von_neumann_entropy(d) == Catch::Approx(0.8112781244591328).margin(1e-12));

  CHECK_THROWS_AS(von_neumann_entropy(2.0 * cmat::Identity(2, 2)), std::invalid_argument);
  CHECK_THROWS_AS(von_neumann_entropy(pauli_z()), std::invalid_argument);
}

TEST_CASE("entropy is unitary invariant") {
  std::mt19937_64 rng(18);
  for (int rep = 0; rep < 10; ++rep) {
    cmat rho = random_density(rng, 4, 2);
    cmat u = test_support::haar_unitary(rng, 4);
    CHECK(std::abs(von_neumann_entropy(u * rho * u.adjoint()) - von_neumann_entropy(rho)) <
          1e-9);
  }
}

TEST_CASE("entropic expressions") {
  MultipartiteOperator phi(max_entangled_state(2), {2, 2}, {"A", "B"});
  CHECK(entropic(phi, "I(A;B)") == Catch::Approx(2.0).margin(1e-10));

  std::mt19937_64 rng(19);
  cmat rho = random_density(rng, 2), sigma = random_density(rng, 2);
  MultipartiteOperator prod(kron(rho, sigma), {2, 2}, {"A", "B"});
  CHECK(entropic(prod, "I(A>B)") ==
        Catch::Approx(-von_neumann_entropy(rho)).margin(1e-10));
  CHECK(entropic(prod, "I(A>B)") <= 1e-10);

  // I(X;B) of the cq state built from the optimal ensemble equals chi(A_1/2)
  double p = 0.5, qstar = 0.0;
  double chi = holevo_ampdamp_closed_form(p, &qstar);
  cvec plus(2), minus(2);
  plus << std::sqrt(1 - qstar), std::sqrt(qstar);
  minus << std::sqrt(1 - qstar), -std::sqrt(qstar);
  rvec probs(2);
  probs << 0.5, 0.5;
  Ensemble ens(probs, {plus, minus});
  Channel ap = amplitude_damping(p);
  MultipartiteOperator cq = cq_output_state(ap, ens);
  CHECK(entropic(cq, "I(X;B)") == Catch::Approx(chi).margin(1e-9));
  CHECK(holevo_ensemble(ap, ens) == Catch::Approx(chi).margin(1e-9));

  CHECK_THROWS_AS(entropic(phi, "I(A;Q)"), std::invalid_argument);
  CHECK_THROWS_AS(entropic(phi, "Q(A)"), std::invalid_argument);
}

TEST_CASE("mutual information and conditional entropy ranges") {
  std::mt19937_64 rng(20);
  for (int rep = 0; rep < 500; ++rep) {
    int db = rep % 2 == 0 ? 2 : 3;
    cmat rho = random_density(rng, 2 * db);
    MultipartiteOperator op(rho, {2, db}, {"A", "B"});
    CHECK(mutual_information(op, {"A"}, {"B"}) >= -1e-9);
    CHECK(std::abs(conditional_entropy(op, {"A"}, {"B"})) <= 1.0 + 1e-9);
  }
}
