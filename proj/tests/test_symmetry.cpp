// Copyright (c) 2026 capbound contributors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "capbound/capacity.hpp"
#include "test_support.hpp"

using namespace capbound;
using test_support::haar_unitary;
using test_support::random_channel;
using test_support::random_density;
using test_support::random_hermitian;
using test_support::trace_dist_at_phi;

TEST_CASE("pauli rep is a one-design") {
  GroupRep pauli = pauli_rep();
  CHECK(pauli.elements.size() == 4);
  CHECK(is_one_design_input(pauli));

  std::mt19937_64 rng(51);
  for (int rep = 0; rep < 50; ++rep) {
    cmat rho = random_density(rng, 2);
    cmat acc = cmat::Zero(2, 2);
    for (const auto& [u, v] : pauli.elements) acc += u * rho * u.adjoint();
    CHECK(max_abs(acc / 4.0 - 0.5 * cmat::Identity(2, 2)) < 1e-12);
  }
}

TEST_CASE("clifford rep") {
  GroupRep cliff = clifford1_rep();
  CHECK(cliff.elements.size() == 24);
  CHECK(is_one_design_input(cliff));
  CHECK(is_two_design_input(cliff));

  // contains the Pauli unitaries up to phase
  for (const cmat& p : {pauli_x(), pauli_y(), pauli_z()}) {
    cmat target = detail::phase_canonical(p);
    bool found = false;
    for (const auto& [u, v] : cliff.elements)
      if (max_abs(detail::phase_canonical(u) - target) < 1e-8) found = true;
    CHECK(found);
  }
}

TEST_CASE("clifford group average matches the closed form") {
  GroupRep cliff = clifford1_rep();
  std::mt19937_64 rng(52);
  for (int rep = 0; rep < 20; ++rep) {
    cmat t = random_hermitian(rng, 4);
    cmat acc = cmat::Zero(4, 4);
    for (const auto& [u, v] : cliff.elements) {
      cmat w = kron(u, u.conjugate());
      acc += w * t * w.adjoint();
    }
    acc /= 24.0;
    CHECK(max_abs(acc - bitwirl_closed_form(t, 2)) < 1e-10);
  }
}

TEST_CASE("bitwirl closed form examples") {
  CHECK(max_abs(bitwirl_closed_form(cmat::Identity(4, 4), 2) - cmat::Identity(4, 4)) < 1e-14);
  cmat phi = max_entangled_state(2);
  CHECK(max_abs(bitwirl_closed_form(phi, 2) - phi) < 1e-14);
  CHECK_THROWS_AS(bitwirl_closed_form(cmat::Identity(3, 3), 2), std::invalid_argument);
}

TEST_CASE("bitwirl against Haar Monte Carlo") {
  std::mt19937_64 rng(53);
  cmat t = random_hermitian(rng, 4);
  t /= trace_norm(t);  // unit scale keeps the sampling error within tolerance
  cmat acc = cmat::Zero(4, 4);
  const int samples = 100000;
  for (int s = 0; s < samples; ++s) {
    cmat u = haar_unitary(rng, 2);
    cmat w = kron(u, u.conjugate());
    acc += w * t * w.adjoint();
  }
  acc /= static_cast<double>(samples);
  CHECK(max_abs(acc - bitwirl_closed_form(t, 2)) < 2e-3);
}

TEST_CASE("twirl examples") {
  GroupRep pauli = pauli_rep();

  // depolarizing channels are already covariant
  ChoiOperator d = choi_from_kraus(depolarizing_qubit(0.3));
  CHECK(max_abs(twirl_choi(d, pauli).op.mat - d.op.mat) < 1e-12);

  // Pauli twirl of any qubit channel is unital
  ChoiOperator a = choi_from_kraus(amplitude_damping(0.4));
  ChoiOperator tw = twirl_choi(a, pauli);
  CHECK(max_abs(partial_trace(tw.op, {"A"}).mat - cmat::Identity(2, 2)) < 1e-9);

  // Clifford twirl of a random channel is depolarizing
  std::mt19937_64 rng(54);
  ChoiOperator r = choi_from_kraus(random_channel(rng, 2, 2, 3));
  ChoiOperator rtw = twirl_choi(r, clifford1_rep());
  auto fit = depolarizing_fit(rtw);
  CHECK(fit.residual < 1e-9);
  Channel fitted = depolarizing_qubit(std::min(1.0, fit.q * 3.0 / 4.0));
  CHECK(max_abs(choi_from_kraus(fitted).op.mat - rtw.op.mat) < 1e-8);

  CHECK_THROWS_AS(twirl_choi(choi_from_kraus(tensor(identity_channel(2), identity_channel(2))),
                             pauli),
                  std::invalid_argument);
}

TEST_CASE("twirling is idempotent") {
  GroupRep pauli = pauli_rep();
  for (double p : {0.2, 0.7}) {
    ChoiOperator tw = twirl_choi(choi_from_kraus(amplitude_damping(p)), pauli);
    CHECK(max_abs(twirl_choi(tw, pauli).op.mat - tw.op.mat) < 1e-10);
  }
}

TEST_CASE("covariance parameter identities") {
  GroupRep pauli = pauli_rep();
  for (double p : {0.1, 0.5, 1.0}) {
    CHECK(covariance_parameter(amplitude_damping(p), pauli) ==
          Catch::Approx(p / 2).margin(1e-6));
  }
  for (double p : {0.3, 0.8}) {
    CHECK(covariance_parameter(mix_ad_depol(p), pauli) ==
          Catch::Approx(p * p / 2).margin(1e-6));
  }
  CHECK(covariance_parameter(depolarizing_qubit(0.45), pauli) <= 1e-7);

  // twirled channels are exactly covariant
  for (const Channel& ch : {amplitude_damping(0.6), ad_after_dephasing(0.3)}) {
    Channel tw = kraus_from_choi(twirl_choi(choi_from_kraus(ch), pauli));
    CHECK(covariance_parameter(tw, pauli) <= 1e-7);
  }
}

TEST_CASE("jointly covariant pairs achieve the diamond distance at Phi") {
  GroupRep pauli = pauli_rep();
  // A_p versus its Pauli twirl (covariant pair under {1, Z})
  for (double p : {0.3, 0.6}) {
    ChoiOperator a = choi_from_kraus(amplitude_damping(p));
    ChoiOperator tw = twirl_choi(a, pauli);
    double dia = diamond_distance(a, tw);
    CHECK(dia == Catch::Approx(trace_dist_at_phi(a, tw)).margin(1e-6));
    CHECK(dia == Catch::Approx(p / 2).margin(1e-6));
  }
  // fully Pauli-covariant pair
  ChoiOperator d1 = choi_from_kraus(depolarizing_qubit(0.2));
  ChoiOperator d2 = choi_from_kraus(depolarizing_qubit(0.7));
  CHECK(diamond_distance(d1, d2) == Catch::Approx(trace_dist_at_phi(d1, d2)).margin(1e-6));
}

TEST_CASE("depolarizing fit") {
  // D_p has replacer weight q = 4p/3
  auto fit = depolarizing_fit(choi_from_kraus(depolarizing_qubit(0.3)));
  CHECK(fit.q == Catch::Approx(0.4).margin(1e-12));
  CHECK(fit.residual < 1e-12);

  auto fit_id = depolarizing_fit(choi_from_kraus(identity_channel(2)));
  CHECK(fit_id.q == Catch::Approx(0.0).margin(1e-12));
  CHECK(fit_id.residual < 1e-12);

  auto fit_ad = depolarizing_fit(choi_from_kraus(amplitude_damping(0.5)));
  CHECK(fit_ad.residual > 0.1);
}

TEST_CASE("group rep validation") {
  CHECK_THROWS_AS(GroupRep({}, "empty"), std::invalid_argument);
  cmat not_unitary = 2.0 * cmat::Identity(2, 2);
  CHECK_THROWS_AS(GroupRep({{not_unitary, not_unitary}}, "bad"), std::invalid_argument);
}
