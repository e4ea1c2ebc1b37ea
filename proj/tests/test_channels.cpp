// Copyright (c) 2026 capbound contributors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace capbound;
using test_support::random_density;

namespace {

std::vector<Channel> constructor_family(double p) {
  return {amplitude_damping(p), depolarizing_qubit(p), dephasing_z(p),
          identity_channel(2),  mix_ad_depol(p),       ad_after_dephasing(p)};
}

bool same_action(const Channel& a, const Channel& b, double tol) {
  for (int i = 0; i < a.dim_in; ++i)
    for (int j = 0; j < a.dim_in; ++j) {
      cmat e = ket(i, a.dim_in) * ket(j, a.dim_in).adjoint();
      cmat da = cmat::Zero(a.dim_out, a.dim_out), db = da;
      for (const auto& k : a.kraus) da += k * e * k.adjoint();
      for (const auto& k : b.kraus) db += k * e * k.adjoint();
      if (max_abs(da - db) > tol) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("choi_from_kraus examples") {
  // identity channel -> gamma
  cmat gamma = gamma_vec(2) * gamma_vec(2).adjoint();
  CHECK(max_abs(choi_from_kraus(identity_channel(2)).op.mat - gamma) < 1e-14);

  // amplitude damping Choi with middle diagonal (0, p)
  double p = 0.3;
  cmat expect(4, 4);
  double s = std::sqrt(1 - p);
  expect << 1, 0, 0, s, 0, 0, 0, 0, 0, 0, p, 0, s, 0, 0, 1 - p;
  CHECK(max_abs(choi_from_kraus(amplitude_damping(p)).op.mat - expect) < 1e-12);

  // M_{1/2} = |00><00| + |1><1| (x) pi_2
  cmat m_half = choi_from_kraus(ad_after_dephasing(0.5)).op.mat;
  cmat expect2 = cmat::Zero(4, 4);
  expect2(0, 0) = 1.0;
  expect2(2, 2) = 0.5;
  expect2(3, 3) = 0.5;
  CHECK(max_abs(m_half - expect2) < 1e-12);
}

TEST_CASE("kraus_from_choi") {
  // gamma -> single Kraus proportional to the identity
  Channel idc = kraus_from_choi(choi_from_kraus(identity_channel(2)));
  CHECK(idc.kraus.size() == 1);
  CHECK(choi_close(idc, identity_channel(2), 1e-10));

  // A_p round trip acts like the defining Kraus pair
  Channel ap = amplitude_damping(0.4);
  Channel rt = kraus_from_choi(choi_from_kraus(ap));
  CHECK(rt.kraus.size() == 2);
  CHECK(same_action(ap, rt, 1e-10));

  // product Choi 1 (x) pi is the completely depolarizing channel
  cmat prod = kron(cmat::Identity(2, 2), 0.5 * cmat::Identity(2, 2));
  Channel depol = kraus_from_choi(ChoiOperator(prod, 2, 2));
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 5; ++rep) {
    cmat out = depol.apply(random_density(rng, 2));
    CHECK(max_abs(out - 0.5 * cmat::Identity(2, 2)) < 1e-10);
  }

  cmat bad = cmat::Identity(4, 4);
  bad(0, 0) = 2.0;  // marginal not the identity
  CHECK_THROWS_AS(ChoiOperator(bad, 2, 2), std::invalid_argument);
}

TEST_CASE("stinespring and complementary") {
  Channel ap = amplitude_damping(0.3);
  auto v = stinespring(ap);
  CHECK(v.dim_env == 2);
  CHECK(max_abs(v.v.adjoint() * v.v - cmat::Identity(2, 2)) < 1e-12);

  // tr_E(V rho V^dag) reproduces the channel
  std::mt19937_64 rng(24);
  for (int rep = 0; rep < 5; ++rep) {
    cmat rho = random_density(rng, 2);
    MultipartiteOperator lift(v.v * rho * v.v.adjoint(), {2, v.dim_env}, {"B", "E"});
    CHECK(max_abs(partial_trace(lift, {"E"}).mat - ap.apply(rho)) < 1e-9);
  }

  // complementary of A_1 sends rho to rho
  Channel c1 = complementary(amplitude_damping(1.0));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      cmat e = ket(i, 2) * ket(j, 2).adjoint();
      cmat out = cmat::Zero(2, 2);
      for (const auto& k : c1.kraus) out += k * e * k.adjoint();
      CHECK(max_abs(out - e) < 1e-12);
    }

  // environment dimension is the Kraus count
  CHECK(stinespring(depolarizing_qubit(0.5)).dim_env == 4);
}

TEST_CASE("complementary is an involution as channel action") {
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0})
    for (const Channel& ch : constructor_family(p)) {
      Channel cc = complementary(complementary(ch));
      CHECK(max_abs(choi_from_kraus(cc).op.mat - choi_from_kraus(ch).op.mat) < 1e-8);
    }
}

TEST_CASE("apply") {
  double p = 0.3;
  cmat out = amplitude_damping(p).apply(proj(ket(1, 2)));
  cmat expect = (1 - p) * proj(ket(1, 2)) + p * proj(ket(0, 2));
  CHECK(max_abs(out - expect) < 1e-12);

  cvec plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  cmat zout = dephasing_z(p).apply(proj(plus));
  CHECK(zout(0, 1).real() == Catch::Approx(0.5 * (1 - 2 * p)).margin(1e-12));

  // apply_to_subsystem on Phi reproduces the Choi up to 1/|A|
  MultipartiteOperator phi(max_entangled_state(2), {2, 2}, {"R", "A"});
  cmat lifted = apply_to_subsystem(amplitude_damping(p), phi, "A").mat;
  CHECK(max_abs(2.0 * lifted - choi_from_kraus(amplitude_damping(p)).op.mat) < 1e-12);

  CHECK_THROWS_AS(amplitude_damping(p).apply(cmat::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("apply preserves trace and positivity") {
  std::mt19937_64 rng(25);
  for (const Channel& ch : constructor_family(0.37)) {
    for (int rep = 0; rep < 200; ++rep) {
      cmat rho = random_density(rng, 2);
      cmat out = ch.apply(rho);
      CHECK(std::abs(out.trace().real() - 1.0) < 1e-10);
      Eigen::SelfAdjointEigenSolver<cmat> es(hermitize(out), Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues()(0) > -1e-10);
    }
  }
}

TEST_CASE("compose tensor mix") {
  CHECK(choi_close(compose(identity_channel(2), amplitude_damping(0.3)),
                   amplitude_damping(0.3), 1e-12));

  // convex mix agrees with pointwise mixtures
  double p = 0.6;
  Channel mix = convex_mix({amplitude_damping(p), depolarizing_qubit(p)}, {p, 1 - p});
  cmat pi = 0.5 * cmat::Identity(2, 2);
  cmat direct = p * amplitude_damping(p).apply(pi) + (1 - p) * depolarizing_qubit(p).apply(pi);
  CHECK(max_abs(mix.apply(pi) - direct) < 1e-12);

  Channel t = tensor(dephasing_z(0.2), amplitude_damping(0.3));
  CHECK(t.dim_in == 4);
  CHECK(t.dim_out == 4);
  std::mt19937_64 rng(26);
  cmat a = random_density(rng, 2), b = random_density(rng, 2);
  CHECK(max_abs(t.apply(kron(a, b)) -
                kron(dephasing_z(0.2).apply(a), amplitude_damping(0.3).apply(b))) < 1e-12);

  CHECK_THROWS_AS(convex_mix({identity_channel(2)}, {0.7}), std::invalid_argument);
  CHECK_THROWS_AS(compose(identity_channel(2), tensor(identity_channel(2), identity_channel(2))),
                  std::invalid_argument);
}

TEST_CASE("named constructors") {
  CHECK(choi_close(amplitude_damping(0.0), identity_channel(2), 1e-12));

  std::mt19937_64 rng(27);
  for (int rep = 0; rep < 5; ++rep) {
    CHECK(max_abs(amplitude_damping(1.0).apply(random_density(rng, 2)) - proj(ket(0, 2))) <
          1e-12);
    CHECK(max_abs(depolarizing_qubit(0.75).apply(random_density(rng, 2)) -
                  0.5 * cmat::Identity(2, 2)) < 1e-12);
  }

  CHECK_THROWS_AS(amplitude_damping(1.2), std::invalid_argument);
  CHECK_THROWS_AS(depolarizing_qubit(-0.1), std::invalid_argument);
}

TEST_CASE("constructor invariants on the p grid") {
  for (int i = 0; i <= 20; ++i) {
    double p = i / 20.0;
    for (const Channel& ch : constructor_family(p)) {
      // ChoiOperator construction validates PSD and the marginal at 1e-9
      ChoiOperator choi = choi_from_kraus(ch);
      Channel rt = kraus_from_choi(choi);
      CHECK(same_action(ch, rt, 1e-8));
    }
  }
}
