// Copyright (c) 2026 capbound contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "capbound/channel.hpp"
#include "capbound/programs.hpp"

namespace capbound {

// Finite list of (input unitary, output unitary) pairs of a covariance group.
struct GroupRep {
  std::vector<std::pair<cmat, cmat>> elements;
  std::string name;

  GroupRep() = default;
  GroupRep(std::vector<std::pair<cmat, cmat>> elems, std::string n)
      : elements(std::move(elems)), name(std::move(n)) {
    require(!elements.empty(), "group rep: empty element list");
    for (const auto& [u, v] : elements) {
      require(is_unitary(u, 1e-10) && is_unitary(v, 1e-10),
              "group rep: element is not unitary");
    }
  }

  int dim_in() const { return static_cast<int>(elements[0].first.rows()); }
  int dim_out() const { return static_cast<int>(elements[0].second.rows()); }
};

inline GroupRep pauli_rep() {
  std::vector<std::pair<cmat, cmat>> elems;
  for (const cmat& p : {cmat(cmat::Identity(2, 2)), pauli_x(), pauli_y(), pauli_z()})
    elems.emplace_back(p, p);
  return GroupRep(std::move(elems), "pauli");
}

namespace detail {

// first nonzero entry made real positive, scanning row-major
inline cmat phase_canonical(const cmat& u) {
  for (Eigen::Index r = 0; r < u.rows(); ++r)
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      cplx e = u(r, c);
      if (std::abs(e) > 1e-8) return cmat(u * (std::conj(e) / std::abs(e)));
    }
  return u;
}

}  // namespace detail

// The 24 single-qubit Clifford unitaries up to phase, generated by closing
// {H, S} under multiplication.
inline GroupRep clifford1_rep() {
  cmat h(2, 2), s(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  s << 1, 0, 0, cplx(0, 1);

  std::vector<cmat> elems{detail::phase_canonical(cmat::Identity(2, 2))};
  std::vector<cmat> frontier = elems;
  while (!frontier.empty()) {
    std::vector<cmat> next;
    for (const auto& g : frontier)
      for (const cmat& gen : {h, s}) {
        cmat cand = detail::phase_canonical(gen * g);
        bool known = false;
        for (const auto& e : elems)
          if (max_abs(e - cand) < 1e-8) {
            known = true;
            break;
          }
        if (!known) {
          elems.push_back(cand);
          next.push_back(cand);
        }
      }
    frontier = std::move(next);
  }
  require(elems.size() == 24, "clifford1: closure did not produce 24 elements");
  std::vector<std::pair<cmat, cmat>> pairs;
  for (const auto& e : elems) pairs.emplace_back(e, e);
  return GroupRep(std::move(pairs), "clifford1");
}

// Choi operator of the twirled channel:
//   N^G = (1/|G|) sum_g (conj(U_g) (x) V_g) N (conj(U_g) (x) V_g)^dagger.
inline ChoiOperator twirl_choi(const ChoiOperator& n, const GroupRep& g) {
  require(g.dim_in() == n.dim_in && g.dim_out() == n.dim_out,
          "twirl_choi: representation dimensions do not match the channel");
  cmat acc = cmat::Zero(n.op.mat.rows(), n.op.mat.cols());
  for (const auto& [u, v] : g.elements) {
    cmat w = kron(u.conjugate(), v);
    acc += w * n.op.mat * w.adjoint();
  }
  acc /= static_cast<double>(g.elements.size());
  return ChoiOperator(hermitize(acc), n.dim_in, n.dim_out);
}

// Smallest eps such that the channel is eps-covariant: half diamond distance
// to its twirl.
inline double covariance_parameter(const Channel& ch, const GroupRep& g, double tol = 1e-8) {
  ChoiOperator c = choi_from_kraus(ch);
  return diamond_distance(c, twirl_choi(c, g), tol);
}

// Haar average of (U (x) conj(U)) T (U (x) conj(U))^dagger for Hermitian T:
//   (t - f)/(d^2 - 1) 1 + (d^2 f - t)/(d^2 - 1) Phi,
// with t = tr T and f = <Phi|T|Phi>.
inline cmat bitwirl_closed_form(const cmat& t, int d) {
  require(t.rows() == static_cast<long>(d) * d && t.cols() == t.rows(),
          "bitwirl: matrix side must be d^2");
  require(is_hermitian(t, 1e-10), "bitwirl: T must be Hermitian");
  cmat phi = max_entangled_state(d);
  double tt = t.trace().real();
  double f = (phi * t).trace().real();
  double dd = static_cast<double>(d) * d;
  return ((tt - f) / (dd - 1.0)) * cmat::Identity(t.rows(), t.cols()) +
         ((dd * f - tt) / (dd - 1.0)) * phi;
}

struct DepolarizingFit {
  double q = 0.0;        // mixing weight of the fitted (1-q) id + q tr(.) pi
  double residual = 0.0; // max-entry distance to the fitted x 1 + y Phi
};

// Identify the depolarizing channel whose Choi matches x 1 + y Phi.
inline DepolarizingFit depolarizing_fit(const ChoiOperator& n) {
  require(n.dim_in == n.dim_out, "depolarizing_fit: channel must be square");
  const int d = n.dim_in;
  cmat phi = max_entangled_state(d);
  double f = (phi * n.op.mat).trace().real();
  double dd = static_cast<double>(d) * d;
  double x = (d - f) / (dd - 1.0);
  double y = (dd * f - d) / (dd - 1.0);
  cmat fit = x * cmat::Identity(n.op.mat.rows(), n.op.mat.cols()) + y * phi;
  return {d * x, max_abs(n.op.mat - fit)};
}

// Average of U rho U^dagger over the input representation equals the
// maximally mixed state on every matrix unit.
inline bool is_one_design_input(const GroupRep& g, double tol = 1e-9) {
  const int d = g.dim_in();
  cmat pi = cmat::Identity(d, d) / static_cast<double>(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cmat e = ket(i, d) * ket(j, d).adjoint();
      cmat acc = cmat::Zero(d, d);
      for (const auto& [u, v] : g.elements) acc += u * e * u.adjoint();
      acc /= static_cast<double>(g.elements.size());
      cmat target = (i == j) ? pi : cmat(cmat::Zero(d, d));
      if (max_abs(acc - target) > tol) return false;
    }
  return true;
}

inline bool is_one_design_output(const GroupRep& g, double tol = 1e-9) {
  std::vector<std::pair<cmat, cmat>> swapped;
  for (const auto& [u, v] : g.elements) swapped.emplace_back(v, u);
  return is_one_design_input(GroupRep(std::move(swapped), g.name), tol);
}

// Checks the two-design property of the input representation by comparing the
// group average of (U (x) conj(U)) T (.)^dagger against the closed form on a
// small deterministic family of Hermitian operators.
inline bool is_two_design_input(const GroupRep& g, double tol = 1e-8) {
  const int d = g.dim_in();
  auto avg = [&](const cmat& t) {
    cmat acc = cmat::Zero(t.rows(), t.cols());
    for (const auto& [u, v] : g.elements) {
      cmat w = kron(u, u.conjugate());
      acc += w * t * w.adjoint();
    }
    return cmat(acc / static_cast<double>(g.elements.size()));
  };
  for (const auto& t : sdp::hermitian_basis(d * d)) {
    if (max_abs(avg(t) - bitwirl_closed_form(t, d)) > tol) return false;
  }
  return true;
}

}  // namespace capbound
