// Copyright (c) 2026 capbound contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "capbound/multipartite.hpp"

namespace capbound {

// Eigenvalues below this are clamped to zero before taking logs.
inline constexpr double kEntropyClamp = 1e-12;

inline double log2_safe(double x) { return std::log2(x); }

struct EigResult {
  rvec values;  // ascending
  cmat vectors; // columns
};

inline EigResult eig_hermitian(const cmat& m, double herm_tol = 1e-10) {
  require(is_hermitian(m, herm_tol), "eig_hermitian: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<cmat> es(hermitize(m));
  require(es.info() == Eigen::Success, "eig_hermitian: decomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

inline double trace_norm(const cmat& m) {
  if (is_hermitian(m, 1e-12)) {
    Eigen::SelfAdjointEigenSolver<cmat> es(hermitize(m));
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<cmat> svd(m);
  return svd.singularValues().sum();
}

// Shannon entropy of a spectrum, base 2, with 0 log 0 := 0.
inline double spectrum_entropy(const rvec& lambdas) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    double l = lambdas(i);
    if (l > kEntropyClamp) s -= l * std::log2(l);
  }
  return s;
}

inline double binary_entropy(double x) {
  double s = 0.0;
  if (x > kEntropyClamp) s -= x * std::log2(x);
  if (1.0 - x > kEntropyClamp) s -= (1.0 - x) * std::log2(1.0 - x);
  return s;
}

inline void require_state(const cmat& rho, double tol = 1e-9) {
  require(is_hermitian(rho, tol), "entropy: input is not Hermitian");
  require(std::abs(rho.trace().real() - 1.0) <= tol && std::abs(rho.trace().imag()) <= tol,
          "entropy: input does not have unit trace");
  Eigen::SelfAdjointEigenSolver<cmat> es(hermitize(rho));
  require(es.eigenvalues()(0) >= -tol, "entropy: input is not positive semidefinite");
}

inline double von_neumann_entropy(const cmat& rho, double tol = 1e-9) {
  require_state(rho, tol);
  if (rho.rows() == 2) {
    // closed form for qubits, exercised heavily by the ensemble optimizer
    double a = rho(0, 0).real();
    double d = rho(1, 1).real();
    double ob = std::norm(rho(0, 1));
    double t = a + d;
    double disc = std::sqrt(std::max(0.0, (a - d) * (a - d) + 4.0 * ob));
    double l1 = 0.5 * (t + disc), l2 = 0.5 * (t - disc);
    double s = 0.0;
    if (l1 > kEntropyClamp) s -= l1 * std::log2(l1);
    if (l2 > kEntropyClamp) s -= l2 * std::log2(l2);
    return s;
  }
  Eigen::SelfAdjointEigenSolver<cmat> es(hermitize(rho));
  return spectrum_entropy(es.eigenvalues());
}

// --- entropic expressions on multipartite states ---------------------------

inline double entropy_of(const MultipartiteOperator& op,
                         const std::vector<std::string>& subsystems) {
  std::vector<std::string> traced;
  std::set<std::string> keep(subsystems.begin(), subsystems.end());
  for (const auto& l : op.labels)
    if (!keep.count(l)) traced.push_back(l);
  for (const auto& s : subsystems) op.index_of(s);  // validate labels
  MultipartiteOperator red = traced.empty() ? op : partial_trace(op, traced);
  return von_neumann_entropy(red.mat);
}

// H(A|B) = S(AB) - S(B)
inline double conditional_entropy(const MultipartiteOperator& op,
                                  const std::vector<std::string>& a,
                                  const std::vector<std::string>& b) {
  std::vector<std::string> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  return entropy_of(op, ab) - entropy_of(op, b);
}

// I(A;B) = S(A) + S(B) - S(AB)
inline double mutual_information(const MultipartiteOperator& op,
                                 const std::vector<std::string>& a,
                                 const std::vector<std::string>& b) {
  std::vector<std::string> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  return entropy_of(op, a) + entropy_of(op, b) - entropy_of(op, ab);
}

// I(A>B) = S(B) - S(AB)
inline double coherent_information(const MultipartiteOperator& op,
                                   const std::vector<std::string>& a,
                                   const std::vector<std::string>& b) {
  std::vector<std::string> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  return entropy_of(op, b) - entropy_of(op, ab);
}

// Tiny expression dispatcher: "S(A)", "S(A,B)", "H(A|B)", "I(A;B)", "I(A>B)".
inline double entropic(const MultipartiteOperator& op, const std::string& expr) {
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (c == sep) {
        out.push_back(cur);
        cur.clear();
      } else if (c != ' ') {
        cur.push_back(c);
      }
    }
    out.push_back(cur);
    return out;
  };
  auto lp = expr.find('(');
  auto rp = expr.rfind(')');
  require(lp != std::string::npos && rp != std::string::npos && rp > lp,
          "entropic: malformed expression '" + expr + "'");
  std::string head = expr.substr(0, lp);
  std::string body = expr.substr(lp + 1, rp - lp - 1);
  if (head == "S" || head == "H") {
    auto bar = body.find('|');
    if (bar == std::string::npos) return entropy_of(op, split(body, ','));
    return conditional_entropy(op, split(body.substr(0, bar), ','),
                               split(body.substr(bar + 1), ','));
  }
  if (head == "I") {
    auto semi = body.find(';');
    if (semi != std::string::npos)
      return mutual_information(op, split(body.substr(0, semi), ','),
                                split(body.substr(semi + 1), ','));
    auto arrow = body.find('>');
    require(arrow != std::string::npos, "entropic: malformed expression '" + expr + "'");
    return coherent_information(op, split(body.substr(0, arrow), ','),
                                split(body.substr(arrow + 1), ','));
  }
  throw std::invalid_argument("entropic: unsupported form '" + expr + "'");
}

}  // namespace capbound
