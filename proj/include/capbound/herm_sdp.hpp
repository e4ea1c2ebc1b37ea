// Copyright (c) 2026 capbound contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "capbound/matrix.hpp"
#include "capbound/sdp.hpp"

namespace capbound::sdp {

// M >= 0 over the complex Hermitian matrices iff embed_hermitian(M) >= 0 over
// the real symmetric matrices of twice the side.
inline rmat embed_hermitian(const cmat& m) {
  const int n = static_cast<int>(m.rows());
  rmat out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = m.real();
  out.topRightCorner(n, n) = -m.imag();
  out.bottomLeftCorner(n, n) = m.imag();
  out.bottomRightCorner(n, n) = m.real();
  return out;
}

// Inverse of the embedding, averaging away the J-skew component a real
// solver iterate may carry.
inline cmat unembed_hermitian(const rmat& x) {
  const int n = static_cast<int>(x.rows()) / 2;
  rmat re = 0.5 * (x.topLeftCorner(n, n) + x.bottomRightCorner(n, n));
  rmat im = 0.5 * (x.bottomLeftCorner(n, n) - x.topRightCorner(n, n));
  cmat m = re.cast<cplx>() + cplx(0, 1) * im.cast<cplx>();
  return hermitize(m);
}

// Orthonormal basis of the Hermitian matrices of side n under <A,B> = tr(AB).
inline std::vector<cmat> hermitian_basis(int n) {
  static const double irt2 = 1.0 / std::sqrt(2.0);
  std::vector<cmat> basis;
  basis.reserve(static_cast<size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    cmat e = cmat::Zero(n, n);
    e(k, k) = 1.0;
    basis.push_back(e);
  }
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      cmat e = cmat::Zero(n, n);
      e(k, l) = irt2;
      e(l, k) = irt2;
      basis.push_back(e);
      cmat f = cmat::Zero(n, n);
      f(k, l) = cplx(0, -irt2);
      f(l, k) = cplx(0, irt2);
      basis.push_back(f);
    }
  return basis;
}

using Superop = std::function<cmat(const cmat&)>;

// Affine Hermitian-matrix expression sum_v L_v(X_v) + sum_k u_k G_k + K on a
// fixed output side.
struct HermExpr {
  int side = 0;
  cmat constant;  // K
  std::vector<std::pair<int, Superop>> terms;       // (var id, superoperator)
  std::vector<std::pair<int, cmat>> free_terms;     // (free id, G)

  explicit HermExpr(int n) : side(n), constant(cmat::Zero(n, n)) {}

  HermExpr& add(int var, Superop op) {
    terms.emplace_back(var, std::move(op));
    return *this;
  }
  HermExpr& add_free(int id, cmat g) {
    free_terms.emplace_back(id, std::move(g));
    return *this;
  }
  HermExpr& add_const(const cmat& k) {
    constant += k;
    return *this;
  }
};

inline Superop sop_identity(double scale = 1.0) {
  return [scale](const cmat& x) { return cmat(scale * x); };
}

// Builds a real SdpProblem from complex Hermitian PSD variables, Hermitian
// equality constraints, and free scalars. All Hermitian variables are
// implicitly PSD; every complex constraint is lowered through the real
// embedding over an orthonormal Hermitian functional basis, which keeps the
// constraint rows linearly independent.
class HermitianSdpBuilder {
 public:
  int add_var(const std::string& name, int side) {
    var_sides_.push_back(side);
    prob_.blocks.emplace_back(name, 2 * side);
    objective_.emplace_back(cmat::Zero(side, side));
    return static_cast<int>(var_sides_.size()) - 1;
  }

  int add_free_var() { return prob_.free_vars++; }

  void add_eq_zero(const HermExpr& e) {
    const auto funcs = hermitian_basis(e.side);
    // images of the variable bases under each term's superoperator
    std::vector<int> term_var;
    std::vector<std::vector<cmat>> images;
    for (const auto& [v, op] : e.terms) {
      term_var.push_back(v);
      std::vector<cmat> img;
      for (const auto& g : hermitian_basis(var_sides_[v])) img.push_back(op(g));
      images.push_back(std::move(img));
    }
    for (const auto& f : funcs) {
      LinearFunctional row = zero_row();
      for (size_t t = 0; t < term_var.size(); ++t) {
        int v = term_var[t];
        const auto vbasis = hermitian_basis(var_sides_[v]);
        cmat h = cmat::Zero(var_sides_[v], var_sides_[v]);
        for (size_t s = 0; s < images[t].size(); ++s) {
          double c = (f.adjoint() * images[t][s]).trace().real();
          if (c != 0.0) h += c * vbasis[s];
        }
        row.block_coeffs[v] += 0.5 * svec(embed_hermitian(h));
      }
      for (const auto& [k, g] : e.free_terms)
        row.free_coeffs(k) += (f.adjoint() * g).trace().real();
      double rhs = -(f.adjoint() * e.constant).trace().real();
      prob_.equalities.emplace_back(std::move(row), rhs);
    }
  }

  // e >= 0 via a fresh PSD slack variable; returns the slack's var id.
  int add_psd(const std::string& slack_name, HermExpr e) {
    int w = add_var(slack_name, e.side);
    e.add(w, sop_identity(-1.0));
    add_eq_zero(e);
    return w;
  }

  // scalar constraint <F, X_v> + f . u = rhs
  void add_scalar_eq(const std::vector<std::pair<int, cmat>>& var_funcs,
                     const std::vector<std::pair<int, double>>& free_coeffs, double rhs) {
    LinearFunctional row = zero_row();
    for (const auto& [v, f] : var_funcs)
      row.block_coeffs[v] += 0.5 * svec(embed_hermitian(hermitize(f)));
    for (const auto& [k, c] : free_coeffs) row.free_coeffs(k) += c;
    prob_.equalities.emplace_back(std::move(row), rhs);
  }

  // minimize sum_v <C_v, X_v> + sum_k c_k u_k
  void set_objective_term(int var, const cmat& c) { objective_[var] += c; }
  void set_objective_free(int id, double c) { free_objective_.emplace_back(id, c); }

  SdpProblem build() {
    // pad rows created before later variables were declared
    for (auto& [row, rhs] : prob_.equalities) pad(row);
    LinearFunctional obj = zero_row();
    for (size_t v = 0; v < objective_.size(); ++v)
      obj.block_coeffs[v] = 0.5 * svec(embed_hermitian(objective_[v]));
    for (const auto& [k, c] : free_objective_) obj.free_coeffs(k) += c;
    prob_.objective = std::move(obj);
    return prob_;
  }

  // solve and return complex-valued optimizers per variable
  struct Result {
    SdpSolution raw;
    std::vector<cmat> vars;
    rvec free_values;
  };

  Result solve(double tol = 1e-8, int max_iters = 200) {
    SdpProblem p = build();
    Result res;
    res.raw = sdp::solve(p, tol, max_iters);
    for (size_t v = 0; v < var_sides_.size(); ++v)
      res.vars.push_back(unembed_hermitian(res.raw.block_values[v]));
    res.free_values = res.raw.free_values;
    return res;
  }

  int var_side(int v) const { return var_sides_[v]; }

 private:
  LinearFunctional zero_row() {
    LinearFunctional f;
    for (const auto& [name, n] : prob_.blocks) f.block_coeffs.push_back(rvec::Zero(svec_dim(n)));
    f.free_coeffs = rvec::Zero(prob_.free_vars);
    return f;
  }

  void pad(LinearFunctional& f) {
    for (size_t j = f.block_coeffs.size(); j < prob_.blocks.size(); ++j)
      f.block_coeffs.push_back(rvec::Zero(svec_dim(prob_.blocks[j].second)));
    if (f.free_coeffs.size() < prob_.free_vars) {
      rvec ext = rvec::Zero(prob_.free_vars);
      ext.head(f.free_coeffs.size()) = f.free_coeffs;
      f.free_coeffs = ext;
    }
  }

  SdpProblem prob_;
  std::vector<int> var_sides_;
  std::vector<cmat> objective_;
  std::vector<std::pair<int, double>> free_objective_;
};

}  // namespace capbound::sdp
