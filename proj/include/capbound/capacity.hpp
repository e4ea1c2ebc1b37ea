// Copyright (c) 2026 capbound contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "capbound/channel.hpp"
#include "capbound/symmetry.hpp"

namespace capbound {

// Continuity penalty g(eps) = (1+eps) log2(1+eps) - eps log2(eps), g(0) = 0.
inline double g_eps(double eps) {
  require(eps >= 0.0 && eps <= 1.0, "g_eps: argument outside [0,1]");
  double s = (1.0 + eps) * std::log2(1.0 + eps);
  if (eps > 0.0) s -= eps * std::log2(eps);
  return s;
}

struct Ensemble {
  rvec probs;
  std::vector<cvec> states;  // pure input states

  Ensemble() = default;
  Ensemble(rvec p, std::vector<cvec> s) : probs(std::move(p)), states(std::move(s)) {
    require(probs.size() == static_cast<long>(states.size()), "ensemble: size mismatch");
    require(!states.empty(), "ensemble: empty");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
      require(probs(i) >= -1e-12, "ensemble: negative probability");
      sum += probs(i);
    }
    require(std::abs(sum - 1.0) <= 1e-10, "ensemble: probabilities do not sum to one");
    long d = states[0].size();
    require(static_cast<long>(states.size()) <= d * d,
            "ensemble: cardinality exceeds dim^2");
    for (const auto& st : states) {
      require(st.size() == d, "ensemble: state dimension mismatch");
      require(std::abs(st.norm() - 1.0) <= 1e-10, "ensemble: state not normalized");
    }
  }

  int dim() const { return static_cast<int>(states[0].size()); }
};

inline double holevo_ensemble(const Channel& ch, const Ensemble& e) {
  require(e.dim() == ch.dim_in, "holevo_ensemble: ensemble dimension mismatch");
  cmat avg = cmat::Zero(ch.dim_out, ch.dim_out);
  double cond = 0.0;
  std::vector<cmat> outs;
  outs.reserve(e.states.size());
  for (size_t x = 0; x < e.states.size(); ++x) {
    cmat out = ch.apply(proj(e.states[x]));
    avg += e.probs(x) * out;
    outs.push_back(std::move(out));
  }
  for (size_t x = 0; x < e.states.size(); ++x)
    if (e.probs(x) > 1e-15) cond += e.probs(x) * von_neumann_entropy(outs[x]);
  return von_neumann_entropy(avg) - cond;
}

// cq state sum_x p(x) |x><x|_X (x) N(psi_x) with labels {X, B}.
inline MultipartiteOperator cq_output_state(const Channel& ch, const Ensemble& e) {
  int nx = static_cast<int>(e.states.size());
  cmat full = cmat::Zero(nx * ch.dim_out, nx * ch.dim_out);
  for (int x = 0; x < nx; ++x)
    full.block(x * ch.dim_out, x * ch.dim_out, ch.dim_out, ch.dim_out) =
        e.probs(x) * ch.apply(proj(e.states[x]));
  return MultipartiteOperator(std::move(full), {nx, ch.dim_out}, {"X", "B"});
}

// --- derivative-free optimization helpers ------------------------------------

namespace opt {

struct NmResult {
  rvec x;
  double value = 0.0;
};

// Standard Nelder-Mead minimization; terminates on simplex function spread.
inline NmResult nelder_mead_min(const std::function<double(const rvec&)>& f, const rvec& x0,
                                double step, double ftol, int max_evals) {
  const int n = static_cast<int>(x0.size());
  std::vector<rvec> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  for (int i = 1; i <= n; ++i) pts[i](i - 1) += step;
  int evals = 0;
  for (int i = 0; i <= n; ++i) {
    vals[i] = f(pts[i]);
    ++evals;
  }
  auto order = [&]() {
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    std::vector<rvec> np(n + 1);
    std::vector<double> nv(n + 1);
    for (int i = 0; i <= n; ++i) {
      np[i] = pts[idx[i]];
      nv[i] = vals[idx[i]];
    }
    pts = std::move(np);
    vals = std::move(nv);
  };
  order();
  while (evals < max_evals) {
    if (vals[n] - vals[0] <= ftol * (1.0 + std::abs(vals[0]))) break;
    rvec centroid = rvec::Zero(n);
    for (int i = 0; i < n; ++i) centroid += pts[i];
    centroid /= static_cast<double>(n);

    rvec xr = centroid + (centroid - pts[n]);
    double fr = f(xr);
    ++evals;
    if (fr < vals[0]) {
      rvec xe = centroid + 2.0 * (centroid - pts[n]);
      double fe = f(xe);
      ++evals;
      if (fe < fr) {
        pts[n] = xe;
        vals[n] = fe;
      } else {
        pts[n] = xr;
        vals[n] = fr;
      }
    } else if (fr < vals[n - 1]) {
      pts[n] = xr;
      vals[n] = fr;
    } else {
      rvec xc = centroid + 0.5 * (pts[n] - centroid);
      double fc = f(xc);
      ++evals;
      if (fc < vals[n]) {
        pts[n] = xc;
        vals[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
          vals[i] = f(pts[i]);
          ++evals;
        }
      }
    }
    order();
  }
  return {pts[0], vals[0]};
}

// Golden-section maximization with coarse grid bracketing.
inline double golden_max(const std::function<double(double)>& f, double lo, double hi,
                         double xtol, double* argmax = nullptr, int grid = 65) {
  double best_x = lo, best_v = f(lo);
  for (int i = 1; i < grid; ++i) {
    double x = lo + (hi - lo) * i / (grid - 1.0);
    double v = f(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  double h = (hi - lo) / (grid - 1.0);
  double a = std::max(lo, best_x - h), b = std::min(hi, best_x + h);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  double xm = 0.5 * (a + b);
  double vm = f(xm);
  if (vm < best_v) {
    vm = best_v;
    xm = best_x;
  }
  if (argmax) *argmax = xm;
  return vm;
}

// Unit vector in R^m from m-1 hyperspherical angles.
inline rvec sphere_point(const rvec& angles) {
  const int m = static_cast<int>(angles.size()) + 1;
  rvec v(m);
  double prod = 1.0;
  for (int i = 0; i < m - 1; ++i) {
    v(i) = prod * std::cos(angles(i));
    prod *= std::sin(angles(i));
  }
  v(m - 1) = prod;
  return v;
}

inline cvec complex_state_from_angles(const rvec& angles, int d) {
  rvec v = sphere_point(angles);  // length 2d
  cvec out(d);
  for (int j = 0; j < d; ++j) out(j) = cplx(v(2 * j), v(2 * j + 1));
  return out;
}

}  // namespace opt

struct MultistartOptions {
  int restarts = 32;
  std::uint64_t seed = 0;
  int max_evals = 6000;
  double ftol = 1e-12;
  bool polish = true;
};

namespace detail {

inline Ensemble ensemble_from_params(const rvec& params, int dim, int count) {
  const int apc = 2 * dim - 1;  // angles per state
  rvec probs(count);
  double mx = params.head(count).maxCoeff();
  double sum = 0.0;
  for (int i = 0; i < count; ++i) {
    probs(i) = std::exp(params(i) - mx);
    sum += probs(i);
  }
  probs /= sum;
  std::vector<cvec> states;
  states.reserve(count);
  for (int i = 0; i < count; ++i) {
    rvec ang = params.segment(count + i * apc, apc);
    cvec st = opt::complex_state_from_angles(ang, dim);
    st /= st.norm();
    states.push_back(std::move(st));
  }
  return Ensemble(std::move(probs), std::move(states));
}

struct EnsembleSearchResult {
  double value = 0.0;
  Ensemble argmax;
};

// Multi-start Nelder-Mead maximization of a functional of pure-state
// ensembles of fixed cardinality. Each restart depends only on (seed, r) and
// refines its own optimum, so the max over restarts is nondecreasing in the
// restart count for a fixed seed.
inline EnsembleSearchResult maximize_over_ensembles(
    int dim, int count, const std::function<double(const Ensemble&)>& objective,
    const MultistartOptions& opts) {
  const int apc = 2 * dim - 1;
  const int nparams = count + count * apc;
  auto neg = [&](const rvec& params) {
    return -objective(ensemble_from_params(params, dim, count));
  };

  double best = -1.0;
  rvec best_params;
  for (int r = 0; r < opts.restarts; ++r) {
    std::seed_seq sq{static_cast<std::uint32_t>(opts.seed & 0xffffffffu),
                     static_cast<std::uint32_t>(opts.seed >> 32),
                     static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(sq);
    std::uniform_real_distribution<double> uang(0.0, M_PI);
    std::uniform_real_distribution<double> ulog(-1.0, 1.0);
    rvec x0(nparams);
    for (int i = 0; i < count; ++i) x0(i) = ulog(rng);
    for (int i = count; i < nparams; ++i) x0(i) = uang(rng);
    auto res = opt::nelder_mead_min(neg, x0, 0.4, opts.ftol, opts.max_evals);
    if (opts.polish) {
      auto fine = opt::nelder_mead_min(neg, res.x, 0.03, opts.ftol, opts.max_evals);
      if (fine.value < res.value) res = fine;
    }
    if (-res.value > best) {
      best = -res.value;
      best_params = res.x;
    }
  }
  return {best, ensemble_from_params(best_params, dim, count)};
}

}  // namespace detail

struct HolevoResult {
  double value = 0.0;  // bits; a lower bound on chi by construction
  Ensemble argmax;
};

// Multi-start maximization of the Holevo information over pure-state
// ensembles of cardinality dim_in^2.
inline HolevoResult holevo_information(const Channel& ch,
                                       const MultistartOptions& opts = {}) {
  require(ch.dim_in <= 4, "holevo_information: dim_in > 4 not supported");
  const int count = ch.dim_in * ch.dim_in;
  auto res = detail::maximize_over_ensembles(
      ch.dim_in, count, [&](const Ensemble& e) { return holevo_ensemble(ch, e); }, opts);
  return {res.value, res.argmax};
}

// Minimum output entropy over pure inputs. Qubits use a Bloch-sphere grid
// with golden-section refinement in each angle; higher dimensions fall back
// to the multi-start sphere search.
inline double min_output_entropy(const Channel& ch) {
  if (ch.dim_in == 2) {
    auto out_entropy = [&](double theta, double phi) {
      cvec st(2);
      st(0) = std::cos(theta / 2);
      st(1) = std::exp(cplx(0, phi)) * std::sin(theta / 2);
      return von_neumann_entropy(ch.apply(proj(st)));
    };
    double best_t = 0.0, best_p = 0.0, best = out_entropy(0.0, 0.0);
    for (int i = 0; i < 64; ++i)
      for (int j = 0; j < 32; ++j) {
        double t = M_PI * i / 63.0, ph = 2.0 * M_PI * j / 32.0;
        double v = out_entropy(t, ph);
        if (v < best) {
          best = v;
          best_t = t;
          best_p = ph;
        }
      }
    double t = best_t, ph = best_p;
    double ht = M_PI / 63.0, hp = 2.0 * M_PI / 32.0;
    for (int round = 0; round < 4; ++round) {
      opt::golden_max([&](double x) { return -out_entropy(x, ph); },
                      std::max(0.0, t - ht), std::min(M_PI, t + ht), 1e-10, &t, 9);
      opt::golden_max([&](double x) { return -out_entropy(t, x); }, ph - hp, ph + hp, 1e-10,
                      &ph, 9);
      ht *= 0.25;
      hp *= 0.25;
    }
    return std::min(best, out_entropy(t, ph));
  }
  require(ch.dim_in <= 4, "min_output_entropy: dim_in > 4 not supported");
  MultistartOptions opts;
  opts.restarts = 16;
  auto res = detail::maximize_over_ensembles(
      ch.dim_in, 1,
      [&](const Ensemble& e) { return -von_neumann_entropy(ch.apply(proj(e.states[0]))); },
      opts);
  return -res.value;
}

// chi(N) = S(N(pi)) - min_psi S(N(psi)) for channels covariant with respect
// to a one-design input representation.
inline double holevo_one_design(const Channel& ch, const GroupRep& g) {
  require(is_one_design_input(g), "holevo_one_design: input representation is not a one-design");
  require(covariance_parameter(ch, g) <= 1e-6,
          "holevo_one_design: channel is not covariant for the given representation");
  cmat pi = cmat::Identity(ch.dim_in, ch.dim_in) / static_cast<double>(ch.dim_in);
  return von_neumann_entropy(ch.apply(pi)) - min_output_entropy(ch);
}

// chi(A_p) = max_q h((1-p)q) - h((1 + sqrt(1 - 4p(1-p)q^2))/2)
inline double holevo_ampdamp_closed_form(double p, double* argmax_q = nullptr) {
  require_prob(p);
  auto f = [p](double q) {
    double inner = std::max(0.0, 1.0 - 4.0 * p * (1.0 - p) * q * q);
    return binary_entropy((1.0 - p) * q) - binary_entropy(0.5 * (1.0 + std::sqrt(inner)));
  };
  return std::max(0.0, opt::golden_max(f, 0.0, 1.0, 1e-10, argmax_q));
}

// --- capacity upper bounds ----------------------------------------------------

enum class BoundMethod { covariance, eb, hadamard_s, hadamard_deg, c_beta };

inline const char* method_name(BoundMethod m) {
  switch (m) {
    case BoundMethod::covariance: return "covariance";
    case BoundMethod::eb: return "eb";
    case BoundMethod::hadamard_s: return "hadamard_s";
    case BoundMethod::hadamard_deg: return "hadamard_deg";
    case BoundMethod::c_beta: return "c_beta";
  }
  return "?";
}

struct BoundReport {
  std::string channel;
  BoundMethod method = BoundMethod::covariance;
  double epsilon = 0.0;
  double holevo_lower = 0.0;    // multi-start chi of the channel itself
  double base_m = 0.0;          // chi of the additive proxy channel
  double two_eps_log_b = 0.0;   // 2 eps log|B|
  double g_term = 0.0;          // g(eps)
  double penalty_m = 0.0;       // 2 eps log|B| + g(eps)
  double penalty_n = 0.0;       // 3 eps log|B| + 2 g(eps)
  double upper_form_m = 0.0;    // base_m + penalty_m
  double upper_form_n = 0.0;    // holevo_lower + penalty_n
};

namespace detail {

inline BoundReport assemble_report(std::string channel, BoundMethod method, double eps,
                                   double holevo_lower, double base_m, double log_b) {
  BoundReport r;
  r.channel = std::move(channel);
  r.method = method;
  r.epsilon = eps;
  r.holevo_lower = holevo_lower;
  r.base_m = base_m;
  r.two_eps_log_b = 2.0 * eps * log_b;
  r.g_term = g_eps(eps);
  r.penalty_m = r.two_eps_log_b + r.g_term;
  r.penalty_n = 1.5 * r.two_eps_log_b + 2.0 * r.g_term;
  r.upper_form_m = base_m + r.penalty_m;
  r.upper_form_n = holevo_lower + r.penalty_n;
  return r;
}

}  // namespace detail

// C(N) <= chi(N_G) + 2 eps log|B| + g(eps) for representations whose twirl
// has additive Holevo information: qubit channels with a one-design output
// representation, or two-design representations acting identically on input
// and output.
inline BoundReport bound_covariance(const Channel& ch, const GroupRep& g,
                                    const MultistartOptions& opts = {},
                                    const std::string& label = "") {
  require(ch.dim_in == g.dim_in() && ch.dim_out == g.dim_out(),
          "bound_covariance: representation does not match channel dimensions");
  bool qubit_route = ch.dim_in == 2 && ch.dim_out == 2 && is_one_design_output(g);
  bool two_design_route = false;
  if (!qubit_route) {
    bool same_rep = true;
    for (const auto& [u, v] : g.elements)
      if (max_abs(u - v) > 1e-12) same_rep = false;
    two_design_route = same_rep && ch.dim_in == ch.dim_out && is_two_design_input(g);
  }
  require(qubit_route || two_design_route,
          "bound_covariance: representation does not certify additivity of the twirl");

  ChoiOperator choi = choi_from_kraus(ch);
  ChoiOperator twirled = twirl_choi(choi, g);
  double eps = diamond_distance(choi, twirled);
  Channel tw = kraus_from_choi(twirled);
  double chi_tw = is_one_design_input(g) ? holevo_one_design(tw, g)
                                         : holevo_information(tw, opts).value;
  double chi_n = holevo_information(ch, opts).value;
  return detail::assemble_report(label, BoundMethod::covariance, eps, chi_n, chi_tw,
                                 std::log2(static_cast<double>(ch.dim_out)));
}

inline BoundReport bound_eb(const Channel& ch, const MultistartOptions& opts = {},
                            const std::string& label = "") {
  ChoiOperator choi = choi_from_kraus(ch);
  auto eb = eb_parameter_full(choi);
  Channel closest = kraus_from_choi(eb.closest_eb);
  double chi_m = holevo_information(closest, opts).value;
  double chi_n = holevo_information(ch, opts).value;
  return detail::assemble_report(label, BoundMethod::eb, eb.value, chi_n, chi_m,
                                 std::log2(static_cast<double>(ch.dim_out)));
}

inline BoundReport bound_hadamard_s(const Channel& ch, const std::vector<cvec>& s,
                                    const MultistartOptions& opts = {},
                                    const std::string& label = "") {
  ChoiOperator choi = choi_from_kraus(ch);
  auto had = hadamard_s_parameter_full(choi, s);
  cmat mchoi = hadamard_choi_from_gram(had.gram, s, ch.dim_out);
  Channel closest = kraus_from_choi(ChoiOperator(mchoi, ch.dim_in, ch.dim_out, 1e-6));
  double chi_m = holevo_information(closest, opts).value;
  double chi_n = holevo_information(ch, opts).value;
  return detail::assemble_report(label, BoundMethod::hadamard_s, had.value, chi_n, chi_m,
                                 std::log2(static_cast<double>(ch.dim_out)));
}

// C(N) <= max_{p,psi} [H(FE) - H(E|X)] + 2 eps log|E| + g(eps) with the
// degrading channel's Stinespring dilation U^D: B -> E (x) F.
inline BoundReport eps_hadamard_upper_bound(const Channel& ch,
                                            const MultistartOptions& opts = {},
                                            const std::string& label = "") {
  auto had = hadamard_deg_parameter_full(ch);
  Channel deg = kraus_from_choi(had.degrading);
  StinespringIsometry u = stinespring(deg);
  const int de = deg.dim_out, df = u.dim_env;

  const int count = ch.dim_in * ch.dim_in;
  auto objective = [&](const Ensemble& e) {
    cmat avg = cmat::Zero(de * df, de * df);
    double cond = 0.0;
    for (size_t x = 0; x < e.states.size(); ++x) {
      // omega lives on E (x) F: rows of u.v are indexed e_out * df + f
      cmat omega = u.v * ch.apply(proj(e.states[x])) * u.v.adjoint();
      avg += e.probs(x) * omega;
      if (e.probs(x) > 1e-15)
        cond += e.probs(x) * von_neumann_entropy(detail::ptrace_second(omega, de, df));
    }
    return von_neumann_entropy(avg) - cond;
  };
  auto res = detail::maximize_over_ensembles(ch.dim_in, count, objective, opts);
  double chi_n = holevo_information(ch, opts).value;
  return detail::assemble_report(label, BoundMethod::hadamard_deg, had.value, chi_n, res.value,
                                 std::log2(static_cast<double>(de)));
}

// f1 and f2 of the trade-off region offsets.
inline double f1_offset(double eps, int dim_b) {
  require(eps >= 0.0 && eps <= 1.0, "f1: eps outside [0,1]");
  return 2.0 * eps * std::log2(static_cast<double>(dim_b)) + g_eps(eps);
}

inline double f2_offset(double eps, int dim_b, int dim_e) {
  require(eps >= 0.0 && 2.0 * eps <= 1.0, "f2: requires 2 eps <= 1");
  return f1_offset(eps, dim_b) +
         2.0 * std::sqrt(2.0 * eps) * std::log2(static_cast<double>(dim_e)) +
         g_eps(std::sqrt(2.0 * eps));
}

struct TradeoffPoint {
  int ensemble_index = 0;
  double rhs_cq = 0.0;   // I(AX;B) + f1
  double rhs_qe = 0.0;   // I(A>BX) + f2
  double rhs_cqe = 0.0;  // I(X;B) + I(A>BX) + f2
};

struct TradeoffOuter {
  std::vector<TradeoffPoint> points;
  double rhs_cq = 0.0, rhs_qe = 0.0, rhs_cqe = 0.0;  // pointwise max over samples
  bool sampled_approximation = true;                 // inner approximation of the outer region
};

// Outer-bound offsets for an eps-close-Hadamard channel, sampled over
// caller-supplied ensembles of pure bipartite states phi_AA'.
inline TradeoffOuter tradeoff_outer(const Channel& chm, double eps,
                                    const std::vector<Ensemble>& ensembles) {
  require(eps >= 0.0 && 2.0 * eps <= 1.0, "tradeoff_outer: requires 2 eps <= 1");
  ChoiOperator choi = choi_from_kraus(chm);
  require(hadamard_s_parameter(choi, computational_basis_set(chm.dim_in)) <= 1e-6,
          "tradeoff_outer: channel is not Hadamard (Had_S > 1e-6)");
  const int da = chm.dim_in, db = chm.dim_out;
  const int de = static_cast<int>(chm.kraus.size());
  double f1 = f1_offset(eps, db);
  double f2 = f2_offset(eps, db, de);

  TradeoffOuter out;
  for (size_t k = 0; k < ensembles.size(); ++k) {
    const Ensemble& e = ensembles[k];
    require(e.dim() == da * da, "tradeoff_outer: ensemble states must live on A (x) A'");
    int nx = static_cast<int>(e.states.size());
    cmat tau = cmat::Zero(nx * da * db, nx * da * db);
    for (int x = 0; x < nx; ++x) {
      MultipartiteOperator phi(proj(e.states[x]), {da, da}, {"A", "Ap"});
      MultipartiteOperator m_out = apply_to_subsystem(chm, phi, "Ap");
      tau.block(x * da * db, x * da * db, da * db, da * db) = e.probs(x) * m_out.mat;
    }
    MultipartiteOperator t(std::move(tau), {nx, da, db}, {"X", "A", "B"});
    TradeoffPoint pt;
    pt.ensemble_index = static_cast<int>(k);
    pt.rhs_cq = mutual_information(t, {"A", "X"}, {"B"}) + f1;
    pt.rhs_qe = coherent_information(t, {"A"}, {"B", "X"}) + f2;
    pt.rhs_cqe = mutual_information(t, {"X"}, {"B"}) +
                 coherent_information(t, {"A"}, {"B", "X"}) + f2;
    out.rhs_cq = k == 0 ? pt.rhs_cq : std::max(out.rhs_cq, pt.rhs_cq);
    out.rhs_qe = k == 0 ? pt.rhs_qe : std::max(out.rhs_qe, pt.rhs_qe);
    out.rhs_cqe = k == 0 ? pt.rhs_cqe : std::max(out.rhs_cqe, pt.rhs_cqe);
    out.points.push_back(pt);
  }
  return out;
}

}  // namespace capbound
