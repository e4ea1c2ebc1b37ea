// Copyright (c) 2026 capbound contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

#include "capbound/capacity.hpp"
#include "capbound/io.hpp"

namespace capbound {

inline int worker_count() {
  if (const char* env = std::getenv("CAPBOUND_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return std::min(n, 64);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : std::min<int>(static_cast<int>(hc), 16);
}

// Dispatches indices to a worker pool; results must be stored by index by the
// caller so output order is independent of completion order. The first
// exception (by index) is rethrown after all workers finish.
template <typename F>
void parallel_for_indexed(int n, F&& f) {
  int workers = std::min(worker_count(), n);
  std::vector<std::exception_ptr> errors(std::max(n, 1));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&]() {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
          try {
            f(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    for (auto& t : pool) t.join();
  }
  for (int i = 0; i < n; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1.0);
  return out;
}

struct FigureOptions {
  int points = 51;
  int restarts = 32;
  std::uint64_t seed = 1;
};

namespace detail {

inline MultistartOptions point_opts(const FigureOptions& f, int index) {
  MultistartOptions o;
  o.restarts = f.restarts;
  o.seed = f.seed + 1000003ull * static_cast<std::uint64_t>(index);
  return o;
}

template <typename RowFn>
io::CsvTable grid_table(const std::vector<std::string>& header, const FigureOptions& opts,
                        RowFn&& row_fn) {
  io::CsvTable t;
  t.header = header;
  auto grid = linspace(0.0, 1.0, opts.points);
  t.rows.resize(grid.size());
  parallel_for_indexed(static_cast<int>(grid.size()), [&](int i) {
    try {
      t.rows[i] = row_fn(grid[i], i);
    } catch (const std::exception& e) {
      throw std::runtime_error("figure row failed at p=" + io::format_value(grid[i]) + ": " +
                               e.what());
    }
  });
  return t;
}

}  // namespace detail

// fig1 dataset: Hadamard parameters of the amplitude damping channel.
inline io::CsvTable figure1(const FigureOptions& opts = {}) {
  auto s = computational_basis_set(2);
  return detail::grid_table({"p", "had_s", "had_deg"}, opts, [&](double p, int) {
    Channel ch = amplitude_damping(p);
    ChoiOperator choi = choi_from_kraus(ch);
    double hs = hadamard_s_parameter(choi, s);
    double hd = hadamard_deg_parameter(ch);
    return std::vector<double>{p, hs, hd};
  });
}

// fig2 dataset: Holevo information and strong-converse bound for A_p.
inline io::CsvTable figure2(const FigureOptions& opts = {}) {
  return detail::grid_table({"p", "holevo", "c_beta"}, opts, [&](double p, int) {
    double chi = holevo_ampdamp_closed_form(p);
    double cb = c_beta(choi_from_kraus(amplitude_damping(p)));
    return std::vector<double>{p, chi, cb};
  });
}

// fig3 dataset: covariance-based bound for N_p = p A_p + (1-p) D_p. The
// Holevo column is chi of the Pauli twirl, which matches chi(N_p).
inline io::CsvTable figure3(const FigureOptions& opts = {}) {
  GroupRep pauli = pauli_rep();
  return detail::grid_table({"p", "holevo", "cov", "bound_cov", "c_beta"}, opts,
                            [&](double p, int) {
    Channel ch = mix_ad_depol(p);
    ChoiOperator choi = choi_from_kraus(ch);
    double eps = diamond_distance(choi, twirl_choi(choi, pauli));
    Channel twirled = kraus_from_choi(twirl_choi(choi, pauli));
    double chi = holevo_one_design(twirled, pauli);
    double bound = chi + 2.0 * eps + g_eps(eps);
    double cb = c_beta(choi);
    return std::vector<double>{p, chi, eps, bound, cb};
  });
}

// fig4 dataset: entanglement-breaking parameter of M_p = A_p o Z_p.
inline io::CsvTable figure4(const FigureOptions& opts = {}) {
  return detail::grid_table({"p", "eb"}, opts, [&](double p, int) {
    double eb = eb_parameter(choi_from_kraus(ad_after_dephasing(p)));
    return std::vector<double>{p, eb};
  });
}

// fig5 dataset: EB-based capacity bounds for M_p.
inline io::CsvTable figure5(const FigureOptions& opts = {}) {
  return detail::grid_table({"p", "holevo", "eb", "bound_eb_n", "bound_eb_m", "c_beta"}, opts,
                            [&](double p, int i) {
    Channel ch = ad_after_dephasing(p);
    ChoiOperator choi = choi_from_kraus(ch);
    auto ms = detail::point_opts(opts, i);
    auto eb = eb_parameter_full(choi);
    double chi = holevo_information(ch, ms).value;
    double chi_eb = holevo_information(kraus_from_choi(eb.closest_eb), ms).value;
    double bound_n = chi + 3.0 * eb.value + 2.0 * g_eps(eb.value);
    double bound_m = chi_eb + 2.0 * eb.value + g_eps(eb.value);
    double cb = c_beta(choi);
    return std::vector<double>{p, chi, eb.value, bound_n, bound_m, cb};
  });
}

inline io::CsvTable figure_table(const std::string& name, const FigureOptions& opts = {}) {
  if (name == "fig1") return figure1(opts);
  if (name == "fig2") return figure2(opts);
  if (name == "fig3") return figure3(opts);
  if (name == "fig4") return figure4(opts);
  if (name == "fig5") return figure5(opts);
  throw std::invalid_argument("unknown figure '" + name + "' (expected fig1..fig5)");
}

// --- bound sweeps ------------------------------------------------------------

struct SweepConfig {
  std::string channel;                // "name:p", "name", or a Kraus file path
  std::vector<std::string> methods;   // subset of the method list below
  std::optional<std::array<double, 2>> grid_range;  // [a, b]
  int grid_points = 0;                // 0 = single evaluation
  int restarts = 32;
  std::uint64_t seed = 1;
  std::string out_path;

  void validate() const {
    require(!methods.empty(), "sweep: at least one method must be selected");
    for (const auto& m : methods)
      require(m == "covariance" || m == "eb" || m == "hadamard_s" || m == "hadamard_deg" ||
                  m == "c_beta" || m == "holevo",
              "sweep: unknown method '" + m + "'");
    if (grid_points != 0) {
      require(grid_points >= 2, "sweep: grid needs at least 2 points");
      require(grid_range.has_value(), "sweep: grid points without a range");
      require((*grid_range)[0] >= 0.0 && (*grid_range)[1] <= 1.0 &&
                  (*grid_range)[0] <= (*grid_range)[1],
              "sweep: p range must lie within [0,1]");
    }
  }
};

struct BoundRow {
  std::string method;
  double p = 0.0;
  double epsilon = 0.0;
  double holevo_lower = 0.0;
  double upper_form_m = 0.0;
  double upper_form_n = 0.0;
};

namespace detail {

inline BoundRow bound_row(const Channel& ch, const std::string& method, double p,
                          const MultistartOptions& ms) {
  BoundRow row;
  row.method = method;
  row.p = p;
  if (method == "holevo") {
    double chi = holevo_information(ch, ms).value;
    row.holevo_lower = chi;
    row.upper_form_m = chi;  // lower bound repeated; no upper form for this method
    row.upper_form_n = chi;
    return row;
  }
  if (method == "c_beta") {
    double cb = c_beta(choi_from_kraus(ch));
    row.holevo_lower = holevo_information(ch, ms).value;
    row.upper_form_m = cb;
    row.upper_form_n = cb;
    return row;
  }
  BoundReport rep;
  if (method == "covariance") {
    rep = bound_covariance(ch, pauli_rep(), ms);
  } else if (method == "eb") {
    rep = bound_eb(ch, ms);
  } else if (method == "hadamard_s") {
    rep = bound_hadamard_s(ch, computational_basis_set(ch.dim_in), ms);
  } else {
    rep = eps_hadamard_upper_bound(ch, ms);
  }
  row.epsilon = rep.epsilon;
  row.holevo_lower = rep.holevo_lower;
  row.upper_form_m = rep.upper_form_m;
  row.upper_form_n = rep.upper_form_n;
  return row;
}

}  // namespace detail

struct SweepResult {
  std::vector<BoundRow> rows;

  std::string to_csv() const {
    std::ostringstream os;
    os << "method,p,epsilon,holevo_lower,upper_form_m,upper_form_n\n";
    for (const auto& r : rows)
      os << r.method << ',' << io::format_value(r.p) << ',' << io::format_value(r.epsilon)
         << ',' << io::format_value(r.holevo_lower) << ',' << io::format_value(r.upper_form_m)
         << ',' << io::format_value(r.upper_form_n) << '\n';
    return os.str();
  }
};

// Parses "name", "name:p" or a file path into a channel factory. Named
// families support p sweeps; fixed Kraus files evaluate at a single point.
struct ChannelSpec {
  bool named = false;
  std::string name;
  double p = 0.0;
  Channel fixed;

  static ChannelSpec parse(const std::string& spec) {
    ChannelSpec out;
    auto colon = spec.rfind(':');
    std::string head = colon == std::string::npos ? spec : spec.substr(0, colon);
    if (io::named_channel_exists(head)) {
      out.named = true;
      out.name = head;
      out.p = colon == std::string::npos ? 0.0 : std::stod(spec.substr(colon + 1));
      return out;
    }
    if (io::named_channel_exists(spec)) {
      out.named = true;
      out.name = spec;
      return out;
    }
    out.fixed = io::load_channel(spec);
    return out;
  }

  Channel at(double p_value) const {
    return named ? io::named_channel(name, p_value) : fixed;
  }
};

inline SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  ChannelSpec spec = ChannelSpec::parse(cfg.channel);
  require(spec.named || cfg.grid_points == 0,
          "sweep: p-grid sweeps require a named channel family");
  std::vector<double> grid;
  if (cfg.grid_points > 0) {
    grid = linspace((*cfg.grid_range)[0], (*cfg.grid_range)[1], cfg.grid_points);
  } else {
    grid.push_back(spec.named ? spec.p : 0.0);
  }

  SweepResult res;
  res.rows.resize(grid.size() * cfg.methods.size());
  parallel_for_indexed(static_cast<int>(grid.size()), [&](int i) {
    Channel ch = spec.at(grid[i]);
    MultistartOptions ms;
    ms.restarts = cfg.restarts;
    ms.seed = cfg.seed + 1000003ull * static_cast<std::uint64_t>(i);
    for (size_t m = 0; m < cfg.methods.size(); ++m) {
      try {
        res.rows[i * cfg.methods.size() + m] =
            detail::bound_row(ch, cfg.methods[m], grid[i], ms);
      } catch (const std::exception& e) {
        throw std::runtime_error("method '" + cfg.methods[m] + "' failed at p=" +
                                 io::format_value(grid[i]) + ": " + e.what());
      }
    }
  });
  return res;
}

}  // namespace capbound
