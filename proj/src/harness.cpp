#include "d1q3/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "d1q3/equiv_pde.hpp"

namespace d1q3 {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

VelocityProfile velocity_of(const StudyConfig& c) { return {c.profile, c.U}; }

int modes_for(const StudyConfig& c, int N) { return c.modes > 0 ? c.modes : default_modes(N); }

// LBM density at the mesh sites for one row and one init order.
std::vector<double> lbm_density(const StudyConfig& c, const SchemeParams& p, int init_order,
                                StationaryResult* stat) {
  const EquilibriumSpec eq = make_equilibrium(p, c.profile);
  if (c.stationary) {
    StationaryResult r = run_to_stationary(c.rho0, eq, p, c.stationary_tol, c.stationary_max_steps);
    std::vector<double> rho = r.moments.rho;
    double mean = 0.0;
    for (double v : rho) mean += v;
    mean /= static_cast<double>(rho.size());
    if (mean == 0.0) throw std::runtime_error("stationary state carries no mass");
    // spectral stationary states have unit integral
    const double scale = 1.0 / (mean * c.L);
    for (double& v : rho) v *= scale;
    if (stat) *stat = std::move(r);
    return rho;
  }
  InitOptions opt;
  opt.modes = modes_for(c, p.N);
  return run_unsteady(c.rho0, init_order_from_int(init_order), eq, p, opt).rho;
}

}  // namespace

void StudyConfig::validate() const {
  if (N_list.empty()) throw std::invalid_argument("N_list is empty");
  for (std::size_t i = 0; i < N_list.size(); ++i) {
    if (!is_power_of_two(N_list[i]) || N_list[i] < 4)
      throw std::invalid_argument("N_list entries must be powers of two >= 4, got " +
                                  std::to_string(N_list[i]));
    if (i > 0 && N_list[i] <= N_list[i - 1])
      throw std::invalid_argument("N_list must be strictly increasing");
  }
  if (pde_orders.empty()) throw std::invalid_argument("pde_orders is empty");
  for (int o : pde_orders)
    if (o < 1 || o > 4) throw std::invalid_argument("pde order must be 1..4, got " + std::to_string(o));
  if (!stationary && init_orders.size() != pde_orders.size())
    throw std::invalid_argument("init_orders needs one entry per pde order");
  for (int o : init_orders) (void)init_order_from_int(o);
  if (!(T_final > 0.0) && !stationary) throw std::invalid_argument("T_final must be positive");
  if (stationary && !(stationary_tol > 0.0))
    throw std::invalid_argument("stationary tolerance must be positive");
  if (modes < 0) throw std::invalid_argument("modes must be >= 0");
  (void)params_for(N_list.front());
}

SchemeParams StudyConfig::params_for(int N) const {
  double sp = s_prime;
  if (cubic) sp = relaxation_from_henon(cubic_sigma_prime(U, alpha, henon(s)));
  return make_params(lambda, U, alpha, s, sp, N, L, T_final);
}

double max_norm_error(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("max_norm_error: length mismatch (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  double err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a[i] - b[i]));
  return err;
}

double max_norm_error(const std::vector<double>& lbm_density, const SpectralState& state, int N,
                      double L) {
  if (static_cast<int>(lbm_density.size()) != N)
    throw std::invalid_argument("max_norm_error: density has " +
                                std::to_string(lbm_density.size()) + " sites, mesh has " +
                                std::to_string(N));
  return max_norm_error(lbm_density, synthesize_at_mesh(state, N, L));
}

double fit_convergence_order(const std::map<int, double>& errors) {
  if (errors.size() < 3) throw std::invalid_argument("order fit needs at least three points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(errors.size());
  for (const auto& [N, e] : errors) {
    if (!(e > 0.0) || !std::isfinite(e))
      throw std::invalid_argument("order fit needs positive finite errors");
    if (N <= 0) throw std::invalid_argument("order fit needs positive N");
    const double x = std::log2(static_cast<double>(N));
    const double y = -std::log2(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("order fit needs distinct N");
  return (n * sxy - sx * sy) / den;
}

SpectralState spectral_reference(const StudyConfig& c, int N, int pde_order) {
  const SchemeParams p = c.params_for(N);
  const int M = modes_for(c, N);
  const OperatorMatrix A = assemble_A(pde_order, pde_coefficients(p), p, velocity_of(c), M);
  return evolve_taylor5(A, p.dt, p.steps_to_final_time(), project_initial(c.rho0, M));
}

SpectralState spectral_stationary(const StudyConfig& c, int N, int pde_order) {
  const SchemeParams p = c.params_for(N);
  const int M = modes_for(c, N);
  const OperatorMatrix A =
      assemble_A_infinity(pde_order, pde_coefficients(p), p, velocity_of(c), M);
  return solve_stationary(A, c.L);
}

ConvergenceReport run_study(const StudyConfig& config, int jobs) {
  config.validate();
  ConvergenceReport rep;
  rep.config = config;
  rep.N_list = config.N_list;
  rep.pde_orders = config.pde_orders;
  rep.init_orders = config.init_orders;
  const std::size_t rows = config.N_list.size();
  const std::size_t cols = config.pde_orders.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  rep.errors.assign(rows, std::vector<double>(cols, nan));
  rep.cell_errors.assign(rows, std::vector<std::string>(cols));
  if (config.stationary) {
    rep.stationary_steps.assign(rows, 0);
    rep.stationary_converged.assign(rows, false);
    rep.stationary_increment.assign(rows, nan);
  }

  auto run_row = [&](std::size_t r) {
    const int N = config.N_list[r];
    SchemeParams p;
    try {
      p = config.params_for(N);
    } catch (const std::exception& ex) {
      for (std::size_t j = 0; j < cols; ++j) rep.cell_errors[r][j] = ex.what();
      return;
    }
    // one LBM run per distinct init order (a single one when stationary)
    std::map<int, std::vector<double>> lbm;
    std::map<int, std::string> lbm_fail;
    std::set<int> wanted;
    if (config.stationary) {
      wanted.insert(0);
    } else {
      wanted.insert(config.init_orders.begin(), config.init_orders.end());
    }
    for (int io : wanted) {
      try {
        StationaryResult st;
        lbm[io] = lbm_density(config, p, io, &st);
        if (config.stationary) {
          rep.stationary_steps[r] = st.steps;
          rep.stationary_converged[r] = st.converged;
          rep.stationary_increment[r] = st.last_increment;
        }
      } catch (const std::exception& ex) {
        lbm_fail[io] = ex.what();
      }
    }
    for (std::size_t j = 0; j < cols; ++j) {
      const int io = config.stationary ? 0 : config.init_orders[j];
      if (lbm_fail.count(io)) {
        rep.cell_errors[r][j] = "lbm: " + lbm_fail[io];
        continue;
      }
      try {
        const SpectralState ref = config.stationary
                                      ? spectral_stationary(config, N, config.pde_orders[j])
                                      : spectral_reference(config, N, config.pde_orders[j]);
        rep.errors[r][j] = max_norm_error(lbm.at(io), ref, N, config.L);
      } catch (const std::exception& ex) {
        rep.cell_errors[r][j] = std::string("spectral: ") + ex.what();
      }
    }
  };

  // finest meshes first: they dominate the cost
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows; i = next++) run_row(rows - 1 - i);
  };
  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(rows)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  rep.fitted_orders.assign(cols, nan);
  for (std::size_t j = 0; j < cols; ++j) {
    std::map<int, double> col;
    for (std::size_t r = 0; r < rows; ++r)
      if (std::isfinite(rep.errors[r][j]) && rep.errors[r][j] > 0.0)
        col[config.N_list[r]] = rep.errors[r][j];
    if (col.size() >= 3) rep.fitted_orders[j] = fit_convergence_order(col);
  }
  return rep;
}

std::string format_error(double value) {
  if (!std::isfinite(value)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", value);
  return buf;
}

namespace {

std::string format_order(double value) {
  if (!std::isfinite(value)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

std::string column_label(const ConvergenceReport& r, std::size_t j) {
  std::string label = "order" + std::to_string(r.pde_orders[j]);
  if (j < r.init_orders.size() && !r.config.stationary)
    label += "_init" + std::to_string(r.init_orders[j]);
  return label;
}

}  // namespace

std::string emit_table(const ConvergenceReport& r, TableFormat format) {
  std::ostringstream out;
  const std::size_t cols = r.pde_orders.size();
  if (format == TableFormat::Csv) {
    out << "N";
    for (std::size_t j = 0; j < cols; ++j) out << ',' << column_label(r, j);
    out << '\n';
    for (std::size_t i = 0; i < r.N_list.size(); ++i) {
      out << r.N_list[i];
      for (std::size_t j = 0; j < cols; ++j) out << ',' << format_error(r.errors[i][j]);
      out << '\n';
    }
    if (!r.N_list.empty()) {
      out << "order";
      for (std::size_t j = 0; j < cols; ++j) out << ',' << format_order(r.fitted_orders[j]);
      out << '\n';
    }
    return out.str();
  }
  out << "| N |";
  for (std::size_t j = 0; j < cols; ++j) out << ' ' << column_label(r, j) << " |";
  out << "\n|---|";
  for (std::size_t j = 0; j < cols; ++j) out << "---|";
  out << '\n';
  for (std::size_t i = 0; i < r.N_list.size(); ++i) {
    out << "| " << r.N_list[i] << " |";
    for (std::size_t j = 0; j < cols; ++j) out << ' ' << format_error(r.errors[i][j]) << " |";
    out << '\n';
  }
  if (!r.N_list.empty()) {
    out << "| order |";
    for (std::size_t j = 0; j < cols; ++j) out << ' ' << format_order(r.fitted_orders[j]) << " |";
    out << '\n';
  }
  return out.str();
}

std::string emit_summary(const ConvergenceReport& r) {
  using nlohmann::ordered_json;
  const StudyConfig& c = r.config;
  auto num = [](double v) -> ordered_json {
    if (!std::isfinite(v)) return nullptr;
    return v;
  };
  ordered_json j;
  j["name"] = c.name;
  j["profile"] = std::string(to_string(c.profile));
  j["lambda"] = c.lambda;
  j["U"] = c.U;
  j["alpha"] = c.alpha;
  j["s"] = c.s;
  j["s_prime"] = c.N_list.empty() ? c.s_prime : c.params_for(c.N_list.front()).s_prime;
  j["cubic"] = c.cubic;
  j["L"] = c.L;
  j["stationary"] = c.stationary;
  if (c.stationary) {
    j["tol"] = c.stationary_tol;
  } else {
    j["T_final"] = c.T_final;
  }
  j["rho0"] = {{"kind", std::string(to_string(c.rho0.kind))}, {"value", c.rho0.value}};
  j["modes"] = c.modes;
  j["N"] = r.N_list;
  j["pde_order"] = r.pde_orders;
  if (!c.stationary) j["init_order"] = r.init_orders;
  ordered_json errs = ordered_json::array();
  for (const auto& row : r.errors) {
    ordered_json jr = ordered_json::array();
    for (double v : row) jr.push_back(num(v));
    errs.push_back(jr);
  }
  j["errors"] = errs;
  ordered_json fits = ordered_json::array();
  for (double v : r.fitted_orders) fits.push_back(num(v));
  j["fitted_orders"] = fits;
  if (c.stationary) {
    j["stationary_steps"] = r.stationary_steps;
    ordered_json conv = ordered_json::array();
    for (bool b : r.stationary_converged) conv.push_back(b);
    j["stationary_converged"] = conv;
  }
  ordered_json failures = ordered_json::array();
  for (std::size_t i = 0; i < r.cell_errors.size(); ++i)
    for (std::size_t k = 0; k < r.cell_errors[i].size(); ++k)
      if (!r.cell_errors[i][k].empty())
        failures.push_back({{"N", r.N_list[i]}, {"order", r.pde_orders[k]},
                            {"error", r.cell_errors[i][k]}});
  j["failures"] = failures;
  return j.dump(2) + "\n";
}

}  // namespace d1q3
