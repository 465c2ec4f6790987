#pragma once

// Convergence studies: pair LBM runs with spectral solutions of the
// equivalent PDEs, measure max-norm errors at the mesh sites, fit orders.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "d1q3/core.hpp"
#include "d1q3/lbm.hpp"
#include "d1q3/spectral.hpp"

namespace d1q3 {

struct StudyConfig {
  std::string name;
  ProfileKind profile = ProfileKind::Constant;
  double lambda = 1.0;
  double U = 0.05;
  double alpha = -1.0;
  double s = 1.0 / 0.51;  // sigma = 0.01
  double s_prime = 1.2;
  bool cubic = false;  // replace s_prime by the cubic parameter
  double L = 1.0;
  double T_final = 1.0;
  bool stationary = false;
  double stationary_tol = 1e-13;
  long stationary_max_steps = 0;  // 0: 200 diffusive blocks
  std::vector<int> N_list{64, 128, 256, 512, 1024};
  std::vector<int> pde_orders{1, 2, 3, 4};
  std::vector<int> init_orders{0, 0, 0, 0};  // one per entry of pde_orders
  ProfileSpec rho0 = ProfileSpec::sine_wave(1.0);
  int modes = 0;  // 0: default_modes(N)

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
  /// Scheme parameters for one mesh (cubic s' resolved).
  [[nodiscard]] SchemeParams params_for(int N) const;
};

struct ConvergenceReport {
  StudyConfig config;
  std::vector<int> N_list;
  std::vector<int> pde_orders;
  std::vector<int> init_orders;
  std::vector<std::vector<double>> errors;  // [row N][column order]; NaN when the cell failed
  std::vector<std::vector<std::string>> cell_errors;
  std::vector<double> fitted_orders;        // NaN when fewer than 3 valid cells
  std::vector<long> stationary_steps;       // per row, stationary studies only
  std::vector<bool> stationary_converged;
  std::vector<double> stationary_increment;
};

[[nodiscard]] double max_norm_error(const std::vector<double>& a, const std::vector<double>& b);
[[nodiscard]] double max_norm_error(const std::vector<double>& lbm_density,
                                    const SpectralState& state, int N, double L = 1.0);

/// Negated least-squares slope of log2(err) against log2(N).  Needs at least
/// three points, all errors positive.
[[nodiscard]] double fit_convergence_order(const std::map<int, double>& errors);

/// Spectral reference at T_final (unsteady) for one mesh and PDE order.
[[nodiscard]] SpectralState spectral_reference(const StudyConfig& config, int N, int pde_order);

/// Spectral stationary solution for one mesh and PDE order.
[[nodiscard]] SpectralState spectral_stationary(const StudyConfig& config, int N, int pde_order);

/// Runs every (N, order) cell; rows run on up to `jobs` threads.
[[nodiscard]] ConvergenceReport run_study(const StudyConfig& config, int jobs = 1);

enum class TableFormat { Csv, Markdown };

[[nodiscard]] std::string emit_table(const ConvergenceReport& report, TableFormat format);

/// JSON summary: configuration echo, errors, fitted orders, stationary steps.
[[nodiscard]] std::string emit_summary(const ConvergenceReport& report);

/// Four significant digits in the style 7.606e-04.
[[nodiscard]] std::string format_error(double value);

}  // namespace d1q3
