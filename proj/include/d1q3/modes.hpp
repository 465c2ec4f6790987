#pragma once

// Eigen-analysis of the global one-step operator f(t+dt) = A f(t) of the
// D1Q3 scheme on N sites (state ordered (f+, f0, f-) per site).

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "d1q3/core.hpp"
#include "d1q3/lbm.hpp"

namespace d1q3 {

struct IterationMatrix {
  int N = 0;
  Eigen::SparseMatrix<double> sparse;

  [[nodiscard]] Eigen::MatrixXd dense() const { return Eigen::MatrixXd(sparse); }
  [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd& f) const { return sparse * f; }
};

inline constexpr int default_iteration_cap = 3 * 512;

/// Throws std::invalid_argument when 3N exceeds `cap`.
[[nodiscard]] IterationMatrix build_iteration_matrix(const SchemeParams& params,
                                                     const EquilibriumSpec& eq,
                                                     int cap = default_iteration_cap);

/// Flattens a particle field into the (f+, f0, f-) per-site ordering and back.
[[nodiscard]] Eigen::VectorXd flatten(const ParticleField& f);
[[nodiscard]] ParticleField unflatten(const Eigen::VectorXd& v);

/// Density rho_j = f+ + f0 + f- of a flattened (possibly complex) state.
[[nodiscard]] Eigen::VectorXcd state_density(const Eigen::VectorXcd& v);

enum class EigenMethod { Dense, Krylov };

struct ModeResult {
  std::complex<double> mu_eig;  // per-step eigenvalue
  double gamma_rate = 0.0;      // ln|mu| / dt
  double Gamma = 0.0;           // -gamma_rate / (kappa k^2)
  std::vector<double> mode_density;  // unit sup norm
  bool complex_pair = false;
  EigenMethod method = EigenMethod::Dense;
};

/// kappa = lambda dx sigma (alpha + 2) / 3
[[nodiscard]] double discrete_diffusivity(const SchemeParams& params);

/// Slowest non-conserved mode.  The conservation eigenvalue is identified by
/// the non-zero total density of its eigenvector (every other right
/// eigenvector carries zero mass).
[[nodiscard]] ModeResult leading_nontrivial_eigen(const IterationMatrix& A,
                                                  const SchemeParams& params,
                                                  EigenMethod method = EigenMethod::Dense);

struct KrylovOptions {
  int subspace = 60;
  int wanted = 6;
  int max_restarts = 40;
  double tol = 1e-10;
};

/// Eigenvalues of A nearest to 1 on the zero-mass subspace, by shift-invert
/// Arnoldi with explicit restarts.  Returns Ritz values and Ritz vectors.
struct KrylovPairs {
  std::vector<std::complex<double>> values;
  std::vector<Eigen::VectorXcd> vectors;
  std::vector<double> residuals;
};
[[nodiscard]] KrylovPairs shift_invert_arnoldi(const IterationMatrix& A,
                                               const KrylovOptions& options = {});

/// Stationary particle state with total mass `mass`, from a direct sparse
/// solve of (A - I) f = 0 bordered by the mass constraint.
[[nodiscard]] ParticleField stationary_state_direct(const IterationMatrix& A, double mass);

struct GammaCell {
  double U = 0.0;
  int N = 0;
  ModeResult mode;
  std::string error;  // empty on success
};

/// Gamma over a (U, N) grid; cells run on up to `jobs` threads.
[[nodiscard]] std::vector<GammaCell> gamma_surface(const SchemeParams& base,
                                                   const std::vector<double>& U_list,
                                                   const std::vector<int>& N_list,
                                                   EigenMethod method = EigenMethod::Dense,
                                                   int jobs = 1);

}  // namespace d1q3
