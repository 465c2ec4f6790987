#pragma once

// Truncated real Fourier representation of the equivalent PDEs.
//
// Coefficient layout for M modes (vector length 2M+1):
//   [0]        constant a0
//   [m]        interlaced mode m of S_i: sin(mkx) for odd m, cos(mkx) for even m
//   [M + m]    partner mode m of S_p:   cos(mkx) for odd m, sin(mkx) for even m
// With a cosine velocity every operator in play maps S_i (+ constants) into
// itself, so the S_p block stays zero; a constant velocity mixes both blocks.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "d1q3/core.hpp"
#include "d1q3/equiv_pde.hpp"

namespace d1q3 {

/// 30 modes up to N = 128, 60 beyond.
[[nodiscard]] int default_modes(int N);

struct SpectralState {
  int M = 0;
  Eigen::VectorXd coeffs;

  SpectralState() = default;
  explicit SpectralState(int modes) : M(modes), coeffs(Eigen::VectorXd::Zero(2 * modes + 1)) {}

  [[nodiscard]] double a0() const { return coeffs[0]; }
  [[nodiscard]] double interlaced(int m) const { return coeffs[m]; }
  [[nodiscard]] double partner(int m) const { return coeffs[M + m]; }
  double& interlaced(int m) { return coeffs[m]; }
  double& partner(int m) { return coeffs[M + m]; }
};

struct OperatorMatrix {
  Eigen::MatrixXd mat;
  std::string label;
  int M = 0;
};

/// Coefficient index of cos(mkx) / sin(mkx), or -1 when m > M (or sin(0)).
[[nodiscard]] int cos_index(int M, int m);
[[nodiscard]] int sin_index(int M, int m);

/// Value of basis function idx at x.
[[nodiscard]] double basis_value(int M, int idx, double k, double x);

[[nodiscard]] OperatorMatrix derivative_matrix(int M, double k);

/// Multiplication by U cos(kx), truncated at mode M.
[[nodiscard]] OperatorMatrix velocity_multiplication_matrix(int M, double U);

/// Multiplication by u/lambda for either profile kind.
[[nodiscard]] OperatorMatrix multiplication_matrix(int M, const VelocityProfile& profile);

/// d_u = d/dx o (multiplication by u/lambda).
[[nodiscard]] OperatorMatrix du_matrix(int M, double k, const VelocityProfile& profile);

/// Realizes a word over {x, u, m} as a product of D and Mu matrices.
[[nodiscard]] Eigen::MatrixXd realize_word(const std::string& word, const Eigen::MatrixXd& D,
                                           const Eigen::MatrixXd& Mu);

[[nodiscard]] Eigen::MatrixXd realize_terms(const std::vector<WordTerm>& terms,
                                            const Eigen::MatrixXd& D, const Eigen::MatrixXd& Mu);

/// Truncated matrix of A_order (order 1..4), so that rho_t + A rho = 0.
[[nodiscard]] OperatorMatrix assemble_A(int order, const PdeCoefficients& coeffs,
                                        const SchemeParams& params,
                                        const VelocityProfile& profile, int M);

/// Truncated matrix of the once-integrated stationary operator.
[[nodiscard]] OperatorMatrix assemble_A_infinity(int order, const PdeCoefficients& coeffs,
                                                 const SchemeParams& params,
                                                 const VelocityProfile& profile, int M);

/// sum_{j<=5} (-dt A)^j / j!
[[nodiscard]] Eigen::MatrixXd taylor5_propagator(const Eigen::MatrixXd& A, double dt);

/// One Horner step of the degree-5 Taylor polynomial of exp(-dt A).
[[nodiscard]] SpectralState step_taylor5(const OperatorMatrix& A, double dt,
                                         const SpectralState& state);

/// `steps` repeated Taylor-5 steps with a precomputed propagator.
[[nodiscard]] SpectralState evolve_taylor5(const OperatorMatrix& A, double dt, long steps,
                                           const SpectralState& state);

struct StationaryOptions {
  double max_condition = 1e12;
};

/// Pins a0 = 1/L and solves A_inf rho = 0 on the remaining coefficients.
/// Throws std::runtime_error when the reduced system is singular or its
/// condition number exceeds options.max_condition.
[[nodiscard]] SpectralState solve_stationary(const OperatorMatrix& Ainf, double L,
                                             const StationaryOptions& options = {});

[[nodiscard]] std::vector<double> synthesize(const SpectralState& state, double k,
                                             const std::vector<double>& x);
[[nodiscard]] std::vector<double> synthesize_at_mesh(const SpectralState& state, int N,
                                                     double L = 1.0);

[[nodiscard]] SpectralState project_initial(const ProfileSpec& rho0, int M);

/// Discrete Fourier projection of mesh samples (sites i*L/N) onto M modes.
[[nodiscard]] SpectralState project_mesh(const std::vector<double>& values, int M,
                                         double L = 1.0);

}  // namespace d1q3
