#include "d1q3/spectral.hpp"

#include <algorithm>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace d1q3 {

// Meshes too coarse to carry 30 modes get N/2; the truncated high-order
// operator is unstable far above the mesh Nyquist.
int default_modes(int N) {
  if (N <= 128) return std::min(30, std::max(1, N / 2));
  return 60;
}

int cos_index(int M, int m) {
  if (m < 0 || m > M) return -1;
  if (m == 0) return 0;
  return (m % 2 == 1) ? M + m : m;
}

int sin_index(int M, int m) {
  if (m <= 0 || m > M) return -1;
  return (m % 2 == 1) ? m : M + m;
}

double basis_value(int M, int idx, double k, double x) {
  if (idx == 0) return 1.0;
  const bool partner = idx > M;
  const int m = partner ? idx - M : idx;
  const bool is_sin = (m % 2 == 1) != partner;
  return is_sin ? std::sin(m * k * x) : std::cos(m * k * x);
}

OperatorMatrix derivative_matrix(int M, double k) {
  if (M < 2) throw std::invalid_argument("spectral truncation needs at least 2 modes");
  const int n = 2 * M + 1;
  OperatorMatrix D{Eigen::MatrixXd::Zero(n, n), "dx", M};
  for (int m = 1; m <= M; ++m) {
    D.mat(sin_index(M, m), cos_index(M, m)) = -m * k;
    D.mat(cos_index(M, m), sin_index(M, m)) = m * k;
  }
  return D;
}

OperatorMatrix velocity_multiplication_matrix(int M, double U) {
  if (M < 2) throw std::invalid_argument("spectral truncation needs at least 2 modes");
  const int n = 2 * M + 1;
  OperatorMatrix Mu{Eigen::MatrixXd::Zero(n, n), "m_u", M};
  auto add = [&](int row, int col, double w) {
    if (row >= 0 && col >= 0) Mu.mat(row, col) += w;
  };
  add(cos_index(M, 1), 0, U);
  for (int m = 1; m <= M; ++m) {
    // cos(kx) cos(mkx) = [cos((m-1)kx) + cos((m+1)kx)] / 2
    add(cos_index(M, m - 1), cos_index(M, m), 0.5 * U);
    add(cos_index(M, m + 1), cos_index(M, m), 0.5 * U);
    // cos(kx) sin(mkx) = [sin((m+1)kx) + sin((m-1)kx)] / 2
    add(sin_index(M, m + 1), sin_index(M, m), 0.5 * U);
    add(sin_index(M, m - 1), sin_index(M, m), 0.5 * U);
  }
  return Mu;
}

OperatorMatrix multiplication_matrix(int M, const VelocityProfile& profile) {
  if (profile.kind == ProfileKind::Cosine) {
    return velocity_multiplication_matrix(M, profile.amplitude);
  }
  const int n = 2 * M + 1;
  return {profile.amplitude * Eigen::MatrixXd::Identity(n, n), "m_u", M};
}

OperatorMatrix du_matrix(int M, double k, const VelocityProfile& profile) {
  const OperatorMatrix D = derivative_matrix(M, k);
  const OperatorMatrix Mu = multiplication_matrix(M, profile);
  return {D.mat * Mu.mat, "d_u", M};
}

Eigen::MatrixXd realize_word(const std::string& word, const Eigen::MatrixXd& D,
                             const Eigen::MatrixXd& Mu) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(D.rows(), D.cols());
  const Eigen::MatrixXd Du = D * Mu;
  for (char c : word) {
    switch (c) {
      case 'x': out = out * D; break;
      case 'm': out = out * Mu; break;
      case 'u': out = out * Du; break;
      default: throw std::invalid_argument(std::string("unknown operator letter '") + c + "'");
    }
  }
  return out;
}

Eigen::MatrixXd realize_terms(const std::vector<WordTerm>& terms, const Eigen::MatrixXd& D,
                              const Eigen::MatrixXd& Mu) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(D.rows(), D.cols());
  for (const auto& t : terms) out += t.coeff * realize_word(t.word, D, Mu);
  return out;
}

OperatorMatrix assemble_A(int order, const PdeCoefficients& coeffs, const SchemeParams& params,
                          const VelocityProfile& profile, int M) {
  const auto D = derivative_matrix(M, params.k);
  const auto Mu = multiplication_matrix(M, profile);
  const auto terms = operator_A_words(coeffs, params.lambda, order);
  return {realize_terms(terms, D.mat, Mu.mat), "A_" + std::to_string(order), M};
}

OperatorMatrix assemble_A_infinity(int order, const PdeCoefficients& coeffs,
                                   const SchemeParams& params, const VelocityProfile& profile,
                                   int M) {
  const auto D = derivative_matrix(M, params.k);
  const auto Mu = multiplication_matrix(M, profile);
  const auto terms = operator_A_infinity_words(coeffs, params.lambda, order);
  return {realize_terms(terms, D.mat, Mu.mat), "A_inf_" + std::to_string(order), M};
}

Eigen::MatrixXd taylor5_propagator(const Eigen::MatrixXd& A, double dt) {
  const Eigen::Index n = A.rows();
  const Eigen::MatrixXd B = -dt * A;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd P = I;
  for (int j = 5; j >= 1; --j) P = I + (B * P) / j;
  return P;
}

SpectralState step_taylor5(const OperatorMatrix& A, double dt, const SpectralState& state) {
  if (A.mat.rows() != state.coeffs.size()) {
    throw std::invalid_argument("operator and state sizes differ");
  }
  SpectralState out = state;
  for (int j = 5; j >= 1; --j) out.coeffs = state.coeffs - dt * (A.mat * out.coeffs) / j;
  return out;
}

SpectralState evolve_taylor5(const OperatorMatrix& A, double dt, long steps,
                             const SpectralState& state) {
  if (A.mat.rows() != state.coeffs.size()) {
    throw std::invalid_argument("operator and state sizes differ");
  }
  const Eigen::MatrixXd P = taylor5_propagator(A.mat, dt);
  SpectralState out = state;
  for (long n = 0; n < steps; ++n) out.coeffs = P * out.coeffs;
  return out;
}

SpectralState solve_stationary(const OperatorMatrix& Ainf, double L,
                               const StationaryOptions& options) {
  if (!(L > 0.0)) throw std::invalid_argument("domain length must be positive");
  const Eigen::Index n = Ainf.mat.rows();
  const double a0 = 1.0 / L;
  const Eigen::MatrixXd sub = Ainf.mat.bottomRightCorner(n - 1, n - 1);
  const Eigen::VectorXd rhs = -a0 * Ainf.mat.col(0).tail(n - 1);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || smax / smin > options.max_condition) {
    throw std::runtime_error("stationary system is singular or ill-conditioned (condition " +
                             std::to_string(smin > 0.0 ? smax / smin : INFINITY) + ")");
  }

  SpectralState out(Ainf.M);
  out.coeffs[0] = a0;
  out.coeffs.tail(n - 1) = sub.partialPivLu().solve(rhs);
  return out;
}

std::vector<double> synthesize(const SpectralState& state, double k,
                               const std::vector<double>& x) {
  std::vector<double> out(x.size(), state.a0());
  const int M = state.M;
  for (size_t i = 0; i < x.size(); ++i) {
    double acc = state.a0();
    for (int idx = 1; idx <= 2 * M; ++idx) {
      const double c = state.coeffs[idx];
      if (c != 0.0) acc += c * basis_value(M, idx, k, x[i]);
    }
    out[i] = acc;
  }
  return out;
}

std::vector<double> synthesize_at_mesh(const SpectralState& state, int N, double L) {
  std::vector<double> x(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) x[static_cast<size_t>(i)] = i * L / N;
  return synthesize(state, 2.0 * std::numbers::pi / L, x);
}

SpectralState project_initial(const ProfileSpec& rho0, int M) {
  SpectralState s(M);
  if (rho0.kind == ProfileSpec::Kind::SineWave) {
    s.coeffs[sin_index(M, 1)] = rho0.value;
  } else {
    s.coeffs[0] = rho0.value;
  }
  return s;
}

SpectralState project_mesh(const std::vector<double>& values, int M, double L) {
  const int N = static_cast<int>(values.size());
  if (N < 2) throw std::invalid_argument("projection needs at least two samples");
  const double k = 2.0 * std::numbers::pi / L;
  SpectralState s(M);
  double mean = 0.0;
  for (double v : values) mean += v;
  s.coeffs[0] = mean / N;
  for (int m = 1; m <= M && 2 * m <= N; ++m) {
    double cs = 0.0;
    double sn = 0.0;
    for (int i = 0; i < N; ++i) {
      const double x = i * L / N;
      cs += values[static_cast<size_t>(i)] * std::cos(m * k * x);
      sn += values[static_cast<size_t>(i)] * std::sin(m * k * x);
    }
    const double w = (2 * m == N) ? 1.0 / N : 2.0 / N;
    s.coeffs[cos_index(M, m)] = w * cs;
    if (2 * m != N) s.coeffs[sin_index(M, m)] = w * sn;
  }
  return s;
}

}  // namespace d1q3
