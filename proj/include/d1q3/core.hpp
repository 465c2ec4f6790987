#pragma once

// Parameter records, field containers and unit conventions shared by the
// lattice Boltzmann engine, the spectral solver and the study harness.
//
// Units: lambda is the lattice velocity dx/dt (acoustic scaling), U, alpha,
// s and s' are dimensionless.  Mesh sites sit at x_i = i * dx, i = 0..N-1,
// on a periodic domain of length L.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace d1q3 {

enum class ProfileKind { Constant, Cosine };

[[nodiscard]] std::string_view to_string(ProfileKind kind);
[[nodiscard]] ProfileKind parse_profile_kind(std::string_view text);

/// Advecting velocity u(x): lambda*U*cos(k x) or the constant lambda*U.
struct VelocityProfile {
  ProfileKind kind = ProfileKind::Cosine;
  double amplitude = 0.0;  // dimensionless U
};

struct SchemeParams {
  double lambda = 1.0;
  double U = 0.0;
  double alpha = -1.0;
  double s = 1.5;
  double s_prime = 1.2;
  int N = 64;
  double L = 1.0;
  double T_final = 1.0;

  // derived
  double dx = 0.0;
  double dt = 0.0;
  double k = 0.0;
  double sigma = 0.0;
  double sigma_prime = 0.0;

  /// Number of time steps that reach T_final (rounded to the nearest step).
  [[nodiscard]] long steps_to_final_time() const;
};

/// Validates the inputs and fills the derived fields.  Throws
/// std::invalid_argument for L <= 0, lambda <= 0, N < 4 or s, s' outside (0, 2).
[[nodiscard]] SchemeParams make_params(double lambda, double U, double alpha, double s,
                                       double s_prime, int N, double L, double T_final);

/// Same parameter set with a different mesh (derived fields recomputed).
[[nodiscard]] SchemeParams with_mesh(const SchemeParams& p, int N);

/// Henon parameter sigma = 1/s - 1/2.  Throws for s outside (0, 2).
[[nodiscard]] double henon(double s);

/// Inverse Henon map: relaxation rate s = 1 / (sigma + 1/2).
[[nodiscard]] double relaxation_from_henon(double sigma);

[[nodiscard]] double velocity_at(const VelocityProfile& profile, const SchemeParams& params,
                                 double x);

[[nodiscard]] inline double mesh_position(const SchemeParams& p, int i) {
  return static_cast<double>(i) * p.dx;
}

/// Initial density descriptor: rho0 = amplitude * sin(k x) or rho0 = level.
struct ProfileSpec {
  enum class Kind { SineWave, ConstantState };
  Kind kind = Kind::SineWave;
  double value = 1.0;

  [[nodiscard]] static ProfileSpec sine_wave(double amplitude = 1.0) {
    return {Kind::SineWave, amplitude};
  }
  [[nodiscard]] static ProfileSpec constant_state(double level = 1.0) {
    return {Kind::ConstantState, level};
  }

  [[nodiscard]] double operator()(double x, double k) const;
};

[[nodiscard]] std::string_view to_string(ProfileSpec::Kind kind);
[[nodiscard]] ProfileSpec::Kind parse_initial_kind(std::string_view text);

struct ParticleField {
  std::vector<double> plus;
  std::vector<double> zero;
  std::vector<double> minus;

  ParticleField() = default;
  explicit ParticleField(std::size_t n) : plus(n, 0.0), zero(n, 0.0), minus(n, 0.0) {}

  [[nodiscard]] std::size_t size() const { return plus.size(); }
};

struct MomentField {
  std::vector<double> rho;
  std::vector<double> J;
  std::vector<double> e;

  MomentField() = default;
  explicit MomentField(std::size_t n) : rho(n, 0.0), J(n, 0.0), e(n, 0.0) {}

  [[nodiscard]] std::size_t size() const { return rho.size(); }
};

}  // namespace d1q3
