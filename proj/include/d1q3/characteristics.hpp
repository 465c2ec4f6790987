#pragma once

// Exact solution of rho_t + d/dx(u rho) = 0 for u = lambda U cos(kx) on a
// periodic domain, by the method of characteristics.  A constant velocity is
// also accepted (pure translation).

#include <vector>

#include "d1q3/core.hpp"

namespace d1q3 {

struct CharacteristicSolution {
  SchemeParams params;
  ProfileSpec rho0;
  VelocityProfile profile{ProfileKind::Cosine, 0.0};
  double T_char = 0.0;  // L / (lambda U); infinite when U = 0

  [[nodiscard]] double position(double x0, double t) const;
  [[nodiscard]] double foot(double x, double t) const;
  [[nodiscard]] double density(double x, double t) const;
};

[[nodiscard]] CharacteristicSolution make_characteristic_solution(
    const SchemeParams& params, const ProfileSpec& rho0,
    ProfileKind kind = ProfileKind::Cosine);

/// X(t) with X(0) = x0 for dX/dt = lambda U cos(kX), returned in [0, L).
[[nodiscard]] double characteristic_position(double x0, double t, const SchemeParams& params);

/// x0 such that characteristic_position(x0, t) = x.
[[nodiscard]] double foot_of_characteristic(double x, double t, const SchemeParams& params);

/// rho(x, t) = rho0(x0) cos(k x0) / cos(k x); close to a stagnation point
/// (|cos kx| < stagnation_threshold) the density is integrated along the
/// characteristic instead.
[[nodiscard]] double exact_density(double x, double t, const ProfileSpec& rho0,
                                   const SchemeParams& params);

/// Same three quantities for an arbitrary velocity profile kind.
[[nodiscard]] double characteristic_position(double x0, double t, const SchemeParams& params,
                                             ProfileKind kind);
[[nodiscard]] double foot_of_characteristic(double x, double t, const SchemeParams& params,
                                            ProfileKind kind);
[[nodiscard]] double exact_density(double x, double t, const ProfileSpec& rho0,
                                   const SchemeParams& params, ProfileKind kind);

/// Growth factor rho(X(t), t) / rho0(x0) integrated with RK4 along the
/// characteristic leaving x0 (cosine profile).
[[nodiscard]] double density_growth_along_characteristic(double x0, double t,
                                                         const SchemeParams& params,
                                                         int rk4_steps = 4096);

inline constexpr double stagnation_threshold = 1e-8;

/// Samples exact_density on n equally spaced points of [0, L).
[[nodiscard]] std::vector<double> sample_exact_density(double t, int n, const ProfileSpec& rho0,
                                                       const SchemeParams& params,
                                                       ProfileKind kind = ProfileKind::Cosine);

}  // namespace d1q3
