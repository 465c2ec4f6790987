#include "d1q3/characteristics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace d1q3 {

namespace {

constexpr double pi = std::numbers::pi;

double wrap(double x, double L) {
  double r = std::fmod(x, L);
  if (r < 0.0) r += L;
  if (r >= L) r -= L;
  return r;
}

// Moebius map on theta = pi x / L: cot(theta) = (tau + cot(theta0)) / (1 + tau cot(theta0)).
double moebius(double x0, double tau, double L) {
  const double th0 = pi * x0 / L;
  double th = std::atan2(std::sin(th0) + tau * std::cos(th0), std::cos(th0) + tau * std::sin(th0));
  th = std::fmod(th, pi);
  if (th < 0.0) th += pi;
  return wrap(th * L / pi, L);
}

double tau_of(double t, const SchemeParams& p) {
  return std::tanh(pi * p.lambda * p.U * t / p.L);
}

}  // namespace

double characteristic_position(double x0, double t, const SchemeParams& p) {
  return characteristic_position(x0, t, p, ProfileKind::Cosine);
}

double foot_of_characteristic(double x, double t, const SchemeParams& p) {
  return foot_of_characteristic(x, t, p, ProfileKind::Cosine);
}

double exact_density(double x, double t, const ProfileSpec& rho0, const SchemeParams& p) {
  return exact_density(x, t, rho0, p, ProfileKind::Cosine);
}

double characteristic_position(double x0, double t, const SchemeParams& p, ProfileKind kind) {
  if (kind == ProfileKind::Constant) return wrap(x0 + p.lambda * p.U * t, p.L);
  if (t == 0.0 || p.U == 0.0) return wrap(x0, p.L);
  return moebius(x0, tau_of(t, p), p.L);
}

double foot_of_characteristic(double x, double t, const SchemeParams& p, ProfileKind kind) {
  if (kind == ProfileKind::Constant) return wrap(x - p.lambda * p.U * t, p.L);
  if (t == 0.0 || p.U == 0.0) return wrap(x, p.L);
  return moebius(x, -tau_of(t, p), p.L);
}

double density_growth_along_characteristic(double x0, double t, const SchemeParams& p,
                                           int rk4_steps) {
  // state (X, g) with g = ln(rho / rho0(x0)); dX/dt = lU cos kX, dg/dt = lU k sin kX
  const double a = p.lambda * p.U;
  const double k = p.k;
  const double h = t / rk4_steps;
  double X = x0;
  double g = 0.0;
  auto fX = [&](double y) { return a * std::cos(k * y); };
  auto fg = [&](double y) { return a * k * std::sin(k * y); };
  for (int n = 0; n < rk4_steps; ++n) {
    const double k1x = fX(X), k1g = fg(X);
    const double X2 = X + 0.5 * h * k1x;
    const double k2x = fX(X2), k2g = fg(X2);
    const double X3 = X + 0.5 * h * k2x;
    const double k3x = fX(X3), k3g = fg(X3);
    const double X4 = X + h * k3x;
    const double k4x = fX(X4), k4g = fg(X4);
    X += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    g += h / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
  }
  return std::exp(g);
}

double exact_density(double x, double t, const ProfileSpec& rho0, const SchemeParams& p,
                     ProfileKind kind) {
  const double k = p.k;
  if (kind == ProfileKind::Constant || t == 0.0 || p.U == 0.0) {
    return rho0(foot_of_characteristic(x, t, p, kind), k);
  }
  const double x0 = foot_of_characteristic(x, t, p, kind);
  const double c = std::cos(k * x);
  if (std::abs(c) >= stagnation_threshold) {
    return rho0(x0, k) * std::cos(k * x0) / c;
  }
  return rho0(x0, k) * density_growth_along_characteristic(x0, t, p);
}

CharacteristicSolution make_characteristic_solution(const SchemeParams& params,
                                                    const ProfileSpec& rho0, ProfileKind kind) {
  CharacteristicSolution s;
  s.params = params;
  s.rho0 = rho0;
  s.profile = {kind, params.U};
  s.T_char = params.U == 0.0 ? std::numeric_limits<double>::infinity()
                             : params.L / (params.lambda * params.U);
  return s;
}

double CharacteristicSolution::position(double x0, double t) const {
  return characteristic_position(x0, t, params, profile.kind);
}

double CharacteristicSolution::foot(double x, double t) const {
  return foot_of_characteristic(x, t, params, profile.kind);
}

double CharacteristicSolution::density(double x, double t) const {
  return exact_density(x, t, rho0, params, profile.kind);
}

std::vector<double> sample_exact_density(double t, int n, const ProfileSpec& rho0,
                                         const SchemeParams& params, ProfileKind kind) {
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<size_t>(i)] = exact_density(i * params.L / n, t, rho0, params, kind);
  }
  return out;
}

}  // namespace d1q3
