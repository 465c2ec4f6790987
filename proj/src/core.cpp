#include "d1q3/core.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace d1q3 {

std::string_view to_string(ProfileKind kind) {
  return kind == ProfileKind::Constant ? "constant" : "cosine";
}

ProfileKind parse_profile_kind(std::string_view text) {
  if (text == "constant") return ProfileKind::Constant;
  if (text == "cosine") return ProfileKind::Cosine;
  throw std::invalid_argument("unknown velocity profile '" + std::string(text) +
                              "' (expected constant|cosine)");
}

std::string_view to_string(ProfileSpec::Kind kind) {
  return kind == ProfileSpec::Kind::SineWave ? "sine" : "constant";
}

ProfileSpec::Kind parse_initial_kind(std::string_view text) {
  if (text == "sine") return ProfileSpec::Kind::SineWave;
  if (text == "constant") return ProfileSpec::Kind::ConstantState;
  throw std::invalid_argument("unknown initial profile '" + std::string(text) +
                              "' (expected sine|constant)");
}

double ProfileSpec::operator()(double x, double k) const {
  return kind == Kind::SineWave ? value * std::sin(k * x) : value;
}

long SchemeParams::steps_to_final_time() const { return std::lround(T_final / dt); }

double henon(double s) {
  if (!(s > 0.0 && s < 2.0)) {
    throw std::invalid_argument("relaxation rate must lie in (0, 2), got " + std::to_string(s));
  }
  return 1.0 / s - 0.5;
}

double relaxation_from_henon(double sigma) {
  if (!(sigma > -0.5)) {
    throw std::invalid_argument("Henon parameter must exceed -1/2, got " + std::to_string(sigma));
  }
  return 1.0 / (sigma + 0.5);
}

SchemeParams make_params(double lambda, double U, double alpha, double s, double s_prime, int N,
                         double L, double T_final) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(L > 0.0)) throw std::invalid_argument("domain length L must be positive");
  if (N < 4) throw std::invalid_argument("mesh needs at least 4 points, got " + std::to_string(N));
  if (!(T_final >= 0.0)) throw std::invalid_argument("final time must be non-negative");
  if (!std::isfinite(U) || !std::isfinite(alpha)) {
    throw std::invalid_argument("U and alpha must be finite");
  }

  SchemeParams p;
  p.lambda = lambda;
  p.U = U;
  p.alpha = alpha;
  p.s = s;
  p.s_prime = s_prime;
  p.N = N;
  p.L = L;
  p.T_final = T_final;
  p.sigma = henon(s);
  p.sigma_prime = henon(s_prime);
  p.dx = L / N;
  p.dt = p.dx / lambda;
  p.k = 2.0 * std::numbers::pi / L;
  return p;
}

SchemeParams with_mesh(const SchemeParams& p, int N) {
  return make_params(p.lambda, p.U, p.alpha, p.s, p.s_prime, N, p.L, p.T_final);
}

double velocity_at(const VelocityProfile& profile, const SchemeParams& params, double x) {
  const double base = params.lambda * profile.amplitude;
  return profile.kind == ProfileKind::Cosine ? base * std::cos(params.k * x) : base;
}

}  // namespace d1q3
