#include "doctest.h"

#include <cmath>
#include <random>

#include "d1q3/lbm.hpp"
#include "d1q3/modes.hpp"

using namespace d1q3;

namespace {

SchemeParams params(double U, int N) { return make_params(1.0, U, -1.0, 1.5, 1.2, N, 1.0, 1.0); }

Eigen::VectorXd random_state(int N, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::VectorXd v(3 * N);
  for (int i = 0; i < 3 * N; ++i) v[i] = d(rng);
  return v;
}

}  // namespace

TEST_CASE("iteration matrix reproduces one LBM step") {
  for (int N : {16, 64}) {
    for (double U : {0.0, 0.05, 0.4}) {
      for (auto kind : {ProfileKind::Cosine, ProfileKind::Constant}) {
        const auto p = params(U, N);
        const auto eq = make_equilibrium(p, kind);
        const auto A = build_iteration_matrix(p, eq);
        const Eigen::VectorXd f = random_state(N, static_cast<unsigned>(N + 100 * U));
        const Eigen::VectorXd ref = flatten(lbm_step(unflatten(f), eq, p));
        CHECK((A.apply(f) - ref).cwiseAbs().maxCoeff() <= 1e-13 * f.cwiseAbs().maxCoeff());
        const double m0 = state_density(f.cast<std::complex<double>>()).sum().real();
        const double m1 = state_density(A.apply(f).cast<std::complex<double>>()).sum().real();
        CHECK(std::abs(m1 - m0) <= 1e-13 * f.cwiseAbs().sum());
      }
    }
  }
}

TEST_CASE("iteration matrix size cap") {
  const auto p = params(0.05, 1024);
  CHECK_THROWS_AS((void)build_iteration_matrix(p, make_equilibrium(p, ProfileKind::Cosine)),
                  std::invalid_argument);
}

TEST_CASE("conservation eigenvalue") {
  const auto p = params(0.05, 32);
  const auto A = build_iteration_matrix(p, make_equilibrium(p, ProfileKind::Cosine));
  Eigen::EigenSolver<Eigen::MatrixXd> es(A.dense(), false);
  double closest = 1.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    closest = std::min(closest, std::abs(es.eigenvalues()[i] - 1.0));
  CHECK(closest <= 1e-13);
  // the uniform equilibrium is a fixed point when U = 0
  const auto p0 = params(0.0, 32);
  const auto eq0 = make_equilibrium(p0, ProfileKind::Cosine);
  const auto A0 = build_iteration_matrix(p0, eq0);
  const Eigen::VectorXd f = flatten(initialize(ProfileSpec::constant_state(1.0), InitOrder::Order0, eq0, p0));
  CHECK((A0.apply(f) - f).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("pure diffusion mode") {
  const auto p = params(0.0, 64);
  const auto A = build_iteration_matrix(p, make_equilibrium(p, ProfileKind::Cosine));
  const auto r = leading_nontrivial_eigen(A, p);
  CHECK(std::abs(r.Gamma - 1.00053560) < 1e-4);
  CHECK(r.mode_density.size() == 64);
  double sup = 0.0;
  for (double v : r.mode_density) sup = std::max(sup, std::abs(v));
  CHECK(sup == doctest::Approx(1.0));
}

TEST_CASE("dense and Krylov agree") {
  for (double U : {0.005, 0.05}) {
    const auto p = params(U, 128);
    const auto A = build_iteration_matrix(p, make_equilibrium(p, ProfileKind::Cosine));
    const auto d = leading_nontrivial_eigen(A, p, EigenMethod::Dense);
    const auto k = leading_nontrivial_eigen(A, p, EigenMethod::Krylov);
    CHECK(k.Gamma == doctest::Approx(d.Gamma).epsilon(1e-9));
    CHECK(std::abs(std::abs(k.mu_eig) - std::abs(d.mu_eig)) < 1e-12);
  }
}

TEST_CASE("Gamma grows with N at U = 0.05") {
  const auto base = params(0.05, 64);
  const auto cells = gamma_surface(base, {0.05}, {64, 128, 256}, EigenMethod::Krylov, 2);
  REQUIRE(cells.size() == 3);
  for (const auto& c : cells) CHECK(c.error.empty());
  CHECK(cells[0].mode.Gamma > 1.0);
  CHECK(cells[1].mode.Gamma > cells[0].mode.Gamma);
  CHECK(cells[2].mode.Gamma > cells[1].mode.Gamma);
}

TEST_CASE("direct stationary state matches the march") {
  const auto p = params(0.005, 64);
  const auto eq = make_equilibrium(p, ProfileKind::Cosine);
  const auto A = build_iteration_matrix(p, eq);
  const auto f = stationary_state_direct(A, 64.0);
  const auto direct = moments_from_particles(f, MomentMatrix::make(1.0)).rho;
  const auto march = run_to_stationary(ProfileSpec::constant_state(1.0), eq, p, 1e-14);
  REQUIRE(march.converged);
  double d = 0.0;
  for (int i = 0; i < 64; ++i) d = std::max(d, std::abs(direct[i] - march.moments.rho[i]));
  CHECK(d < 1e-11);
}

TEST_CASE("discrete diffusivity") {
  const auto p = params(0.05, 64);
  CHECK(discrete_diffusivity(p) == doctest::Approx(1.0 / 64 * (1.0 / 6.0) / 3.0));
}

TEST_CASE("Gamma surface captions") {
  const auto base = params(0.0, 64);
  const auto k = gamma_surface(base, {0.005}, {256}, EigenMethod::Krylov, 1);
  CHECK(std::abs(k[0].mode.Gamma - 3.00825658) / 3.00825658 < 1e-3);

  const auto zero = gamma_surface(base, {0.0}, {64, 128, 256}, EigenMethod::Krylov, 2);
  for (const auto& c : zero) CHECK(std::abs(c.mode.Gamma - 1.0) < 1e-3);

  const auto row = gamma_surface(base, {0.05}, {64, 128, 256, 512}, EigenMethod::Krylov, 2);
  double lo = 1e300, hi = 0.0;
  for (const auto& c : row) {
    const double r = c.mode.Gamma / (0.05 * c.N);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK((hi - lo) / lo < 0.25);
}

TEST_CASE("tiny mesh faithfulness") {
  const auto p = make_params(1.0, 0.0, -1.0, 1.0, 1.0, 4, 1.0, 1.0);
  const auto eq = make_equilibrium(p, ProfileKind::Cosine);
  const auto A = build_iteration_matrix(p, eq);
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Eigen::VectorXd f = random_state(4, seed);
    CHECK((A.apply(f) - flatten(lbm_step(unflatten(f), eq, p))).cwiseAbs().maxCoeff() <= 1e-14);
  }
}
