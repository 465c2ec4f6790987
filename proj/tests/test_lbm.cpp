#include "doctest.h"

#include <cmath>
#include <random>

#include "d1q3/lbm.hpp"
#include "d1q3/spectral.hpp"
#include "oracles.hpp"

using namespace d1q3;

namespace {

SchemeParams params(double U, int N = 64, double s = 1.5, double sp = 1.2) {
  return make_params(1.0, U, -1.0, s, sp, N, 1.0, 1.0);
}

ParticleField random_field(int N, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  ParticleField f(N);
  for (int i = 0; i < N; ++i) {
    f.plus[i] = d(rng);
    f.zero[i] = d(rng);
    f.minus[i] = d(rng);
  }
  return f;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double total(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

TEST_CASE("moment maps") {
  const auto M = MomentMatrix::make(1.0);
  ParticleField rest(1);
  rest.plus[0] = rest.zero[0] = rest.minus[0] = 1.0 / 3.0;
  auto m = moments_from_particles(rest, M);
  CHECK(m.rho[0] == doctest::Approx(1.0));
  CHECK(std::abs(m.J[0]) < 1e-16);
  CHECK(std::abs(m.e[0]) < 1e-16);

  ParticleField one(1);
  one.plus[0] = 1.0;
  m = moments_from_particles(one, M);
  CHECK(m.rho[0] == 1.0);
  CHECK(m.J[0] == 1.0);
  CHECK(m.e[0] == 1.0);

  const auto back = particles_from_moments(m, M);
  CHECK(back.plus[0] == doctest::Approx(1.0));
  CHECK(std::abs(back.zero[0]) < 1e-15);
  CHECK(std::abs(back.minus[0]) < 1e-15);

  for (double lambda : {1.0, 2.5}) {
    const auto Ml = MomentMatrix::make(lambda);
    const auto f = random_field(50, 3);
    const auto g = particles_from_moments(moments_from_particles(f, Ml), Ml);
    CHECK(sup_diff(f.plus, g.plus) <= 1e-14);
    CHECK(sup_diff(f.zero, g.zero) <= 1e-14);
    CHECK(sup_diff(f.minus, g.minus) <= 1e-14);
  }
}

TEST_CASE("collision") {
  const auto p = params(0.05, 8);
  const auto eq = make_equilibrium(p, ProfileKind::Constant);
  MomentField m(8);
  for (int i = 0; i < 8; ++i) m.rho[i] = 1.0;
  const auto c = collide(m, eq, p);
  CHECK(c.J[3] == doctest::Approx(1.5 * 0.05));

  // equilibrium is a fixed point
  MomentField q(8);
  const auto u = velocity_field(eq, p);
  for (int i = 0; i < 8; ++i) {
    q.rho[i] = 1.0 + i;
    q.J[i] = u[i] * q.rho[i];
    q.e[i] = -q.rho[i];
  }
  const auto r = collide(q, eq, p);
  CHECK(sup_diff(r.J, q.J) < 1e-15);
  CHECK(sup_diff(r.e, q.e) < 1e-15);
}

TEST_CASE("streaming shifts") {
  ParticleField f(6);
  f.plus[0] = 1.0;
  f.minus[0] = 2.0;
  f.zero[0] = 3.0;
  const auto g = stream(f);
  CHECK(g.plus[1] == 1.0);
  CHECK(g.minus[5] == 2.0);
  CHECK(g.zero[0] == 3.0);
  ParticleField u(6);
  for (int i = 0; i < 6; ++i) u.plus[i] = u.zero[i] = u.minus[i] = 0.7;
  const auto h = stream(u);
  CHECK(h.plus == u.plus);
  CHECK(h.minus == u.minus);
}

TEST_CASE("lbm_step against a direct implementation") {
  for (auto kind : {ProfileKind::Constant, ProfileKind::Cosine}) {
    const auto p = params(0.3, 16, 1.7, 0.8);
    const auto eq = make_equilibrium(p, kind);
    const auto f = random_field(16, 5);
    oracle::Scheme sc{1.0, p.s, p.s_prime, p.alpha, velocity_field(eq, p)};
    std::vector<Eigen::Vector3d> v(16);
    for (int i = 0; i < 16; ++i) v[i] = {f.plus[i], f.zero[i], f.minus[i]};
    const auto ref = oracle::naive_step(v, sc);
    const auto got = lbm_step(f, eq, p);
    for (int i = 0; i < 16; ++i) {
      CHECK(std::abs(got.plus[i] - ref[i][0]) < 1e-14);
      CHECK(std::abs(got.zero[i] - ref[i][1]) < 1e-14);
      CHECK(std::abs(got.minus[i] - ref[i][2]) < 1e-14);
    }
  }
}

TEST_CASE("engine matches repeated lbm_step") {
  const auto p = params(0.05, 32);
  const auto eq = make_equilibrium(p, ProfileKind::Cosine);
  auto f = random_field(32, 9);
  LbmEngine eng(p, eq, f);
  for (int n = 0; n < 37; ++n) f = lbm_step(f, eq, p);
  eng.run(37);
  const auto g = eng.particles();
  CHECK(eng.steps_taken() == 37);
  CHECK(sup_diff(g.plus, f.plus) < 1e-13);
  CHECK(sup_diff(g.zero, f.zero) < 1e-13);
  CHECK(sup_diff(g.minus, f.minus) < 1e-13);
}

TEST_CASE("fixed points") {
  const auto p = params(0.0, 16);
  const auto eq = make_equilibrium(p, ProfileKind::Cosine);
  const auto f = initialize(ProfileSpec::constant_state(1.0), InitOrder::Order0, eq, p);
  const auto g = lbm_step(f, eq, p);
  CHECK(sup_diff(f.plus, g.plus) <= 1e-15);
  CHECK(sup_diff(f.zero, g.zero) <= 1e-15);
  CHECK(sup_diff(f.minus, g.minus) <= 1e-15);
}

TEST_CASE("mass conservation") {
  const auto p = params(0.05, 64);
  const auto eq = make_equilibrium(p, ProfileKind::Constant);
  const auto f = initialize(ProfileSpec::sine_wave(1.0), InitOrder::Order0, eq, p);
  const auto g = lbm_step(f, eq, p);
  const auto M = MomentMatrix::make(1.0);
  CHECK(std::abs(total(moments_from_particles(g, M).rho)) <= 1e-15 * 64);

  const auto pc = params(0.05, 64);
  const auto eqc = make_equilibrium(pc, ProfileKind::Cosine);
  LbmEngine eng(pc, eqc, initialize(ProfileSpec::constant_state(1.0), InitOrder::Order0, eqc, pc));
  const double m0 = eng.total_mass();
  eng.run(100000);
  CHECK(std::abs(eng.total_mass() - m0) / m0 <= 1e-12);
}

TEST_CASE("diffusion relaxes to the mean") {
  const auto p = params(0.0, 32, 1.0, 1.0);
  const auto eq = make_equilibrium(p, ProfileKind::Constant);
  LbmEngine eng(p, eq, initialize(ProfileSpec::sine_wave(1.0), InitOrder::Order0, eq, p));
  eng.run(4);
  double prev = 1e300;
  for (int n = 0; n < 32; ++n) {
    eng.run(8);
    const auto rho = eng.density();
    double amp = 0.0;
    for (double r : rho) amp = std::max(amp, std::abs(r));
    CHECK(amp < prev);
    prev = amp;
  }
}

TEST_CASE("initial moments") {
  const auto p = params(0.05, 64, 1.0 / 0.51, 1.2);
  const auto eqc = make_equilibrium(p, ProfileKind::Constant);
  const auto rho0 = ProfileSpec::sine_wave(1.0);

  const auto m0 = initial_moments(rho0, InitOrder::Order0, eqc, p);
  for (int i = 0; i < 64; ++i) {
    const double x = i / 64.0;
    CHECK(m0.J[i] == doctest::Approx(0.05 * std::sin(p.k * x)));
    CHECK(m0.e[i] == doctest::Approx(-std::sin(p.k * x)));
  }

  const auto m1 = initial_moments(rho0, InitOrder::Order1, eqc, p);
  for (int i = 0; i < 64; ++i) {
    const double x = i / 64.0;
    const double ref = 0.05 * std::sin(p.k * x) +
                       p.dt / p.s * p.k * std::cos(p.k * x) * (0.05 * 0.05 - 1.0 / 3.0);
    CHECK(std::abs(m1.J[i] - ref) < 1e-14);
  }

  InitOptions no_beta2;
  no_beta2.drop_beta2 = true;
  const auto m2 = initial_moments(rho0, InitOrder::Order2, eqc, p, no_beta2);
  CHECK(sup_diff(m2.J, m1.J) == 0.0);
  CHECK(sup_diff(m2.e, m1.e) == 0.0);
}

TEST_CASE("initialization corrections shrink with the mesh") {
  const auto eq_of = [](const SchemeParams& p) { return make_equilibrium(p, ProfileKind::Cosine); };
  std::vector<double> d1, d2, logN;
  for (int N : {64, 128, 256, 512, 1024}) {
    const auto p = params(0.05, N, 1.0 / 0.51, 1.2);
    const auto eq = eq_of(p);
    const auto rho0 = ProfileSpec::sine_wave(1.0);
    const auto a = initial_moments(rho0, InitOrder::Order0, eq, p);
    const auto b = initial_moments(rho0, InitOrder::Order1, eq, p);
    const auto c = initial_moments(rho0, InitOrder::Order2, eq, p);
    d1.push_back(std::max(sup_diff(a.J, b.J), sup_diff(a.e, b.e)));
    d2.push_back(std::max(sup_diff(b.J, c.J), sup_diff(b.e, c.e)));
    logN.push_back(std::log2(N));
  }
  auto slope = [&](const std::vector<double>& e) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(e.size());
    for (size_t i = 0; i < e.size(); ++i) {
      const double y = -std::log2(e[i]);
      sx += logN[i];
      sy += y;
      sxx += logN[i] * logN[i];
      sxy += logN[i] * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  CHECK(slope(d1) >= 0.9);
  CHECK(slope(d2) >= 1.9);
}

TEST_CASE("run_unsteady with zero final time returns the initialization") {
  auto p = params(0.05, 32);
  p.T_final = 0.0;
  const auto eq = make_equilibrium(p, ProfileKind::Cosine);
  const auto init = initial_moments(ProfileSpec::sine_wave(1.0), InitOrder::Order1, eq, p);
  const auto out = run_unsteady(ProfileSpec::sine_wave(1.0), InitOrder::Order1, eq, p);
  CHECK(sup_diff(init.rho, out.rho) < 1e-15);
  CHECK(sup_diff(init.J, out.J) < 1e-15);
}

TEST_CASE("stationary march") {
  const auto p0 = params(0.0, 32);
  const auto eq0 = make_equilibrium(p0, ProfileKind::Cosine);
  const auto r0 = run_to_stationary(ProfileSpec::constant_state(1.0), eq0, p0, 1e-13);
  CHECK(r0.converged);
  CHECK(r0.steps == 0);

  const auto p = params(0.005, 64);
  const auto eq = make_equilibrium(p, ProfileKind::Cosine);
  const auto r = run_to_stationary(ProfileSpec::constant_state(1.0), eq, p, 1e-13);
  CHECK(r.converged);
  CHECK(r.steps > 0);
  CHECK((r.steps - 1) % r.block == 0);
  // first-order stationary profile K exp(lambda U sin(kx) / (k mu)), unit mean
  const double mu = (p.alpha + 2.0) / 3.0 * p.sigma * p.dt;
  const double a = 0.005 / (p.k * mu);
  double worst = 0.0;
  for (int i = 0; i < 64; ++i) {
    const double ref = std::exp(a * std::sin(p.k * i / 64.0)) / std::cyl_bessel_i(0.0, a);
    worst = std::max(worst, std::abs(r.moments.rho[i] - ref));
  }
  CHECK(worst < 2e-3);
  // maximum sits where sin(kx) = 1
  const auto it = std::max_element(r.moments.rho.begin(), r.moments.rho.end());
  const double xmax = (it - r.moments.rho.begin()) / 64.0;
  CHECK(std::abs(xmax - 0.25) <= 2.0 / 64);

  CHECK_THROWS_AS((void)run_to_stationary(ProfileSpec::constant_state(1.0), eq, p, 0.0),
                  std::invalid_argument);
}

TEST_CASE("init order parsing") {
  CHECK(init_order_from_int(2) == InitOrder::Order2);
  CHECK_THROWS_AS((void)init_order_from_int(3), std::invalid_argument);
}
