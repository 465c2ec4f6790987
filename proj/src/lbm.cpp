#include "d1q3/lbm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "d1q3/equiv_pde.hpp"
#include "d1q3/spectral.hpp"

namespace d1q3 {

MomentMatrix MomentMatrix::make(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  const double l = lambda;
  const double l2 = l * l;
  MomentMatrix m;
  m.lambda = l;
  m.M = {{{1.0, 1.0, 1.0}, {l, 0.0, -l}, {l2, -2.0 * l2, l2}}};
  m.Minv = {{{1.0 / 3.0, 0.5 / l, 1.0 / (6.0 * l2)},
             {1.0 / 3.0, 0.0, -1.0 / (3.0 * l2)},
             {1.0 / 3.0, -0.5 / l, 1.0 / (6.0 * l2)}}};
  return m;
}

EquilibriumSpec make_equilibrium(const SchemeParams& params, ProfileKind kind) {
  return {{kind, params.U}, params.alpha};
}

InitOrder init_order_from_int(int order) {
  switch (order) {
    case 0: return InitOrder::Order0;
    case 1: return InitOrder::Order1;
    case 2: return InitOrder::Order2;
    default:
      throw std::invalid_argument("initialization order must be 0, 1 or 2, got " +
                                  std::to_string(order));
  }
}

MomentField moments_from_particles(const ParticleField& f, const MomentMatrix& M) {
  const size_t n = f.size();
  if (f.zero.size() != n || f.minus.size() != n) {
    throw std::invalid_argument("particle arrays differ in length");
  }
  MomentField m(n);
  for (size_t i = 0; i < n; ++i) {
    const double v[3] = {f.plus[i], f.zero[i], f.minus[i]};
    double* out[3] = {&m.rho[i], &m.J[i], &m.e[i]};
    for (int r = 0; r < 3; ++r) {
      *out[r] = M.M[r][0] * v[0] + M.M[r][1] * v[1] + M.M[r][2] * v[2];
    }
  }
  return m;
}

ParticleField particles_from_moments(const MomentField& m, const MomentMatrix& M) {
  const size_t n = m.size();
  if (m.J.size() != n || m.e.size() != n) {
    throw std::invalid_argument("moment arrays differ in length");
  }
  ParticleField f(n);
  for (size_t i = 0; i < n; ++i) {
    const double v[3] = {m.rho[i], m.J[i], m.e[i]};
    double* out[3] = {&f.plus[i], &f.zero[i], &f.minus[i]};
    for (int r = 0; r < 3; ++r) {
      *out[r] = M.Minv[r][0] * v[0] + M.Minv[r][1] * v[1] + M.Minv[r][2] * v[2];
    }
  }
  return f;
}

std::vector<double> velocity_field(const EquilibriumSpec& eq, const SchemeParams& params) {
  std::vector<double> u(static_cast<size_t>(params.N));
  for (int i = 0; i < params.N; ++i) {
    u[static_cast<size_t>(i)] = velocity_at(eq.profile, params, mesh_position(params, i));
  }
  return u;
}

MomentField collide(const MomentField& m, const EquilibriumSpec& eq, const SchemeParams& params) {
  if (static_cast<int>(m.size()) != params.N) {
    throw std::invalid_argument("moment field length differs from N");
  }
  const auto u = velocity_field(eq, params);
  const double l2 = params.lambda * params.lambda;
  MomentField out = m;
  for (size_t i = 0; i < m.size(); ++i) {
    out.J[i] = (1.0 - params.s) * m.J[i] + params.s * u[i] * m.rho[i];
    out.e[i] = (1.0 - params.s_prime) * m.e[i] + params.s_prime * l2 * eq.alpha * m.rho[i];
  }
  return out;
}

ParticleField stream(const ParticleField& f_star) {
  const size_t n = f_star.size();
  ParticleField f(n);
  f.zero = f_star.zero;
  for (size_t i = 0; i < n; ++i) {
    f.plus[(i + 1) % n] = f_star.plus[i];
    f.minus[(i + n - 1) % n] = f_star.minus[i];
  }
  return f;
}

ParticleField lbm_step(const ParticleField& f, const EquilibriumSpec& eq,
                       const SchemeParams& params) {
  const auto M = MomentMatrix::make(params.lambda);
  return stream(particles_from_moments(collide(moments_from_particles(f, M), eq, params), M));
}

// ---------------------------------------------------------------------------

LbmEngine::LbmEngine(const SchemeParams& params, const EquilibriumSpec& eq,
                     const ParticleField& f0)
    : N_(params.N),
      lambda_(params.lambda),
      s_(params.s),
      sp_(params.s_prime),
      e_eq_factor_(params.s_prime * params.lambda * params.lambda * eq.alpha),
      plus_(f0.plus),
      zero_(f0.zero),
      minus_(f0.minus) {
  if (static_cast<int>(f0.size()) != N_ || static_cast<int>(f0.zero.size()) != N_ ||
      static_cast<int>(f0.minus.size()) != N_) {
    throw std::invalid_argument("initial particle field length differs from N");
  }
  su_ = velocity_field(eq, params);
  for (auto& v : su_) v *= s_;
}

void LbmEngine::step() {
  // site i: f+ at plus_[ip], f- at minus_[im] with ip = i - shift_plus, im = i + shift_minus
  const double inv_l = 1.0 / lambda_;
  const double l = lambda_;
  const double l2 = lambda_ * lambda_;
  const double inv_l2 = 1.0 / l2;
  const double one_s = 1.0 - s_;
  const double one_sp = 1.0 - sp_;
  int ip = (N_ - shift_plus_) % N_;
  int im = shift_minus_;
  double* __restrict p = plus_.data();
  double* __restrict z = zero_.data();
  double* __restrict q = minus_.data();
  const double* su = su_.data();
  for (int i = 0; i < N_; ++i) {
    const double fp = p[ip];
    const double f0 = z[i];
    const double fm = q[im];
    const double rho = fp + f0 + fm;
    const double J = one_s * (l * (fp - fm)) + su[i] * rho;
    const double e = one_sp * (l2 * (fp - 2.0 * f0 + fm)) + e_eq_factor_ * rho;
    const double g0 = (rho - e * inv_l2) * (1.0 / 3.0);
    const double half = 0.5 * (rho - g0);
    const double jj = 0.5 * J * inv_l;
    p[ip] = half + jj;
    z[i] = g0;
    q[im] = half - jj;
    if (++ip == N_) ip = 0;
    if (++im == N_) im = 0;
  }
  shift_plus_ = (shift_plus_ + 1) % N_;
  shift_minus_ = (shift_minus_ + 1) % N_;
  ++steps_;
}

void LbmEngine::run(long steps) {
  for (long n = 0; n < steps; ++n) step();
}

ParticleField LbmEngine::particles() const {
  ParticleField f(static_cast<size_t>(N_));
  int ip = (N_ - shift_plus_) % N_;
  int im = shift_minus_;
  for (int i = 0; i < N_; ++i) {
    f.plus[static_cast<size_t>(i)] = plus_[static_cast<size_t>(ip)];
    f.zero[static_cast<size_t>(i)] = zero_[static_cast<size_t>(i)];
    f.minus[static_cast<size_t>(i)] = minus_[static_cast<size_t>(im)];
    if (++ip == N_) ip = 0;
    if (++im == N_) im = 0;
  }
  return f;
}

MomentField LbmEngine::moments() const {
  return moments_from_particles(particles(), MomentMatrix::make(lambda_));
}

void LbmEngine::density_into(std::vector<double>& out) const {
  out.resize(static_cast<size_t>(N_));
  int ip = (N_ - shift_plus_) % N_;
  int im = shift_minus_;
  for (int i = 0; i < N_; ++i) {
    out[static_cast<size_t>(i)] = plus_[static_cast<size_t>(ip)] +
                                  zero_[static_cast<size_t>(i)] +
                                  minus_[static_cast<size_t>(im)];
    if (++ip == N_) ip = 0;
    if (++im == N_) im = 0;
  }
}

std::vector<double> LbmEngine::density() const {
  std::vector<double> out;
  density_into(out);
  return out;
}

double LbmEngine::total_mass() const {
  double acc = 0.0;
  for (int i = 0; i < N_; ++i) {
    acc += plus_[static_cast<size_t>(i)] + zero_[static_cast<size_t>(i)] +
           minus_[static_cast<size_t>(i)];
  }
  return acc;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<WordTerm> to_terms(const OperatorPoly& p) {
  std::vector<WordTerm> out;
  for (const auto& [w, c] : p.terms()) out.push_back({c, w});
  return out;
}

}  // namespace

MomentField initial_moments(const ProfileSpec& rho0, InitOrder order, const EquilibriumSpec& eq,
                            const SchemeParams& params, const InitOptions& options) {
  const size_t n = static_cast<size_t>(params.N);
  const auto u = velocity_field(eq, params);
  const double l2 = params.lambda * params.lambda;

  MomentField m(n);
  for (size_t i = 0; i < n; ++i) {
    const double x = mesh_position(params, static_cast<int>(i));
    m.rho[i] = rho0(x, params.k);
    m.J[i] = u[i] * m.rho[i];
    m.e[i] = l2 * eq.alpha * m.rho[i];
  }
  if (order == InitOrder::Order0) return m;

  // beta_j rho0 evaluated in the truncated Fourier basis, then sampled.
  const int M = options.modes > 0 ? options.modes : default_modes(params.N);
  SchemeParams bp = params;
  bp.U = eq.profile.amplitude;
  bp.alpha = eq.alpha;
  const auto D = derivative_matrix(M, params.k);
  const auto Mu = multiplication_matrix(M, eq.profile);
  const SpectralState a = project_initial(rho0, M);

  auto add_level = [&](int level, double dt_power) {
    const auto beta = closed_form_beta(bp, level);
    SpectralState bJ(M);
    SpectralState be(M);
    bJ.coeffs = realize_terms(to_terms(beta[0]), D.mat, Mu.mat) * a.coeffs;
    be.coeffs = realize_terms(to_terms(beta[1]), D.mat, Mu.mat) * a.coeffs;
    const auto J = synthesize_at_mesh(bJ, params.N, params.L);
    const auto e = synthesize_at_mesh(be, params.N, params.L);
    for (size_t i = 0; i < n; ++i) {
      m.J[i] += dt_power / params.s * J[i];
      m.e[i] += dt_power / params.s_prime * e[i];
    }
  };
  add_level(1, params.dt);
  if (order == InitOrder::Order2 && !options.drop_beta2) add_level(2, params.dt * params.dt);
  return m;
}

ParticleField initialize(const ProfileSpec& rho0, InitOrder order, const EquilibriumSpec& eq,
                         const SchemeParams& params, const InitOptions& options) {
  return particles_from_moments(initial_moments(rho0, order, eq, params, options),
                                MomentMatrix::make(params.lambda));
}

MomentField run_unsteady(const ProfileSpec& rho0, InitOrder order, const EquilibriumSpec& eq,
                         const SchemeParams& params, const InitOptions& options) {
  LbmEngine engine(params, eq, initialize(rho0, order, eq, params, options));
  engine.run(params.steps_to_final_time());
  return engine.moments();
}

long diffusive_block_length(const SchemeParams& p) {
  const double kappa = p.lambda * p.dx * p.sigma * (p.alpha + 2.0) / 3.0;
  const double rate = kappa * p.k * p.k * p.dt;
  if (!(rate > 0.0)) {
    throw std::invalid_argument("diffusive rate must be positive (sigma > 0, alpha > -2)");
  }
  return static_cast<long>(std::ceil(1.0 / rate));
}

StationaryResult run_to_stationary(const ProfileSpec& rho0, const EquilibriumSpec& eq,
                                   const SchemeParams& params, double tol, long max_steps,
                                   long block) {
  if (!(tol > 0.0)) throw std::invalid_argument("stationary tolerance must be positive");
  StationaryResult res;
  res.block = block > 0 ? block : diffusive_block_length(params);
  if (max_steps <= 0) max_steps = 200 * res.block;

  LbmEngine engine(params, eq, initialize(rho0, InitOrder::Order0, eq, params));
  std::vector<double> prev = engine.density();
  std::vector<double> cur;

  auto relative_change = [&]() {
    double mean = 0.0;
    double diff = 0.0;
    for (size_t i = 0; i < cur.size(); ++i) {
      mean += cur[i];
      diff = std::max(diff, std::abs(cur[i] - prev[i]));
    }
    mean /= static_cast<double>(cur.size());
    return diff / std::abs(mean);
  };

  // a uniform equilibrium with zero velocity is already stationary
  {
    engine.step();
    engine.density_into(cur);
    res.last_increment = relative_change();
    if (res.last_increment < tol) {
      res.converged = true;
      res.steps = 0;
      res.moments = moments_from_particles(initialize(rho0, InitOrder::Order0, eq, params),
                                           MomentMatrix::make(params.lambda));
      return res;
    }
  }

  while (engine.steps_taken() < max_steps) {
    const long todo = std::min(res.block, max_steps - engine.steps_taken());
    engine.density_into(prev);
    engine.run(todo);
    engine.density_into(cur);
    res.last_increment = relative_change();
    if (todo == res.block && res.last_increment < tol) {
      res.converged = true;
      break;
    }
  }
  res.steps = engine.steps_taken();
  res.moments = engine.moments();
  return res;
}

}  // namespace d1q3
