#pragma once

// D1Q3 lattice Boltzmann scheme: moments (rho, J, e), relaxation of J and e
// towards an x-dependent equilibrium, exact periodic streaming, and the
// equilibrium / first / second order initializations.

#include <array>
#include <vector>

#include "d1q3/core.hpp"

namespace d1q3 {

struct MomentMatrix {
  double lambda = 1.0;
  std::array<std::array<double, 3>, 3> M{};
  std::array<std::array<double, 3>, 3> Minv{};

  [[nodiscard]] static MomentMatrix make(double lambda);
};

struct EquilibriumSpec {
  VelocityProfile profile;
  double alpha = -1.0;
};

/// Convenience: equilibrium built from the params (U, alpha) and a profile kind.
[[nodiscard]] EquilibriumSpec make_equilibrium(const SchemeParams& params, ProfileKind kind);

enum class InitOrder { Order0 = 0, Order1 = 1, Order2 = 2 };

/// Accepts 0, 1 or 2; throws std::invalid_argument otherwise.
[[nodiscard]] InitOrder init_order_from_int(int order);

[[nodiscard]] MomentField moments_from_particles(const ParticleField& f, const MomentMatrix& M);
[[nodiscard]] ParticleField particles_from_moments(const MomentField& m, const MomentMatrix& M);

/// Per-site velocity u(x_i).
[[nodiscard]] std::vector<double> velocity_field(const EquilibriumSpec& eq,
                                                 const SchemeParams& params);

[[nodiscard]] MomentField collide(const MomentField& m, const EquilibriumSpec& eq,
                                  const SchemeParams& params);

[[nodiscard]] ParticleField stream(const ParticleField& f_star);

[[nodiscard]] ParticleField lbm_step(const ParticleField& f, const EquilibriumSpec& eq,
                                     const SchemeParams& params);

/// In-place time loop.  Streaming is an index rotation: f+ and f- keep their
/// storage and only their offsets move, so a step touches each site once.
class LbmEngine {
 public:
  LbmEngine(const SchemeParams& params, const EquilibriumSpec& eq, const ParticleField& f0);

  void step();
  void run(long steps);

  [[nodiscard]] long steps_taken() const { return steps_; }
  [[nodiscard]] ParticleField particles() const;
  [[nodiscard]] MomentField moments() const;
  [[nodiscard]] std::vector<double> density() const;
  void density_into(std::vector<double>& out) const;
  [[nodiscard]] double total_mass() const;

 private:
  int N_;
  double lambda_;
  double s_;
  double sp_;
  double e_eq_factor_;  // s' lambda^2 alpha
  std::vector<double> su_;  // s u(x_i)
  std::vector<double> plus_, zero_, minus_;
  int shift_plus_ = 0;
  int shift_minus_ = 0;
  long steps_ = 0;
};

struct InitOptions {
  int modes = 0;               // spectral truncation for beta_j rho0; 0 = default_modes(N)
  bool drop_beta2 = false;     // force beta_2 = 0 (truncation-consistency checks)
};

/// Moments (rho0, Y_order(0)) at the mesh sites.
[[nodiscard]] MomentField initial_moments(const ProfileSpec& rho0, InitOrder order,
                                          const EquilibriumSpec& eq, const SchemeParams& params,
                                          const InitOptions& options = {});

[[nodiscard]] ParticleField initialize(const ProfileSpec& rho0, InitOrder order,
                                       const EquilibriumSpec& eq, const SchemeParams& params,
                                       const InitOptions& options = {});

/// Moments after round(T_final / dt) steps.
[[nodiscard]] MomentField run_unsteady(const ProfileSpec& rho0, InitOrder order,
                                       const EquilibriumSpec& eq, const SchemeParams& params,
                                       const InitOptions& options = {});

struct StationaryResult {
  MomentField moments;
  long steps = 0;
  bool converged = false;
  double last_increment = 0.0;  // relative change over the last block
  long block = 0;               // steps between two convergence checks
};

/// Number of steps over which the slowest diffusive mode decays by e:
/// ceil(1 / (kappa k^2 dt)), kappa = lambda dx sigma (alpha+2)/3.
[[nodiscard]] long diffusive_block_length(const SchemeParams& params);

/// Marches from rho0 at equilibrium until ||rho^{n+K} - rho^n||_inf <
/// tol * mean(rho), with K = diffusive_block_length (or `block` when > 0).
/// max_steps <= 0 selects 200 K.
[[nodiscard]] StationaryResult run_to_stationary(const ProfileSpec& rho0,
                                                 const EquilibriumSpec& eq,
                                                 const SchemeParams& params, double tol,
                                                 long max_steps = 0, long block = 0);

}  // namespace d1q3
