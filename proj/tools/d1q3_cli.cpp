// Command-line driver: exact, unsteady, stationary, spectral, coeffs, modes,
// convergence.  Data goes to stdout or to files under --out (or $D1Q3_OUT_DIR);
// timings and progress go to stderr only.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "d1q3/characteristics.hpp"
#include "d1q3/config.hpp"
#include "d1q3/equiv_pde.hpp"
#include "d1q3/harness.hpp"
#include "d1q3/lbm.hpp"
#include "d1q3/modes.hpp"
#include "d1q3/spectral.hpp"

namespace fs = std::filesystem;
using namespace d1q3;

namespace {

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt_short(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Sink {
  std::string dir;  // empty: stdout

  void write(const std::string& name, const std::string& text) const {
    if (dir.empty()) {
      std::cout << text;
      return;
    }
    fs::create_directories(dir);
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
    std::cerr << "wrote " << path.string() << "\n";
  }

  // Run summaries go next to the data when writing files, else to stderr so
  // stdout stays plain CSV.
  void summary(const std::string& name, const std::string& text) const {
    if (dir.empty())
      std::cerr << text;
    else
      write(name, text);
  }
};

std::string summary_json(const std::vector<std::pair<std::string, std::string>>& fields) {
  std::string out = "{";
  for (std::size_t i = 0; i < fields.size(); ++i)
    out += (i ? ", \"" : "\"") + fields[i].first + "\": " + fields[i].second;
  return out + "}\n";
}

double mesh_mass(const SchemeParams& p, const std::vector<double>& rho) {
  double m = 0.0;
  for (double r : rho) m += r;
  return m * p.dx;
}

// Scheme flags shared by the run-type subcommands.  Values given on the
// command line override the --config file, which overrides the defaults.
struct SchemeFlags {
  std::string config;
  std::optional<double> lambda, U, alpha, s, sigma, s_prime, sigma_prime, L, T;
  std::optional<int> N, modes, init_order, pde_order;
  std::optional<std::string> profile, rho0_kind;
  std::optional<double> rho0_value;
  bool cubic = false;

  void bind(CLI::App* app, bool with_orders) {
    app->add_option("--config", config, "JSON configuration file")->check(CLI::ExistingFile);
    app->add_option("--lambda", lambda, "lattice velocity dx/dt")->check(CLI::PositiveNumber);
    app->add_option("--U", U, "velocity amplitude");
    app->add_option("--alpha", alpha, "energy equilibrium parameter");
    auto* os = app->add_option("--s", s, "relaxation rate of J, in (0,2)")->check(CLI::Range(0.0, 2.0));
    app->add_option("--sigma", sigma, "Henon parameter of J")->excludes(os);
    auto* osp = app->add_option("--s-prime", s_prime, "relaxation rate of e, in (0,2)")
                    ->check(CLI::Range(0.0, 2.0));
    app->add_option("--sigma-prime", sigma_prime, "Henon parameter of e")->excludes(osp);
    app->add_flag("--cubic", cubic, "use the cubic parameter for s'");
    app->add_option("--N", N, "number of mesh sites")->check(CLI::Range(4, 1 << 22));
    app->add_option("--L", L, "domain length")->check(CLI::PositiveNumber);
    app->add_option("--T", T, "final time")->check(CLI::NonNegativeNumber);
    app->add_option("--profile", profile, "velocity profile")->check(CLI::IsMember({"constant", "cosine"}));
    app->add_option("--rho0", rho0_kind, "initial density kind")->check(CLI::IsMember({"sine", "constant"}));
    app->add_option("--rho0-value", rho0_value, "sine amplitude or constant level");
    app->add_option("--modes", modes, "Fourier modes (0: min(30, N/2) up to N=128, 60 beyond)")
        ->check(CLI::NonNegativeNumber);
    if (with_orders) {
      app->add_option("--init-order", init_order, "initialization order 0, 1 or 2")->check(CLI::Range(0, 2));
      app->add_option("--pde-order", pde_order, "equivalent PDE order 1..4")->check(CLI::Range(1, 4));
    }
  }

  [[nodiscard]] RunConfig resolve(RunConfig c) const {
    if (!config.empty()) c = parse_run_config(read_text_file(config), c);
    if (lambda) c.lambda = *lambda;
    if (U) c.U = *U;
    if (alpha) c.alpha = *alpha;
    if (s) c.s = *s;
    if (sigma) c.s = relaxation_from_henon(*sigma);
    if (s_prime) c.s_prime = *s_prime;
    if (sigma_prime) c.s_prime = relaxation_from_henon(*sigma_prime);
    if (cubic) c.cubic = true;
    if (N) c.N = *N;
    if (L) c.L = *L;
    if (T) c.T_final = *T;
    if (profile) c.profile = parse_profile_kind(*profile);
    if (rho0_kind) c.rho0.kind = parse_initial_kind(*rho0_kind);
    if (rho0_value) c.rho0.value = *rho0_value;
    if (modes) c.modes = *modes;
    if (init_order) c.init_order = *init_order;
    if (pde_order) c.pde_order = *pde_order;
    return c;
  }
};

std::string mesh_csv(const SchemeParams& p, const std::vector<std::string>& names,
                     const std::vector<const std::vector<double>*>& cols) {
  std::ostringstream out;
  out << "x";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (int i = 0; i < p.N; ++i) {
    out << fmt(mesh_position(p, i));
    for (const auto* c : cols) out << ',' << fmt((*c)[i]);
    out << '\n';
  }
  return out.str();
}

class Timer {
 public:
  explicit Timer(std::string what) : what_(std::move(what)), t0_(std::chrono::steady_clock::now()) {}
  ~Timer() {
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    std::cerr << what_ << ": " << fmt_short(s) << " s\n";
  }

 private:
  std::string what_;
  std::chrono::steady_clock::time_point t0_;
};

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"D1Q3 lattice Boltzmann scheme with space-dependent advection: runs, "
               "equivalent PDEs, eigenmodes and convergence studies"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  std::string out_dir;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  int jobs = static_cast<int>(hw);
  app.add_option("--out", out_dir, "output directory (default: $D1Q3_OUT_DIR, else stdout)");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 1024));

  // exact
  auto* exact = app.add_subcommand("exact", "exact density by characteristics");
  SchemeFlags exact_flags;
  exact_flags.bind(exact, false);
  int exact_samples = 0;
  exact->add_option("--samples", exact_samples, "sample count (default N)")->check(CLI::NonNegativeNumber);

  // unsteady
  auto* unsteady = app.add_subcommand("unsteady", "LBM run to T_final");
  SchemeFlags unsteady_flags;
  unsteady_flags.bind(unsteady, true);

  // stationary
  auto* stationary = app.add_subcommand("stationary", "LBM march to the stationary state");
  SchemeFlags stat_flags;
  stat_flags.bind(stationary, false);
  std::optional<double> stat_tol;
  std::optional<long> stat_max;
  bool stat_direct = false;
  stationary->add_option("--tol", stat_tol, "block increment tolerance relative to the mean")
      ->check(CLI::PositiveNumber);
  stationary->add_option("--max-steps", stat_max, "step budget (0: 200 diffusive blocks)");
  stationary->add_flag("--direct", stat_direct, "sparse null-space solve instead of marching");

  // spectral
  auto* spectral = app.add_subcommand("spectral", "spectral solution of an equivalent PDE");
  SchemeFlags spec_flags;
  spec_flags.bind(spectral, true);
  bool spec_stationary = false;
  bool spec_coeffs = false;
  spectral->add_flag("--stationary", spec_stationary, "solve the stationary operator instead");
  spectral->add_flag("--coefficients", spec_coeffs, "print Fourier coefficients, not mesh values");

  // coeffs
  auto* coeffs = app.add_subcommand("coeffs", "equivalent PDE coefficients and cubic parameter");
  SchemeFlags coeff_flags;
  coeff_flags.bind(coeffs, false);

  // modes
  auto* modes = app.add_subcommand("modes", "slowest non-trivial eigenmode of the iteration matrix");
  SchemeFlags mode_flags;
  mode_flags.bind(modes, false);
  std::string mode_U_list, mode_N_list, mode_method = "dense";
  modes->add_option("--U-list", mode_U_list, "comma separated velocities (overrides --U)");
  modes->add_option("--N-list", mode_N_list, "comma separated meshes (overrides --N)");
  modes->add_option("--method", mode_method, "eigensolver")->check(CLI::IsMember({"dense", "krylov"}));

  // convergence
  auto* conv = app.add_subcommand("convergence", "convergence study against the spectral reference");
  int table = 0;
  std::string conv_config, manifest_path, conv_format = "markdown";
  auto* ot = conv->add_option("--table", table, "bundled table preset")->check(CLI::Range(1, 13));
  conv->add_option("--config", conv_config, "JSON study configuration")
      ->check(CLI::ExistingFile)
      ->excludes(ot);
  conv->add_option("--manifest", manifest_path, "preset manifest replacing the bundled one")
      ->check(CLI::ExistingFile);
  conv->add_option("--format", conv_format, "stdout format")
      ->check(CLI::IsMember({"markdown", "csv", "json"}));
  std::string conv_N;
  conv->add_option("--N-list", conv_N, "comma separated meshes overriding the preset");

  if (argc <= 1) {
    std::cout << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (app.get_subcommands().empty()) {
    std::cout << app.help();
    return 2;
  }

  Sink sink;
  if (!out_dir.empty()) {
    sink.dir = out_dir;
  } else if (const char* env = std::getenv("D1Q3_OUT_DIR"); env && *env) {
    sink.dir = env;
  }

  try {
    if (*exact) {
      RunConfig rc = exact_flags.resolve({});
      const SchemeParams p = rc.params();
      const int n = exact_samples > 0 ? exact_samples : p.N;
      const auto rho = sample_exact_density(p.T_final, n, rc.rho0, p, rc.profile);
      std::ostringstream out;
      out << "x,rho\n";
      for (int i = 0; i < n; ++i) out << fmt(p.L * i / n) << ',' << fmt(rho[i]) << '\n';
      sink.write("exact.csv", out.str());
    } else if (*unsteady) {
      RunConfig rc = unsteady_flags.resolve({});
      const SchemeParams p = rc.params();
      const EquilibriumSpec eq = make_equilibrium(p, rc.profile);
      InitOptions opt;
      opt.modes = rc.modes;
      Timer t("unsteady N=" + std::to_string(p.N));
      const MomentField m = run_unsteady(rc.rho0, init_order_from_int(rc.init_order), eq, p, opt);
      sink.write("unsteady.csv", mesh_csv(p, {"rho", "J", "e"}, {&m.rho, &m.J, &m.e}));
      double mass0 = 0.0;
      for (int i = 0; i < p.N; ++i) mass0 += rc.rho0(mesh_position(p, i), p.k);
      mass0 *= p.dx;
      const double mass1 = mesh_mass(p, m.rho);
      sink.summary("unsteady_summary.json",
                   summary_json({{"N", std::to_string(p.N)},
                                 {"steps", std::to_string(p.steps_to_final_time())},
                                 {"mass_initial", fmt(mass0)},
                                 {"mass_final", fmt(mass1)},
                                 {"mass_drift", fmt(std::abs(mass1 - mass0))}}));
    } else if (*stationary) {
      RunConfig base;
      base.rho0 = ProfileSpec::constant_state(1.0);
      base.s = 1.5;
      RunConfig rc = stat_flags.resolve(base);
      if (stat_tol) rc.tol = *stat_tol;
      if (stat_max) rc.max_steps = *stat_max;
      const SchemeParams p = rc.params();
      const EquilibriumSpec eq = make_equilibrium(p, rc.profile);
      Timer t("stationary N=" + std::to_string(p.N));
      if (stat_direct) {
        double mass = 0.0;
        for (int i = 0; i < p.N; ++i) mass += rc.rho0(mesh_position(p, i), p.k);
        const ParticleField f = stationary_state_direct(build_iteration_matrix(p, eq, 3 * p.N), mass);
        const MomentField m = moments_from_particles(f, MomentMatrix::make(p.lambda));
        sink.write("stationary.csv", mesh_csv(p, {"rho", "J", "e"}, {&m.rho, &m.J, &m.e}));
      } else {
        const StationaryResult r = run_to_stationary(rc.rho0, eq, p, rc.tol, rc.max_steps);
        std::cerr << "steps " << r.steps << " block " << r.block << " increment "
                  << fmt_short(r.last_increment) << (r.converged ? " converged\n" : " NOT converged\n");
        sink.write("stationary.csv",
                   mesh_csv(p, {"rho", "J", "e"}, {&r.moments.rho, &r.moments.J, &r.moments.e}));
        sink.summary("stationary_summary.json",
                     summary_json({{"N", std::to_string(p.N)},
                                   {"steps", std::to_string(r.steps)},
                                   {"block", std::to_string(r.block)},
                                   {"last_increment", fmt(r.last_increment)},
                                   {"converged", r.converged ? "true" : "false"},
                                   {"mass", fmt(mesh_mass(p, r.moments.rho))}}));
        if (!r.converged) return 1;
      }
    } else if (*spectral) {
      RunConfig rc = spec_flags.resolve({});
      const SchemeParams p = rc.params();
      const int M = rc.modes > 0 ? rc.modes : default_modes(p.N);
      const VelocityProfile vp{rc.profile, rc.U};
      SpectralState st;
      if (spec_stationary) {
        st = solve_stationary(assemble_A_infinity(rc.pde_order, pde_coefficients(p), p, vp, M), p.L);
      } else {
        const OperatorMatrix A = assemble_A(rc.pde_order, pde_coefficients(p), p, vp, M);
        st = evolve_taylor5(A, p.dt, p.steps_to_final_time(), project_initial(rc.rho0, M));
      }
      if (spec_coeffs) {
        std::ostringstream out;
        out << "index,basis,mode,coefficient\n";
        for (int i = 0; i <= 2 * M; ++i) {
          const int m = i == 0 ? 0 : (i <= M ? i : i - M);
          const bool cosine = (i == 0) || (i <= M ? m % 2 == 0 : m % 2 == 1);
          out << i << ',' << (cosine ? "cos" : "sin") << ',' << m << ',' << fmt(st.coeffs[i]) << '\n';
        }
        sink.write("spectral_coefficients.csv", out.str());
      } else {
        const auto rho = synthesize_at_mesh(st, p.N, p.L);
        sink.write("spectral.csv", mesh_csv(p, {"rho"}, {&rho}));
      }
    } else if (*coeffs) {
      RunConfig rc = coeff_flags.resolve({});
      const SchemeParams p = rc.params();
      const PdeCoefficients c = pde_coefficients(p);
      std::ostringstream out;
      out << "name,value\n";
      out << "sigma," << fmt(p.sigma) << '\n';
      out << "sigma_prime," << fmt(p.sigma_prime) << '\n';
      try {
        const double spc = cubic_sigma_prime(p.U, p.alpha, p.sigma);
        out << "sigma_prime_cubic," << fmt(spc) << '\n';
        out << "s_prime_cubic," << fmt(relaxation_from_henon(spc)) << '\n';
      } catch (const std::domain_error& e) {
        std::cerr << "cubic parameter undefined: " << e.what() << '\n';
      }
      out << "mu," << fmt(c.mu) << '\n' << "mu_u," << fmt(c.mu_u) << '\n';
      out << "xi_u," << fmt(c.xi_u) << '\n' << "xi_xu," << fmt(c.xi_xu) << '\n';
      out << "xi_ux," << fmt(c.xi_ux) << '\n';
      out << "zeta_u4," << fmt(c.zeta_u4) << '\n' << "zeta_xxuu," << fmt(c.zeta_xxuu) << '\n';
      out << "zeta_uxxu," << fmt(c.zeta_uxxu) << '\n' << "zeta_uuxx," << fmt(c.zeta_uuxx) << '\n';
      out << "zeta_x4," << fmt(c.zeta_x4) << '\n';
      out << "alpha3_constant," << fmt(alpha3_constant_velocity(p)) << '\n';
      sink.write("coeffs.csv", out.str());
    } else if (*modes) {
      RunConfig base;
      base.s = 1.5;
      RunConfig rc = mode_flags.resolve(base);
      const SchemeParams p = rc.params();
      std::vector<double> Us{rc.U};
      std::vector<int> Ns{p.N};
      if (!mode_U_list.empty()) {
        Us.clear();
        for (const auto& s : split_csv(mode_U_list)) Us.push_back(std::stod(s));
      }
      if (!mode_N_list.empty()) {
        Ns.clear();
        for (const auto& s : split_csv(mode_N_list)) Ns.push_back(std::stoi(s));
      }
      const EigenMethod method = mode_method == "krylov" ? EigenMethod::Krylov : EigenMethod::Dense;
      Timer t("modes");
      const auto cells = gamma_surface(p, Us, Ns, method, jobs);
      std::ostringstream out;
      out << "U,N,Gamma,gamma_rate,mu_re,mu_im\n";
      int failures = 0;
      for (const auto& c : cells) {
        if (!c.error.empty()) {
          std::cerr << "U=" << fmt(c.U) << " N=" << c.N << ": " << c.error << '\n';
          ++failures;
          continue;
        }
        out << fmt(c.U) << ',' << c.N << ',' << fmt(c.mode.Gamma) << ',' << fmt(c.mode.gamma_rate)
            << ',' << fmt(c.mode.mu_eig.real()) << ',' << fmt(c.mode.mu_eig.imag()) << '\n';
      }
      sink.write("modes.csv", out.str());
      if (!sink.dir.empty()) {
        for (const auto& c : cells) {
          if (!c.error.empty()) continue;
          std::ostringstream m;
          m << "x,rho_gamma\n";
          for (int i = 0; i < c.N; ++i)
            m << fmt(p.L * i / c.N) << ',' << fmt(c.mode.mode_density[i]) << '\n';
          sink.write("mode_U" + fmt(c.U) + "_N" + std::to_string(c.N) + ".csv", m.str());
        }
      }
      if (failures) return 1;
    } else if (*conv) {
      StudyConfig sc;
      if (!conv_config.empty()) {
        sc = parse_study_config(read_text_file(conv_config));
      } else if (table > 0) {
        sc = manifest_path.empty() ? preset_study(table)
                                   : preset_study(table, read_text_file(manifest_path));
      } else {
        std::cerr << "convergence: give --table 1..13 or --config FILE\n";
        return 2;
      }
      if (!conv_N.empty()) {
        sc.N_list.clear();
        for (const auto& s : split_csv(conv_N)) sc.N_list.push_back(std::stoi(s));
      }
      ConvergenceReport rep;
      {
        Timer t("convergence " + sc.name);
        rep = run_study(sc, jobs);
      }
      for (std::size_t i = 0; i < rep.cell_errors.size(); ++i)
        for (std::size_t j = 0; j < rep.cell_errors[i].size(); ++j)
          if (!rep.cell_errors[i][j].empty())
            std::cerr << "N=" << rep.N_list[i] << " order " << rep.pde_orders[j] << ": "
                      << rep.cell_errors[i][j] << '\n';
      const std::string stem = sc.name.empty() ? "study" : sc.name;
      if (sink.dir.empty()) {
        if (conv_format == "csv") {
          std::cout << emit_table(rep, TableFormat::Csv);
        } else if (conv_format == "json") {
          std::cout << emit_summary(rep);
        } else {
          std::cout << emit_table(rep, TableFormat::Markdown);
        }
      } else {
        sink.write(stem + ".csv", emit_table(rep, TableFormat::Csv));
        sink.write(stem + ".md", emit_table(rep, TableFormat::Markdown));
        sink.write(stem + ".json", emit_summary(rep));
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
