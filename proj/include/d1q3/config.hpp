#pragma once

// JSON configuration for single runs and convergence studies, plus the
// bundled manifest of table presets.
//
// Recognized keys: lambda, U, alpha, s (or sigma), s_prime (or sigma_prime),
// cubic, N, L, T_final, profile, init_order, pde_order, modes, rho0
// ({"kind": "sine"|"constant", "value": x}), stationary, tol, max_steps, name.
// For studies N, init_order and pde_order may be lists.

#include <string>
#include <vector>

#include "d1q3/core.hpp"
#include "d1q3/harness.hpp"

namespace d1q3 {

struct RunConfig {
  double lambda = 1.0;
  double U = 0.05;
  double alpha = -1.0;
  double s = 1.0 / 0.51;
  double s_prime = 1.2;
  bool cubic = false;
  int N = 64;
  double L = 1.0;
  double T_final = 1.0;
  ProfileKind profile = ProfileKind::Cosine;
  ProfileSpec rho0 = ProfileSpec::sine_wave(1.0);
  int init_order = 0;
  int pde_order = 4;
  int modes = 0;
  double tol = 1e-13;
  long max_steps = 0;

  [[nodiscard]] SchemeParams params() const;
};

/// Keys present in `json_text` override `base`; unknown keys throw
/// std::invalid_argument naming the key.
[[nodiscard]] RunConfig parse_run_config(const std::string& json_text, RunConfig base = {});
[[nodiscard]] StudyConfig parse_study_config(const std::string& json_text, StudyConfig base = {});

[[nodiscard]] std::string read_text_file(const std::string& path);

/// Manifest compiled into the binary from presets/tables.json.
[[nodiscard]] const std::string& bundled_manifest();

/// Table ids available in a manifest, ascending.
[[nodiscard]] std::vector<int> manifest_tables(const std::string& manifest_text);

/// Study for table `id`; throws std::out_of_range for unknown ids.
[[nodiscard]] StudyConfig preset_study(int id, const std::string& manifest_text = bundled_manifest());

}  // namespace d1q3
