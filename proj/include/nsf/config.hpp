#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nsf/grid.hpp"
#include "nsf/model.hpp"

namespace nsf {

/// Smooth compactly supported bump exp(1 − 1/(1 − r²/R²)) used as initial data:
/// ρ0 = amp·G, θ0 = theta_ratio·amp·G, v = 0.
struct PulseSpec {
  double x1c = 0.7, x2c = 1.5, radius = 0.6, amp = 1.0, theta_ratio = 0.5;
};

struct RunConfig {
  std::string background = "constant";
  std::map<std::string, double> bg_params;
  std::string eos = "ideal_gas";
  std::map<std::string, double> eos_params;
  ViscosityScaling scaling{1.0, -1.0, 1.0, 1.0};
  GridSpec grid;
  double Zmax = 15.0, dz = 0.01, delta = 0.0;
  double T = 0.5, macro_dt = 1e-3;
  int outputs = 10;
  double cfl = 0.9, dissipation = 0.05;
  std::vector<double> epsilons{0.2, 0.1, 0.05, 0.025};
  std::vector<int> orders{1};
  double tail_tol = 1e-10, bc_tol = 1e-10;
  PulseSpec pulse;
  std::string out_dir = "nsf_out";
  std::uint64_t seed = 20240917;
  int threads = 0;  // 0: available parallelism
  bool write_fields = false;
  bool flip_tau0 = false;  // negative control for the verify suite

  int max_order() const;
  void validate() const;
};

/// Applies one dotted key. Throws ConfigError for unknown keys or malformed values.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

/// Flat `key = value` text (# comments) or, when the first non-blank character is '{', JSON
/// whose nested objects map to dotted keys.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical key = value rendering (sorted keys, 17-digit numbers); its hash identifies a run.
std::string canonical_config(const RunConfig& cfg);

EquationOfState make_eos(const RunConfig& cfg);
/// Physical initial data (ρ, v1, v2, θ) of the pulse on `grid`.
StateField pulse_field(const Grid& grid, const PulseSpec& pulse);
BackgroundState make_background(const RunConfig& cfg);

}  // namespace nsf
