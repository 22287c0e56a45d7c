#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nsf/checks.hpp"
#include "nsf/composer.hpp"
#include "nsf/config.hpp"
#include "nsf/harness.hpp"
#include "nsf/reference.hpp"

namespace nsf {

inline constexpr const char* kToolVersion = "1.0.0";

/// Fine time grid shared by the expansion and every reference solve of a study.
TimeGrid study_time_grid(const RunConfig& cfg, const Grid& grid, double max_speed);

ExpansionConfig expansion_config(const RunConfig& cfg, int N, const TimeGrid& time);

/// Errors of one truncation order over the ε sweep.
struct OrderReport {
  int N = 0;
  std::vector<double> eps;
  std::array<std::vector<double>, 4> err;  // sup errors of ρ, v1, v2, θ per ε
  std::array<RateFit, 4> fit;
  std::array<double, 4> theory{};          // N − 1 for ρ, N − 3/4 otherwise
  std::array<bool, 4> monotone{};          // each error strictly below the previous ε's
  std::vector<EnergyTrace> traces;
  std::vector<double> energy_peak;
  RateFit energy_fit;
};

struct StudyResult {
  RunConfig cfg;
  Grid grid;
  TimeGrid time;
  std::vector<OrderLog> build_log;
  double max_coupling_residual = 0.0;
  std::vector<double> reference_bc_residual;  // per ε
  std::vector<OrderReport> orders;
  std::map<std::string, double> timings;      // seconds per stage
};

/// Builds the expansion once at the largest requested order, solves the reference problem for
/// every ε (up to `cfg.threads` at a time) and measures the truncated composites against it.
/// Progress lines go to `log` when given.
StudyResult run_study(const RunConfig& cfg, std::ostream* log = nullptr);

/// Writes converge_N{n}.csv, energy_N{n}.csv, converge_N{n}.svg, summary.json and
/// manifest.json into `dir`; returns file name → content hash.
std::map<std::string, std::string> write_study(const StudyResult& study, const std::filesystem::path& dir);

/// Runs the property batteries (including the α sweep {0, 0.5, 1, 2}); with `flip_tau0` set the
/// Prandtl manufactured checks run with a negated τ0.
std::vector<CheckResult> run_verify(const RunConfig& cfg, std::ostream* log = nullptr);

/// Boundary matrices and Prandtl coefficients of the configured background at (x2, t), as JSON.
std::string matrices_json(const RunConfig& cfg, double x2, double t);

}  // namespace nsf
