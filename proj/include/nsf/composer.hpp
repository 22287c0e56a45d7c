#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nsf/acoustic.hpp"
#include "nsf/layers.hpp"

namespace nsf {

struct ExpansionConfig {
  BackgroundState bg;
  ViscosityScaling scaling;  // epsilon is not used by the construction
  GridSpec grid;
  double Zmax = 30.0, dz = 0.01;
  TimeGrid time;
  int N = 1;
  AcousticOptions acoustic;
  double tail_tol = 1e-10;
  double delta = 0.0;
  bool waive_compatibility = false;
};

/// Per-order diagnostics collected while marching.
struct OrderLog {
  int order = 0;
  double coupling_g = 0.0;     // max |E2 − E3 + (B2 − B3)| at the wall
  double coupling_B0 = 0.0;    // max |B0 + E0|
  double coupling_B1 = 0.0;    // max |B1 + E1 − √2 α (E2 + B2)|
  double B_II_max = 0.0;       // max |B2|, |B3| (exactly 0 at order 0)
  double initial_layer = 0.0;  // max |B(·, 0)|
  double ode_tail = 0.0;       // largest tail of H over the run
  double max_E = 0.0, max_B = 0.0;
};

struct ExpansionSet {
  int N = 0;
  Grid grid;
  ZGrid zg;
  TimeGrid time;
  std::shared_ptr<const CoefficientField> coeffs;
  std::vector<double> times;                 // output times
  std::vector<std::vector<StateField>> inner;  // [order][output], characteristic variables
  std::vector<LayerProfile> layer;           // [order], 4 components at the output times
  std::vector<OrderLog> build_log;
  double solver_tol = 1e-10;

  double max_coupling_residual() const;
};

/// Marches E⁰…E^N and B⁰…B^N together on the macro steps of `cfg.time`. `U0` is the initial
/// state of E⁰ in characteristic variables.
ExpansionSet build_expansion(const ExpansionConfig& cfg, const StateField& U0);

struct ApproximateSolution {
  double epsilon = 0.0, time = 0.0;
  StateField W;         // characteristic variables
  StateField V_approx;  // Qᵀ W
  StateField K;         // V_approx − Qᵀ E⁰
};

/// Composite field Σ εⁱ Eⁱ + Σ εⁱ Bⁱ(x1/ε) at output `j`, truncated at `order`
/// (default: all orders of the set).
ApproximateSolution compose(const ExpansionSet& set, double epsilon, int j, int order = -1);

/// Profile value at stretched coordinate z by four-point interpolation; zero past Zmax.
double interpolate_profile(const LayerProfile& p, int level, int comp, int k, double z);

struct CompatibilityReport {
  double order0 = 0.0;  // max |v1|, |v2|, |θ| on the wall
  double order1 = 0.0;  // same for the Euler time derivative at t = 0
};

/// Initial data V0 in physical variables on `grid`.
CompatibilityReport compatibility_check(const BackgroundState& bg, const ViscosityScaling& scaling,
                                        const Grid& grid, const StateField& V0);

}  // namespace nsf
