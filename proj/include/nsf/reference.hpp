#pragma once

#include <functional>
#include <vector>

#include "nsf/acoustic.hpp"
#include "nsf/composer.hpp"

namespace nsf {

/// Linearized NSF problem at fixed ε in physical variables (ρ, v1, v2, θ).
struct NsfProblem {
  BackgroundState bg;
  ViscosityScaling scaling;  // epsilon sets the diffusion strength ε²
  StateField init;
  GridSpec grid;
  TimeGrid time;
  AcousticOptions hyperbolic;  // shared with the inner solver
  /// Optional forcing F of A0 ∂t V + Σ Aj ∂j V = Dε V + F, added in place.
  std::function<void(double t, StateField& rhs)> source;
  int min_layer_cells = 8;
};

struct NsfSolution {
  std::vector<double> times;
  std::vector<StateField> snapshots;
  std::vector<double> energy_times;  // every fine step
  std::vector<double> energy;        // ⟨A0 V, V⟩ in the grid norm
  double dt = 0.0;
  double max_bc_residual = 0.0;
};

/// Per-node physical coefficients; a single entry for constant backgrounds.
struct PhysicalCoefficients {
  bool uniform = true;
  std::vector<Vec4> A0, A0inv;  // diagonal of A0
  std::vector<Mat4> A1, A2, I1, I2;
  std::vector<Vec4> nu;         // ε² × diffusion of the Laplacian per component
  std::vector<double> xi;       // ε² ξ̄/p'_ρ
  bool has_I = false, has_xi = false;
  double max_speed = 0.0, max_nu = 0.0;
  std::size_t at(std::size_t p) const { return uniform ? 0 : p; }
};

PhysicalCoefficients sample_physical(const BackgroundState& bg, const ViscosityScaling& scaling,
                                     const Grid& grid);

/// Strang-split stepper: TR-BDF2 half steps for the x1x1 diffusion around an explicit RK4
/// step of everything else. v1, v2, θ are held at zero on both x1 ends.
class NsfStepper {
 public:
  NsfStepper(const Grid& grid, PhysicalCoefficients coeffs, StateField init, AcousticOptions opts);
  void check_dt(double dt) const;
  void step(double dt, const std::function<void(double, StateField&)>& source);
  const StateField& state() const { return V_; }
  double time() const { return t_; }
  double energy() const;
  double bc_residual() const;

 private:
  void explicit_rhs(const StateField& V, double t, const std::function<void(double, StateField&)>& source,
                    StateField& out);
  void implicit_half(double h);
  void factorize(double h);

  const Grid& grid_;
  PhysicalCoefficients pc_;
  AcousticOptions opts_;
  StateField V_, k1_, k2_, k3_, k4_, tmp_, d1_, d2_, d22_, d12_;
  double t_ = 0.0;
  double factored_h_ = -1.0;
  // TR-BDF2 Thomas factors per (component 1..3, x2 line, stage): sub-diagonal, inverse pivots, super-diagonal
  std::vector<double> lo_[2], ip_[2], up_[2];
};

/// Integrates on problem.time; snapshots at the output times.
NsfSolution solve_nsf(const NsfProblem& problem);

/// w = V^ε − V_approx per stored time (physical variables).
std::vector<StateField> error_field(const NsfSolution& reference,
                                    const std::vector<ApproximateSolution>& approx);

}  // namespace nsf
