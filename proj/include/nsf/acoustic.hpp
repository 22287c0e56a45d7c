#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "nsf/characteristic.hpp"
#include "nsf/grid.hpp"
#include "nsf/model.hpp"

namespace nsf {

/// Transformed coefficients sampled at every node; a single entry when the background is
/// constant. P1, P2 already include ℐ1, ℐ2 and Qz = 𝒬¹ + 𝒬².
struct CoefficientField {
  bool uniform = true;
  double time = 0.0;
  std::vector<Mat4> A0, A0inv, A1, A2, W, P1, P2, Qz, D11, D12, D22;
  std::vector<double> alpha;    // per x2 column
  std::vector<Mat4> Q;          // per x2 column
  bool has_W = false, has_lower = false;
  double max_speed = 0.0;

  std::size_t at(std::size_t p) const { return uniform ? 0 : p; }
};

CoefficientField sample_coefficients(const BackgroundState& bg, const ViscosityScaling& scaling,
                                     const Grid& grid, double t = 0.0);

/// Characteristic wall data g(x2_k, t) for E2 − E3 = g, together with its time rate.
struct BoundaryData {
  std::function<double(int k, double t)> g;
  std::function<double(int k, double t)> gdot;
  bool zero() const { return !g; }
};

/// Adds the inhomogeneity F(t) of 𝒜0 ∂t E − ℒ⁰E = F to `rhs`.
using SourceFn = std::function<void(double t, StateField& rhs)>;

struct AcousticOptions {
  double dissipation = 0.05;  // multiple of the maximal speed
  double cfl_max = 0.9;
};

/// Fine-step integrator for 𝒜0 ∂t U + 𝒜1 ∂1 U + 𝒜2 ∂2 U + 𝒲 U = F with E2 − E3 = g at x1 = 0.
class AcousticStepper {
 public:
  AcousticStepper(const Grid& grid, std::shared_ptr<const CoefficientField> coeffs, StateField init,
                  AcousticOptions opts = {});

  void check_dt(double dt) const;
  void step(double dt, const BoundaryData& bc, const SourceFn& source);
  const StateField& state() const { return U_; }
  double time() const { return t_; }
  /// Boundary trace U(0, x2_k) for all k, as rows of four values.
  std::vector<Vec4> trace() const;
  double bc_residual(const BoundaryData& bc) const;

 private:
  void rhs(const StateField& U, double t, const BoundaryData& bc, const SourceFn& source,
           StateField& out);
  void project_state(StateField& U, double t, const BoundaryData& bc) const;

  const Grid& grid_;
  std::shared_ptr<const CoefficientField> coeffs_;
  AcousticOptions opts_;
  StateField U_, k1_, k2_, k3_, k4_, tmp_, d1_, d2_;
  double t_ = 0.0;
};

struct AcousticProblem {
  std::shared_ptr<const CoefficientField> coeffs;
  SourceFn source;
  BoundaryData boundary_data;
  StateField init;
  AcousticOptions options;
};

struct AcousticSolution {
  std::vector<double> times;          // snapshot times
  std::vector<StateField> snapshots;
  std::vector<double> trace_times;    // every step
  std::vector<std::vector<Vec4>> trace;
  double max_bc_residual = 0.0;
};

/// Integrates to T with a fixed step dt, storing a snapshot every `store_every` steps.
AcousticSolution solve_euler(const AcousticProblem& problem, const Grid& grid, double T, double dt,
                             int store_every = 1);

/// Maximal stable step for the shared explicit scheme.
double acoustic_dt_max(const Grid& grid, double max_speed, double cfl);

/// Λ E = (𝒬¹ + 𝒬²) E + Σ (𝒫_j + ℐ_j) ∂_j E + D11 ∂11 E + D12 ∂12 E + D22 ∂22 E.
StateField apply_lambda(const CoefficientField& coeffs, const Grid& grid, const StateField& E);

/// ⟨𝒜0 U, U⟩ in the grid norm.
double acoustic_energy(const CoefficientField& coeffs, const Grid& grid, const StateField& U);

/// Maps a characteristic field to physical variables column by column (V = Qᵀ U).
StateField to_physical(const CoefficientField& coeffs, const StateField& U);
StateField to_characteristic(const CoefficientField& coeffs, const StateField& V);

}  // namespace nsf
