#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "nsf/characteristic.hpp"

namespace nsf {

/// Uniform grid on [0, Zmax] in the stretched variable z1 = x1/ε.
struct ZGrid {
  double Zmax = 30.0;
  int nz = 3000;  // intervals
  double dz = 0.01;
  std::vector<double> z;
  int nodes() const { return nz + 1; }
};
ZGrid make_zgrid(double Zmax, double dz);

/// Components sampled on (z1 nodes) × (x2 nodes) at a list of times. Storage of one time
/// level is [comp][x2][z].
struct LayerProfile {
  ZGrid zg;
  int n2 = 0;
  double x2len = 1.0;
  int ncomp = 0;
  int decay_order = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> values;

  LayerProfile() = default;
  LayerProfile(const ZGrid& z, int n2_, double x2len_, int ncomp_);
  std::size_t level_size() const { return static_cast<std::size_t>(ncomp) * n2 * zg.nodes(); }
  std::size_t offset(int comp, int k) const {
    return (static_cast<std::size_t>(comp) * n2 + k) * zg.nodes();
  }
  void push_level(double t, std::vector<double> level);
  void push_zero_level(double t);
  double max_abs() const;
  double max_abs_component(int comp) const;
};

/// Coefficients of a·∂t u + b·z1∂z1 u + c·u − d·∂²z1 u − δ·∂²z2 u = f on one x2 line.
struct PrandtlLineCoeffs {
  double a1 = 1, a2 = 1, d1 = 1, d2 = 1;
  Eigen::Matrix2d b = Eigen::Matrix2d::Zero(), c = Eigen::Matrix2d::Zero();
};

struct PrandtlCoefficients {
  std::vector<PrandtlLineCoeffs> lines;  // one per x2 node
  double delta = 0.0;
  void validate() const;
};

/// a1 = ρ'/p'_ρ (= 𝒜0(0,0)), d1 = μ̄/p'_ρ, a2 = η0, d2 = τ0; b, c are the leading 2×2 blocks
/// of ∂x1 𝒜1r and 𝒲 at the wall.
PrandtlLineCoeffs assemble_prandtl_coeffs(const TransformedCoefficients& tc_wall,
                                          const Mat4& dA1r_dx1, int layer_order);

/// Gaussian lift of Dirichlet data B(0) = −g.
struct Lift {
  std::vector<double> profile;  // [comp][z] for one x2 line
  std::vector<double> rhs;      // −ℰ(lift) for stationary data, same layout
};
/// For data (g0, g1) constant in time on a line with coefficients `lc`: lift = −g·e^{−z²},
/// rhs = −(b z ∂z + c − d ∂²z)(lift).
Lift lift_boundary_data(const Eigen::Vector2d& g, const PrandtlLineCoeffs& lc, const ZGrid& zg);

struct PrandtlOptions {
  bool waive_compatibility = false;
  double compat_tol = 1e-12;
};

/// Crank–Nicolson marching of the Prandtl system on every x2 line. The block-tridiagonal
/// factorization is computed once per (line, step size).
class PrandtlStepper {
 public:
  PrandtlStepper(const ZGrid& zg, double x2len, PrandtlCoefficients coeffs, double dt);

  /// Advance B from t to t + dt. f_old/f_new hold [comp][x2][z] inhomogeneities at both
  /// ends, g_new the Dirichlet values B(0) at t + dt as [k][comp].
  void step(const std::vector<double>& f_old, const std::vector<double>& f_new,
            const std::vector<Eigen::Vector2d>& g_new);
  const std::vector<double>& state() const { return B_; }
  void set_state(std::vector<double> B) { B_ = std::move(B); }
  int n2() const { return n2_; }
  double dt() const { return dt_; }

 private:
  void factorize();
  void apply_explicit(int k, const double* u0, const double* u1, double* out0, double* out1) const;
  void z2_sweep();

  ZGrid zg_;
  int n2_;
  double x2len_;
  PrandtlCoefficients coeffs_;
  double dt_;
  std::vector<double> B_;
  // Thomas factors per line and interior node: inverse pivots and scaled upper blocks.
  std::vector<Eigen::Matrix2d> inv_pivot_, upper_;
};

/// Full solve on [0, T] with constant step dt storing every `store_every` steps.
/// rhs(t, f) fills f ([comp][x2][z]); bc(k, t) returns the raw data g with B(0) = −g.
LayerProfile solve_prandtl(const PrandtlCoefficients& coeffs,
                           const std::function<void(double, std::vector<double>&)>& rhs,
                           const std::function<Eigen::Vector2d(int, double)>& bc,
                           const std::vector<double>& init, const ZGrid& zg, int n2, double x2len,
                           double T, double dt, int store_every = 1, PrandtlOptions opts = {});

/// sup over stored times of ‖⟨z1⟩^l ∂t^k ∂z1^a1 ∂z2^a2 u‖ in L²((0, Zmax) × (0, x2len)),
/// summed over components.
double weighted_norm(const LayerProfile& p, int l, int k, int a1, int a2);

}  // namespace nsf
