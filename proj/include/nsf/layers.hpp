#pragma once

#include <array>
#include <vector>

#include "nsf/characteristic.hpp"
#include "nsf/prandtl.hpp"

namespace nsf {

/// Taylor coefficients in x1 at the wall of every matrix entering the boundary-layer
/// ladder on one x2 line; K[k] = ∂1^k K(0, x2, t)/k!.
struct WallTaylor {
  double alpha = 0.0, lambda = 1.0;
  std::array<Mat4, 3> A0, A2, W, D11;
  std::array<Mat4, 4> A1;  // A1[0] = 𝒜1m; A1[k≥1] are the Taylor terms of 𝒜1r
  std::array<Mat4, 2> D12, P1;
  Mat4 D22, P2, Qz;
  TransformedCoefficients wall;  // full set at x1 = 0
};

struct BoundaryOperatorCoeffs {
  double time = 0.0;
  std::vector<WallTaylor> lines;
  /// Flags for zero coefficient blocks, so constant backgrounds skip them.
  bool has_A0_1 = false, has_A0_2 = false, has_A1r = false, has_A2_1 = false, has_A2_2 = false;
  bool has_W = false, has_D11_hi = false, has_D12_1 = false, has_P = false, has_Qz = false;
};

BoundaryOperatorCoeffs boundary_operator_coeffs(const BackgroundState& bg,
                                                const ViscosityScaling& scaling,
                                                const std::vector<double>& x2, double t);

PrandtlCoefficients prandtl_coefficients(const BoundaryOperatorCoeffs& boc, int layer_order,
                                         double delta = 0.0);

/// Three consecutive time levels [comp][x2][z] of a 4-component layer term, ending at the
/// evaluation time. Missing past levels are zero when `zero_before_start` holds.
struct LayerHistory {
  const std::vector<double>* now = nullptr;
  const std::vector<double>* prev = nullptr;
  const std::vector<double>* prev2 = nullptr;
  double dt = 0.0;
  bool zero_before_start = true;
};

struct LayerGeometry {
  ZGrid zg;
  int n2 = 0;
  double x2len = 1.0;
  std::size_t level_size(int ncomp = 4) const {
    return static_cast<std::size_t>(ncomp) * n2 * zg.nodes();
  }
};

/// Image of one 4-component level under ℒᵇ_order (order ∈ {−1, 0, 1, 2}); the result is
/// [comp][x2][z] at the time of `hist.now`.
std::vector<double> apply_Lb(int order, const BoundaryOperatorCoeffs& coeffs,
                             const LayerGeometry& geo, const LayerHistory& hist);

/// Profile form: uses the last three stored levels of `profile` (4 components, uniform
/// time spacing) and returns a one-level profile.
LayerProfile apply_Lb(int order, const BoundaryOperatorCoeffs& coeffs, const LayerProfile& profile);

struct LayerRHS {
  std::vector<double> H2, H3;  // [x2][z]
  std::vector<double> F;       // [comp 0..1][x2][z]
};

/// H^i_{2,3} = components 2, 3 of −(ℒᵇ0 B^{i−1} + ℒᵇ1 B^{i−2} + ℒᵇ2 B^{i−3}).
/// `priors[m]` is the history of B^m; it must hold at least i entries.
LayerRHS layer_ode_rhs(int i, const std::vector<LayerHistory>& priors,
                       const BoundaryOperatorCoeffs& coeffs, const LayerGeometry& geo);

/// B^i_2 = −λ^{-1} ∫_z^Z H2, B^i_3 = +λ^{-1} ∫_z^Z H3 (fourth-order cumulative rule);
/// returns a 4-component level with components 0, 1 zero. Order 0 returns zeros.
std::vector<double> solve_layer_ode(int i, const LayerRHS& H, const BoundaryOperatorCoeffs& coeffs,
                                    const LayerGeometry& geo, double tail_tol = 1e-10);

/// F^i = −(ℒᵇ0 (0, 0, B^i_2, B^i_3))_I − (ℒᵇ1 B^{i−1} + ℒᵇ2 B^{i−2})_I.
/// `B_II` is the history of (0, 0, B^i_2, B^i_3).
std::vector<double> assemble_F(int i, const std::vector<LayerHistory>& priors, const LayerHistory& B_II,
                               const BoundaryOperatorCoeffs& coeffs, const LayerGeometry& geo);

/// Max of |v| over z ∈ [0.9 Zmax, Zmax] for a [comp][x2][z] array.
double tail_max(const std::vector<double>& v, const LayerGeometry& geo, int ncomp);

}  // namespace nsf
