#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "nsf/model.hpp"

namespace nsf {

struct BoundaryFrame {
  double alpha = 0.0;
  std::array<double, 4> eigenvalues{};  // (0, 0, +λ, −λ), λ = sqrt(α² + 1)
  Mat4 Q = Mat4::Identity();            // rows e0..e3
  double lambda() const { return eigenvalues[2]; }
};

/// Rows e0..e3 of the boundary eigenframe as functions of α; shared by doubles and jets.
template <class T>
Mat4T<T> frame_matrix(const T& alpha) {
  using std::sqrt;
  Mat4T<T> q = zero4<T>();
  T s = sqrt(alpha * alpha + 1.0);
  const double r2 = std::sqrt(0.5);
  q[0][2] = T(1.0);
  q[1][0] = alpha / s;
  q[1][3] = -1.0 / s;
  q[2][0] = r2 / s;
  q[2][1] = T(r2);
  q[2][3] = r2 * alpha / s;
  q[3][0] = r2 / s;
  q[3][1] = T(-r2);
  q[3][3] = r2 * alpha / s;
  return q;
}

BoundaryFrame eigen_frame(double alpha);

Vec4 to_characteristic(const BoundaryFrame& frame, const Vec4& V);
Vec4 from_characteristic(const BoundaryFrame& frame, const Vec4& U);

/// Q and its exact derivatives along the wall; ∂1 Q ≡ 0 because α lives on x1 = 0.
struct FrameDerivatives {
  Mat4 Q = Mat4::Identity();
  Mat4 dQ_dx2 = Mat4::Zero(), dQ_dt = Mat4::Zero(), d2Q_dx2 = Mat4::Zero();
};
FrameDerivatives frame_derivatives(const BackgroundState& bg, double x2, double t);

/// Constant diffusion patterns Q E^{ij} Q^T (symmetrized for i ≠ j); independent of α.
Mat4 pattern_G11();
Mat4 pattern_G22();
Mat4 pattern_G12();

struct TransformedCoefficients {
  Mat4 cal_A0, cal_A1, cal_A1m, cal_A1r, cal_A2, cal_W;
  Mat4 cal_P1, cal_P2, cal_I1, cal_I2, cal_Q1, cal_Q2;
  Mat4 cal_G, cal_G11, cal_G22, cal_G12;
  double xi_over_p = 0.0;  // ξ̄/p'_ρ, weight of the 𝒢^{ij} patterns
  /// Second-order coefficients of Λ: D11 ∂11 + D12 ∂12 + D22 ∂22.
  Mat4 D11, D12, D22;
  std::array<double, 4> eta{};  // 𝒜0 entries (1,1), (1,2), (2,2), (2,3)
  std::array<double, 4> tau{};  // D11 entries (1,1), (1,2), (2,2), (2,3)
};

TransformedCoefficients transformed_coeffs(const BoundaryFrame& frame, const FrameDerivatives& fd,
                                           const CoefficientMatrices& m, const BackgroundValues& bv,
                                           const ViscosityScaling& scaling);
/// Convenience: samples the background at (x1, x2, t) and the frame at (0, x2, t).
TransformedCoefficients transformed_coeffs_at(const BackgroundState& bg,
                                              const ViscosityScaling& scaling, double x1, double x2,
                                              double t);

enum class BcKind { NSF, Euler };

struct BoundaryConditionSet {
  Eigen::Matrix<double, 3, 4> M_plus, cal_M_plus;
  Eigen::Matrix<double, 1, 4> M_zero, cal_M_zero;
  double alpha = 0.0;
};
BoundaryConditionSet boundary_conditions(const BoundaryFrame& frame);

/// NSF: (u2 − u3, u0, u1 − √2 α u2); Euler: (u2 − u3).
std::vector<double> bc_residual(const BoundaryConditionSet& bcs, const Vec4& U, BcKind which);

}  // namespace nsf
