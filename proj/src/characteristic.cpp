#include "nsf/characteristic.hpp"

namespace nsf {

BoundaryFrame eigen_frame(double alpha) {
  BoundaryFrame f;
  f.alpha = alpha;
  double lam = std::sqrt(alpha * alpha + 1.0);
  f.eigenvalues = {0.0, 0.0, lam, -lam};
  f.Q = to_eigen(frame_matrix<double>(alpha));
  return f;
}

Vec4 to_characteristic(const BoundaryFrame& frame, const Vec4& V) { return frame.Q * V; }
Vec4 from_characteristic(const BoundaryFrame& frame, const Vec4& U) {
  return frame.Q.transpose() * U;
}

FrameDerivatives frame_derivatives(const BackgroundState& bg, double x2, double t) {
  Jet a = boundary_alpha_jet(bg, x2, t);
  Mat4T<Jet> q = frame_matrix<Jet>(a);
  FrameDerivatives fd;
  fd.Q = jet_value(q);
  fd.dQ_dx2 = jet_coeff(q, 0, 1, 0);
  fd.dQ_dt = jet_coeff(q, 0, 0, 1);
  fd.d2Q_dx2 = 2.0 * jet_coeff(q, 0, 2, 0);
  return fd;
}

namespace {

Mat4 unit(int i, int j) {
  Mat4 e = Mat4::Zero();
  e(i, j) = 1.0;
  return e;
}

}  // namespace

Mat4 pattern_G11() {
  Mat4 g = Mat4::Zero();
  g(2, 2) = g(3, 3) = 0.5;
  g(2, 3) = g(3, 2) = -0.5;
  return g;
}

Mat4 pattern_G22() {
  Mat4 g = Mat4::Zero();
  g(0, 0) = 1.0;
  return g;
}

Mat4 pattern_G12() {
  Mat4 g = Mat4::Zero();
  const double c = std::sqrt(2.0) / 4.0;
  g(0, 2) = g(2, 0) = c;
  g(0, 3) = g(3, 0) = -c;
  return g;
}

TransformedCoefficients transformed_coeffs(const BoundaryFrame& frame, const FrameDerivatives& fd,
                                           const CoefficientMatrices& m, const BackgroundValues& bv,
                                           const ViscosityScaling& s) {
  const Mat4& Q = frame.Q;
  const Mat4 Qt = Q.transpose();
  TransformedCoefficients tc;
  tc.cal_A0 = Q * m.A0 * Qt;
  tc.cal_A1 = Q * m.A1 * Qt;
  tc.cal_A1m = Q * m.A1m * Qt;
  tc.cal_A1r = Q * m.A1r * Qt;
  tc.cal_A2 = Q * m.A2 * Qt;
  tc.cal_I1 = Q * m.I1 * Qt;
  tc.cal_I2 = Q * m.I2 * Qt;
  tc.cal_W = Q * m.A0 * fd.dQ_dt.transpose() + Q * m.A2 * fd.dQ_dx2.transpose();

  Mat4 Dg = Mat4::Zero();
  Dg(1, 1) = Dg(2, 2) = s.mu_bar / bv.p_rho;
  Dg(3, 3) = s.kappa_bar / (bv.theta_p * bv.p_rho);
  tc.xi_over_p = s.xi_bar() / bv.p_rho;
  tc.cal_G = Q * Dg * Qt;
  tc.cal_G11 = pattern_G11();
  tc.cal_G22 = pattern_G22();
  tc.cal_G12 = pattern_G12();
  tc.D11 = tc.cal_G + tc.xi_over_p * tc.cal_G11;
  tc.D12 = 2.0 * tc.xi_over_p * tc.cal_G12;
  tc.D22 = tc.cal_G + tc.xi_over_p * tc.cal_G22;

  // Physical diffusion Σ K^{ij} ∂_ij with K^{12} = K^{21} = (ξ̄/p) (E12 + E21)/2.
  Mat4 K22 = Dg + tc.xi_over_p * unit(2, 2);
  Mat4 K12 = 0.5 * tc.xi_over_p * (unit(1, 2) + unit(2, 1));
  tc.cal_P1 = 2.0 * Q * K12 * fd.dQ_dx2.transpose();
  tc.cal_P2 = 2.0 * Q * K22 * fd.dQ_dx2.transpose();
  tc.cal_Q1 = Q * K22 * fd.d2Q_dx2.transpose();
  tc.cal_Q2 = Q * m.I2 * fd.dQ_dx2.transpose();

  tc.eta = {tc.cal_A0(1, 1), tc.cal_A0(1, 2), tc.cal_A0(2, 2), tc.cal_A0(2, 3)};
  tc.tau = {tc.D11(1, 1), tc.D11(1, 2), tc.D11(2, 2), tc.D11(2, 3)};
  return tc;
}

TransformedCoefficients transformed_coeffs_at(const BackgroundState& bg,
                                              const ViscosityScaling& scaling, double x1, double x2,
                                              double t) {
  FrameDerivatives fd = frame_derivatives(bg, x2, t);
  BoundaryFrame frame = eigen_frame(boundary_alpha(bg, x2, t));
  BackgroundValues bv = eval_background(bg, x1, x2, t);
  CoefficientMatrices m = assemble_matrices(bv, frame.alpha, scaling);
  return transformed_coeffs(frame, fd, m, bv, scaling);
}

BoundaryConditionSet boundary_conditions(const BoundaryFrame& frame) {
  BoundaryConditionSet b;
  b.alpha = frame.alpha;
  b.M_plus.setZero();
  b.M_plus(0, 1) = b.M_plus(1, 2) = b.M_plus(2, 3) = 1.0;
  b.M_zero.setZero();
  b.M_zero(0, 1) = 1.0;
  b.cal_M_plus = b.M_plus * frame.Q.transpose();
  b.cal_M_zero = b.M_zero * frame.Q.transpose();
  return b;
}

std::vector<double> bc_residual(const BoundaryConditionSet& bcs, const Vec4& U, BcKind which) {
  if (which == BcKind::Euler) return {U(2) - U(3)};
  return {U(2) - U(3), U(0), U(1) - std::sqrt(2.0) * bcs.alpha * U(2)};
}

}  // namespace nsf
