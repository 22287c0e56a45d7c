#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <map>
#include <string>

#include "nsf/jet.hpp"

namespace nsf {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

/// p(ρ, θ) = p_e(ρ) + θ p_θ(ρ). Each closure also comes with its ρ-derivative so that
/// p_ρ is assembled analytically.
struct EquationOfState {
  std::string name;
  std::function<Jet(const Jet&)> p_e, dp_e;
  std::function<Jet(const Jet&)> p_theta, dp_theta;
  std::function<Jet(const Jet&)> c_v;       // of temperature
  std::function<Jet(const Jet&)> Q_energy;  // antiderivative of c_v with Q(0) = 0
  double c_v_min = 0.0;
};

/// Ideal gas p = ρθ; c_v(θ) = cv0 + cv1·θ.
EquationOfState ideal_gas(double cv0 = 1.0, double cv1 = 0.0);
/// Barotropic p = ρ^γ/γ with p_θ ≡ 0 (sound speed 1 at ρ = 1).
EquationOfState isentropic_gas(double gamma = 1.4, double cv0 = 1.0);

struct BackgroundSample {
  Jet rho, u1, u2, theta;
};
using BackgroundMap =
    std::function<BackgroundSample(const Jet& x1, const Jet& x2, const Jet& t)>;

struct BackgroundState {
  enum class Kind { Constant, Analytic };
  Kind kind = Kind::Constant;
  std::string name;
  EquationOfState eos;
  BackgroundMap map;
  bool inviscid_exact = false;  // residual measured without viscous terms
  bool steady = true;           // map ignores t; solvers cache coefficients
  bool at_rest = true;          // u' ≡ 0, so I1 = I2 = 0
};

BackgroundState constant_background(const EquationOfState& eos, double rho, double theta);

/// Named analytic families with u' ≡ 0:
///  "density_wave":     ρ' = rho0 + amp·sin(k·x2), θ' = theta0 (not an NSF solution)
///  "isobaric_thermal": θ' = theta0 + amp·x1·e^{-x1}(1 + b·sin(k·x2)), ρ' = p0/θ'
///                      (ideal gas only; exact steady inviscid solution)
BackgroundState make_background(const std::string& name, const std::map<std::string, double>& params,
                                const EquationOfState& eos);

struct BackgroundValues {
  double rho_p = 0, u1_p = 0, u2_p = 0, theta_p = 0;
  double p_rho = 0, p_theta = 0, beta_p = 0, c_v = 0, pressure = 0;
  /// grad_u(i, j) = ∂_j u'_i
  Eigen::Matrix2d grad_u = Eigen::Matrix2d::Zero();
};

struct ViscosityScaling {
  double mu_bar = 1.0, lambda_bar = 0.0, kappa_bar = 1.0, epsilon = 1.0;
  double xi_bar() const { return mu_bar + lambda_bar; }
  void validate() const;
};

struct CoefficientMatrices {
  Mat4 A0, A1, A2, A1m, A1r, I1, I2;
  double alpha = 0.0;
};

/// Thermodynamic quantities of a sampled state, carried as jets.
struct StateJets {
  Jet rho, u1, u2, theta, p, p_rho, p_theta, beta, c_v;
};

StateJets sample_state(const BackgroundState& bg, const Jet& x1, const Jet& x2, const Jet& t);
/// Samples with all three variables seeded, so derivatives of every order <= 3 are exact.
StateJets sample_state_seeded(const BackgroundState& bg, double x1, double x2, double t);

BackgroundValues eval_background(const BackgroundState& bg, double x1, double x2, double t);

/// α(x2, t) = p'_θ / p'_ρ on the wall.
double boundary_alpha(const BackgroundState& bg, double x2, double t);
/// α as a jet in (x2, t) so that frame derivatives are exact.
Jet boundary_alpha_jet(const BackgroundState& bg, double x2, double t);

CoefficientMatrices assemble_matrices(const BackgroundValues& bv, double alpha,
                                      const ViscosityScaling& scaling = {});

// The symmetric-form matrices, written once for both doubles and jets.
template <class T>
using Mat4T = std::array<std::array<T, 4>, 4>;

template <class T>
Mat4T<T> zero4() {
  Mat4T<T> m;
  for (auto& r : m) r.fill(T(0.0));
  return m;
}

template <class T>
Mat4T<T> matrix_A0(const T& rho, const T& p_rho, const T& beta) {
  Mat4T<T> m = zero4<T>();
  m[0][0] = 1.0 / rho;
  m[1][1] = rho / p_rho;
  m[2][2] = rho / p_rho;
  m[3][3] = beta;
  return m;
}

template <class T>
Mat4T<T> matrix_A1(const T& rho, const T& u1, const T& p_rho, const T& p_theta, const T& beta) {
  Mat4T<T> m = zero4<T>();
  T r = p_theta / p_rho;
  m[0][0] = u1 / rho;
  m[0][1] = T(1.0);
  m[1][0] = T(1.0);
  m[1][1] = rho * u1 / p_rho;
  m[1][3] = r;
  m[2][2] = rho * u1 / p_rho;
  m[3][1] = r;
  m[3][3] = beta * u1;
  return m;
}

template <class T>
Mat4T<T> matrix_A2(const T& rho, const T& u2, const T& p_rho, const T& p_theta, const T& beta) {
  Mat4T<T> m = zero4<T>();
  T r = p_theta / p_rho;
  m[0][0] = u2 / rho;
  m[0][2] = T(1.0);
  m[1][1] = rho * u2 / p_rho;
  m[2][0] = T(1.0);
  m[2][2] = rho * u2 / p_rho;
  m[2][3] = r;
  m[3][2] = r;
  m[3][3] = beta * u2;
  return m;
}

/// Dissipation-coupling rows I1, I2 of the linearized heat equation. `du[i][j]` = ∂_j u'_i.
template <class T>
std::array<Mat4T<T>, 2> matrix_I(const std::array<std::array<T, 2>, 2>& du, const T& theta,
                                 const T& p_rho, const ViscosityScaling& s) {
  std::array<Mat4T<T>, 2> I{zero4<T>(), zero4<T>()};
  T f = 1.0 / (theta * p_rho);
  T div = du[0][0] + du[1][1];
  // I(V) = (2μ̄(∂_i u'_j + ∂_j u'_i) ∂_i v_j + 2λ̄ div u' div v) / (θ'p'_ρ)
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      T sym = du[j][i] + du[i][j];
      T coeff = 2.0 * s.mu_bar * sym;
      if (i == j) coeff += 2.0 * s.lambda_bar * div;
      I[i][3][1 + j] += f * coeff;
    }
  return I;
}

Mat4 to_eigen(const Mat4T<double>& m);
Mat4 jet_value(const Mat4T<Jet>& m);
/// Taylor coefficient ∂1^a ∂2^b ∂t^c / (a! b! c!) of every entry.
Mat4 jet_coeff(const Mat4T<Jet>& m, int a, int b, int c);

/// Residuals of the nonlinear NSF equations for a background, per equation family.
struct ResidualReport {
  double continuity = 0, momentum = 0, energy = 0;
  double max() const;
};
/// Evaluates the residual at the nodes of a uniform n1 × n2 sampling of
/// [0, X1] × [0, X2] at time t; derivatives come from the jets, not from differencing.
ResidualReport nsf_background_residual(const BackgroundState& bg, const ViscosityScaling& scaling,
                                       double X1, double X2, int n1, int n2, double t = 0.0);

}  // namespace nsf
