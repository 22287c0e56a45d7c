#pragma once

#include <cstdint>
#include <vector>

#include "nsf/grid.hpp"

namespace nsf {

/// Nodes with x1 below min(sponge start, 0.95·X1max) take part in error norms.
int retained_rows(const Grid& g);

/// max |w_comp| over retained nodes and all stored times.
double sup_error(const std::vector<StateField>& w, int comp, const Grid& g);

struct RateFit {
  double slope = 0.0, intercept = 0.0, residual = 0.0;  // residual: max |log-misfit|
};
/// Least-squares line through (log ε, log error).
RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& err);

struct EnergyTrace {
  std::vector<double> times, l2_norm_sq, grad_integral;
  double peak() const;  // sup_t (l2_norm_sq + grad_integral)
};
/// ‖w(t)‖² and ε² Σ_{j=1..3} ∫₀ᵗ ‖∇w_j‖² (trapezoid in time) over the retained region.
EnergyTrace energy_trace(const std::vector<StateField>& w, const std::vector<double>& times,
                         const Grid& g, double epsilon);
/// Fits sup_t(‖w‖² + ε²∫‖∇w‖²) against ε; the theoretical slope is 2N + 1.
RateFit energy_rate_check(const std::vector<EnergyTrace>& traces, const std::vector<double>& eps);

/// Scalar field on a uniform grid of [0, X1] × [x2_0, x2_0 + X2]; value(i, k) = v[i·n2 + k].
struct PlaneField {
  int n1 = 0, n2 = 0;
  double h1 = 1.0, h2 = 1.0, x2_0 = 0.0;
  std::vector<double> v;
  double& at(int i, int k) { return v[static_cast<std::size_t>(i) * n2 + k]; }
  double at(int i, int k) const { return v[static_cast<std::size_t>(i) * n2 + k]; }
};

struct InterpolationCheck {
  double lhs = 0.0, rhs = 0.0;
  double norm_f = 0.0, norm_d1 = 0.0, norm_d2 = 0.0, norm_d12 = 0.0;
  bool holds = true;
};
/// ‖f‖_∞ against 2‖f‖^{1/4}‖∂1 f‖^{1/4}‖∂2 f‖^{1/4}‖∂12 f‖^{1/4} with L² norms by quadrature.
InterpolationCheck linf_interpolation_check(const PlaneField& f);

/// Random smooth decaying field: cubic B-spline profile in x1 times a finite Fourier sum in x2
/// under a Gaussian envelope.
PlaneField random_decaying_field(std::uint64_t seed, int n1 = 200, int n2 = 200);

}  // namespace nsf
