#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsf/config.hpp"
#include "nsf/grid.hpp"
#include "nsf/prandtl.hpp"

namespace nsf {

/// Outcome of one property check: `value` is compared against `threshold` in the sense
/// given by the check (documented per function).
struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0, threshold = 0.0;
  std::string detail;
};

/// Random α ∈ [−3, 3]: max over samples of ‖QQᵀ − I‖ and ‖Q A1m Qᵀ − diag(0, 0, λ, −λ)‖ (< tol).
CheckResult check_eigenframe(std::uint64_t seed, int samples = 1000, double tol = 1e-12);
/// Isentropic gas: the boundary eigenvalues are exactly (0, 0, 1, −1).
CheckResult check_isentropic_eigenvalues();

/// Prandtl line coefficients of a constant background whose wall value of p'_θ/p'_ρ is α
/// (ideal gas with ρ = α, θ = 1; isentropic gas for α = 0).
PrandtlLineCoeffs prandtl_line_for_alpha(double alpha, const ViscosityScaling& s = {});

/// Manufactured solution t·z·e^{−z} in both components; the minimum observed order over two
/// joint (Δz, Δt) halvings (≥ 1.8). `flip_tau0` negates d2 as a negative control.
CheckResult check_prandtl_mms(double alpha = 1.0, bool flip_tau0 = false);
/// Decoupled constant coefficients with Dirichlet data t², −t²/2: L∞ distance to a 4× finer
/// oracle (≤ 1e-4).
CheckResult check_prandtl_oracle(double alpha = 1.0);

/// Closed form e^{−z}/λ of the layer ODE (≤ 1e-8).
CheckResult check_layer_ode_closed_form(double alpha = 1.0);
/// Residual λ∂z B − H under two refinements: minimum observed order (≥ 1.8).
CheckResult check_layer_ode_residual(double alpha = 1.0);

/// Spatial order of the inner (characteristic) solver on a manufactured solution (≥ 1.8).
CheckResult check_acoustic_mms();
/// Spatial order of the reference solver at ε = 0.1 on a manufactured solution (≥ 1.8).
CheckResult check_reference_mms();
/// Largest relative per-step growth of ⟨A0 V, V⟩ for the pulse on a constant background (≤ 1e-8).
CheckResult check_acoustic_energy();
CheckResult check_reference_energy(double epsilon = 0.1);

/// The interpolation inequality on `n` seeded random fields; value = max lhs/rhs (≤ 1).
CheckResult check_interpolation(std::uint64_t seed, int n = 100);
/// Separable field e^{−x1} e^{−x2²} against its quadrature norms.
CheckResult check_interpolation_separable();

/// Energy-trace battery: zero field, static field, constructed ε^{(2N+1)/2} scaling.
std::vector<CheckResult> check_energy_trace_battery();

/// Fitting exact and perturbed power laws.
std::vector<CheckResult> check_rate_fit_battery(std::uint64_t seed);

}  // namespace nsf
