#include <doctest.h>

#include <cmath>
#include <memory>

#include "nsf/acoustic.hpp"
#include "nsf/checks.hpp"
#include "nsf/errors.hpp"

using namespace nsf;

namespace {

GridSpec small_spec(int n1 = 96, int n2 = 16) {
  GridSpec s;
  s.n1 = n1;
  s.n2 = n2;
  return s;
}

}  // namespace

TEST_SUITE("acoustic") {
  TEST_CASE("zero data stays zero") {
    Grid g = make_grid(small_spec());
    AcousticProblem p;
    p.coeffs = std::make_shared<CoefficientField>(
        sample_coefficients(constant_background(ideal_gas(), 1.0, 1.0), ViscosityScaling{}, g));
    p.init = StateField(g);
    AcousticSolution s = solve_euler(p, g, 0.05, acoustic_dt_max(g, p.coeffs->max_speed, 0.9));
    for (const auto& f : s.snapshots) CHECK(f.max_abs() == 0.0);
  }

  TEST_CASE("inconsistent initial trace and excessive step are rejected") {
    Grid g = make_grid(small_spec());
    AcousticProblem p;
    p.coeffs = std::make_shared<CoefficientField>(
        sample_coefficients(constant_background(ideal_gas(), 1.0, 1.0), ViscosityScaling{}, g));
    p.init = StateField(g);
    p.init.at(2, 0, 3) = 1.0;
    CHECK_THROWS_AS(solve_euler(p, g, 0.01, 1e-4), NsfError);
    p.init = StateField(g);
    CHECK_THROWS_AS(solve_euler(p, g, 0.01, 1.0), NsfError);
  }

  TEST_CASE("pulse in u3 travels toward the wall at speed sqrt(2)") {
    GridSpec s = small_spec(600, 4);
    s.grading = Grading::Uniform;
    s.sponge_fraction = 0.0;
    s.X1max = 4.0;
    Grid g = make_grid(s);
    AcousticProblem p;
    p.coeffs = std::make_shared<CoefficientField>(
        sample_coefficients(constant_background(ideal_gas(), 1.0, 1.0), ViscosityScaling{}, g));
    REQUIRE(p.coeffs->alpha[0] == doctest::Approx(1.0));
    p.init = StateField(g);
    for (int i = 0; i < g.N1; ++i)
      for (int k = 0; k < g.N2; ++k) p.init.at(3, i, k) = std::exp(-std::pow((g.x1[i] - 2.5) / 0.12, 2));
    const double T = 0.3;
    AcousticSolution sol = solve_euler(p, g, T, 0.5 * acoustic_dt_max(g, p.coeffs->max_speed, 0.9), 1000000);
    auto centre = [&](const StateField& f) {
      double m = 0, mx = 0;
      for (int i = 0; i < g.N1; ++i) m += f.at(3, i, 0), mx += f.at(3, i, 0) * g.x1[i];
      return mx / m;
    };
    double speed = (centre(sol.snapshots.front()) - centre(sol.snapshots.back())) / T;
    CHECK(std::abs(speed - std::sqrt(2.0)) < 0.02 * std::sqrt(2.0));
  }

  TEST_CASE("Lambda annihilates constants and reads the diffusion patterns") {
    Grid g = make_grid(small_spec(64, 32));
    BackgroundState bg = constant_background(ideal_gas(), 1.0, 1.0);
    CoefficientField cf = sample_coefficients(bg, ViscosityScaling{}, g);
    StateField E(g);
    E.fill(0.7);
    CHECK(apply_lambda(cf, g, E).max_abs() < 1e-9);

    StateField F(g);
    const double k2 = 2 * M_PI / g.spec.X2len;
    for (int i = 0; i < g.N1; ++i)
      for (int k = 0; k < g.N2; ++k) F.at(0, i, k) = std::sin(k2 * g.x2[k]);
    StateField L = apply_lambda(cf, g, F);
    TransformedCoefficients tc = transformed_coeffs_at(bg, ViscosityScaling{}, 0, 0, 0);
    const double coef = (tc.cal_G + tc.cal_G22)(0, 0);
    // second-order periodic difference of sin: −(2 − 2cos(k h))/h² instead of −k²
    const double sym = -(2.0 - 2.0 * std::cos(k2 * g.h2)) / (g.h2 * g.h2);
    double err = 0.0;
    for (int i = 0; i < g.N1; ++i)
      for (int k = 0; k < g.N2; ++k) err = std::max(err, std::abs(L.at(0, i, k) - coef * sym * F.at(0, i, k)));
    CHECK(err < 1e-9);
    CHECK(coef == doctest::Approx(tc.D22(0, 0)));
  }

  TEST_CASE("characteristic and physical views agree") {
    Grid g = make_grid(small_spec(32, 8));
    CoefficientField cf = sample_coefficients(constant_background(ideal_gas(), 2.0, 1.0), ViscosityScaling{}, g);
    StateField V(g);
    for (int i = 0; i < g.N1; ++i)
      for (int k = 0; k < g.N2; ++k)
        for (int c = 0; c < 4; ++c) V.at(c, i, k) = std::sin(0.3 * i + k + c);
    StateField back = to_physical(cf, to_characteristic(cf, V));
    back.axpy(-1.0, V);
    CHECK(back.max_abs() < 1e-14);
  }

  TEST_CASE("manufactured order and discrete energy") {
    CheckResult mms = check_acoustic_mms();
    INFO(mms.detail);
    CHECK(mms.pass);
    CheckResult en = check_acoustic_energy();
    INFO(en.detail);
    CHECK(en.pass);
  }
}
