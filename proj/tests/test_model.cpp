#include <doctest.h>

#include <cmath>

#include "nsf/errors.hpp"
#include "nsf/model.hpp"

using namespace nsf;

TEST_SUITE("model") {
  TEST_CASE("jet arithmetic reproduces exact derivatives") {
    Jet x = Jet::variable(0, 0.3), y = Jet::variable(1, -0.2), t = Jet::variable(2, 0.1);
    Jet f = exp(x) * sin(y) + x * x * t;
    CHECK(f.value() == doctest::Approx(std::exp(0.3) * std::sin(-0.2) + 0.09 * 0.1));
    CHECK(f.derivative(1, 0, 0) == doctest::Approx(std::exp(0.3) * std::sin(-0.2) + 2 * 0.3 * 0.1));
    CHECK(f.derivative(1, 1, 0) == doctest::Approx(std::exp(0.3) * std::cos(-0.2)));
    CHECK(f.derivative(0, 3, 0) == doctest::Approx(-std::exp(0.3) * std::cos(-0.2)));
    CHECK(f.derivative(2, 0, 1) == doctest::Approx(2.0));
    Jet g = 1.0 / (1.0 + x);
    CHECK(g.derivative(3, 0, 0) == doctest::Approx(-6.0 / std::pow(1.3, 4)));
  }

  TEST_CASE("ideal gas constant state values") {
    BackgroundState bg = constant_background(ideal_gas(), 1.0, 1.0);
    BackgroundValues bv = eval_background(bg, 0.2, 0.4, 0.0);
    CHECK(bv.p_rho == doctest::Approx(1.0));
    CHECK(bv.p_theta == doctest::Approx(1.0));
    CHECK(bv.beta_p == doctest::Approx(1.0));
    CHECK(bv.u1_p == 0.0);
    CHECK(bv.u2_p == 0.0);
  }

  TEST_CASE("density wave background at x2 = pi/2") {
    BackgroundState bg = make_background("density_wave", {{"rho0", 1.0}, {"amp", 0.1}, {"k", 1.0}, {"theta0", 1.0}},
                                         ideal_gas());
    BackgroundValues bv = eval_background(bg, 0.0, M_PI / 2, 0.0);
    CHECK(bv.p_rho == doctest::Approx(1.0));
    CHECK(bv.p_theta == doctest::Approx(1.1));
  }

  TEST_CASE("nonpositive density is rejected") {
    CHECK_THROWS_AS(constant_background(ideal_gas(), -1.0, 1.0), NsfError);
  }

  TEST_CASE("matrices of the unit ideal-gas state") {
    BackgroundState bg = constant_background(ideal_gas(), 1.0, 1.0);
    BackgroundValues bv = eval_background(bg, 0, 0, 0);
    CoefficientMatrices m = assemble_matrices(bv, 1.0);
    CHECK((m.A0 - Mat4::Identity()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.A1r.cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.I1.cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.I2.cwiseAbs().maxCoeff() == 0.0);
    CHECK((m.A1 - (m.A1m + m.A1r)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((m.A1 - m.A1.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((m.A2 - m.A2.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("A1r vanishes on the wall for a varying background") {
    BackgroundState bg = make_background("isobaric_thermal", {{"theta0", 1.0}, {"amp", 0.3}, {"b", 0.5}, {"k", 2.0}},
                                         ideal_gas());
    for (double x2 : {0.0, 0.7, 2.1}) {
      BackgroundValues bv = eval_background(bg, 0.0, x2, 0.0);
      CoefficientMatrices m = assemble_matrices(bv, boundary_alpha(bg, x2, 0.0));
      CHECK(m.A1r.cwiseAbs().maxCoeff() == 0.0);
      Eigen::SelfAdjointEigenSolver<Mat4> es(m.A0);
      CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
  }

  TEST_CASE("internal energy is the antiderivative of c_v") {
    EquationOfState eos = ideal_gas(1.0, 0.4);
    for (double th = 0.5; th <= 2.0; th += 0.25) {
      const double h = 1e-5;
      double d = (eos.Q_energy(Jet(th + h)).value() - eos.Q_energy(Jet(th - h)).value()) / (2 * h);
      CHECK(std::abs(d - eos.c_v(Jet(th)).value()) < 1e-8 * eos.c_v(Jet(th)).value());
    }
  }

  TEST_CASE("background residuals") {
    ViscosityScaling s;
    CHECK(nsf_background_residual(constant_background(ideal_gas(), 1.0, 1.0), s, 3, 3, 8, 8).max() == 0.0);
    ResidualReport r = nsf_background_residual(
        make_background("density_wave", {{"rho0", 1.0}, {"amp", 0.1}, {"k", 1.0}, {"theta0", 1.0}}, ideal_gas()), s, 3,
        3, 8, 8);
    CHECK(r.continuity == 0.0);
    CHECK(r.energy == 0.0);
    CHECK(r.momentum > 0.0);
    ResidualReport iso = nsf_background_residual(
        make_background("isobaric_thermal", {{"theta0", 1.0}, {"amp", 0.3}, {"b", 0.5}, {"k", 2.0}}, ideal_gas()), s, 3,
        3, 8, 8);
    CHECK(iso.max() < 1e-12);
  }
}
