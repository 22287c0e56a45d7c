#include <doctest.h>

#include <cmath>

#include "nsf/characteristic.hpp"
#include "nsf/checks.hpp"

using namespace nsf;

TEST_SUITE("characteristic") {
  TEST_CASE("eigenvalues of the boundary frame") {
    BoundaryFrame f0 = eigen_frame(0.0);
    CHECK(f0.eigenvalues[0] == 0.0);
    CHECK(f0.eigenvalues[1] == 0.0);
    CHECK(f0.eigenvalues[2] == 1.0);
    CHECK(f0.eigenvalues[3] == -1.0);
    BoundaryFrame f1 = eigen_frame(1.0);
    CHECK(f1.eigenvalues[2] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(f1.eigenvalues[3] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-15));
    BoundaryFrame f2 = eigen_frame(2.0);
    CHECK((f2.Q * f2.Q.transpose() - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("property check over random alpha") {
    CheckResult r = check_eigenframe(7, 200);
    CHECK(r.pass);
    CHECK(check_isentropic_eigenvalues().pass);
  }

  TEST_CASE("variables round trip") {
    BoundaryFrame f = eigen_frame(1.0);
    Vec4 U = to_characteristic(f, Vec4(1, 0, 0, 1));
    CHECK((U - Vec4(0, 0, 1, 1)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(to_characteristic(f, Vec4::Zero()).cwiseAbs().maxCoeff() == 0.0);
    Vec4 V(0.3, -1.2, 0.7, 2.0);
    CHECK((from_characteristic(f, to_characteristic(f, V)) - V).cwiseAbs().maxCoeff() < 1e-14);
  }

  TEST_CASE("transformed coefficients of the unit ideal gas") {
    BackgroundState bg = constant_background(ideal_gas(), 1.0, 1.0);
    TransformedCoefficients tc = transformed_coeffs_at(bg, ViscosityScaling{}, 0.0, 0.0, 0.0);
    CHECK(tc.eta[0] == doctest::Approx(1.0));
    CHECK(std::abs(tc.eta[1]) < 1e-15);
    CHECK(tc.eta[2] == doctest::Approx(1.0));
    CHECK(std::abs(tc.eta[3]) < 1e-15);
    CHECK((tc.cal_A0 - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(tc.tau[0] == doctest::Approx(0.5));
    CHECK(tc.cal_W.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("diffusion patterns do not depend on alpha") {
    Mat4 g11 = pattern_G11(), g22 = pattern_G22(), g12 = pattern_G12();
    CHECK((g11 - g11.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((g12 - g12.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(g22(0, 0) == doctest::Approx(1.0));
  }

  TEST_CASE("boundary condition residuals") {
    const double a = 0.7, c = 1.3;
    BoundaryConditionSet bcs = boundary_conditions(eigen_frame(a));
    auto r = bc_residual(bcs, Vec4(0, std::sqrt(2.0) * a * c, c, c), BcKind::NSF);
    REQUIRE(r.size() == 3);
    for (double v : r) CHECK(std::abs(v) < 1e-15);
    auto e = bc_residual(bcs, Vec4(0, 0, c, c), BcKind::Euler);
    REQUIRE(e.size() == 1);
    CHECK(e[0] == 0.0);
    auto n = bc_residual(bcs, Vec4(0, 0, c, c), BcKind::NSF);
    CHECK(n[2] == doctest::Approx(-std::sqrt(2.0) * a * c));
    auto u = bc_residual(boundary_conditions(eigen_frame(1.0)), Vec4(1, 0, 0, 0), BcKind::NSF);
    CHECK(u[0] == 0.0);
    CHECK(u[1] == 1.0);
    CHECK(u[2] == 0.0);
  }
}
