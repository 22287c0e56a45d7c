#include <doctest.h>

#include <cmath>

#include "nsf/checks.hpp"
#include "nsf/errors.hpp"
#include "nsf/layers.hpp"
#include "nsf/prandtl.hpp"

using namespace nsf;

TEST_SUITE("prandtl") {
  TEST_CASE("coefficients of the unit ideal gas") {
    PrandtlLineCoeffs lc = prandtl_line_for_alpha(1.0);
    CHECK(lc.a1 == doctest::Approx(1.0));
    CHECK(lc.d1 == doctest::Approx(1.0));
    CHECK(lc.a2 == doctest::Approx(1.0));
    CHECK(lc.d2 == doctest::Approx(0.5));
    CHECK(lc.b.cwiseAbs().maxCoeff() == 0.0);
    CHECK(lc.c.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("isentropic gas has positive coefficients and no coupling") {
    PrandtlLineCoeffs lc = prandtl_line_for_alpha(0.0);
    CHECK(lc.a1 > 0.0);
    CHECK(lc.a2 > 0.0);
    CHECK(lc.d1 > 0.0);
    CHECK(lc.d2 > 0.0);
    CHECK(lc.b(0, 1) == 0.0);
    CHECK(lc.c(1, 0) == 0.0);
  }

  TEST_CASE("nonpositive diffusion is diagnosed") {
    PrandtlCoefficients pc;
    PrandtlLineCoeffs lc;
    lc.d2 = -0.5;
    pc.lines.assign(3, lc);
    CHECK_THROWS_AS(pc.validate(), NsfError);
  }

  TEST_CASE("Gaussian lift") {
    ZGrid zg = make_zgrid(10.0, 0.05);
    PrandtlLineCoeffs lc;
    Lift zero = lift_boundary_data(Eigen::Vector2d::Zero(), lc, zg);
    for (double v : zero.profile) CHECK(v == 0.0);
    for (double v : zero.rhs) CHECK(v == 0.0);
    Lift one = lift_boundary_data(Eigen::Vector2d(1.0, 0.0), lc, zg);
    const int M = zg.nodes();
    for (int j = 0; j < M; j += 17) {
      const double z = zg.z[j];
      CHECK(one.profile[j] == doctest::Approx(-std::exp(-z * z)));
      CHECK(one.rhs[j] == doctest::Approx(-(4 * z * z - 2) * std::exp(-z * z)));
      CHECK(one.rhs[M + j] == 0.0);
    }
  }

  TEST_CASE("zero data gives the zero solution") {
    PrandtlCoefficients pc;
    pc.lines.assign(4, prandtl_line_for_alpha(1.0));
    LayerProfile p = solve_prandtl(pc, nullptr, nullptr, {}, make_zgrid(10.0, 0.1), 4, 1.0, 0.5, 0.05);
    CHECK(p.max_abs() == 0.0);
    CHECK(p.times.size() == 11);
  }

  TEST_CASE("incompatible start is rejected unless waived") {
    PrandtlCoefficients pc;
    pc.lines.assign(1, prandtl_line_for_alpha(1.0));
    auto rhs = [](double, std::vector<double>& f) { std::fill(f.begin(), f.end(), 1.0); };
    ZGrid zg = make_zgrid(5.0, 0.1);
    CHECK_THROWS_AS(solve_prandtl(pc, rhs, nullptr, {}, zg, 1, 1.0, 0.1, 0.05), NsfError);
    PrandtlOptions waive;
    waive.waive_compatibility = true;
    CHECK_NOTHROW(solve_prandtl(pc, rhs, nullptr, {}, zg, 1, 1.0, 0.1, 0.05, 1, waive));
  }

  TEST_CASE("manufactured solution and fine-grid oracle") {
    for (double a : {0.0, 1.0}) {
      CheckResult r = check_prandtl_mms(a);
      INFO(r.detail);
      CHECK(r.pass);
    }
    CheckResult o = check_prandtl_oracle(1.0);
    INFO(o.detail);
    CHECK(o.pass);
  }

  TEST_CASE("negated tau0 fails the manufactured check") {
    CHECK_FALSE(check_prandtl_mms(1.0, true).pass);
  }

  TEST_CASE("weighted norms of e^{-z}") {
    ZGrid zg = make_zgrid(25.0, 0.01);
    LayerProfile p(zg, 4, 1.0, 1);
    std::vector<double> lv(p.level_size());
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < zg.nodes(); ++j) lv[p.offset(0, k) + j] = std::exp(-zg.z[j]);
    p.push_level(0.0, lv);
    CHECK(std::abs(weighted_norm(p, 0, 0, 0, 0) - 1.0 / std::sqrt(2.0)) < 1e-6);
    CHECK(std::abs(weighted_norm(p, 1, 0, 0, 0) - std::sqrt(3.0) / 2.0) < 1e-6);
    LayerProfile zero(zg, 4, 1.0, 1);
    zero.push_zero_level(0.0);
    CHECK(weighted_norm(zero, 2, 0, 1, 1) == 0.0);
  }
}
