#include <doctest.h>

#include <cmath>

#include "nsf/checks.hpp"
#include "nsf/errors.hpp"
#include "nsf/layers.hpp"

using namespace nsf;

namespace {

struct Setup {
  BoundaryOperatorCoeffs boc;
  LayerGeometry geo;
};

Setup unit_gas(int n2 = 4, double dz = 0.02) {
  std::vector<double> x2(n2);
  for (int k = 0; k < n2; ++k) x2[k] = static_cast<double>(k) / n2;
  Setup s;
  s.boc = boundary_operator_coeffs(constant_background(ideal_gas(), 1.0, 1.0), ViscosityScaling{}, x2, 0.0);
  s.geo = LayerGeometry{make_zgrid(20.0, dz), n2, 1.0};
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_SUITE("layers") {
  TEST_CASE("order -1 operator on simple levels") {
    Setup s = unit_gas();
    const std::size_t n = s.geo.level_size();
    std::vector<double> c(n, 2.5);
    LayerHistory h{&c, nullptr, nullptr, 0.1, true};
    CHECK(max_abs(apply_Lb(-1, s.boc, s.geo, h)) < 1e-10);

    const int M = s.geo.zg.nodes();
    const std::size_t cs = static_cast<std::size_t>(s.geo.n2) * M;
    std::vector<double> e(n, 0.0);
    for (int k = 0; k < s.geo.n2; ++k)
      for (int j = 0; j < M; ++j) e[2 * cs + static_cast<std::size_t>(k) * M + j] = std::exp(-s.geo.zg.z[j]);
    h.now = &e;
    std::vector<double> out = apply_Lb(-1, s.boc, s.geo, h);
    double err = 0.0;
    for (int comp = 0; comp < 4; ++comp)
      for (int k = 0; k < s.geo.n2; ++k)
        for (int j = 0; j < M; ++j) {
          double exact = comp == 2 ? -std::sqrt(2.0) * std::exp(-s.geo.zg.z[j]) : 0.0;
          err = std::max(err, std::abs(out[comp * cs + static_cast<std::size_t>(k) * M + j] - exact));
        }
    // second-order one-sided z-derivative at the wall: error about dz²/3 · √2
    CHECK(err < 5e-4);
  }

  TEST_CASE("operators are linear and vanish on zero") {
    Setup s = unit_gas();
    const std::size_t n = s.geo.level_size();
    std::vector<double> zero(n, 0.0);
    LayerHistory hz{&zero, &zero, &zero, 0.1, true};
    for (int o = -1; o <= 2; ++o) CHECK(max_abs(apply_Lb(o, s.boc, s.geo, hz)) == 0.0);

    const int M = s.geo.zg.nodes();
    std::vector<double> a(n), b(n), ab(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
      const double z = s.geo.zg.z[idx % M];
      a[idx] = std::exp(-z) * std::sin(0.3 * static_cast<double>(idx / M) + 1.0);
      b[idx] = z * std::exp(-z * z) * std::cos(0.7 * static_cast<double>(idx / M));
      ab[idx] = 2.0 * a[idx] - 3.0 * b[idx];
    }
    for (int o = -1; o <= 2; ++o) {
      LayerHistory ha{&a, &zero, &zero, 0.1, true}, hb{&b, &zero, &zero, 0.1, true}, hab{&ab, &zero, &zero, 0.1, true};
      std::vector<double> ra = apply_Lb(o, s.boc, s.geo, ha), rb = apply_Lb(o, s.boc, s.geo, hb),
                          rab = apply_Lb(o, s.boc, s.geo, hab);
      double err = 0.0, scale = 1.0;
      for (std::size_t idx = 0; idx < n; ++idx) {
        err = std::max(err, std::abs(rab[idx] - 2.0 * ra[idx] + 3.0 * rb[idx]));
        scale = std::max(scale, std::abs(rab[idx]));
      }
      CHECK(err < 1e-12 * scale);
    }
    CHECK_THROWS_AS(apply_Lb(3, s.boc, s.geo, hz), NsfError);
  }

  TEST_CASE("right-hand sides of zero priors vanish") {
    Setup s = unit_gas();
    std::vector<double> zero(s.geo.level_size(), 0.0);
    LayerHistory hz{&zero, &zero, &zero, 0.1, true};
    std::vector<LayerHistory> priors{hz, hz};
    LayerRHS H = layer_ode_rhs(2, priors, s.boc, s.geo);
    CHECK(max_abs(H.H2) == 0.0);
    CHECK(max_abs(H.H3) == 0.0);
    CHECK(max_abs(solve_layer_ode(2, H, s.boc, s.geo)) == 0.0);
    CHECK(max_abs(assemble_F(2, priors, hz, s.boc, s.geo)) == 0.0);
  }

  TEST_CASE("too few prior layers") {
    Setup s = unit_gas();
    std::vector<double> zero(s.geo.level_size(), 0.0);
    LayerHistory hz{&zero, &zero, &zero, 0.1, true};
    try {
      layer_ode_rhs(3, {hz}, s.boc, s.geo);
      FAIL("expected MissingPriorLayer");
    } catch (const NsfError& e) {
      CHECK(e.kind() == ErrorKind::MissingPriorLayer);
    }
  }

  TEST_CASE("ODE with antisymmetric data") {
    Setup s = unit_gas(2, 0.01);
    const int M = s.geo.zg.nodes();
    LayerRHS H;
    H.H2.resize(static_cast<std::size_t>(2) * M);
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < M; ++j) H.H2[static_cast<std::size_t>(k) * M + j] = std::exp(-2.0 * s.geo.zg.z[j]);
    H.H3 = H.H2;
    std::vector<double> B = solve_layer_ode(1, H, s.boc, s.geo);
    const std::size_t cs = static_cast<std::size_t>(2) * M;
    double sym = 0.0, err = 0.0;
    for (std::size_t o = 0; o < cs; ++o) {
      sym = std::max(sym, std::abs(B[2 * cs + o] + B[3 * cs + o]));
      const double exact = -std::exp(-2.0 * s.geo.zg.z[o % M]) / (2.0 * std::sqrt(2.0));
      err = std::max(err, std::abs(B[2 * cs + o] - exact));
    }
    CHECK(sym < 1e-14);
    CHECK(err < 1e-8);
    CHECK(max_abs(solve_layer_ode(0, H, s.boc, s.geo)) == 0.0);
  }

  TEST_CASE("closed form and residual order") {
    for (double a : {0.0, 1.0, 2.0}) {
      CheckResult c = check_layer_ode_closed_form(a), r = check_layer_ode_residual(a);
      INFO(c.detail << " / " << r.detail);
      CHECK(c.pass);
      CHECK(r.pass);
    }
  }

  TEST_CASE("non-decaying data is diagnosed") {
    Setup s = unit_gas(2, 0.05);
    const int M = s.geo.zg.nodes();
    LayerRHS H;
    H.H2.assign(static_cast<std::size_t>(2) * M, 1.0);
    H.H3 = H.H2;
    try {
      solve_layer_ode(1, H, s.boc, s.geo);
      FAIL("expected NonDecayingRHS");
    } catch (const NsfError& e) {
      CHECK(e.kind() == ErrorKind::NonDecayingRHS);
    }
  }
}
