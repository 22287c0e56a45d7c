#include <doctest.h>

#include <cmath>

#include "nsf/checks.hpp"
#include "nsf/errors.hpp"
#include "nsf/harness.hpp"

using namespace nsf;

namespace {

Grid harness_grid() {
  GridSpec s;
  s.n1 = 64;
  s.n2 = 16;
  return make_grid(s);
}

StateField bump(const Grid& g, double centre, double height) {
  StateField w(g);
  for (int i = 0; i < g.N1; ++i)
    for (int k = 0; k < g.N2; ++k)
      w.at(1, i, k) = height * std::exp(-std::pow((g.x1[i] - centre) / 0.3, 2)) *
                      std::cos(2 * M_PI * g.x2[k] / g.spec.X2len);
  return w;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("sup error") {
    Grid g = harness_grid();
    CHECK(sup_error({StateField(g)}, 1, g) == 0.0);
    std::vector<StateField> w{StateField(g), bump(g, 1.0, 0.7)};
    CHECK(sup_error(w, 1, g) == doctest::Approx(0.7).epsilon(0.02));
    CHECK(sup_error(w, 1, g) <= 0.7);
    CHECK(sup_error(w, 0, g) == 0.0);
    StateField inside(g);
    for (int i = retained_rows(g); i < g.N1; ++i)
      for (int k = 0; k < g.N2; ++k) inside.at(2, i, k) = 5.0;
    CHECK(sup_error({inside}, 2, g) == 0.0);
    CHECK(g.x1[retained_rows(g) - 1] < g.sponge_start);
  }

  TEST_CASE("sup error respects pointwise domination") {
    Grid g = harness_grid();
    StateField a = bump(g, 0.8, 1.0), b = a;
    for (auto& v : b.c[1]) v *= 1.5;
    CHECK(sup_error({a}, 1, g) <= sup_error({b}, 1, g));
  }

  TEST_CASE("rate fits") {
    std::vector<double> eps{0.2, 0.1, 0.05, 0.025}, sq, pw;
    for (double e : eps) sq.push_back(e * e), pw.push_back(3.0 * std::pow(e, 1.25));
    RateFit a = fit_rate(eps, sq);
    CHECK(std::abs(a.slope - 2.0) < 1e-12);
    CHECK(a.residual < 1e-12);
    RateFit b = fit_rate(eps, pw);
    CHECK(std::abs(b.slope - 1.25) < 1e-12);
    CHECK(std::abs(b.intercept - std::log(3.0)) < 1e-12);
    sq[2] = 0.0;
    CHECK_THROWS_AS(fit_rate(eps, sq), NsfError);
    CHECK_THROWS_AS(fit_rate({0.1, 0.05}, {1.0, 0.5}), NsfError);
    for (const CheckResult& r : check_rate_fit_battery(11)) {
      INFO(r.name << ": " << r.detail);
      CHECK(r.pass);
    }
  }

  TEST_CASE("energy traces") {
    Grid g = harness_grid();
    std::vector<double> times{0.0, 0.1, 0.2, 0.3};
    EnergyTrace z = energy_trace(std::vector<StateField>(4, StateField(g)), times, g, 0.1);
    CHECK(z.peak() == 0.0);
    StateField w0 = bump(g, 1.0, 1.0);
    EnergyTrace s = energy_trace(std::vector<StateField>(4, w0), times, g, 0.1);
    REQUIRE(s.times.size() == 4);
    for (std::size_t j = 1; j < 4; ++j) {
      CHECK(s.l2_norm_sq[j] == doctest::Approx(s.l2_norm_sq[0]));
      CHECK(s.grad_integral[j] == doctest::Approx(s.grad_integral[1] * static_cast<double>(j)));
    }
    CHECK(s.grad_integral[0] == 0.0);
    CHECK(s.l2_norm_sq[0] > 0.0);
    for (const CheckResult& r : check_energy_trace_battery()) {
      INFO(r.name << ": " << r.detail);
      CHECK(r.pass);
    }
  }

  TEST_CASE("interpolation inequality") {
    PlaneField f;
    f.n1 = 20;
    f.n2 = 20;
    f.h1 = f.h2 = 0.1;
    f.v.assign(400, 0.0);
    InterpolationCheck z = linf_interpolation_check(f);
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
    CHECK(z.holds);
    CheckResult sep = check_interpolation_separable();
    INFO(sep.detail);
    CHECK(sep.pass);
    CheckResult rnd = check_interpolation(5, 100);
    INFO(rnd.detail);
    CHECK(rnd.pass);
  }

  TEST_CASE("random fields are reproducible") {
    PlaneField a = random_decaying_field(3, 60, 40), b = random_decaying_field(3, 60, 40),
               c = random_decaying_field(4, 60, 40);
    CHECK(a.v == b.v);
    CHECK(a.v != c.v);
  }
}
