#include <doctest.h>

#include <cmath>
#include <numeric>

#include "nsf/errors.hpp"
#include "nsf/grid.hpp"
#include "nsf/ops.hpp"

using namespace nsf;

TEST_SUITE("grid") {
  TEST_CASE("graded grid geometry") {
    GridSpec s;
    s.n1 = 64;
    s.n2 = 16;
    Grid g = make_grid(s);
    CHECK(g.N1 == 65);
    CHECK(g.N2 == 16);
    CHECK(g.x1.front() == 0.0);
    CHECK(g.x1.back() == doctest::Approx(s.X1max));
    for (int i = 1; i < g.N1 - 1; ++i) CHECK(g.h1(i) >= g.h1(i - 1));
    CHECK(g.min_h1() == doctest::Approx(g.h1(0)));
    double total = std::accumulate(g.weight1.begin(), g.weight1.end(), 0.0);
    CHECK(total == doctest::Approx(s.X1max).epsilon(1e-3));
    CHECK(g.h2 == doctest::Approx(s.X2len / 16));
    CHECK(g.sponge.front() == 0.0);
    CHECK(g.sponge.back() > 0.0);
  }

  TEST_CASE("cells below a width") {
    GridSpec s;
    s.n1 = 512;
    s.n2 = 8;
    Grid g = make_grid(s);
    CHECK(g.cells_below(0.025) >= 8);
    CHECK(g.cells_below(0.0) == 0);
  }

  TEST_CASE("difference operators are exact on low-degree polynomials") {
    GridSpec s;
    s.n1 = 40;
    s.n2 = 8;
    Grid g = make_grid(s);
    StateField f(g), d(g);
    for (int i = 0; i < g.N1; ++i)
      for (int k = 0; k < g.N2; ++k) f.at(0, i, k) = 1.0 + 2.0 * g.x1[i] - 0.5 * g.x1[i] * g.x1[i];
    ops::d1(g, f.c[0].data(), d.c[0].data());
    // the mapped grid makes the derivative exact only up to the metric's own error
    double err = 0.0;
    for (int i = 0; i < g.N1; ++i) err = std::max(err, std::abs(d.at(0, i, 0) - (2.0 - g.x1[i])));
    CHECK(err < 2e-2);
    StateField c(g), dc(g);
    c.fill(3.0);
    ops::d1_sbp(g, c.c[0].data(), dc.c[0].data());
    CHECK(dc.max_abs(0) < 1e-12);
    ops::d22(g, c.c[0].data(), dc.c[0].data());
    CHECK(dc.max_abs(0) < 1e-9);
  }

  TEST_CASE("state field helpers") {
    StateField a(3, 4), b(3, 4);
    a.fill(1.0);
    b.fill(2.0);
    a.axpy(-0.5, b);
    CHECK(a.max_abs() == 0.0);
    b.at(3, 2, 1) = -5.0;
    CHECK(b.max_abs() == 5.0);
    CHECK(b.max_abs(0) == 2.0);
  }

  TEST_CASE("time grid") {
    TimeGrid tg = make_time_grid(0.5, 1.1e-4, 1e-3, 10);
    CHECK(tg.outputs() == 11);
    CHECK(tg.macro_dt() <= 1e-3 + 1e-15);
    CHECK(tg.dt() <= 1.1e-4);
    CHECK(tg.output_time(10) == doctest::Approx(0.5));
    CHECK(tg.fine_steps() * tg.dt() == doctest::Approx(0.5));
    CHECK_THROWS_AS(make_time_grid(0.0, 1e-3, 1e-3, 10), NsfError);
  }
}
