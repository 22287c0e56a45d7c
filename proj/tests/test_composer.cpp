#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nsf/composer.hpp"
#include "nsf/errors.hpp"

using namespace nsf;

namespace {

ExpansionConfig small_config(int N, double T) {
  ExpansionConfig cfg;
  cfg.bg = constant_background(ideal_gas(), 1.0, 1.0);
  cfg.grid.n1 = 64;
  cfg.grid.n2 = 8;
  cfg.Zmax = 15.0;
  cfg.dz = 0.05;
  cfg.N = N;
  Grid g = make_grid(cfg.grid);
  cfg.time = make_time_grid(T, acoustic_dt_max(g, 2.0, 0.9), 0.01, 4);
  return cfg;
}

StateField pulse(const Grid& g, double centre, double width) {
  StateField U(g);
  for (int i = 0; i < g.N1; ++i)
    for (int k = 0; k < g.N2; ++k) {
      const double r = (g.x1[i] - centre) / width;
      const double b = std::abs(r) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
      U.at(0, i, k) = b;
      U.at(3, i, k) = b * (1.0 + 0.2 * std::sin(2 * M_PI * g.x2[k] / g.spec.X2len));
      U.at(2, i, k) = U.at(3, i, k);
    }
  return U;
}

}  // namespace

TEST_SUITE("composer") {
  TEST_CASE("zero initial data gives the zero expansion") {
    ExpansionConfig cfg = small_config(1, 0.04);
    Grid g = make_grid(cfg.grid);
    ExpansionSet set = build_expansion(cfg, StateField(g));
    REQUIRE(set.inner.size() == 2);
    REQUIRE(set.layer.size() == 2);
    for (const auto& order : set.inner)
      for (const auto& f : order) CHECK(f.max_abs() == 0.0);
    for (const auto& l : set.layer) CHECK(l.max_abs() == 0.0);
    ApproximateSolution a = compose(set, 0.1, static_cast<int>(set.times.size()) - 1);
    CHECK(a.W.max_abs() == 0.0);
    CHECK(a.K.max_abs() == 0.0);
  }

  TEST_CASE("a pulse far from the wall leaves the layer untouched") {
    ExpansionConfig cfg = small_config(1, 0.1);
    Grid g = make_grid(cfg.grid);
    ExpansionSet set = build_expansion(cfg, pulse(g, 2.0, 0.3));
    CHECK(set.inner[0].back().max_abs() > 0.1);
    CHECK(set.layer[0].max_abs() <= 1e-6);
    CHECK(set.max_coupling_residual() <= 1e-9);
  }

  TEST_CASE("layer structure and truncation of the composite field") {
    ExpansionConfig cfg = small_config(1, 0.1);
    Grid g = make_grid(cfg.grid);
    ExpansionSet set = build_expansion(cfg, pulse(g, 0.45, 0.4));
    CHECK(set.layer[0].max_abs() > 0.0);
    CHECK(set.layer[0].max_abs_component(2) == 0.0);
    CHECK(set.layer[0].max_abs_component(3) == 0.0);
    for (const auto& l : set.layer) {
      double first = 0.0;
      for (double v : l.values.front()) first = std::max(first, std::abs(v));
      CHECK(first == 0.0);
    }
    CHECK(set.max_coupling_residual() <= 1e-9);
    for (const auto& log : set.build_log) CHECK(log.initial_layer == 0.0);

    const int j = static_cast<int>(set.times.size()) - 1;
    const double eps = 0.02;
    ApproximateSolution a = compose(set, eps, j);
    ApproximateSolution a0 = compose(set, eps, j, 0);
    double outer = 0.0, inner0 = 0.0;
    for (int i = 0; i < g.N1; ++i)
      for (int k = 0; k < g.N2; ++k)
        for (int c = 0; c < 4; ++c) {
          const double sum = set.inner[0][j].at(c, i, k) + eps * set.inner[1][j].at(c, i, k);
          if (g.x1[i] > eps * set.zg.Zmax) outer = std::max(outer, std::abs(a.W.at(c, i, k) - sum));
          else if (i == 0)
            inner0 = std::max(inner0, std::abs(a0.W.at(c, 0, k) - set.inner[0][j].at(c, 0, k) -
                                                   set.layer[0].values[j][set.layer[0].offset(c, k)]));
        }
    CHECK(outer < 1e-15);
    CHECK(inner0 < 1e-12);
    CHECK_THROWS_AS(compose(set, 0.0, j), NsfError);
    CHECK_THROWS_AS(compose(set, eps, j + 1), NsfError);
  }

  TEST_CASE("profile interpolation") {
    ZGrid zg = make_zgrid(10.0, 0.1);
    LayerProfile p(zg, 1, 1.0, 1);
    std::vector<double> lv(p.level_size());
    for (int j = 0; j < zg.nodes(); ++j) lv[j] = std::exp(-zg.z[j]);
    p.push_level(0.0, lv);
    CHECK(std::abs(interpolate_profile(p, 0, 0, 0, 1.234) - std::exp(-1.234)) < 1e-5);
    CHECK(interpolate_profile(p, 0, 0, 0, 2.0) == doctest::Approx(std::exp(-2.0)));
    CHECK(interpolate_profile(p, 0, 0, 0, 10.5) == 0.0);
  }

  TEST_CASE("compatibility of the initial data") {
    GridSpec s;
    s.n1 = 32;
    s.n2 = 8;
    Grid g = make_grid(s);
    BackgroundState bg = constant_background(ideal_gas(), 1.0, 1.0);
    StateField V(g);
    for (int i = 0; i < g.N1; ++i)
      for (int k = 0; k < g.N2; ++k) V.at(0, i, k) = std::exp(-std::pow(g.x1[i] - 1.5, 2));
    CompatibilityReport r0 = compatibility_check(bg, ViscosityScaling{}, g, V);
    CHECK(r0.order0 == 0.0);
    V.fill(0.0);
    for (int k = 0; k < g.N2; ++k) V.at(1, 0, k) = 0.1;
    CHECK(compatibility_check(bg, ViscosityScaling{}, g, V).order0 == doctest::Approx(0.1));
  }
}
