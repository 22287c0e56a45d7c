#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nsf/checks.hpp"
#include "nsf/errors.hpp"
#include "nsf/reference.hpp"

using namespace nsf;

namespace {

NsfProblem small_problem(double eps, double T = 0.05) {
  NsfProblem pb;
  pb.bg = constant_background(ideal_gas(), 1.0, 1.0);
  pb.scaling.epsilon = eps;
  pb.grid.n1 = 128;
  pb.grid.n2 = 8;
  Grid g = make_grid(pb.grid);
  pb.init = StateField(g);
  const double speed = sample_physical(pb.bg, pb.scaling, g).max_speed;
  pb.time = make_time_grid(T, 0.4 * std::min(g.min_h1(), g.h2) / speed, 0.01, 5);
  return pb;
}

}  // namespace

TEST_SUITE("reference") {
  TEST_CASE("zero data stays zero") {
    NsfSolution s = solve_nsf(small_problem(0.1));
    REQUIRE(s.snapshots.size() == 6);
    for (const auto& f : s.snapshots) CHECK(f.max_abs() == 0.0);
    for (double e : s.energy) CHECK(e == 0.0);
    CHECK(s.max_bc_residual == 0.0);
  }

  TEST_CASE("layer must be resolved") {
    NsfProblem pb = small_problem(1e-4);
    try {
      solve_nsf(pb);
      FAIL("expected GridTooCoarseForLayer");
    } catch (const NsfError& e) {
      CHECK(e.kind() == ErrorKind::GridTooCoarseForLayer);
    }
  }

  TEST_CASE("wall data must satisfy the no-slip condition") {
    NsfProblem pb = small_problem(0.1);
    pb.init.at(1, 0, 2) = 0.5;
    CHECK_THROWS_AS(solve_nsf(pb), NsfError);
  }

  TEST_CASE("density pulse keeps the wall conditions") {
    NsfProblem pb = small_problem(0.1, 0.1);
    Grid g = make_grid(pb.grid);
    for (int i = 0; i < g.N1; ++i)
      for (int k = 0; k < g.N2; ++k) pb.init.at(0, i, k) = std::exp(-std::pow((g.x1[i] - 0.5) / 0.15, 2));
    NsfSolution s = solve_nsf(pb);
    CHECK(s.max_bc_residual == 0.0);
    CHECK(s.snapshots.back().max_abs(1) > 0.0);
    const double e0 = s.energy.front();
    CHECK(*std::max_element(s.energy.begin(), s.energy.end()) <= e0 * (1 + 1e-8));
  }

  TEST_CASE("error field") {
    NsfProblem pb = small_problem(0.1);
    Grid g = make_grid(pb.grid);
    for (int i = 1; i < g.N1; ++i)
      for (int k = 0; k < g.N2; ++k) pb.init.at(0, i, k) = std::exp(-std::pow(g.x1[i] - 1.0, 2));
    NsfSolution s = solve_nsf(pb);
    std::vector<ApproximateSolution> self, zero;
    for (std::size_t j = 0; j < s.times.size(); ++j) {
      ApproximateSolution a;
      a.time = s.times[j];
      a.V_approx = s.snapshots[j];
      self.push_back(a);
      a.V_approx = StateField(g);
      zero.push_back(a);
    }
    for (const auto& w : error_field(s, self)) CHECK(w.max_abs() == 0.0);
    std::vector<StateField> wz = error_field(s, zero);
    for (std::size_t j = 0; j < wz.size(); ++j) {
      wz[j].axpy(-1.0, s.snapshots[j]);
      CHECK(wz[j].max_abs() == 0.0);
    }
    zero.pop_back();
    CHECK_THROWS_AS(error_field(s, zero), NsfError);
    self.back().time += 0.5;
    CHECK_THROWS_AS(error_field(s, self), NsfError);
  }

  TEST_CASE("manufactured order and energy") {
    CheckResult mms = check_reference_mms();
    INFO(mms.detail);
    CHECK(mms.pass);
    CheckResult en = check_reference_energy();
    INFO(en.detail);
    CHECK(en.pass);
  }
}
