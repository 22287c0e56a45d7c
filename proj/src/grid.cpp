#include "nsf/grid.hpp"

#include <algorithm>
#include <cmath>

#include "nsf/errors.hpp"

namespace nsf {

Grid make_grid(const GridSpec& spec) {
  if (spec.n1 < 8 || spec.n2 < 4 || !(spec.X1max > 0) || !(spec.X2len > 0))
    throw NsfError(ErrorKind::ConfigError, "grid needs n1 >= 8, n2 >= 4 and positive extents");
  if (spec.grading == Grading::Tanh && !(spec.strength > 0))
    throw NsfError(ErrorKind::ConfigError, "tanh grading needs a positive strength");
  Grid g;
  g.spec = spec;
  g.N1 = spec.n1 + 1;
  g.N2 = spec.n2;
  g.dxi = 1.0 / spec.n1;
  g.h2 = spec.X2len / spec.n2;

  const double X = spec.X1max, s = spec.strength;
  auto map = [&](double xi, double& x, double& J, double& dJ) {
    if (spec.grading == Grading::Uniform) {
      x = X * xi;
      J = X;
      dJ = 0.0;
      return;
    }
    double ts = std::tanh(s);
    double th = std::tanh(s * (1.0 - xi));
    double sech2 = 1.0 - th * th;
    x = X * (1.0 - th / ts);
    J = X * s * sech2 / ts;
    dJ = 2.0 * X * s * s * th * sech2 / ts;
  };

  g.x1.resize(g.N1);
  g.J.resize(g.N1);
  g.dJ.resize(g.N1);
  g.Jhalf.resize(spec.n1);
  for (int i = 0; i < g.N1; ++i) map(i * g.dxi, g.x1[i], g.J[i], g.dJ[i]);
  g.x1[0] = 0.0;
  g.x1[spec.n1] = X;
  for (int i = 0; i < spec.n1; ++i) {
    double x, dJ;
    map((i + 0.5) * g.dxi, x, g.Jhalf[i], dJ);
  }
  g.weight1.resize(g.N1);
  for (int i = 0; i < g.N1; ++i) g.weight1[i] = g.dxi * g.J[i] * ((i == 0 || i == spec.n1) ? 0.5 : 1.0);

  g.x2.resize(g.N2);
  for (int k = 0; k < g.N2; ++k) g.x2[k] = k * g.h2;

  g.sponge_start = X * (1.0 - spec.sponge_fraction);
  g.sponge.assign(g.N1, 0.0);
  if (spec.sponge_fraction > 0.0)
    for (int i = 0; i < g.N1; ++i)
      if (g.x1[i] > g.sponge_start) {
        double r = (g.x1[i] - g.sponge_start) / (X - g.sponge_start);
        g.sponge[i] = spec.sponge_strength * r * r;
      }
  return g;
}

double Grid::min_h1() const {
  double h = x1[1] - x1[0];
  for (int i = 1; i + 1 < N1; ++i) h = std::min(h, x1[i + 1] - x1[i]);
  return h;
}

int Grid::cells_below(double width) const {
  int n = 0;
  while (n + 1 < N1 && x1[n + 1] <= width + 1e-15) ++n;
  return n;
}

bool Grid::same_as(const Grid& o) const {
  return N1 == o.N1 && N2 == o.N2 && spec.X1max == o.spec.X1max && spec.X2len == o.spec.X2len &&
         spec.grading == o.spec.grading && spec.strength == o.spec.strength;
}

StateField::StateField(int n1, int n2) : N1(n1), N2(n2) {
  for (auto& v : c) v.assign(static_cast<std::size_t>(n1) * n2, 0.0);
}

void StateField::fill(double v) {
  for (auto& a : c) std::fill(a.begin(), a.end(), v);
}

void StateField::axpy(double a, const StateField& x) {
  for (int m = 0; m < 4; ++m) {
    double* y = c[m].data();
    const double* xs = x.c[m].data();
    const std::size_t n = c[m].size();
    for (std::size_t j = 0; j < n; ++j) y[j] += a * xs[j];
  }
}

double StateField::max_abs(int comp) const {
  double m = 0.0;
  for (double v : c[comp]) m = std::max(m, std::abs(v));
  return m;
}

double StateField::max_abs() const {
  double m = 0.0;
  for (int k = 0; k < 4; ++k) m = std::max(m, max_abs(k));
  return m;
}

TimeGrid make_time_grid(double T, double dt_max, double macro_target, int n_out) {
  if (!(T > 0) || !(dt_max > 0) || n_out < 1)
    throw NsfError(ErrorKind::ConfigError, "time grid needs T > 0, dt_max > 0, n_out >= 1");
  macro_target = std::max(macro_target, dt_max);
  TimeGrid tg;
  tg.T = T;
  int per_output = static_cast<int>(std::ceil(T / (n_out * macro_target) - 1e-12));
  tg.output_every = std::max(1, per_output);
  tg.macro_steps = tg.output_every * n_out;
  tg.substeps = std::max(1, static_cast<int>(std::ceil(tg.macro_dt() / dt_max - 1e-12)));
  return tg;
}

}  // namespace nsf
