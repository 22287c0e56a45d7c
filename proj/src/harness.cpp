#include "nsf/harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nsf/errors.hpp"
#include "nsf/ops.hpp"

namespace nsf {

int retained_rows(const Grid& g) {
  const double cut = std::min(g.sponge_start, 0.95 * g.spec.X1max);
  int n = 0;
  while (n < g.N1 && g.x1[n] < cut) ++n;
  return n;
}

double sup_error(const std::vector<StateField>& w, int comp, const Grid& g) {
  const int rows = retained_rows(g);
  double m = 0.0;
  for (const auto& f : w)
    for (int i = 0; i < rows; ++i)
      for (int k = 0; k < g.N2; ++k) m = std::max(m, std::abs(f.at(comp, i, k)));
  return m;
}

RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& err) {
  if (eps.size() != err.size() || eps.size() < 3)
    throw NsfError(ErrorKind::ConfigError, "rate fit needs at least three (epsilon, error) pairs");
  for (std::size_t i = 0; i < eps.size(); ++i)
    if (!(eps[i] > 0.0) || !(err[i] > 0.0))
      throw NsfError(ErrorKind::NonPositiveError, "rate fit needs positive epsilons and errors");
  const double n = static_cast<double>(eps.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    double x = std::log(eps[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  RateFit r;
  const double den = n * sxx - sx * sx;
  r.slope = (n * sxy - sx * sy) / den;
  r.intercept = (sy - r.slope * sx) / n;
  for (std::size_t i = 0; i < eps.size(); ++i)
    r.residual = std::max(r.residual, std::abs(std::log(err[i]) - r.intercept - r.slope * std::log(eps[i])));
  return r;
}

double EnergyTrace::peak() const {
  double m = 0.0;
  for (std::size_t j = 0; j < times.size(); ++j) m = std::max(m, l2_norm_sq[j] + grad_integral[j]);
  return m;
}

EnergyTrace energy_trace(const std::vector<StateField>& w, const std::vector<double>& times, const Grid& g,
                         double epsilon) {
  if (w.size() != times.size()) throw NsfError(ErrorKind::GridMismatch, "times and fields differ in length");
  const int rows = retained_rows(g);
  EnergyTrace tr;
  std::vector<double> d1(g.size()), d2(g.size());
  double prev_grad = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    double l2 = 0.0, grad = 0.0;
    for (int c = 0; c < 4; ++c) {
      const std::vector<double>& f = w[j].c[c];
      if (c > 0) {
        ops::d1(g, f.data(), d1.data());
        ops::d2(g, f.data(), d2.data());
      }
      for (int i = 0; i < rows; ++i) {
        // weights of the truncated region: half weight at its last row
        double wt = g.weight1[i] * g.h2;
        if (i == rows - 1 && i > 0) wt = 0.5 * g.dxi * g.J[i] * g.h2;
        for (int k = 0; k < g.N2; ++k) {
          const std::size_t p = g.idx(i, k);
          l2 += wt * f[p] * f[p];
          if (c > 0) grad += wt * (d1[p] * d1[p] + d2[p] * d2[p]);
        }
      }
    }
    grad *= epsilon * epsilon;
    tr.times.push_back(times[j]);
    tr.l2_norm_sq.push_back(l2);
    double acc = 0.0;
    if (j > 0) acc = tr.grad_integral.back() + 0.5 * (times[j] - times[j - 1]) * (prev_grad + grad);
    tr.grad_integral.push_back(acc);
    prev_grad = grad;
  }
  return tr;
}

RateFit energy_rate_check(const std::vector<EnergyTrace>& traces, const std::vector<double>& eps) {
  std::vector<double> peaks;
  for (const auto& t : traces) peaks.push_back(t.peak());
  return fit_rate(eps, peaks);
}

InterpolationCheck linf_interpolation_check(const PlaneField& f) {
  const int n1 = f.n1, n2 = f.n2;
  InterpolationCheck r;
  if (n1 < 3 || n2 < 3) return r;
  auto d1 = [&](const PlaneField& g, int i, int k) {
    if (i == 0) return (-3 * g.at(0, k) + 4 * g.at(1, k) - g.at(2, k)) / (2 * g.h1);
    if (i == n1 - 1) return (3 * g.at(i, k) - 4 * g.at(i - 1, k) + g.at(i - 2, k)) / (2 * g.h1);
    return (g.at(i + 1, k) - g.at(i - 1, k)) / (2 * g.h1);
  };
  auto d2 = [&](const PlaneField& g, int i, int k) {
    if (k == 0) return (-3 * g.at(i, 0) + 4 * g.at(i, 1) - g.at(i, 2)) / (2 * g.h2);
    if (k == n2 - 1) return (3 * g.at(i, k) - 4 * g.at(i, k - 1) + g.at(i, k - 2)) / (2 * g.h2);
    return (g.at(i, k + 1) - g.at(i, k - 1)) / (2 * g.h2);
  };
  PlaneField f2 = f;
  for (int i = 0; i < n1; ++i)
    for (int k = 0; k < n2; ++k) f2.at(i, k) = d2(f, i, k);
  double s0 = 0, s1 = 0, s2 = 0, s12 = 0;
  for (int i = 0; i < n1; ++i)
    for (int k = 0; k < n2; ++k) {
      double w = f.h1 * f.h2 * ((i == 0 || i == n1 - 1) ? 0.5 : 1.0) * ((k == 0 || k == n2 - 1) ? 0.5 : 1.0);
      double v = f.at(i, k), a = d1(f, i, k), b = f2.at(i, k), c = d1(f2, i, k);
      s0 += w * v * v;
      s1 += w * a * a;
      s2 += w * b * b;
      s12 += w * c * c;
      r.lhs = std::max(r.lhs, std::abs(v));
    }
  r.norm_f = std::sqrt(s0);
  r.norm_d1 = std::sqrt(s1);
  r.norm_d2 = std::sqrt(s2);
  r.norm_d12 = std::sqrt(s12);
  r.rhs = 2.0 * std::pow(r.norm_f * r.norm_d1 * r.norm_d2 * r.norm_d12, 0.25);
  r.holds = r.lhs <= r.rhs;
  return r;
}

namespace {

double bspline3(double x) {
  x = std::abs(x);
  if (x >= 2.0) return 0.0;
  if (x >= 1.0) return (2.0 - x) * (2.0 - x) * (2.0 - x) / 6.0;
  return 2.0 / 3.0 - x * x + 0.5 * x * x * x;
}

}  // namespace

PlaneField random_decaying_field(std::uint64_t seed, int n1, int n2) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double X1 = 6.0, X2 = 12.0;
  PlaneField f;
  f.n1 = n1;
  f.n2 = n2;
  f.h1 = X1 / (n1 - 1);
  f.h2 = X2 / (n2 - 1);
  f.x2_0 = -X2 / 2;
  // x1 profile: cubic B-splines with knot spacing hk on [−hk, 4], zero beyond
  const int nk = 4 + static_cast<int>(rng() % 5);
  const double hk = 4.0 / nk;
  std::vector<double> c(nk + 1);
  for (double& v : c) v = U(rng);
  // x2 profile: Fourier modes under a Gaussian envelope
  const int nm = 1 + static_cast<int>(rng() % 4);
  std::vector<double> amp(nm), phase(nm), freq(nm);
  for (int m = 0; m < nm; ++m) {
    amp[m] = U(rng);
    phase[m] = 3.14159265358979 * U(rng);
    freq[m] = 0.5 + 1.5 * (U(rng) + 1.0);
  }
  const double width = 1.0 + 0.5 * (U(rng) + 1.0);
  f.v.assign(static_cast<std::size_t>(n1) * n2, 0.0);
  for (int i = 0; i < n1; ++i) {
    const double x1 = i * f.h1;
    double p = 0.0;
    for (int j = 0; j <= nk; ++j) p += c[j] * bspline3((x1 - (j - 1) * hk) / hk);
    if (x1 > 4.0 + hk) p = 0.0;
    for (int k = 0; k < n2; ++k) {
      const double x2 = f.x2_0 + k * f.h2;
      double q = 0.0;
      for (int m = 0; m < nm; ++m) q += amp[m] * std::cos(freq[m] * x2 + phase[m]);
      f.at(i, k) = p * q * std::exp(-x2 * x2 / (width * width));
    }
  }
  return f;
}

}  // namespace nsf
