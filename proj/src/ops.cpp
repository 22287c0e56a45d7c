#include "nsf/ops.hpp"

#include <vector>

namespace nsf::ops {

void d1_sbp(const Grid& g, const double* f, double* out) {
  const int N1 = g.N1, N2 = g.N2;
  const double idx = 1.0 / g.dxi;
  for (int i = 0; i < N1; ++i) {
    const double s = idx / g.J[i];
    double* o = out + static_cast<std::size_t>(i) * N2;
    if (i == 0 || i == N1 - 1) {
      const double* a = f + static_cast<std::size_t>(i == 0 ? 0 : i - 1) * N2;
      const double* b = a + N2;
      for (int k = 0; k < N2; ++k) o[k] = s * (b[k] - a[k]);
    } else {
      const double* a = f + static_cast<std::size_t>(i - 1) * N2;
      const double* b = f + static_cast<std::size_t>(i + 1) * N2;
      const double h = 0.5 * s;
      for (int k = 0; k < N2; ++k) o[k] = h * (b[k] - a[k]);
    }
  }
}

void d1(const Grid& g, const double* f, double* out) {
  const int N1 = g.N1, N2 = g.N2;
  d1_sbp(g, f, out);
  const double idx = 1.0 / g.dxi;
  auto row = [&](int i) { return f + static_cast<std::size_t>(i) * N2; };
  double* o0 = out;
  double* oN = out + static_cast<std::size_t>(N1 - 1) * N2;
  const double s0 = 0.5 * idx / g.J[0], sN = 0.5 * idx / g.J[N1 - 1];
  for (int k = 0; k < N2; ++k) {
    o0[k] = s0 * (-3.0 * row(0)[k] + 4.0 * row(1)[k] - row(2)[k]);
    oN[k] = sN * (3.0 * row(N1 - 1)[k] - 4.0 * row(N1 - 2)[k] + row(N1 - 3)[k]);
  }
}

void d2(const Grid& g, const double* f, double* out) {
  const int N1 = g.N1, N2 = g.N2;
  const double s = 0.5 / g.h2;
  for (int i = 0; i < N1; ++i) {
    const double* r = f + static_cast<std::size_t>(i) * N2;
    double* o = out + static_cast<std::size_t>(i) * N2;
    o[0] = s * (r[1] - r[N2 - 1]);
    for (int k = 1; k < N2 - 1; ++k) o[k] = s * (r[k + 1] - r[k - 1]);
    o[N2 - 1] = s * (r[0] - r[N2 - 2]);
  }
}

void d11(const Grid& g, const double* f, double* out) {
  const int N1 = g.N1, N2 = g.N2;
  const double i2 = 1.0 / (g.dxi * g.dxi);
  auto row = [&](int i) { return f + static_cast<std::size_t>(i) * N2; };
  for (int i = 1; i < N1 - 1; ++i) {
    const double cm = i2 / (g.J[i] * g.Jhalf[i - 1]);
    const double cp = i2 / (g.J[i] * g.Jhalf[i]);
    const double* a = row(i - 1);
    const double* b = row(i);
    const double* c = row(i + 1);
    double* o = out + static_cast<std::size_t>(i) * N2;
    for (int k = 0; k < N2; ++k) o[k] = cp * (c[k] - b[k]) - cm * (b[k] - a[k]);
  }
  // ∂11 f = (f_ξξ − (J_ξ/J) f_ξ)/J² with one-sided ξ-differences.
  const double ih = 1.0 / g.dxi;
  for (int side = 0; side < 2; ++side) {
    int i0 = side == 0 ? 0 : N1 - 1;
    int d = side == 0 ? 1 : -1;
    const double J = g.J[i0], dJ = g.dJ[i0];
    const double* r0 = row(i0);
    const double* r1 = row(i0 + d);
    const double* r2 = row(i0 + 2 * d);
    const double* r3 = row(i0 + 3 * d);
    double* o = out + static_cast<std::size_t>(i0) * N2;
    for (int k = 0; k < N2; ++k) {
      double fxx = (2.0 * r0[k] - 5.0 * r1[k] + 4.0 * r2[k] - r3[k]) * i2;
      double fx = d * (-3.0 * r0[k] + 4.0 * r1[k] - r2[k]) * 0.5 * ih;
      o[k] = (fxx - dJ / J * fx) / (J * J);
    }
  }
}

void d22(const Grid& g, const double* f, double* out) {
  const int N1 = g.N1, N2 = g.N2;
  const double s = 1.0 / (g.h2 * g.h2);
  for (int i = 0; i < N1; ++i) {
    const double* r = f + static_cast<std::size_t>(i) * N2;
    double* o = out + static_cast<std::size_t>(i) * N2;
    o[0] = s * (r[1] - 2.0 * r[0] + r[N2 - 1]);
    for (int k = 1; k < N2 - 1; ++k) o[k] = s * (r[k + 1] - 2.0 * r[k] + r[k - 1]);
    o[N2 - 1] = s * (r[0] - 2.0 * r[N2 - 1] + r[N2 - 2]);
  }
}

void add_dissipation(const Grid& g, double coef, const double* f, double* out) {
  if (coef == 0.0) return;
  const int N1 = g.N1, N2 = g.N2;
  auto row = [&](int i) { return f + static_cast<std::size_t>(i) * N2; };
  // x1: out_i −= coef/w_i (D̃ᵀD̃ f)_i with D̃ the undivided second difference on
  // interior nodes 1..N1-2 and w_i = weight1_i ≈ h_i, so the rate scales like 1/h.
  std::vector<double> s(static_cast<std::size_t>(N1) * N2, 0.0);
  for (int i = 1; i < N1 - 1; ++i) {
    const double* a = row(i - 1);
    const double* b = row(i);
    const double* c = row(i + 1);
    double* sr = s.data() + static_cast<std::size_t>(i) * N2;
    for (int k = 0; k < N2; ++k) sr[k] = a[k] - 2.0 * b[k] + c[k];
  }
  for (int i = 0; i < N1; ++i) {
    const double w = coef / g.weight1[i];
    double* o = out + static_cast<std::size_t>(i) * N2;
    for (int j = i - 1; j <= i + 1; ++j) {
      if (j < 1 || j > N1 - 2) continue;
      const double wt = (j == i) ? -2.0 : 1.0;
      const double* sr = s.data() + static_cast<std::size_t>(j) * N2;
      for (int k = 0; k < N2; ++k) o[k] -= w * wt * sr[k];
    }
  }
  // x2: periodic undivided fourth difference scaled by 1/h2.
  const double c2 = coef / g.h2;
  for (int i = 0; i < N1; ++i) {
    const double* r = row(i);
    double* o = out + static_cast<std::size_t>(i) * N2;
    for (int k = 0; k < N2; ++k) {
      int km2 = (k - 2 + N2) % N2, km1 = (k - 1 + N2) % N2, kp1 = (k + 1) % N2, kp2 = (k + 2) % N2;
      o[k] -= c2 * (r[km2] - 4.0 * r[km1] + 6.0 * r[k] - 4.0 * r[kp1] + r[kp2]);
    }
  }
}

}  // namespace nsf::ops
