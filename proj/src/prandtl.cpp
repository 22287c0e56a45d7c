#include "nsf/prandtl.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsf/errors.hpp"

namespace nsf {

ZGrid make_zgrid(double Zmax, double dz) {
  if (!(Zmax > 0) || !(dz > 0) || dz > Zmax / 4)
    throw NsfError(ErrorKind::ConfigError, "layer grid needs Zmax > 0 and 0 < dz <= Zmax/4");
  ZGrid g;
  g.Zmax = Zmax;
  g.nz = static_cast<int>(std::llround(Zmax / dz));
  g.dz = Zmax / g.nz;
  g.z.resize(g.nz + 1);
  for (int j = 0; j <= g.nz; ++j) g.z[j] = j * g.dz;
  return g;
}

LayerProfile::LayerProfile(const ZGrid& z, int n2_, double x2len_, int ncomp_)
    : zg(z), n2(n2_), x2len(x2len_), ncomp(ncomp_) {}

void LayerProfile::push_level(double t, std::vector<double> level) {
  if (level.size() != level_size())
    throw NsfError(ErrorKind::GridMismatch, "layer level has the wrong size");
  times.push_back(t);
  values.push_back(std::move(level));
}

void LayerProfile::push_zero_level(double t) { push_level(t, std::vector<double>(level_size(), 0.0)); }

double LayerProfile::max_abs() const {
  double m = 0.0;
  for (const auto& lv : values)
    for (double v : lv) m = std::max(m, std::abs(v));
  return m;
}

double LayerProfile::max_abs_component(int comp) const {
  double m = 0.0;
  const std::size_t len = static_cast<std::size_t>(n2) * zg.nodes();
  for (const auto& lv : values)
    for (std::size_t j = 0; j < len; ++j) m = std::max(m, std::abs(lv[offset(comp, 0) + j]));
  return m;
}

void PrandtlCoefficients::validate() const {
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const auto& l = lines[k];
    if (!(l.a1 > 0) || !(l.a2 > 0) || !(l.d1 > 0) || !(l.d2 > 0)) {
      std::ostringstream os;
      os << "line " << k << ": a1=" << l.a1 << " a2=" << l.a2 << " d1=" << l.d1 << " d2=" << l.d2;
      throw NsfError(ErrorKind::NonPositiveCoefficient, os.str());
    }
  }
  if (delta < 0) throw NsfError(ErrorKind::NonPositiveCoefficient, "delta must be >= 0");
}

PrandtlLineCoeffs assemble_prandtl_coeffs(const TransformedCoefficients& tc, const Mat4& dA1r_dx1,
                                          int layer_order) {
  if (layer_order < 0) throw NsfError(ErrorKind::ConfigError, "layer order must be >= 0");
  PrandtlLineCoeffs lc;
  lc.a1 = tc.cal_A0(0, 0);
  lc.a2 = tc.eta[0];
  lc.d1 = tc.D11(0, 0);
  lc.d2 = tc.tau[0];
  lc.b = dA1r_dx1.topLeftCorner<2, 2>();
  lc.c = tc.cal_W.topLeftCorner<2, 2>();
  if (!(lc.a1 > 0) || !(lc.a2 > 0) || !(lc.d1 > 0) || !(lc.d2 > 0))
    throw NsfError(ErrorKind::NonPositiveCoefficient, "Prandtl coefficients must be positive");
  return lc;
}

Lift lift_boundary_data(const Eigen::Vector2d& g, const PrandtlLineCoeffs& lc, const ZGrid& zg) {
  const int M = zg.nodes();
  Lift L;
  L.profile.assign(2 * M, 0.0);
  L.rhs.assign(2 * M, 0.0);
  const double d[2] = {lc.d1, lc.d2};
  for (int j = 0; j < M; ++j) {
    double z = zg.z[j];
    double e = std::exp(-z * z);
    double ez = -2.0 * z * e;
    double ezz = (4.0 * z * z - 2.0) * e;
    Eigen::Vector2d l = -g * e, lz = -g * ez, lzz = -g * ezz;
    Eigen::Vector2d op = lc.b * (z * lz) + lc.c * l;
    for (int c = 0; c < 2; ++c) {
      L.profile[c * M + j] = l[c];
      L.rhs[c * M + j] = -(op[c] - d[c] * lzz[c]);
    }
  }
  return L;
}

namespace {

Eigen::Matrix2d checked_inverse(const Eigen::Matrix2d& m, int line, int node) {
  double det = m.determinant();
  double scale = m.cwiseAbs().maxCoeff();
  if (!std::isfinite(det) || std::abs(det) <= 1e-14 * scale * scale) {
    std::ostringstream os;
    os << "singular 2x2 pivot on line " << line << " at node " << node
       << " (check that a and d are positive)";
    throw NsfError(ErrorKind::SingularBlockSystem, os.str());
  }
  return m.inverse();
}

}  // namespace

PrandtlStepper::PrandtlStepper(const ZGrid& zg, double x2len, PrandtlCoefficients coeffs, double dt)
    : zg_(zg), n2_(static_cast<int>(coeffs.lines.size())), x2len_(x2len),
      coeffs_(std::move(coeffs)), dt_(dt) {
  coeffs_.validate();
  if (!(dt > 0)) throw NsfError(ErrorKind::ConfigError, "Prandtl step must be positive");
  B_.assign(static_cast<std::size_t>(2) * n2_ * zg_.nodes(), 0.0);
  factorize();
}

void PrandtlStepper::factorize() {
  const int M = zg_.nodes();
  const double dz = zg_.dz, idz2 = 1.0 / (dz * dz);
  inv_pivot_.assign(static_cast<std::size_t>(n2_) * M, Eigen::Matrix2d::Zero());
  upper_.assign(static_cast<std::size_t>(n2_) * M, Eigen::Matrix2d::Zero());
  for (int k = 0; k < n2_; ++k) {
    const auto& lc = coeffs_.lines[k];
    Eigen::Matrix2d A = Eigen::Vector2d(lc.a1, lc.a2).asDiagonal();
    Eigen::Matrix2d D = Eigen::Vector2d(lc.d1, lc.d2).asDiagonal();
    Eigen::Matrix2d prevC = Eigen::Matrix2d::Zero();
    for (int j = 1; j < M - 1; ++j) {
      double z = zg_.z[j];
      Eigen::Matrix2d lower = 0.5 * (-lc.b * (z / (2 * dz)) - D * idz2);
      Eigen::Matrix2d diag = A / dt_ + 0.5 * (lc.c + 2.0 * D * idz2);
      Eigen::Matrix2d up = 0.5 * (lc.b * (z / (2 * dz)) - D * idz2);
      Eigen::Matrix2d P = (j == 1) ? diag : Eigen::Matrix2d(diag - lower * prevC);
      Eigen::Matrix2d Pinv = checked_inverse(P, k, j);
      prevC = Pinv * up;
      inv_pivot_[static_cast<std::size_t>(k) * M + j] = Pinv;
      upper_[static_cast<std::size_t>(k) * M + j] = prevC;
    }
  }
}

void PrandtlStepper::apply_explicit(int k, const double* u0, const double* u1, double* out0,
                                    double* out1) const {
  // out = (A/Δ − K/2) u at interior nodes, for the pair of components (u0, u1).
  const int M = zg_.nodes();
  const double dz = zg_.dz, idz2 = 1.0 / (dz * dz);
  const auto& lc = coeffs_.lines[k];
  for (int j = 1; j < M - 1; ++j) {
    double z = zg_.z[j];
    Eigen::Vector2d um(u0[j - 1], u1[j - 1]), uc(u0[j], u1[j]), up(u0[j + 1], u1[j + 1]);
    Eigen::Vector2d Ku = lc.b * (z * (up - um) / (2 * dz)) + lc.c * uc;
    Ku[0] -= lc.d1 * (up[0] - 2 * uc[0] + um[0]) * idz2;
    Ku[1] -= lc.d2 * (up[1] - 2 * uc[1] + um[1]) * idz2;
    out0[j] = lc.a1 / dt_ * uc[0] - 0.5 * Ku[0];
    out1[j] = lc.a2 / dt_ * uc[1] - 0.5 * Ku[1];
  }
}

void PrandtlStepper::step(const std::vector<double>& f_old, const std::vector<double>& f_new,
                          const std::vector<Eigen::Vector2d>& b_new) {
  const int M = zg_.nodes();
  std::vector<double> r0(M), r1(M), l0(M), l1(M), a0(M), a1(M);
  std::vector<Eigen::Vector2d> y(M);
  for (int k = 0; k < n2_; ++k) {
    double* u0 = B_.data() + static_cast<std::size_t>(k) * M;
    double* u1 = B_.data() + (static_cast<std::size_t>(n2_) + k) * M;
    const double* f0o = f_old.data() + static_cast<std::size_t>(k) * M;
    const double* f1o = f_old.data() + (static_cast<std::size_t>(n2_) + k) * M;
    const double* f0n = f_new.data() + static_cast<std::size_t>(k) * M;
    const double* f1n = f_new.data() + (static_cast<std::size_t>(n2_) + k) * M;

    // Right-hand side (A/Δ − K/2) Bⁿ + (fⁿ + fⁿ⁺¹)/2 − (A/Δ + K/2) Lⁿ⁺¹ with the Gaussian
    // lift L carrying the new Dirichlet value, so the shifted unknown vanishes on both ends.
    apply_explicit(k, u0, u1, r0.data(), r1.data());
    const auto& lc = coeffs_.lines[k];
    for (int j = 0; j < M; ++j) {
      double e = std::exp(-zg_.z[j] * zg_.z[j]);
      l0[j] = b_new[k][0] * e;
      l1[j] = b_new[k][1] * e;
    }
    apply_explicit(k, l0.data(), l1.data(), a0.data(), a1.data());
    for (int j = 1; j < M - 1; ++j) {
      // (A/Δ + K/2) L = 2 (A/Δ) L − (A/Δ − K/2) L
      double il0 = 2.0 * lc.a1 / dt_ * l0[j] - a0[j];
      double il1 = 2.0 * lc.a2 / dt_ * l1[j] - a1[j];
      r0[j] += 0.5 * (f0o[j] + f0n[j]) - il0;
      r1[j] += 0.5 * (f1o[j] + f1n[j]) - il1;
    }

    const double dz = zg_.dz, idz2 = 1.0 / (dz * dz);
    Eigen::Matrix2d D = Eigen::Vector2d(lc.d1, lc.d2).asDiagonal();
    const std::size_t base = static_cast<std::size_t>(k) * M;
    for (int j = 1; j < M - 1; ++j) {
      Eigen::Vector2d rj(r0[j], r1[j]);
      if (j > 1) {
        double z = zg_.z[j];
        Eigen::Matrix2d lower = 0.5 * (-lc.b * (z / (2 * dz)) - D * idz2);
        rj -= lower * y[j - 1];
      }
      y[j] = inv_pivot_[base + j] * rj;
    }
    for (int j = M - 3; j >= 1; --j) y[j] -= upper_[base + j] * y[j + 1];
    u0[0] = b_new[k][0];
    u1[0] = b_new[k][1];
    u0[M - 1] = 0.0;
    u1[M - 1] = 0.0;
    for (int j = 1; j < M - 1; ++j) {
      u0[j] = y[j][0] + l0[j];
      u1[j] = y[j][1] + l1[j];
    }
  }
  if (coeffs_.delta > 0) z2_sweep();
}

void PrandtlStepper::z2_sweep() {
  // a ∂t u = δ ∂²z2 u by Crank–Nicolson on each (component, z-node) periodic ring.
  const int M = zg_.nodes(), n = n2_;
  const double h = x2len_ / n, s = 0.5 * coeffs_.delta / (h * h);
  std::vector<double> diag(n), rhs(n), sol(n);
  for (int c = 0; c < 2; ++c)
    for (int j = 1; j < M - 1; ++j) {
      for (int k = 0; k < n; ++k) {
        double a = c == 0 ? coeffs_.lines[k].a1 : coeffs_.lines[k].a2;
        auto u = [&](int kk) { return B_[(static_cast<std::size_t>(c) * n + kk) * M + j]; };
        diag[k] = a / dt_ + 2.0 * s;
        rhs[k] = a / dt_ * u(k) + s * (u((k + 1) % n) - 2.0 * u(k) + u((k - 1 + n) % n));
      }
      // Cyclic tridiagonal with constant off-diagonals −s, via Sherman–Morrison.
      const double gamma = -diag[0];
      std::vector<double> bb(diag), cp(n), x(n), zz(n), uvec(n, 0.0);
      bb[0] -= gamma;
      bb[n - 1] -= (-s) * (-s) / gamma;
      auto solve = [&](const std::vector<double>& d, std::vector<double>& out) {
        std::vector<double> dp(n);
        cp[0] = -s / bb[0];
        dp[0] = d[0] / bb[0];
        for (int k = 1; k < n; ++k) {
          double m = bb[k] - (-s) * cp[k - 1];
          cp[k] = -s / m;
          dp[k] = (d[k] - (-s) * dp[k - 1]) / m;
        }
        out[n - 1] = dp[n - 1];
        for (int k = n - 2; k >= 0; --k) out[k] = dp[k] - cp[k] * out[k + 1];
      };
      uvec[0] = gamma;
      uvec[n - 1] = -s;
      solve(rhs, x);
      solve(uvec, zz);
      double vx = x[0] + (-s) / gamma * x[n - 1];
      double vz = zz[0] + (-s) / gamma * zz[n - 1];
      double fac = vx / (1.0 + vz);
      for (int k = 0; k < n; ++k) B_[(static_cast<std::size_t>(c) * n + k) * M + j] = x[k] - fac * zz[k];
    }
}

LayerProfile solve_prandtl(const PrandtlCoefficients& coeffs,
                           const std::function<void(double, std::vector<double>&)>& rhs,
                           const std::function<Eigen::Vector2d(int, double)>& bc,
                           const std::vector<double>& init, const ZGrid& zg, int n2, double x2len,
                           double T, double dt, int store_every, PrandtlOptions opts) {
  if (static_cast<int>(coeffs.lines.size()) != n2)
    throw NsfError(ErrorKind::GridMismatch, "coefficient lines do not match n2");
  const std::size_t len = static_cast<std::size_t>(2) * n2 * zg.nodes();
  std::vector<double> f_old(len, 0.0), f_new(len, 0.0);
  if (rhs) rhs(0.0, f_old);
  if (!opts.waive_compatibility) {
    double fmax = 0.0, imax = 0.0, gmax = 0.0;
    for (double v : f_old) fmax = std::max(fmax, std::abs(v));
    for (double v : init) imax = std::max(imax, std::abs(v));
    if (bc)
      for (int k = 0; k < n2; ++k) gmax = std::max(gmax, bc(k, 0.0).cwiseAbs().maxCoeff());
    if (fmax > opts.compat_tol || imax > opts.compat_tol || gmax > opts.compat_tol) {
      std::ostringstream os;
      os << "max|f(0)|=" << fmax << " max|init|=" << imax << " max|g(0)|=" << gmax;
      throw NsfError(ErrorKind::CompatibilityViolation, os.str());
    }
  }
  PrandtlStepper st(zg, x2len, coeffs, dt);
  std::vector<double> B0 = init.empty() ? std::vector<double>(len, 0.0) : init;
  if (B0.size() != len) throw NsfError(ErrorKind::GridMismatch, "initial layer has the wrong size");
  st.set_state(B0);

  LayerProfile prof(zg, n2, x2len, 2);
  prof.push_level(0.0, st.state());
  const int nsteps = static_cast<int>(std::llround(T / dt));
  std::vector<Eigen::Vector2d> bnew(n2, Eigen::Vector2d::Zero());
  for (int n = 1; n <= nsteps; ++n) {
    double t = n * dt;
    if (rhs) rhs(t, f_new);
    for (int k = 0; k < n2; ++k) bnew[k] = bc ? Eigen::Vector2d(-bc(k, t)) : Eigen::Vector2d::Zero();
    st.step(f_old, f_new, bnew);
    std::swap(f_old, f_new);
    if (n % store_every == 0 || n == nsteps) prof.push_level(t, st.state());
  }
  return prof;
}

namespace {

std::vector<double> simpson_weights(const ZGrid& zg) {
  const int M = zg.nodes();
  std::vector<double> w(M, zg.dz);
  if (zg.nz % 2 == 0) {
    for (int j = 0; j < M; ++j) w[j] = zg.dz / 3.0 * ((j == 0 || j == M - 1) ? 1.0 : (j % 2 ? 4.0 : 2.0));
  } else {
    w[0] = w[M - 1] = 0.5 * zg.dz;
  }
  return w;
}

/// Discrete derivative of one line along z (order a1) with one-sided second-order ends.
void z_derivative(const double* f, int M, double dz, int order, double* out) {
  if (order == 0) {
    std::copy(f, f + M, out);
    return;
  }
  if (order == 1) {
    for (int j = 1; j < M - 1; ++j) out[j] = (f[j + 1] - f[j - 1]) / (2 * dz);
    out[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * dz);
    out[M - 1] = (3 * f[M - 1] - 4 * f[M - 2] + f[M - 3]) / (2 * dz);
    return;
  }
  for (int j = 1; j < M - 1; ++j) out[j] = (f[j + 1] - 2 * f[j] + f[j - 1]) / (dz * dz);
  out[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / (dz * dz);
  out[M - 1] = (2 * f[M - 1] - 5 * f[M - 2] + 4 * f[M - 3] - f[M - 4]) / (dz * dz);
}

}  // namespace

double weighted_norm(const LayerProfile& p, int l, int k, int a1, int a2) {
  if (k < 0 || k > 2 || a1 < 0 || a1 > 2 || a2 < 0 || a2 > 2)
    throw NsfError(ErrorKind::ConfigError, "weighted_norm supports derivative orders up to 2");
  const int nt = static_cast<int>(p.times.size());
  if (nt == 0) return 0.0;
  if (k > 0 && nt < 3) throw NsfError(ErrorKind::InsufficientHistory, "time derivative needs 3 levels");
  const int M = p.zg.nodes(), n2 = p.n2;
  const double h2 = p.x2len / n2;
  std::vector<double> wz = simpson_weights(p.zg);
  std::vector<double> weight(M);
  for (int j = 0; j < M; ++j) weight[j] = wz[j] * std::pow(1.0 + p.zg.z[j] * p.zg.z[j], l);

  auto level = [&](int ti) {
    if (k == 0) return p.values[ti];
    std::vector<double> out(p.level_size());
    int c = std::clamp(ti, 1, nt - 2);
    double dtm = p.times[c] - p.times[c - 1], dtp = p.times[c + 1] - p.times[c];
    for (std::size_t j = 0; j < out.size(); ++j) {
      double fm = p.values[c - 1][j], f0 = p.values[c][j], fp = p.values[c + 1][j];
      out[j] = k == 1 ? (fp - fm) / (dtm + dtp) : 2.0 * ((fp - f0) / dtp - (f0 - fm) / dtm) / (dtm + dtp);
    }
    return out;
  };

  double best = 0.0;
  std::vector<double> col(M), tmp(M);
  for (int ti = 0; ti < nt; ++ti) {
    std::vector<double> lv = level(ti);
    double sum = 0.0;
    for (int c = 0; c < p.ncomp; ++c)
      for (int kk = 0; kk < n2; ++kk) {
        auto at = [&](int k2) { return lv.data() + p.offset(c, (k2 + n2) % n2); };
        for (int j = 0; j < M; ++j) {
          if (a2 == 0) col[j] = at(kk)[j];
          else if (a2 == 1) col[j] = (at(kk + 1)[j] - at(kk - 1)[j]) / (2 * h2);
          else col[j] = (at(kk + 1)[j] - 2 * at(kk)[j] + at(kk - 1)[j]) / (h2 * h2);
        }
        z_derivative(col.data(), M, p.zg.dz, a1, tmp.data());
        for (int j = 0; j < M; ++j) sum += h2 * weight[j] * tmp[j] * tmp[j];
      }
    best = std::max(best, std::sqrt(sum));
  }
  return best;
}

}  // namespace nsf
