#include "nsf/layers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsf/errors.hpp"

namespace nsf {

namespace {

bool nonzero(const Mat4& m) { return m.cwiseAbs().maxCoeff() > 0.0; }

Mat4 unit(int i, int j) {
  Mat4 e = Mat4::Zero();
  e(i, j) = 1.0;
  return e;
}

}  // namespace

BoundaryOperatorCoeffs boundary_operator_coeffs(const BackgroundState& bg,
                                                const ViscosityScaling& s,
                                                const std::vector<double>& x2, double t) {
  BoundaryOperatorCoeffs boc;
  boc.time = t;
  boc.lines.resize(x2.size());
  for (std::size_t k = 0; k < x2.size(); ++k) {
    WallTaylor& w = boc.lines[k];
    StateJets j = sample_state_seeded(bg, 0.0, x2[k], t);
    if (std::abs(j.u1.value()) > 1e-14 || std::abs(j.u2.value()) > 1e-14)
      throw NsfError(ErrorKind::ConfigError,
                     "the layer construction needs a background at rest on the wall");
    FrameDerivatives fd = frame_derivatives(bg, x2[k], t);
    const Mat4& Q = fd.Q;
    const Mat4 Qt = Q.transpose();
    w.alpha = boundary_alpha(bg, x2[k], t);
    w.lambda = std::sqrt(w.alpha * w.alpha + 1.0);

    Mat4T<Jet> A0 = matrix_A0<Jet>(j.rho, j.p_rho, j.beta);
    Mat4T<Jet> A1 = matrix_A1<Jet>(j.rho, j.u1, j.p_rho, j.p_theta, j.beta);
    Mat4T<Jet> A2 = matrix_A2<Jet>(j.rho, j.u2, j.p_rho, j.p_theta, j.beta);
    std::array<std::array<Jet, 2>, 2> du{{{j.u1.partial(0), j.u1.partial(1)},
                                          {j.u2.partial(0), j.u2.partial(1)}}};
    auto I = matrix_I<Jet>(du, j.theta, j.p_rho, s);
    Jet gmu = s.mu_bar / j.p_rho;
    Jet gka = s.kappa_bar / (j.theta * j.p_rho);
    Jet xp = s.xi_bar() / j.p_rho;

    auto conj = [&](const Mat4& m) { return Mat4(Q * m * Qt); };
    auto diffusion = [&](int order) {
      Mat4 Dg = Mat4::Zero();
      Dg(1, 1) = Dg(2, 2) = gmu.coeff(order, 0, 0);
      Dg(3, 3) = gka.coeff(order, 0, 0);
      return Dg;
    };

    for (int o = 0; o < 3; ++o) {
      Mat4 a0 = jet_coeff(A0, o, 0, 0), a2 = jet_coeff(A2, o, 0, 0);
      w.A0[o] = conj(a0);
      w.A2[o] = conj(a2);
      w.W[o] = Q * a0 * fd.dQ_dt.transpose() + Q * a2 * fd.dQ_dx2.transpose();
      w.D11[o] = conj(diffusion(o) + xp.coeff(o, 0, 0) * unit(1, 1));
    }
    w.A1[0] = conj(jet_coeff(A1, 0, 0, 0));
    for (int o = 1; o < 4; ++o) w.A1[o] = conj(jet_coeff(A1, o, 0, 0));
    for (int o = 0; o < 2; ++o) {
      Mat4 K12 = 0.5 * xp.coeff(o, 0, 0) * (unit(1, 2) + unit(2, 1));
      w.D12[o] = 2.0 * conj(K12);
      w.P1[o] = 2.0 * Q * K12 * fd.dQ_dx2.transpose() + conj(jet_coeff(I[0], o, 0, 0));
    }
    Mat4 K22 = diffusion(0) + xp.value() * unit(2, 2);
    Mat4 I2 = jet_coeff(I[1], 0, 0, 0);
    w.D22 = conj(K22);
    w.P2 = 2.0 * Q * K22 * fd.dQ_dx2.transpose() + conj(I2);
    w.Qz = Q * K22 * fd.d2Q_dx2.transpose() + Q * I2 * fd.dQ_dx2.transpose();

    w.wall = transformed_coeffs_at(bg, s, 0.0, x2[k], t);

    boc.has_A0_1 |= nonzero(w.A0[1]);
    boc.has_A0_2 |= nonzero(w.A0[2]);
    boc.has_A1r |= nonzero(w.A1[1]) || nonzero(w.A1[2]) || nonzero(w.A1[3]);
    boc.has_A2_1 |= nonzero(w.A2[1]);
    boc.has_A2_2 |= nonzero(w.A2[2]);
    boc.has_W |= nonzero(w.W[0]) || nonzero(w.W[1]) || nonzero(w.W[2]);
    boc.has_D11_hi |= nonzero(w.D11[1]) || nonzero(w.D11[2]);
    boc.has_D12_1 |= nonzero(w.D12[1]);
    boc.has_P |= nonzero(w.P1[0]) || nonzero(w.P1[1]) || nonzero(w.P2);
    boc.has_Qz |= nonzero(w.Qz);
  }
  return boc;
}

PrandtlCoefficients prandtl_coefficients(const BoundaryOperatorCoeffs& boc, int layer_order,
                                         double delta) {
  PrandtlCoefficients pc;
  pc.delta = delta;
  for (const auto& w : boc.lines) {
    if (w.A2[0].topLeftCorner<2, 2>().cwiseAbs().maxCoeff() > 1e-14)
      throw NsfError(ErrorKind::ConfigError, "tangential transport in the Prandtl block is not supported");
    pc.lines.push_back(assemble_prandtl_coeffs(w.wall, w.A1[1], layer_order));
  }
  return pc;
}

namespace {

/// Derivatives of one [comp][x2][z] level, computed lazily.
struct Derivs {
  const LayerGeometry& geo;
  const std::vector<double>& f;
  int ncomp;

  std::vector<double> dz(const std::vector<double>& v) const {
    const int M = geo.zg.nodes();
    const double h = geo.zg.dz;
    std::vector<double> out(v.size());
    for (std::size_t line = 0; line < v.size() / M; ++line) {
      const double* a = v.data() + line * M;
      double* o = out.data() + line * M;
      for (int j = 1; j < M - 1; ++j) o[j] = (a[j + 1] - a[j - 1]) / (2 * h);
      o[0] = (-3 * a[0] + 4 * a[1] - a[2]) / (2 * h);
      o[M - 1] = (3 * a[M - 1] - 4 * a[M - 2] + a[M - 3]) / (2 * h);
    }
    return out;
  }
  std::vector<double> dzz(const std::vector<double>& v) const {
    const int M = geo.zg.nodes();
    const double h2 = geo.zg.dz * geo.zg.dz;
    std::vector<double> out(v.size());
    for (std::size_t line = 0; line < v.size() / M; ++line) {
      const double* a = v.data() + line * M;
      double* o = out.data() + line * M;
      for (int j = 1; j < M - 1; ++j) o[j] = (a[j + 1] - 2 * a[j] + a[j - 1]) / h2;
      o[0] = (2 * a[0] - 5 * a[1] + 4 * a[2] - a[3]) / h2;
      o[M - 1] = (2 * a[M - 1] - 5 * a[M - 2] + 4 * a[M - 3] - a[M - 4]) / h2;
    }
    return out;
  }
  std::vector<double> d2(const std::vector<double>& v, bool second) const {
    const int M = geo.zg.nodes(), n2 = geo.n2;
    const double h = geo.x2len / n2;
    std::vector<double> out(v.size());
    for (int c = 0; c < ncomp; ++c)
      for (int k = 0; k < n2; ++k) {
        const double* m = v.data() + (static_cast<std::size_t>(c) * n2 + (k - 1 + n2) % n2) * M;
        const double* z = v.data() + (static_cast<std::size_t>(c) * n2 + k) * M;
        const double* p = v.data() + (static_cast<std::size_t>(c) * n2 + (k + 1) % n2) * M;
        double* o = out.data() + (static_cast<std::size_t>(c) * n2 + k) * M;
        if (second)
          for (int j = 0; j < M; ++j) o[j] = (p[j] - 2 * z[j] + m[j]) / (h * h);
        else
          for (int j = 0; j < M; ++j) o[j] = (p[j] - m[j]) / (2 * h);
      }
    return out;
  }
};

std::vector<double> time_derivative(const LayerHistory& h, std::size_t n) {
  std::vector<double> out(n, 0.0);
  if (!h.now) return out;
  if ((!h.prev || !h.prev2) && !h.zero_before_start)
    throw NsfError(ErrorKind::InsufficientHistory, "time derivative needs three stored levels");
  const double s = 1.0 / (2.0 * h.dt);
  for (std::size_t j = 0; j < n; ++j) {
    double v = 3.0 * (*h.now)[j];
    if (h.prev) v -= 4.0 * (*h.prev)[j];
    if (h.prev2) v += (*h.prev2)[j];
    out[j] = s * v;
  }
  return out;
}

}  // namespace

std::vector<double> apply_Lb(int order, const BoundaryOperatorCoeffs& boc, const LayerGeometry& geo,
                             const LayerHistory& hist) {
  if (order < -1 || order > 2) throw NsfError(ErrorKind::ConfigError, "ℒᵇ order must be in {-1,0,1,2}");
  const std::size_t n = geo.level_size(4);
  std::vector<double> out(n, 0.0);
  if (!hist.now) return out;
  const std::vector<double>& B = *hist.now;
  if (B.size() != n) throw NsfError(ErrorKind::GridMismatch, "layer level has the wrong size");
  Derivs D{geo, B, 4};
  const int M = geo.zg.nodes(), n2 = geo.n2;

  // Each term: matrix per line (function of k), z power, derivative array.
  struct Term {
    std::function<const Mat4&(int)> mat;
    int zpow;
    double sign;
    const std::vector<double>* field;
  };
  std::vector<Term> terms;
  std::vector<double> Bz, Bzz, B2, Bz2, B22, Bt;
  auto L = [&](int k) -> const WallTaylor& { return boc.lines[k]; };

  if (order == -1) {
    Bz = D.dz(B);
    terms.push_back({[&](int k) -> const Mat4& { return L(k).A1[0]; }, 0, 1.0, &Bz});
  } else {
    // time, drift, tangential transport, zeroth order, diffusion at Taylor order `order`
    const int o = order;
    bool need_t = o == 0 || (o == 1 && boc.has_A0_1) || (o == 2 && boc.has_A0_2);
    if (need_t) {
      Bt = time_derivative(hist, n);
      terms.push_back({[&, o](int k) -> const Mat4& { return L(k).A0[o]; }, o, 1.0, &Bt});
    }
    if (boc.has_A1r) {
      Bz = D.dz(B);
      terms.push_back({[&, o](int k) -> const Mat4& { return L(k).A1[o + 1]; }, o + 1, 1.0, &Bz});
    }
    bool need_2 = o == 0 || (o == 1 && boc.has_A2_1) || (o == 2 && boc.has_A2_2);
    if (need_2) {
      B2 = D.d2(B, false);
      terms.push_back({[&, o](int k) -> const Mat4& { return L(k).A2[o]; }, o, 1.0, &B2});
    }
    if (boc.has_W)
      terms.push_back({[&, o](int k) -> const Mat4& { return L(k).W[o]; }, o, 1.0, &B});
    if (o == 0 || boc.has_D11_hi) {
      Bzz = D.dzz(B);
      terms.push_back({[&, o](int k) -> const Mat4& { return L(k).D11[o]; }, o, -1.0, &Bzz});
    }
    if (o >= 1) {
      const int q = o - 1;
      if (q == 0 || boc.has_D12_1) {
        if (B2.empty()) B2 = D.d2(B, false);
        Bz2 = D.dz(B2);
        terms.push_back({[&, q](int k) -> const Mat4& { return L(k).D12[q]; }, q, -1.0, &Bz2});
      }
      if (boc.has_P) {
        if (Bz.empty()) Bz = D.dz(B);
        terms.push_back({[&, q](int k) -> const Mat4& { return L(k).P1[q]; }, q, -1.0, &Bz});
      }
    }
    if (o == 2) {
      B22 = D.d2(B, true);
      terms.push_back({[&](int k) -> const Mat4& { return L(k).D22; }, 0, -1.0, &B22});
      if (boc.has_P) {
        if (B2.empty()) B2 = D.d2(B, false);
        terms.push_back({[&](int k) -> const Mat4& { return L(k).P2; }, 0, -1.0, &B2});
      }
      if (boc.has_Qz) terms.push_back({[&](int k) -> const Mat4& { return L(k).Qz; }, 0, -1.0, &B});
    }
  }

  const std::size_t cs = static_cast<std::size_t>(n2) * M;
  for (const Term& t : terms) {
    const std::vector<double>& f = *t.field;
    for (int k = 0; k < n2; ++k) {
      const Mat4 m = t.sign * t.mat(k);
      if (!nonzero(m)) continue;
      const std::size_t base = static_cast<std::size_t>(k) * M;
      for (int j = 0; j < M; ++j) {
        const std::size_t p = base + j;
        double zp = t.zpow == 0 ? 1.0 : std::pow(geo.zg.z[j], t.zpow);
        Vec4 v(f[p], f[cs + p], f[2 * cs + p], f[3 * cs + p]);
        Vec4 r = zp * (m * v);
        for (int c = 0; c < 4; ++c) out[c * cs + p] += r[c];
      }
    }
  }
  return out;
}

LayerProfile apply_Lb(int order, const BoundaryOperatorCoeffs& coeffs, const LayerProfile& profile) {
  if (profile.ncomp != 4) throw NsfError(ErrorKind::GridMismatch, "ℒᵇ acts on 4-component profiles");
  const int nt = static_cast<int>(profile.times.size());
  if (nt == 0) throw NsfError(ErrorKind::InsufficientHistory, "empty profile");
  LayerGeometry geo{profile.zg, profile.n2, profile.x2len};
  LayerHistory h;
  h.now = &profile.values[nt - 1];
  h.prev = nt >= 2 ? &profile.values[nt - 2] : nullptr;
  h.prev2 = nt >= 3 ? &profile.values[nt - 3] : nullptr;
  h.dt = nt >= 2 ? profile.times[nt - 1] - profile.times[nt - 2] : 1.0;
  h.zero_before_start = true;
  if (order >= 0 && nt < 3 && profile.max_abs() > 0.0 && nt != 1) {
    // a partial history is only meaningful when it starts from zero data
    if (profile.values[0] != std::vector<double>(profile.level_size(), 0.0))
      throw NsfError(ErrorKind::InsufficientHistory, "∂t needs zero data before the first level");
  }
  LayerProfile out(profile.zg, profile.n2, profile.x2len, 4);
  out.push_level(profile.times[nt - 1], apply_Lb(order, coeffs, geo, h));
  return out;
}

double tail_max(const std::vector<double>& v, const LayerGeometry& geo, int ncomp) {
  const int M = geo.zg.nodes();
  const int j0 = static_cast<int>(std::ceil(0.9 * geo.zg.nz));
  double m = 0.0;
  for (int line = 0; line < ncomp * geo.n2; ++line)
    for (int j = j0; j < M; ++j) m = std::max(m, std::abs(v[static_cast<std::size_t>(line) * M + j]));
  return m;
}

namespace {

void check_priors(int i, const std::vector<LayerHistory>& priors, int needed) {
  if (static_cast<int>(priors.size()) < needed) {
    std::ostringstream os;
    os << "order " << i << " needs " << needed << " prior layers, got " << priors.size();
    throw NsfError(ErrorKind::MissingPriorLayer, os.str());
  }
}

}  // namespace

LayerRHS layer_ode_rhs(int i, const std::vector<LayerHistory>& priors,
                       const BoundaryOperatorCoeffs& coeffs, const LayerGeometry& geo) {
  const int M = geo.zg.nodes(), n2 = geo.n2;
  const std::size_t cs = static_cast<std::size_t>(n2) * M;
  LayerRHS r;
  r.H2.assign(cs, 0.0);
  r.H3.assign(cs, 0.0);
  if (i <= 0) return r;
  check_priors(i, priors, i);
  std::vector<double> acc(4 * cs, 0.0);
  for (int ord = 0; ord <= 2; ++ord) {
    int m = i - 1 - ord;
    if (m < 0) break;
    std::vector<double> t = apply_Lb(ord, coeffs, geo, priors[m]);
    for (std::size_t p = 0; p < acc.size(); ++p) acc[p] -= t[p];
  }
  std::copy(acc.begin() + 2 * cs, acc.begin() + 3 * cs, r.H2.begin());
  std::copy(acc.begin() + 3 * cs, acc.end(), r.H3.begin());
  return r;
}

std::vector<double> solve_layer_ode(int i, const LayerRHS& H, const BoundaryOperatorCoeffs& coeffs,
                                    const LayerGeometry& geo, double tail_tol) {
  const int M = geo.zg.nodes(), n2 = geo.n2;
  const std::size_t cs = static_cast<std::size_t>(n2) * M;
  std::vector<double> out(4 * cs, 0.0);
  if (i <= 0) return out;
  if (M < 5) throw NsfError(ErrorKind::ConfigError, "layer grid too small for the quadrature");
  double hmax = 0.0;
  for (double v : H.H2) hmax = std::max(hmax, std::abs(v));
  for (double v : H.H3) hmax = std::max(hmax, std::abs(v));
  LayerGeometry g1 = geo;
  double tail = std::max(tail_max(H.H2, g1, 1), tail_max(H.H3, g1, 1));
  if (tail > tail_tol * std::max(1.0, hmax)) {
    std::ostringstream os;
    os << "order " << i << ": layer ODE right-hand side tail " << tail << " exceeds " << tail_tol;
    throw NsfError(ErrorKind::NonDecayingRHS, os.str());
  }
  const double h = geo.zg.dz;
  for (int k = 0; k < n2; ++k) {
    const double lam = coeffs.lines[k].lambda;
    for (int comp = 2; comp <= 3; ++comp) {
      const double* f = (comp == 2 ? H.H2 : H.H3).data() + static_cast<std::size_t>(k) * M;
      double* b = out.data() + comp * cs + static_cast<std::size_t>(k) * M;
      const double sign = comp == 2 ? -1.0 : 1.0;
      // cumulative ∫_z^Z f by cubic interpolation on each interval
      double acc = 0.0;
      b[M - 1] = 0.0;
      for (int j = M - 2; j >= 0; --j) {
        double seg;
        if (j == 0)
          seg = h / 24.0 * (9 * f[0] + 19 * f[1] - 5 * f[2] + f[3]);
        else if (j == M - 2)
          seg = h / 24.0 * (f[M - 4] - 5 * f[M - 3] + 19 * f[M - 2] + 9 * f[M - 1]);
        else
          seg = h / 24.0 * (-f[j - 1] + 13 * f[j] + 13 * f[j + 1] - f[j + 2]);
        acc += seg;
        b[j] = sign * acc / lam;
      }
    }
  }
  return out;
}

std::vector<double> assemble_F(int i, const std::vector<LayerHistory>& priors, const LayerHistory& B_II,
                               const BoundaryOperatorCoeffs& coeffs, const LayerGeometry& geo) {
  const int M = geo.zg.nodes(), n2 = geo.n2;
  const std::size_t cs = static_cast<std::size_t>(n2) * M;
  std::vector<double> acc(4 * cs, 0.0);
  if (i >= 1) {
    std::vector<double> t = apply_Lb(0, coeffs, geo, B_II);
    for (std::size_t p = 0; p < acc.size(); ++p) acc[p] -= t[p];
  }
  for (int ord = 1; ord <= 2; ++ord) {
    int m = i - ord;
    if (m < 0) break;
    check_priors(i, priors, m + 1);
    std::vector<double> t = apply_Lb(ord, coeffs, geo, priors[m]);
    for (std::size_t p = 0; p < acc.size(); ++p) acc[p] -= t[p];
  }
  return std::vector<double>(acc.begin(), acc.begin() + 2 * cs);
}

}  // namespace nsf
