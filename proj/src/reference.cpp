#include "nsf/reference.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsf/errors.hpp"
#include "nsf/ops.hpp"

namespace nsf {

namespace {

constexpr double kGamma = 2.0 - 1.4142135623730951;  // TR-BDF2 stage fraction

double speed(const Mat4& A0, const Mat4& A) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat4> es(A, A0, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

PhysicalCoefficients sample_physical(const BackgroundState& bg, const ViscosityScaling& s,
                                     const Grid& grid) {
  s.validate();
  PhysicalCoefficients pc;
  pc.uniform = bg.kind == BackgroundState::Kind::Constant;
  const std::size_t n = pc.uniform ? 1 : grid.size();
  pc.A0.resize(n);
  pc.A0inv.resize(n);
  pc.A1.resize(n);
  pc.A2.resize(n);
  pc.I1.resize(n);
  pc.I2.resize(n);
  pc.nu.resize(n);
  pc.xi.resize(n);
  const double e2 = s.epsilon * s.epsilon;
  auto fill = [&](std::size_t p, double x1, double x2) {
    BackgroundValues bv = eval_background(bg, x1, x2, 0.0);
    CoefficientMatrices m = assemble_matrices(bv, boundary_alpha(bg, x2, 0.0), s);
    pc.A0[p] = m.A0.diagonal();
    pc.A0inv[p] = m.A0.diagonal().cwiseInverse();
    pc.A1[p] = m.A1;
    pc.A2[p] = m.A2;
    pc.I1[p] = e2 * m.I1;
    pc.I2[p] = e2 * m.I2;
    const double mu = e2 * s.mu_bar / bv.p_rho;
    pc.nu[p] = Vec4(0.0, mu, mu, e2 * s.kappa_bar / (bv.theta_p * bv.p_rho));
    pc.xi[p] = e2 * s.xi_bar() / bv.p_rho;
    if (pc.I1[p].cwiseAbs().maxCoeff() > 0 || pc.I2[p].cwiseAbs().maxCoeff() > 0) pc.has_I = true;
    if (pc.xi[p] != 0.0) pc.has_xi = true;
    pc.max_speed = std::max({pc.max_speed, speed(m.A0, m.A1), speed(m.A0, m.A2)});
    Vec4 nn = pc.A0inv[p].cwiseProduct(pc.nu[p]);
    pc.max_nu = std::max(pc.max_nu, nn.maxCoeff() + pc.A0inv[p][1] * std::abs(pc.xi[p]));
  };
  if (pc.uniform) {
    fill(0, 0.0, 0.0);
  } else {
    for (int i = 0; i < grid.N1; ++i)
      for (int k = 0; k < grid.N2; ++k) fill(grid.idx(i, k), grid.x1[i], grid.x2[k]);
  }
  return pc;
}

NsfStepper::NsfStepper(const Grid& grid, PhysicalCoefficients coeffs, StateField init, AcousticOptions opts)
    : grid_(grid), pc_(std::move(coeffs)), opts_(opts), V_(std::move(init)) {
  if (V_.N1 != grid.N1 || V_.N2 != grid.N2)
    throw NsfError(ErrorKind::GridMismatch, "initial field does not match the grid");
  for (auto* f : {&k1_, &k2_, &k3_, &k4_, &tmp_, &d1_, &d2_, &d22_, &d12_}) *f = StateField(grid);
}

void NsfStepper::check_dt(double dt) const {
  const double lim = opts_.cfl_max * std::min(grid_.min_h1(), grid_.h2) / pc_.max_speed;
  const double lim_diff = 0.5 * grid_.h2 * grid_.h2 / std::max(pc_.max_nu, 1e-300);
  if (!(dt > 0.0) || dt > lim * (1.0 + 1e-12) || dt > lim_diff) {
    std::ostringstream os;
    os << "dt=" << dt << " exceeds the advective limit " << lim << " or the tangential diffusion limit "
       << lim_diff;
    throw NsfError(ErrorKind::CflViolation, os.str());
  }
}

void NsfStepper::explicit_rhs(const StateField& V, double t,
                              const std::function<void(double, StateField&)>& source, StateField& out) {
  const Grid& g = grid_;
  const PhysicalCoefficients& pc = pc_;
  for (int c = 0; c < 4; ++c) {
    ops::d1_sbp(g, V.c[c].data(), d1_.c[c].data());
    ops::d2(g, V.c[c].data(), d2_.c[c].data());
    if (c > 0) ops::d22(g, V.c[c].data(), d22_.c[c].data());
  }
  if (pc.has_xi)
    for (int c = 1; c <= 2; ++c) ops::d1(g, d2_.c[c].data(), d12_.c[c].data());
  const std::size_t n = g.size();
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t q = pc.at(p);
    Vec4 a(d1_.c[0][p], d1_.c[1][p], d1_.c[2][p], d1_.c[3][p]);
    Vec4 b(d2_.c[0][p], d2_.c[1][p], d2_.c[2][p], d2_.c[3][p]);
    Vec4 r = -(pc.A1[q] * a) - pc.A2[q] * b;
    const Vec4& nu = pc.nu[q];
    r[1] += nu[1] * d22_.c[1][p];
    r[2] += nu[2] * d22_.c[2][p];
    r[3] += nu[3] * d22_.c[3][p];
    if (pc.has_xi) {
      r[1] += pc.xi[q] * d12_.c[2][p];
      r[2] += pc.xi[q] * (d12_.c[1][p] + d22_.c[2][p]);
    }
    if (pc.has_I) r += pc.I1[q] * a + pc.I2[q] * b;
    for (int c = 0; c < 4; ++c) out.c[c][p] = r[c];
  }
  if (source) source(t, out);
  for (std::size_t p = 0; p < n; ++p) {
    const Vec4& ai = pc.A0inv[pc.at(p)];
    for (int c = 0; c < 4; ++c) out.c[c][p] *= ai[c];
  }
  const double diss = opts_.dissipation * pc.max_speed;
  for (int c = 0; c < 4; ++c) ops::add_dissipation(g, diss, V.c[c].data(), out.c[c].data());
  for (int i = 0; i < g.N1; ++i) {
    const double s = g.sponge[i];
    if (s == 0.0) continue;
    for (int c = 0; c < 4; ++c)
      for (int k = 0; k < g.N2; ++k) out.c[c][g.idx(i, k)] -= s * V.c[c][g.idx(i, k)];
  }
  for (int i : {0, g.N1 - 1})
    for (int c = 1; c < 4; ++c)
      for (int k = 0; k < g.N2; ++k) out.c[c][g.idx(i, k)] = 0.0;
}

void NsfStepper::factorize(double h) {
  // Stage matrices I − a·ν·∂11 with a = γh/2 (trapezoidal stage) and (1−γ)h/(2−γ) (BDF2 stage).
  const Grid& g = grid_;
  const int N1 = g.N1, N2 = g.N2;
  const double i2 = 1.0 / (g.dxi * g.dxi);
  const double a[2] = {0.5 * kGamma * h, (1.0 - kGamma) / (2.0 - kGamma) * h};
  const std::size_t len = static_cast<std::size_t>(3) * N2 * N1;
  for (int s = 0; s < 2; ++s) {
    lo_[s].assign(len, 0.0);
    ip_[s].assign(len, 0.0);
    up_[s].assign(len, 0.0);
    for (int c = 1; c < 4; ++c)
      for (int k = 0; k < N2; ++k) {
        const std::size_t base = (static_cast<std::size_t>(c - 1) * N2 + k) * N1;
        double* lo = lo_[s].data() + base;
        double* ip = ip_[s].data() + base;
        double* up = up_[s].data() + base;
        // Dirichlet rows at both ends
        ip[0] = 1.0;
        up[0] = 0.0;
        for (int i = 1; i < N1 - 1; ++i) {
          const std::size_t q = pc_.at(g.idx(i, k));
          double nu = pc_.A0inv[q][c] * (pc_.nu[q][c] + (c == 1 ? pc_.xi[q] : 0.0));
          double cm = a[s] * nu * i2 / (g.J[i] * g.Jhalf[i - 1]);
          double cp = a[s] * nu * i2 / (g.J[i] * g.Jhalf[i]);
          lo[i] = -cm;
          double diag = 1.0 + cm + cp - lo[i] * up[i - 1];
          ip[i] = 1.0 / diag;
          up[i] = -cp * ip[i];
        }
        lo[N1 - 1] = 0.0;
        ip[N1 - 1] = 1.0;
      }
  }
  factored_h_ = h;
}

void NsfStepper::implicit_half(double h) {
  if (h != factored_h_) factorize(h);
  const Grid& g = grid_;
  const int N1 = g.N1, N2 = g.N2;
  const double i2 = 1.0 / (g.dxi * g.dxi);
  const double a0 = 0.5 * kGamma * h;
  const double w1 = 1.0 / (kGamma * (2.0 - kGamma));
  const double w0 = (1.0 - kGamma) * (1.0 - kGamma) / (kGamma * (2.0 - kGamma));
  std::vector<double> un(N1), us(N1), r(N1);
  auto solve = [&](int s, std::size_t base, std::vector<double>& x) {
    const double* lo = lo_[s].data() + base;
    const double* ip = ip_[s].data() + base;
    const double* up = up_[s].data() + base;
    x[0] *= ip[0];
    for (int i = 1; i < N1; ++i) x[i] = (x[i] - lo[i] * x[i - 1]) * ip[i];
    for (int i = N1 - 2; i >= 0; --i) x[i] -= up[i] * x[i + 1];
  };
  for (int c = 1; c < 4; ++c)
    for (int k = 0; k < N2; ++k) {
      const std::size_t base = (static_cast<std::size_t>(c - 1) * N2 + k) * N1;
      for (int i = 0; i < N1; ++i) un[i] = V_.c[c][g.idx(i, k)];
      // trapezoidal stage
      r[0] = un[0];
      r[N1 - 1] = un[N1 - 1];
      for (int i = 1; i < N1 - 1; ++i) {
        const std::size_t q = pc_.at(g.idx(i, k));
        double nu = pc_.A0inv[q][c] * (pc_.nu[q][c] + (c == 1 ? pc_.xi[q] : 0.0));
        double cm = nu * i2 / (g.J[i] * g.Jhalf[i - 1]);
        double cp = nu * i2 / (g.J[i] * g.Jhalf[i]);
        r[i] = un[i] + a0 * (cp * (un[i + 1] - un[i]) - cm * (un[i] - un[i - 1]));
      }
      us = r;
      solve(0, base, us);
      // BDF2 stage
      for (int i = 0; i < N1; ++i) r[i] = w1 * us[i] - w0 * un[i];
      r[0] = un[0];
      r[N1 - 1] = un[N1 - 1];
      solve(1, base, r);
      for (int i = 0; i < N1; ++i) V_.c[c][g.idx(i, k)] = r[i];
    }
}

void NsfStepper::step(double dt, const std::function<void(double, StateField&)>& source) {
  implicit_half(0.5 * dt);
  const double t = t_;
  explicit_rhs(V_, t, source, k1_);
  tmp_ = V_;
  tmp_.axpy(0.5 * dt, k1_);
  explicit_rhs(tmp_, t + 0.5 * dt, source, k2_);
  tmp_ = V_;
  tmp_.axpy(0.5 * dt, k2_);
  explicit_rhs(tmp_, t + 0.5 * dt, source, k3_);
  tmp_ = V_;
  tmp_.axpy(dt, k3_);
  explicit_rhs(tmp_, t + dt, source, k4_);
  for (int c = 0; c < 4; ++c) {
    double* u = V_.c[c].data();
    const double *a = k1_.c[c].data(), *b = k2_.c[c].data(), *d = k3_.c[c].data(), *e = k4_.c[c].data();
    for (std::size_t j = 0; j < V_.size(); ++j) u[j] += dt / 6.0 * (a[j] + 2.0 * (b[j] + d[j]) + e[j]);
  }
  implicit_half(0.5 * dt);
  t_ = t + dt;
}

double NsfStepper::energy() const {
  const Grid& g = grid_;
  double e = 0.0;
  for (int i = 0; i < g.N1; ++i) {
    double row = 0.0;
    for (int k = 0; k < g.N2; ++k) {
      const std::size_t p = g.idx(i, k);
      const Vec4& a0 = pc_.A0[pc_.at(p)];
      for (int c = 0; c < 4; ++c) row += a0[c] * V_.c[c][p] * V_.c[c][p];
    }
    e += g.weight1[i] * g.h2 * row;
  }
  return e;
}

double NsfStepper::bc_residual() const {
  double r = 0.0;
  for (int c = 1; c < 4; ++c)
    for (int k = 0; k < grid_.N2; ++k) r = std::max(r, std::abs(V_.at(c, 0, k)));
  return r;
}

NsfSolution solve_nsf(const NsfProblem& pb) {
  Grid grid = make_grid(pb.grid);
  const double eps = pb.scaling.epsilon;
  if (grid.cells_below(eps) < pb.min_layer_cells) {
    std::ostringstream os;
    os << grid.cells_below(eps) << " cells below x1 = " << eps << ", need " << pb.min_layer_cells;
    throw NsfError(ErrorKind::GridTooCoarseForLayer, os.str());
  }
  if (!pb.bg.steady) throw NsfError(ErrorKind::ConfigError, "the reference solver needs a steady background");
  for (int c = 1; c < 4; ++c)
    for (int k = 0; k < grid.N2; ++k)
      if (std::abs(pb.init.at(c, 0, k)) > 1e-10)
        throw NsfError(ErrorKind::BoundaryInconsistency, "initial data violates v = θ = 0 on the wall");
  NsfStepper st(grid, sample_physical(pb.bg, pb.scaling, grid), pb.init, pb.hyperbolic);
  const TimeGrid& tg = pb.time;
  const double dt = tg.dt();
  st.check_dt(dt);
  NsfSolution sol;
  sol.dt = dt;
  sol.times.push_back(0.0);
  sol.snapshots.push_back(st.state());
  sol.energy_times.push_back(0.0);
  sol.energy.push_back(st.energy());
  for (int n = 0; n < tg.macro_steps; ++n) {
    for (int m = 0; m < tg.substeps; ++m) {
      st.step(dt, pb.source);
      sol.energy_times.push_back(st.time());
      sol.energy.push_back(st.energy());
    }
    sol.max_bc_residual = std::max(sol.max_bc_residual, st.bc_residual());
    if ((n + 1) % tg.output_every == 0) {
      sol.times.push_back((n + 1) * tg.macro_dt());
      sol.snapshots.push_back(st.state());
    }
  }
  return sol;
}

std::vector<StateField> error_field(const NsfSolution& ref, const std::vector<ApproximateSolution>& approx) {
  if (ref.snapshots.size() != approx.size())
    throw NsfError(ErrorKind::GridMismatch, "reference and approximation have different time series");
  std::vector<StateField> w;
  for (std::size_t j = 0; j < approx.size(); ++j) {
    const StateField& V = ref.snapshots[j];
    const StateField& A = approx[j].V_approx;
    if (V.N1 != A.N1 || V.N2 != A.N2 || std::abs(ref.times[j] - approx[j].time) > 1e-12)
      throw NsfError(ErrorKind::GridMismatch, "reference and approximation do not share grid and times");
    StateField e = V;
    e.axpy(-1.0, A);
    w.push_back(std::move(e));
  }
  return w;
}

}  // namespace nsf
