#include "nsf/acoustic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsf/errors.hpp"
#include "nsf/ops.hpp"

namespace nsf {

namespace {

double generalized_speed(const Mat4& A0, const Mat4& A) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat4> es(A, A0, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

CoefficientField sample_coefficients(const BackgroundState& bg, const ViscosityScaling& scaling,
                                     const Grid& grid, double t) {
  CoefficientField cf;
  cf.time = t;
  cf.uniform = bg.kind == BackgroundState::Kind::Constant;
  const std::size_t n = cf.uniform ? 1 : grid.size();
  for (auto* v : {&cf.A0, &cf.A0inv, &cf.A1, &cf.A2, &cf.W, &cf.P1, &cf.P2, &cf.Qz, &cf.D11,
                  &cf.D12, &cf.D22})
    v->resize(n);
  cf.alpha.resize(grid.N2);
  cf.Q.resize(grid.N2);

  std::vector<FrameDerivatives> fds(grid.N2);
  for (int k = 0; k < grid.N2; ++k) {
    double x2 = grid.x2[k];
    fds[k] = frame_derivatives(bg, cf.uniform ? 0.0 : x2, t);
    cf.alpha[k] = boundary_alpha(bg, cf.uniform ? 0.0 : x2, t);
    cf.Q[k] = fds[k].Q;
  }

  auto fill = [&](std::size_t p, int k, double x1, double x2) {
    BoundaryFrame frame = eigen_frame(cf.alpha[k]);
    BackgroundValues bv = eval_background(bg, x1, x2, t);
    CoefficientMatrices m = assemble_matrices(bv, frame.alpha, scaling);
    TransformedCoefficients tc = transformed_coeffs(frame, fds[k], m, bv, scaling);
    cf.A0[p] = tc.cal_A0;
    cf.A0inv[p] = tc.cal_A0.inverse();
    cf.A1[p] = tc.cal_A1;
    cf.A2[p] = tc.cal_A2;
    cf.W[p] = tc.cal_W;
    cf.P1[p] = tc.cal_P1 + tc.cal_I1;
    cf.P2[p] = tc.cal_P2 + tc.cal_I2;
    cf.Qz[p] = tc.cal_Q1 + tc.cal_Q2;
    cf.D11[p] = tc.D11;
    cf.D12[p] = tc.D12;
    cf.D22[p] = tc.D22;
    cf.max_speed = std::max({cf.max_speed, generalized_speed(tc.cal_A0, tc.cal_A1),
                             generalized_speed(tc.cal_A0, tc.cal_A2)});
    if (cf.W[p].cwiseAbs().maxCoeff() > 0.0) cf.has_W = true;
    if (cf.P1[p].cwiseAbs().maxCoeff() > 0.0 || cf.P2[p].cwiseAbs().maxCoeff() > 0.0 ||
        cf.Qz[p].cwiseAbs().maxCoeff() > 0.0)
      cf.has_lower = true;
  };

  if (cf.uniform) {
    fill(0, 0, 0.0, 0.0);
  } else {
    for (int i = 0; i < grid.N1; ++i)
      for (int k = 0; k < grid.N2; ++k) fill(grid.idx(i, k), k, grid.x1[i], grid.x2[k]);
  }
  return cf;
}

double acoustic_dt_max(const Grid& grid, double max_speed, double cfl) {
  return cfl * std::min(grid.min_h1(), grid.h2) / max_speed;
}

AcousticStepper::AcousticStepper(const Grid& grid, std::shared_ptr<const CoefficientField> coeffs,
                                 StateField init, AcousticOptions opts)
    : grid_(grid), coeffs_(std::move(coeffs)), opts_(opts), U_(std::move(init)) {
  if (U_.N1 != grid.N1 || U_.N2 != grid.N2)
    throw NsfError(ErrorKind::GridMismatch, "initial field does not match the grid");
  for (auto* f : {&k1_, &k2_, &k3_, &k4_, &tmp_, &d1_, &d2_}) *f = StateField(grid);
}

void AcousticStepper::check_dt(double dt) const {
  double limit = acoustic_dt_max(grid_, coeffs_->max_speed, opts_.cfl_max);
  if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "dt=" << dt << " exceeds the stability limit " << limit;
    throw NsfError(ErrorKind::CflViolation, os.str());
  }
}

void AcousticStepper::rhs(const StateField& U, double t, const BoundaryData& bc,
                          const SourceFn& source, StateField& out) {
  const Grid& g = grid_;
  const CoefficientField& cf = *coeffs_;
  for (int c = 0; c < 4; ++c) {
    ops::d1(g, U.c[c].data(), d1_.c[c].data());
    ops::d2(g, U.c[c].data(), d2_.c[c].data());
  }
  const std::size_t n = g.size();
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t q = cf.at(p);
    Vec4 a(d1_.c[0][p], d1_.c[1][p], d1_.c[2][p], d1_.c[3][p]);
    Vec4 b(d2_.c[0][p], d2_.c[1][p], d2_.c[2][p], d2_.c[3][p]);
    Vec4 r = -(cf.A1[q] * a) - cf.A2[q] * b;
    if (cf.has_W) r -= cf.W[q] * Vec4(U.c[0][p], U.c[1][p], U.c[2][p], U.c[3][p]);
    for (int c = 0; c < 4; ++c) out.c[c][p] = r[c];
  }
  if (source) source(t, out);
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t q = cf.at(p);
    Vec4 r(out.c[0][p], out.c[1][p], out.c[2][p], out.c[3][p]);
    r = cf.A0inv[q] * r;
    for (int c = 0; c < 4; ++c) out.c[c][p] = r[c];
  }
  const double diss = opts_.dissipation * cf.max_speed;
  for (int c = 0; c < 4; ++c) ops::add_dissipation(g, diss, U.c[c].data(), out.c[c].data());
  for (int i = 0; i < g.N1; ++i) {
    const double s = g.sponge[i];
    if (s == 0.0) continue;
    for (int c = 0; c < 4; ++c)
      for (int k = 0; k < g.N2; ++k) out.c[c][g.idx(i, k)] -= s * U.c[c][g.idx(i, k)];
  }
  // Strong characteristic condition: the rate of E2 − E3 follows ġ at the wall and
  // vanishes at the far end. Only the incoming variable is overwritten (E2 at the wall,
  // E3 at the far end), so the outgoing trace keeps its interior value.
  for (int side = 0; side < 2; ++side) {
    const int i = side == 0 ? 0 : g.N1 - 1;
    for (int k = 0; k < g.N2; ++k) {
      const std::size_t p = g.idx(i, k);
      if (side == 0)
        out.c[2][p] = out.c[3][p] + (bc.zero() ? 0.0 : bc.gdot(k, t));
      else
        out.c[3][p] = out.c[2][p];
    }
  }
}

void AcousticStepper::project_state(StateField& U, double t, const BoundaryData& bc) const {
  const Grid& g = grid_;
  for (int k = 0; k < g.N2; ++k) {
    U.at(2, 0, k) = U.at(3, 0, k) + (bc.zero() ? 0.0 : bc.g(k, t));
    U.at(3, g.N1 - 1, k) = U.at(2, g.N1 - 1, k);
  }
}

void AcousticStepper::step(double dt, const BoundaryData& bc, const SourceFn& source) {
  const double t = t_;
  rhs(U_, t, bc, source, k1_);
  tmp_ = U_;
  tmp_.axpy(0.5 * dt, k1_);
  rhs(tmp_, t + 0.5 * dt, bc, source, k2_);
  tmp_ = U_;
  tmp_.axpy(0.5 * dt, k2_);
  rhs(tmp_, t + 0.5 * dt, bc, source, k3_);
  tmp_ = U_;
  tmp_.axpy(dt, k3_);
  rhs(tmp_, t + dt, bc, source, k4_);
  for (int c = 0; c < 4; ++c) {
    double* u = U_.c[c].data();
    const double *a = k1_.c[c].data(), *b = k2_.c[c].data(), *d = k3_.c[c].data(),
                 *e = k4_.c[c].data();
    const std::size_t n = U_.size();
    for (std::size_t j = 0; j < n; ++j) u[j] += dt / 6.0 * (a[j] + 2.0 * (b[j] + d[j]) + e[j]);
  }
  t_ = t + dt;
  project_state(U_, t_, bc);
}

std::vector<Vec4> AcousticStepper::trace() const {
  std::vector<Vec4> tr(grid_.N2);
  for (int k = 0; k < grid_.N2; ++k)
    tr[k] = Vec4(U_.at(0, 0, k), U_.at(1, 0, k), U_.at(2, 0, k), U_.at(3, 0, k));
  return tr;
}

double AcousticStepper::bc_residual(const BoundaryData& bc) const {
  double r = 0.0;
  for (int k = 0; k < grid_.N2; ++k) {
    double target = bc.zero() ? 0.0 : bc.g(k, t_);
    r = std::max(r, std::abs(U_.at(2, 0, k) - U_.at(3, 0, k) - target));
  }
  return r;
}

AcousticSolution solve_euler(const AcousticProblem& problem, const Grid& grid, double T, double dt,
                             int store_every) {
  if (!problem.coeffs) throw NsfError(ErrorKind::ConfigError, "acoustic problem without coefficients");
  for (int k = 0; k < grid.N2; ++k) {
    double g0 = problem.boundary_data.zero() ? 0.0 : problem.boundary_data.g(k, 0.0);
    double mis = problem.init.at(2, 0, k) - problem.init.at(3, 0, k) - g0;
    if (std::abs(mis) > 1e-10) {
      std::ostringstream os;
      os << "initial data violates E2 - E3 = g by " << mis << " at x2=" << grid.x2[k];
      throw NsfError(ErrorKind::BoundaryInconsistency, os.str());
    }
  }
  AcousticStepper st(grid, problem.coeffs, problem.init, problem.options);
  st.check_dt(dt);
  const int nsteps = static_cast<int>(std::llround(T / dt));
  const double h = nsteps > 0 ? T / nsteps : 0.0;
  AcousticSolution sol;
  sol.times.push_back(0.0);
  sol.snapshots.push_back(st.state());
  sol.trace_times.push_back(0.0);
  sol.trace.push_back(st.trace());
  for (int n = 1; n <= nsteps; ++n) {
    st.step(h, problem.boundary_data, problem.source);
    sol.trace_times.push_back(st.time());
    sol.trace.push_back(st.trace());
    sol.max_bc_residual = std::max(sol.max_bc_residual, st.bc_residual(problem.boundary_data));
    if (n % store_every == 0 || n == nsteps) {
      sol.times.push_back(st.time());
      sol.snapshots.push_back(st.state());
    }
  }
  return sol;
}

StateField apply_lambda(const CoefficientField& cf, const Grid& g, const StateField& E) {
  StateField out(g), e1(g), e2(g), e11(g), e22(g), e12(g);
  for (int c = 0; c < 4; ++c) {
    ops::d1(g, E.c[c].data(), e1.c[c].data());
    ops::d2(g, E.c[c].data(), e2.c[c].data());
    // wide stencil: blind to the odd-even mode of the central scheme, which the compact
    // second difference would amplify by 1/h² next to the wall
    ops::d1(g, e1.c[c].data(), e11.c[c].data());
    ops::d22(g, E.c[c].data(), e22.c[c].data());
    ops::d1(g, e2.c[c].data(), e12.c[c].data());
  }
  auto vec = [](const StateField& f, std::size_t p) {
    return Vec4(f.c[0][p], f.c[1][p], f.c[2][p], f.c[3][p]);
  };
  for (std::size_t p = 0; p < g.size(); ++p) {
    const std::size_t q = cf.at(p);
    Vec4 r = cf.D11[q] * vec(e11, p) + cf.D12[q] * vec(e12, p) + cf.D22[q] * vec(e22, p);
    if (cf.has_lower)
      r += cf.Qz[q] * vec(E, p) + cf.P1[q] * vec(e1, p) + cf.P2[q] * vec(e2, p);
    for (int c = 0; c < 4; ++c) out.c[c][p] = r[c];
  }
  return out;
}

double acoustic_energy(const CoefficientField& cf, const Grid& g, const StateField& U) {
  double e = 0.0;
  for (int i = 0; i < g.N1; ++i) {
    double row = 0.0;
    for (int k = 0; k < g.N2; ++k) {
      const std::size_t p = g.idx(i, k);
      Vec4 u(U.c[0][p], U.c[1][p], U.c[2][p], U.c[3][p]);
      row += u.dot(cf.A0[cf.at(p)] * u);
    }
    e += g.weight1[i] * g.h2 * row;
  }
  return e;
}

namespace {

StateField transform(const CoefficientField& cf, const StateField& in, bool transpose) {
  StateField out(in.N1, in.N2);
  for (int i = 0; i < in.N1; ++i)
    for (int k = 0; k < in.N2; ++k) {
      const Mat4& Q = cf.Q[k];
      std::size_t p = static_cast<std::size_t>(i) * in.N2 + k;
      Vec4 v(in.c[0][p], in.c[1][p], in.c[2][p], in.c[3][p]);
      Vec4 r = transpose ? Vec4(Q.transpose() * v) : Vec4(Q * v);
      for (int c = 0; c < 4; ++c) out.c[c][p] = r[c];
    }
  return out;
}

}  // namespace

StateField to_physical(const CoefficientField& cf, const StateField& U) {
  return transform(cf, U, true);
}
StateField to_characteristic(const CoefficientField& cf, const StateField& V) {
  return transform(cf, V, false);
}

}  // namespace nsf
