#include "nsf/composer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "nsf/errors.hpp"
#include "nsf/ops.hpp"

namespace nsf {

double ExpansionSet::max_coupling_residual() const {
  double r = 0.0;
  for (const auto& l : build_log) r = std::max({r, l.coupling_g, l.coupling_B0, l.coupling_B1});
  return r;
}

namespace {

/// Rolling window of the last three macro levels of one layer term.
struct Window {
  std::deque<std::vector<double>> levels;  // front = newest
  void push(std::vector<double> v) {
    levels.push_front(std::move(v));
    if (levels.size() > 3) levels.pop_back();
  }
  LayerHistory history(double dt) const {
    LayerHistory h;
    h.dt = dt;
    h.zero_before_start = true;
    if (!levels.empty()) h.now = &levels[0];
    if (levels.size() > 1) h.prev = &levels[1];
    if (levels.size() > 2) h.prev2 = &levels[2];
    return h;
  }
};

std::string stage_error(int order, const char* stage, const std::exception& e) {
  std::ostringstream os;
  os << "order " << order << ", " << stage << ": " << e.what();
  return os.str();
}

struct OrderState {
  std::unique_ptr<AcousticStepper> E;
  std::unique_ptr<PrandtlStepper> P;
  Window B, BII;
  std::vector<double> F_old;
  std::vector<double> g_old, g_new;  // E2 − E3 wall data per x2 node
  StateField src_old, src_new;       // Λ E^{i−2} at the ends of the macro step
  bool has_source = false;
};

}  // namespace

ExpansionSet build_expansion(const ExpansionConfig& cfg, const StateField& U0) {
  if (cfg.N < 0) throw NsfError(ErrorKind::ConfigError, "order N must be nonnegative");
  if (cfg.time.macro_steps <= 0) throw NsfError(ErrorKind::ConfigError, "empty time grid");
  if (!cfg.bg.steady)
    throw NsfError(ErrorKind::ConfigError, "the expansion solver needs a steady background");

  ExpansionSet set;
  set.N = cfg.N;
  set.grid = make_grid(cfg.grid);
  set.zg = make_zgrid(cfg.Zmax, cfg.dz);
  set.time = cfg.time;
  const Grid& grid = set.grid;
  if (U0.N1 != grid.N1 || U0.N2 != grid.N2)
    throw NsfError(ErrorKind::GridMismatch, "initial data does not match the grid");

  auto coeffs = std::make_shared<CoefficientField>(sample_coefficients(cfg.bg, cfg.scaling, grid, 0.0));
  set.coeffs = coeffs;
  const BoundaryOperatorCoeffs boc = boundary_operator_coeffs(cfg.bg, cfg.scaling, grid.x2, 0.0);
  const LayerGeometry geo{set.zg, grid.N2, grid.spec.X2len};
  const int M = set.zg.nodes(), n2 = grid.N2;
  const std::size_t cs = static_cast<std::size_t>(n2) * M;
  const double Dt = cfg.time.macro_dt();
  const double dt = cfg.time.dt();
  const int sub = cfg.time.substeps;

  {
    AcousticStepper probe(grid, coeffs, U0, cfg.acoustic);
    probe.check_dt(dt);
  }

  std::vector<OrderState> st(cfg.N + 1);
  set.build_log.resize(cfg.N + 1);
  set.inner.resize(cfg.N + 1);
  set.layer.assign(cfg.N + 1, LayerProfile(set.zg, n2, grid.spec.X2len, 4));
  for (int i = 0; i <= cfg.N; ++i) {
    OrderState& s = st[i];
    set.build_log[i].order = i;
    s.E = std::make_unique<AcousticStepper>(grid, coeffs, i == 0 ? U0 : StateField(grid), cfg.acoustic);
    PrandtlCoefficients pc = prandtl_coefficients(boc, i, cfg.delta);
    pc.validate();
    s.P = std::make_unique<PrandtlStepper>(set.zg, grid.spec.X2len, pc, Dt);
    s.B.push(std::vector<double>(4 * cs, 0.0));
    s.BII.push(std::vector<double>(4 * cs, 0.0));
    s.F_old.assign(2 * cs, 0.0);
    s.g_old.assign(n2, 0.0);
    s.g_new.assign(n2, 0.0);
    s.has_source = i >= 2;
    if (s.has_source) s.src_old = StateField(grid), s.src_new = StateField(grid);
  }

  // Compatibility at t = 0: E⁰ must meet the wall data of the zero layer.
  if (!cfg.waive_compatibility) {
    double mis = 0.0;
    for (int k = 0; k < n2; ++k)
      mis = std::max({mis, std::abs(U0.at(0, 0, k)),
                      std::abs(U0.at(1, 0, k) - std::sqrt(2.0) * coeffs->alpha[k] * U0.at(2, 0, k)),
                      std::abs(U0.at(2, 0, k) - U0.at(3, 0, k))});
    if (mis > 1e-10) {
      std::ostringstream os;
      os << "initial data has a nonzero wall trace (" << mis << ")";
      throw NsfError(ErrorKind::CompatibilityViolation, os.str());
    }
  }

  auto store = [&](double t) {
    set.times.push_back(t);
    for (int i = 0; i <= cfg.N; ++i) {
      set.inner[i].push_back(st[i].E->state());
      set.layer[i].push_level(t, st[i].B.levels.front());
    }
  };
  store(0.0);

  for (int n = 0; n < cfg.time.macro_steps; ++n) {
    const double t0 = n * Dt, t1 = (n + 1) * Dt;
    std::vector<LayerHistory> priors;
    for (int i = 0; i <= cfg.N; ++i) {
      OrderState& s = st[i];
      OrderLog& log = set.build_log[i];

      // (a) normal components of the layer from the ODE in z1
      std::vector<double> BII(4 * cs, 0.0);
      if (i >= 1) {
        try {
          LayerRHS H = layer_ode_rhs(i, priors, boc, geo);
          log.ode_tail = std::max({log.ode_tail, tail_max(H.H2, geo, 1), tail_max(H.H3, geo, 1)});
          BII = solve_layer_ode(i, H, boc, geo, cfg.tail_tol);
        } catch (const NsfError& e) {
          throw NsfError(e.kind(), stage_error(i, "layer ODE", e));
        }
      }
      s.BII.push(BII);
      for (int k = 0; k < n2; ++k)
        s.g_new[k] = -(BII[2 * cs + static_cast<std::size_t>(k) * M] - BII[3 * cs + static_cast<std::size_t>(k) * M]);

      // (b) inner term over the fine substeps
      if (s.has_source) s.src_new = apply_lambda(*coeffs, grid, st[i - 2].E->state());
      BoundaryData bd;
      if (i >= 1) {
        const std::vector<double>&go = s.g_old, &gn = s.g_new;
        bd.g = [&go, &gn, t0, Dt](int k, double t) {
          double th = (t - t0) / Dt;
          return (1.0 - th) * go[k] + th * gn[k];
        };
        bd.gdot = [&go, &gn, Dt](int k, double) { return (gn[k] - go[k]) / Dt; };
      }
      SourceFn src;
      if (s.has_source) {
        const StateField &so = s.src_old, &sn = s.src_new;
        src = [&so, &sn, t0, Dt](double t, StateField& out) {
          const double th = (t - t0) / Dt;
          for (int c = 0; c < 4; ++c)
            for (std::size_t p = 0; p < out.size(); ++p)
              out.c[c][p] += (1.0 - th) * so.c[c][p] + th * sn.c[c][p];
        };
      }
      try {
        for (int m = 0; m < sub; ++m) s.E->step(dt, bd, src);
      } catch (const NsfError& e) {
        throw NsfError(e.kind(), stage_error(i, "inner solve", e));
      }
      const std::vector<Vec4> tr = s.E->trace();

      // (c) tangential components of the layer
      std::vector<double> F_new;
      try {
        F_new = assemble_F(i, priors, s.BII.history(Dt), boc, geo);
      } catch (const NsfError& e) {
        throw NsfError(e.kind(), stage_error(i, "Prandtl source", e));
      }
      std::vector<Eigen::Vector2d> wall(n2);
      for (int k = 0; k < n2; ++k) {
        const double b2 = BII[2 * cs + static_cast<std::size_t>(k) * M];
        wall[k] = Eigen::Vector2d(-tr[k][0], -tr[k][1] + std::sqrt(2.0) * boc.lines[k].alpha * (tr[k][2] + b2));
      }
      s.P->step(s.F_old, F_new, wall);
      s.F_old = std::move(F_new);

      std::vector<double> B = BII;
      std::copy(s.P->state().begin(), s.P->state().end(), B.begin());
      for (int k = 0; k < n2; ++k) {
        const std::size_t o = static_cast<std::size_t>(k) * M;
        const double b2 = B[2 * cs + o], b3 = B[3 * cs + o];
        log.coupling_g = std::max(log.coupling_g, std::abs(tr[k][2] - tr[k][3] + b2 - b3));
        log.coupling_B0 = std::max(log.coupling_B0, std::abs(B[o] + tr[k][0]));
        log.coupling_B1 = std::max(
            log.coupling_B1, std::abs(B[cs + o] + tr[k][1] - std::sqrt(2.0) * boc.lines[k].alpha * (tr[k][2] + b2)));
      }
      for (std::size_t p = 2 * cs; p < 4 * cs; ++p) log.B_II_max = std::max(log.B_II_max, std::abs(B[p]));
      for (double v : B) log.max_B = std::max(log.max_B, std::abs(v));
      log.max_E = std::max(log.max_E, s.E->state().max_abs());
      s.B.push(std::move(B));
      priors.push_back(s.B.history(Dt));

      std::swap(s.g_old, s.g_new);
      if (s.has_source) std::swap(s.src_old, s.src_new);
    }
    if ((n + 1) % cfg.time.output_every == 0) store(t1);
  }

  for (int i = 0; i <= cfg.N; ++i)
    for (double v : set.layer[i].values.front())
      set.build_log[i].initial_layer = std::max(set.build_log[i].initial_layer, std::abs(v));
  if (set.build_log[0].B_II_max != 0.0)
    throw NsfError(ErrorKind::BoundaryInconsistency, "order-0 layer has nonzero normal components");
  return set;
}

double interpolate_profile(const LayerProfile& p, int level, int comp, int k, double z) {
  const ZGrid& zg = p.zg;
  if (z < 0.0 || z > zg.Zmax) return 0.0;
  const double* f = p.values[level].data() + p.offset(comp, k);
  const int M = zg.nodes();
  double s = z / zg.dz;
  int j = static_cast<int>(std::floor(s));
  if (j >= M - 1) return f[M - 1];
  // four-point stencil j0..j0+3 containing [j, j+1]
  int j0 = std::clamp(j - 1, 0, M - 4);
  double x = s - j0;
  double w0 = -(x - 1) * (x - 2) * (x - 3) / 6.0;
  double w1 = x * (x - 2) * (x - 3) / 2.0;
  double w2 = -x * (x - 1) * (x - 3) / 2.0;
  double w3 = x * (x - 1) * (x - 2) / 6.0;
  return w0 * f[j0] + w1 * f[j0 + 1] + w2 * f[j0 + 2] + w3 * f[j0 + 3];
}

ApproximateSolution compose(const ExpansionSet& set, double epsilon, int j, int order) {
  if (!(epsilon > 0.0)) throw NsfError(ErrorKind::ConfigError, "epsilon must be positive");
  if (j < 0 || j >= static_cast<int>(set.times.size()))
    throw NsfError(ErrorKind::ConfigError, "output index out of range");
  const int N = order < 0 ? set.N : std::min(order, set.N);
  const Grid& g = set.grid;
  ApproximateSolution a;
  a.epsilon = epsilon;
  a.time = set.times[j];
  a.W = StateField(g);
  double w = 1.0;
  for (int i = 0; i <= N; ++i, w *= epsilon) {
    a.W.axpy(w, set.inner[i][j]);
    const LayerProfile& L = set.layer[i];
    for (int ii = 0; ii < g.N1; ++ii) {
      const double z = g.x1[ii] / epsilon;
      if (z > set.zg.Zmax) break;
      for (int k = 0; k < g.N2; ++k)
        for (int c = 0; c < 4; ++c) a.W.at(c, ii, k) += w * interpolate_profile(L, j, c, k, z);
    }
  }
  a.V_approx = to_physical(*set.coeffs, a.W);
  a.K = a.V_approx;
  a.K.axpy(-1.0, to_physical(*set.coeffs, set.inner[0][j]));
  return a;
}

CompatibilityReport compatibility_check(const BackgroundState& bg, const ViscosityScaling& scaling,
                                        const Grid& grid, const StateField& V0) {
  CompatibilityReport r;
  StateField d1(grid), d2(grid);
  for (int c = 0; c < 4; ++c) {
    ops::d1(grid, V0.c[c].data(), d1.c[c].data());
    ops::d2(grid, V0.c[c].data(), d2.c[c].data());
  }
  for (int k = 0; k < grid.N2; ++k) {
    for (int c = 1; c < 4; ++c) r.order0 = std::max(r.order0, std::abs(V0.at(c, 0, k)));
    BackgroundValues bv = eval_background(bg, 0.0, grid.x2[k], 0.0);
    CoefficientMatrices m = assemble_matrices(bv, boundary_alpha(bg, grid.x2[k], 0.0), scaling);
    Vec4 a(d1.at(0, 0, k), d1.at(1, 0, k), d1.at(2, 0, k), d1.at(3, 0, k));
    Vec4 b(d2.at(0, 0, k), d2.at(1, 0, k), d2.at(2, 0, k), d2.at(3, 0, k));
    Vec4 vt = -m.A0.inverse() * (m.A1 * a + m.A2 * b);
    for (int c = 1; c < 4; ++c) r.order1 = std::max(r.order1, std::abs(vt[c]));
  }
  return r;
}

}  // namespace nsf
