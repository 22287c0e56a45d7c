#include "nsf/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "nsf/acoustic.hpp"
#include "nsf/errors.hpp"
#include "nsf/io.hpp"
#include "nsf/layers.hpp"

namespace nsf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ViscosityScaling scaling_at(const RunConfig& cfg, double eps) {
  ViscosityScaling s = cfg.scaling;
  s.epsilon = eps;
  return s;
}

int worker_count(const RunConfig& cfg, std::size_t jobs) {
  int n = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  return std::clamp(n, 1, static_cast<int>(std::max<std::size_t>(jobs, 1)));
}

/// Runs job(i) for i < n on up to `workers` threads; the first exception is rethrown.
template <class Job>
void parallel_for(std::size_t n, int workers, Job job) {
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

const char* kComponents[4] = {"rho", "v1", "v2", "theta"};

}  // namespace

TimeGrid study_time_grid(const RunConfig& cfg, const Grid& grid, double max_speed) {
  return make_time_grid(cfg.T, acoustic_dt_max(grid, max_speed, cfg.cfl), cfg.macro_dt, cfg.outputs);
}

ExpansionConfig expansion_config(const RunConfig& cfg, int N, const TimeGrid& time) {
  ExpansionConfig e;
  e.bg = make_background(cfg);
  e.scaling = cfg.scaling;
  e.grid = cfg.grid;
  e.Zmax = cfg.Zmax;
  e.dz = cfg.dz;
  e.time = time;
  e.N = N;
  e.acoustic.cfl_max = cfg.cfl;
  e.acoustic.dissipation = cfg.dissipation;
  e.tail_tol = cfg.tail_tol;
  e.delta = cfg.delta;
  return e;
}

StudyResult run_study(const RunConfig& cfg, std::ostream* log) {
  cfg.validate();
  StudyResult out;
  out.cfg = cfg;
  auto say = [&](const std::string& s) {
    if (log) *log << s << std::endl;
  };

  const BackgroundState bg = make_background(cfg);
  out.grid = make_grid(cfg.grid);
  const Grid& grid = out.grid;
  const CoefficientField cf = sample_coefficients(bg, cfg.scaling, grid);
  PhysicalCoefficients pc = sample_physical(bg, cfg.scaling, grid);
  out.time = study_time_grid(cfg, grid, std::max(cf.max_speed, pc.max_speed));
  const StateField V0 = pulse_field(grid, cfg.pulse);

  CompatibilityReport compat = compatibility_check(bg, cfg.scaling, grid, V0);
  if (compat.order0 > cfg.bc_tol || compat.order1 > cfg.bc_tol)
    throw NsfError(ErrorKind::CompatibilityViolation,
                   "initial data: order-0 defect " + io::fmt(compat.order0) + ", order-1 defect " +
                       io::fmt(compat.order1));

  const int Nmax = cfg.max_order();
  auto t0 = Clock::now();
  say("building expansion to order " + std::to_string(Nmax) + " (" + std::to_string(out.time.fine_steps()) +
      " fine steps)");
  ExpansionSet set;
  try {
    set = build_expansion(expansion_config(cfg, Nmax, out.time), to_characteristic(cf, V0));
  } catch (const NsfError& e) {
    throw NsfError(e.kind(), std::string("build: ") + e.what());
  }
  out.timings["build"] = seconds_since(t0);
  out.build_log = set.build_log;
  out.max_coupling_residual = set.max_coupling_residual();

  const std::size_t ne = cfg.epsilons.size();
  std::vector<NsfSolution> refs(ne);
  std::vector<double> ref_time(ne, 0.0);
  std::mutex log_mu;
  t0 = Clock::now();
  parallel_for(ne, worker_count(cfg, ne), [&](std::size_t i) {
    const double eps = cfg.epsilons[i];
    NsfProblem pb;
    pb.bg = bg;
    pb.scaling = scaling_at(cfg, eps);
    pb.init = V0;
    pb.grid = cfg.grid;
    pb.time = out.time;
    pb.hyperbolic.cfl_max = cfg.cfl;
    pb.hyperbolic.dissipation = cfg.dissipation;
    auto s0 = Clock::now();
    try {
      refs[i] = solve_nsf(pb);
    } catch (const NsfError& e) {
      throw NsfError(e.kind(), "reference eps=" + io::fmt(eps) + ": " + e.what());
    }
    ref_time[i] = seconds_since(s0);
    std::lock_guard<std::mutex> lock(log_mu);
    char msg[96];
    std::snprintf(msg, sizeof msg, "reference eps=%g done in %.1f s", eps, ref_time[i]);
    say(msg);
  });
  out.timings["reference"] = seconds_since(t0);
  for (std::size_t i = 0; i < ne; ++i) out.reference_bc_residual.push_back(refs[i].max_bc_residual);

  t0 = Clock::now();
  for (int N : cfg.orders) {
    OrderReport r;
    r.N = N;
    r.eps = cfg.epsilons;
    for (int c = 0; c < 4; ++c) r.theory[c] = c == 0 ? N - 1.0 : N - 0.75;
    for (std::size_t i = 0; i < ne; ++i) {
      const double eps = cfg.epsilons[i];
      std::vector<ApproximateSolution> approx;
      for (std::size_t j = 0; j < set.times.size(); ++j)
        approx.push_back(compose(set, eps, static_cast<int>(j), N));
      std::vector<StateField> w = error_field(refs[i], approx);
      approx.clear();
      for (int c = 0; c < 4; ++c) r.err[c].push_back(sup_error(w, c, grid));
      r.traces.push_back(energy_trace(w, set.times, grid, eps));
      r.energy_peak.push_back(r.traces.back().peak());
    }
    for (int c = 0; c < 4; ++c) {
      r.fit[c] = fit_rate(r.eps, r.err[c]);
      bool mono = true;
      for (std::size_t i = 1; i < ne; ++i)
        if (!(r.err[c][i] < r.err[c][i - 1])) mono = false;
      r.monotone[c] = mono;
    }
    r.energy_fit = energy_rate_check(r.traces, r.eps);
    std::string line = "N=" + std::to_string(N) + " slopes:";
    for (int c = 0; c < 4; ++c) line += std::string(" ") + kComponents[c] + "=" + io::fmt(r.fit[c].slope).substr(0, 6);
    line += " energy=" + io::fmt(r.energy_fit.slope).substr(0, 6);
    say(line);
    out.orders.push_back(std::move(r));
  }
  out.timings["compare"] = seconds_since(t0);
  return out;
}

std::map<std::string, std::string> write_study(const StudyResult& st, const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  nlohmann::ordered_json summary;
  summary["epsilons"] = st.cfg.epsilons;
  summary["grid"] = {{"n1", st.grid.N1 - 1}, {"n2", st.grid.N2}, {"X1max", st.grid.spec.X1max},
                     {"X2len", st.grid.spec.X2len}, {"min_h1", st.grid.min_h1()}};
  summary["time"] = {{"T", st.time.T}, {"fine_dt", st.time.dt()}, {"macro_steps", st.time.macro_steps},
                     {"substeps", st.time.substeps}};
  summary["max_coupling_residual"] = st.max_coupling_residual;
  summary["reference_bc_residual"] = st.reference_bc_residual;
  auto& orders = summary["orders"] = nlohmann::ordered_json::array();

  for (const OrderReport& r : st.orders) {
    const std::string tag = "N" + std::to_string(r.N);
    std::vector<std::vector<double>> rows, erows;
    for (std::size_t i = 0; i < r.eps.size(); ++i) {
      rows.push_back({r.eps[i], r.err[0][i], r.err[1][i], r.err[2][i], r.err[3][i]});
      const EnergyTrace& t = r.traces[i];
      double l2 = 0.0, gr = 0.0;
      for (std::size_t j = 0; j < t.times.size(); ++j) l2 = std::max(l2, t.l2_norm_sq[j]), gr = std::max(gr, t.grad_integral[j]);
      erows.push_back({r.eps[i], r.energy_peak[i], l2, gr});
    }
    const std::string conv = "converge_" + tag + ".csv", en = "energy_" + tag + ".csv";
    files[conv] = io::write_file(dir / conv, io::csv({"epsilon", "err_rho", "err_v1", "err_v2", "err_theta"}, rows));
    files[en] = io::write_file(dir / en, io::csv({"epsilon", "energy_sup", "l2_sup", "grad_integral"}, erows));

    std::vector<io::Series> series;
    for (int c = 0; c < 4; ++c) series.push_back({kComponents[c], r.eps, r.err[c], false});
    for (double rate : {r.theory[0], r.theory[1]}) {
      // guide line through the smallest-ε point of the component with that theory rate
      const int c = rate == r.theory[0] ? 0 : 1;
      io::Series g{"eps^" + io::fmt(rate), r.eps, {}, true};
      const double anchor = r.err[c].back() / std::pow(r.eps.back(), rate);
      for (double e : r.eps) g.y.push_back(anchor * std::pow(e, rate));
      series.push_back(g);
    }
    const std::string svg = "converge_" + tag + ".svg";
    files[svg] = io::write_file(dir / svg, io::svg_loglog("sup error, N = " + std::to_string(r.N), "epsilon",
                                                          "sup |V - V_approx|", series));

    nlohmann::ordered_json o;
    o["N"] = r.N;
    for (int c = 0; c < 4; ++c)
      o["components"][kComponents[c]] = {{"errors", r.err[c]},
                                         {"slope", r.fit[c].slope},
                                         {"intercept", r.fit[c].intercept},
                                         {"theory", r.theory[c]},
                                         {"gate", r.theory[c] - 0.35},
                                         {"monotone", r.monotone[c]}};
    o["energy"] = {{"sup", r.energy_peak}, {"slope", r.energy_fit.slope}, {"theory", 2.0 * r.N + 1.0}};
    orders.push_back(o);
  }
  files["summary.json"] = io::write_file(dir / "summary.json", summary.dump(2) + "\n");

  nlohmann::ordered_json man;
  const std::string canon = canonical_config(st.cfg);
  man["tool"] = "nsf-layers";
  man["version"] = kToolVersion;
  man["config_hash"] = io::fnv1a_hex(canon);
  man["grid_hash"] = io::grid_hash(st.grid);
  man["timings_s"] = st.timings;
  auto& res = man["residuals"] = nlohmann::ordered_json::array();
  for (const OrderLog& l : st.build_log)
    res.push_back({{"order", l.order},
                   {"coupling_g", l.coupling_g},
                   {"coupling_B0", l.coupling_B0},
                   {"coupling_B1", l.coupling_B1},
                   {"B_II_max", l.B_II_max},
                   {"initial_layer", l.initial_layer},
                   {"ode_tail", l.ode_tail}});
  man["files"] = files;
  io::write_file(dir / "manifest.json", man.dump(2) + "\n");
  return files;
}

std::vector<CheckResult> run_verify(const RunConfig& cfg, std::ostream* log) {
  std::vector<CheckResult> out;
  auto add = [&](CheckResult r) {
    if (log) *log << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << std::endl;
    out.push_back(std::move(r));
  };
  // a check that throws is reported as a failure and the suite carries on
  auto guarded = [&](const std::string& name, auto fn) {
    try {
      add(fn());
    } catch (const std::exception& e) {
      add(CheckResult{name, false, 0.0, 0.0, e.what()});
    }
  };
  auto batch = [&](const std::string& name, auto fn) {
    try {
      for (auto& r : fn()) add(r);
    } catch (const std::exception& e) {
      add(CheckResult{name, false, 0.0, 0.0, e.what()});
    }
  };
  guarded("eigenframe", [&] { return check_eigenframe(cfg.seed); });
  guarded("isentropic eigenvalues", [] { return check_isentropic_eigenvalues(); });
  for (double a : {0.0, 0.5, 1.0, 2.0}) {
    const std::string at = " (alpha=" + io::fmt(a) + ")";
    guarded("Prandtl manufactured order" + at, [&] { return check_prandtl_mms(a, cfg.flip_tau0); });
    guarded("layer ODE closed form" + at, [&] { return check_layer_ode_closed_form(a); });
    guarded("layer ODE residual order" + at, [&] { return check_layer_ode_residual(a); });
  }
  guarded("Prandtl fine-grid oracle", [] { return check_prandtl_oracle(1.0); });
  guarded("acoustic manufactured spatial order", [] { return check_acoustic_mms(); });
  guarded("reference manufactured spatial order", [] { return check_reference_mms(); });
  guarded("acoustic discrete energy", [] { return check_acoustic_energy(); });
  guarded("reference discrete energy", [] { return check_reference_energy(0.1); });
  guarded("interpolation inequality", [&] { return check_interpolation(cfg.seed); });
  guarded("interpolation inequality, separable", [] { return check_interpolation_separable(); });
  batch("energy trace battery", [] { return check_energy_trace_battery(); });
  batch("rate fit battery", [&] { return check_rate_fit_battery(cfg.seed); });
  return out;
}

std::string matrices_json(const RunConfig& cfg, double x2, double t) {
  const BackgroundState bg = make_background(cfg);
  auto mat = [](const Mat4& m) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) a.push_back({m(i, 0), m(i, 1), m(i, 2), m(i, 3)});
    return a;
  };
  const double alpha = boundary_alpha(bg, x2, t);
  BoundaryFrame fr = eigen_frame(alpha);
  BackgroundValues bv = eval_background(bg, 0.0, x2, t);
  CoefficientMatrices m = assemble_matrices(bv, alpha, cfg.scaling);
  TransformedCoefficients tc = transformed_coeffs_at(bg, cfg.scaling, 0.0, x2, t);
  nlohmann::ordered_json j;
  j["x2"] = x2;
  j["t"] = t;
  j["alpha"] = alpha;
  j["eigenvalues"] = fr.eigenvalues;
  j["Q"] = mat(fr.Q);
  j["A0"] = mat(m.A0);
  j["A1"] = mat(m.A1);
  j["A2"] = mat(m.A2);
  j["A1m"] = mat(m.A1m);
  j["cal_A0"] = mat(tc.cal_A0);
  j["cal_A1"] = mat(tc.cal_A1);
  j["cal_A2"] = mat(tc.cal_A2);
  j["D11"] = mat(tc.D11);
  j["D12"] = mat(tc.D12);
  j["D22"] = mat(tc.D22);
  j["eta"] = tc.eta;
  j["tau"] = tc.tau;
  auto& pl = j["prandtl"];
  BoundaryOperatorCoeffs boc = boundary_operator_coeffs(bg, cfg.scaling, {x2}, t);
  for (int order : {0, 1}) {
    const PrandtlLineCoeffs lc = prandtl_coefficients(boc, order).lines.at(0);
    pl.push_back({{"order", order},
                  {"a1", lc.a1},
                  {"a2", lc.a2},
                  {"d1", lc.d1},
                  {"d2", lc.d2},
                  {"b", {{lc.b(0, 0), lc.b(0, 1)}, {lc.b(1, 0), lc.b(1, 1)}}},
                  {"c", {{lc.c(0, 0), lc.c(0, 1)}, {lc.c(1, 0), lc.c(1, 1)}}}});
  }
  return j.dump(2) + "\n";
}

}  // namespace nsf
