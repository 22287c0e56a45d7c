#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "nsf/acoustic.hpp"
#include "nsf/composer.hpp"
#include "nsf/config.hpp"
#include "nsf/errors.hpp"
#include "nsf/io.hpp"
#include "nsf/reference.hpp"
#include "nsf/run.hpp"

namespace {

struct Common {
  std::string config;
  std::string out;
  std::vector<int> orders;
  std::vector<double> epsilons;
  int threads = -1;
};

nsf::RunConfig resolve(const Common& o) {
  nsf::RunConfig cfg = o.config.empty() ? nsf::RunConfig{} : nsf::load_config(o.config);
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (!o.orders.empty()) cfg.orders = o.orders;
  if (!o.epsilons.empty()) cfg.epsilons = o.epsilons;
  if (o.threads >= 0) cfg.threads = o.threads;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* app, Common& o, bool with_order, bool with_eps) {
  app->add_option("--config", o.config, "key = value or JSON configuration file")->check(CLI::ExistingFile);
  app->add_option("--out", o.out, "output directory (NSF_LAYERS_OUT takes precedence)");
  app->add_option("--threads", o.threads, "worker threads for the epsilon sweep (0: all cores)");
  if (with_order) app->add_option("--order", o.orders, "truncation order(s) N");
  if (with_eps) app->add_option("--epsilon", o.epsilons, "epsilon value(s)");
}

int cmd_build(const nsf::RunConfig& cfg) {
  const nsf::BackgroundState bg = nsf::make_background(cfg);
  const nsf::Grid grid = nsf::make_grid(cfg.grid);
  const nsf::CoefficientField cf = nsf::sample_coefficients(bg, cfg.scaling, grid);
  const nsf::TimeGrid tg = nsf::study_time_grid(cfg, grid, cf.max_speed);
  const nsf::StateField V0 = nsf::pulse_field(grid, cfg.pulse);
  nsf::ExpansionSet set =
      nsf::build_expansion(nsf::expansion_config(cfg, cfg.max_order(), tg), nsf::to_characteristic(cf, V0));
  const auto dir = nsf::io::output_dir(cfg.out_dir);
  nlohmann::ordered_json j;
  j["N"] = set.N;
  j["config_hash"] = nsf::io::fnv1a_hex(nsf::canonical_config(cfg));
  j["fine_dt"] = tg.dt();
  j["max_coupling_residual"] = set.max_coupling_residual();
  for (const auto& l : set.build_log)
    j["orders"].push_back({{"order", l.order},
                           {"coupling_g", l.coupling_g},
                           {"coupling_B0", l.coupling_B0},
                           {"coupling_B1", l.coupling_B1},
                           {"B_II_max", l.B_II_max},
                           {"initial_layer", l.initial_layer},
                           {"ode_tail", l.ode_tail},
                           {"max_E", l.max_E},
                           {"max_B", l.max_B}});
  const int last = static_cast<int>(set.times.size()) - 1;
  for (int i = 0; i <= set.N; ++i) {
    const std::string tag = std::to_string(i);
    j["files"]["inner_" + tag + ".nsfb"] =
        nsf::io::write_file(dir / ("inner_" + tag + ".nsfb"), nsf::io::snapshot_bytes(set.inner[i][last], set.times[last]));
    j["files"]["layer_" + tag + ".nsfb"] =
        nsf::io::write_file(dir / ("layer_" + tag + ".nsfb"), nsf::io::layer_bytes(set.layer[i], last));
  }
  nsf::io::write_file(dir / "build.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_reference(const nsf::RunConfig& cfg) {
  const nsf::BackgroundState bg = nsf::make_background(cfg);
  const nsf::Grid grid = nsf::make_grid(cfg.grid);
  const auto dir = nsf::io::output_dir(cfg.out_dir);
  for (double eps : cfg.epsilons) {
    nsf::NsfProblem pb;
    pb.bg = bg;
    pb.scaling = cfg.scaling;
    pb.scaling.epsilon = eps;
    pb.init = nsf::pulse_field(grid, cfg.pulse);
    pb.grid = cfg.grid;
    pb.time = nsf::study_time_grid(cfg, grid, nsf::sample_physical(bg, pb.scaling, grid).max_speed);
    pb.hyperbolic.cfl_max = cfg.cfl;
    pb.hyperbolic.dissipation = cfg.dissipation;
    nsf::NsfSolution sol = nsf::solve_nsf(pb);
    const std::string tag = "eps" + nsf::io::fmt(eps);
    std::vector<std::vector<double>> rows;
    for (std::size_t n = 0; n < sol.energy.size(); ++n) rows.push_back({sol.energy_times[n], sol.energy[n]});
    nsf::io::write_file(dir / ("reference_energy_" + tag + ".csv"), nsf::io::csv({"t", "energy"}, rows));
    nsf::io::write_file(dir / ("reference_" + tag + ".nsfb"),
                        nsf::io::snapshot_bytes(sol.snapshots.back(), sol.times.back()));
    std::cout << "eps=" << nsf::io::fmt(eps) << " steps=" << sol.energy.size() - 1
              << " bc_residual=" << nsf::io::fmt(sol.max_bc_residual) << "\n";
  }
  return 0;
}

int cmd_converge(const nsf::RunConfig& cfg) {
  nsf::StudyResult st = nsf::run_study(cfg, &std::cerr);
  const auto dir = nsf::io::output_dir(cfg.out_dir);
  auto files = nsf::write_study(st, dir);
  for (const auto& [name, hash] : files) std::cout << (dir / name).string() << "  " << hash << "\n";
  return 0;
}

int cmd_verify(const nsf::RunConfig& cfg) {
  auto results = nsf::run_verify(cfg, &std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary-layer expansions of the linearized compressible NSF system"};
  app.require_subcommand(1);
  Common common;

  double x2 = 0.0, t = 0.0;
  auto* mat = app.add_subcommand("matrices", "print wall coefficient matrices and Prandtl coefficients");
  add_common(mat, common, false, false);
  mat->add_option("--x2", x2, "tangential position");
  mat->add_option("--t", t, "time");
  double alpha = -1.0;
  std::string eos;
  mat->add_option("--alpha", alpha, "constant state with this wall alpha (ideal gas: rho = alpha, theta = 1)")
      ->check(CLI::NonNegativeNumber);
  mat->add_option("--eos", eos, "equation of state for --alpha")->check(CLI::IsMember({"ideal", "isentropic"}));

  auto* build = app.add_subcommand("build", "march the inner and layer terms up to order N");
  add_common(build, common, true, false);
  auto* ref = app.add_subcommand("reference", "solve the linearized NSF problem for each epsilon");
  add_common(ref, common, false, true);
  auto* conv = app.add_subcommand("converge", "compare composite expansions with reference solutions");
  add_common(conv, common, true, true);
  bool flip = false;
  auto* ver = app.add_subcommand("verify", "run the property checks");
  add_common(ver, common, false, false);
  ver->add_flag("--flip-tau0", flip, "negative control: negate tau0 in the Prandtl checks");

  CLI11_PARSE(app, argc, argv);
  try {
    nsf::RunConfig cfg = resolve(common);
    if (flip) cfg.flip_tau0 = true;
    if (*mat) {
      if (alpha >= 0.0 || !eos.empty()) {
        cfg.background = "constant";
        cfg.eos = eos == "isentropic" ? "isentropic" : "ideal_gas";
        cfg.bg_params = {{"rho0", cfg.eos == "isentropic" || alpha <= 0.0 ? 1.0 : alpha}, {"theta0", 1.0}};
        if (cfg.eos == "isentropic" && alpha > 0.0)
          throw nsf::NsfError(nsf::ErrorKind::ConfigError, "the isentropic gas has alpha = 0");
        if (cfg.eos == "ideal_gas" && alpha == 0.0)
          throw nsf::NsfError(nsf::ErrorKind::ConfigError, "alpha = 0 needs --eos isentropic");
      }
      std::cout << nsf::matrices_json(cfg, x2, t);
      return 0;
    }
    if (*build) return cmd_build(cfg);
    if (*ref) return cmd_reference(cfg);
    if (*conv) return cmd_converge(cfg);
    if (*ver) return cmd_verify(cfg);
  } catch (const nsf::NsfError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
