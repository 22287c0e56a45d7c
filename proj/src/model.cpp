#include "nsf/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsf/errors.hpp"

namespace nsf {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveState: return "NonPositiveState";
    case ErrorKind::CflViolation: return "CflViolation";
    case ErrorKind::BoundaryInconsistency: return "BoundaryInconsistency";
    case ErrorKind::NonPositiveCoefficient: return "NonPositiveCoefficient";
    case ErrorKind::SingularBlockSystem: return "SingularBlockSystem";
    case ErrorKind::CompatibilityViolation: return "CompatibilityViolation";
    case ErrorKind::InsufficientHistory: return "InsufficientHistory";
    case ErrorKind::MissingPriorLayer: return "MissingPriorLayer";
    case ErrorKind::NonDecayingRHS: return "NonDecayingRHS";
    case ErrorKind::GridTooCoarseForLayer: return "GridTooCoarseForLayer";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::NonPositiveError: return "NonPositiveError";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "UnknownError";
}

EquationOfState ideal_gas(double cv0, double cv1) {
  if (cv0 <= 0.0 || cv1 < 0.0)
    throw NsfError(ErrorKind::ConfigError, "ideal gas needs cv0 > 0 and cv1 >= 0");
  EquationOfState eos;
  eos.name = "ideal";
  eos.p_e = [](const Jet&) { return Jet(0.0); };
  eos.dp_e = [](const Jet&) { return Jet(0.0); };
  eos.p_theta = [](const Jet& rho) { return rho; };
  eos.dp_theta = [](const Jet&) { return Jet(1.0); };
  eos.c_v = [cv0, cv1](const Jet& th) { return cv0 + cv1 * th; };
  eos.Q_energy = [cv0, cv1](const Jet& th) { return cv0 * th + 0.5 * cv1 * th * th; };
  eos.c_v_min = cv0;
  return eos;
}

EquationOfState isentropic_gas(double gamma, double cv0) {
  if (gamma < 1.0 || cv0 <= 0.0)
    throw NsfError(ErrorKind::ConfigError, "isentropic gas needs gamma >= 1 and cv0 > 0");
  EquationOfState eos;
  eos.name = "isentropic";
  eos.p_e = [gamma](const Jet& rho) { return pow(rho, gamma) / gamma; };
  eos.dp_e = [gamma](const Jet& rho) { return pow(rho, gamma - 1.0); };
  eos.p_theta = [](const Jet&) { return Jet(0.0); };
  eos.dp_theta = [](const Jet&) { return Jet(0.0); };
  eos.c_v = [cv0](const Jet&) { return Jet(cv0); };
  eos.Q_energy = [cv0](const Jet& th) { return cv0 * th; };
  eos.c_v_min = cv0;
  return eos;
}

void ViscosityScaling::validate() const {
  if (!(mu_bar > 0.0) || !(kappa_bar > 0.0) || !(xi_bar() >= 0.0) || !(epsilon > 0.0))
    throw NsfError(ErrorKind::ConfigError,
                   "viscosity scaling needs mu_bar > 0, kappa_bar > 0, xi_bar >= 0, epsilon > 0");
}

BackgroundState constant_background(const EquationOfState& eos, double rho, double theta) {
  if (!(rho > 0.0) || !(theta > 0.0))
    throw NsfError(ErrorKind::NonPositiveState, "constant background needs rho, theta > 0");
  BackgroundState bg;
  bg.kind = BackgroundState::Kind::Constant;
  bg.name = "constant";
  bg.eos = eos;
  bg.map = [rho, theta](const Jet&, const Jet&, const Jet&) {
    return BackgroundSample{Jet(rho), Jet(0.0), Jet(0.0), Jet(theta)};
  };
  return bg;
}

namespace {

double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

}  // namespace

BackgroundState make_background(const std::string& name, const std::map<std::string, double>& params,
                                const EquationOfState& eos) {
  double rho0 = param(params, "rho0", 1.0);
  double theta0 = param(params, "theta0", 1.0);
  if (name == "constant") return constant_background(eos, rho0, theta0);

  BackgroundState bg;
  bg.kind = BackgroundState::Kind::Analytic;
  bg.name = name;
  bg.eos = eos;
  if (name == "density_wave") {
    double amp = param(params, "amp", 0.1), k = param(params, "k", 1.0);
    bg.map = [=](const Jet&, const Jet& x2, const Jet&) {
      return BackgroundSample{rho0 + amp * sin(k * x2), Jet(0.0), Jet(0.0), Jet(theta0)};
    };
    bg.inviscid_exact = false;
  } else if (name == "isobaric_thermal") {
    if (eos.name != "ideal")
      throw NsfError(ErrorKind::ConfigError, "isobaric_thermal background requires the ideal gas");
    double amp = param(params, "amp", 0.2), b = param(params, "b", 0.5), k = param(params, "k", 1.0);
    double p0 = rho0 * theta0;
    bg.map = [=](const Jet& x1, const Jet& x2, const Jet&) {
      Jet th = theta0 + amp * x1 * exp(-x1) * (1.0 + b * sin(k * x2));
      return BackgroundSample{p0 / th, Jet(0.0), Jet(0.0), th};
    };
    bg.inviscid_exact = true;
  } else {
    throw NsfError(ErrorKind::ConfigError, "unknown background '" + name + "'");
  }
  return bg;
}

StateJets sample_state(const BackgroundState& bg, const Jet& x1, const Jet& x2, const Jet& t) {
  BackgroundSample s = bg.map(x1, x2, t);
  if (!(s.rho.value() > 0.0) || !(s.theta.value() > 0.0)) {
    std::ostringstream os;
    os << "background '" << bg.name << "' has rho=" << s.rho.value()
       << " theta=" << s.theta.value() << " at (" << x1.value() << ", " << x2.value() << ", "
       << t.value() << ")";
    throw NsfError(ErrorKind::NonPositiveState, os.str());
  }
  StateJets j;
  j.rho = s.rho;
  j.u1 = s.u1;
  j.u2 = s.u2;
  j.theta = s.theta;
  Jet pth = bg.eos.p_theta(s.rho);
  j.p = bg.eos.p_e(s.rho) + s.theta * pth;
  j.p_rho = bg.eos.dp_e(s.rho) + s.theta * bg.eos.dp_theta(s.rho);
  j.p_theta = pth;
  j.c_v = bg.eos.c_v(s.theta);
  if (!(j.p_rho.value() > 0.0))
    throw NsfError(ErrorKind::NonPositiveState, "p_rho must be positive for a symmetrizable state");
  j.beta = s.rho * j.c_v / (s.theta * j.p_rho);
  return j;
}

StateJets sample_state_seeded(const BackgroundState& bg, double x1, double x2, double t) {
  return sample_state(bg, Jet::variable(0, x1), Jet::variable(1, x2), Jet::variable(2, t));
}

BackgroundValues eval_background(const BackgroundState& bg, double x1, double x2, double t) {
  StateJets j = sample_state_seeded(bg, x1, x2, t);
  BackgroundValues v;
  v.rho_p = j.rho.value();
  v.u1_p = j.u1.value();
  v.u2_p = j.u2.value();
  v.theta_p = j.theta.value();
  v.p_rho = j.p_rho.value();
  v.p_theta = j.p_theta.value();
  v.beta_p = j.beta.value();
  v.c_v = j.c_v.value();
  v.pressure = j.p.value();
  v.grad_u << j.u1.derivative(1, 0, 0), j.u1.derivative(0, 1, 0), j.u2.derivative(1, 0, 0),
      j.u2.derivative(0, 1, 0);
  return v;
}

double boundary_alpha(const BackgroundState& bg, double x2, double t) {
  StateJets j = sample_state(bg, Jet(0.0), Jet(x2), Jet(t));
  return j.p_theta.value() / j.p_rho.value();
}

Jet boundary_alpha_jet(const BackgroundState& bg, double x2, double t) {
  StateJets j = sample_state(bg, Jet(0.0), Jet::variable(1, x2), Jet::variable(2, t));
  return j.p_theta / j.p_rho;
}

Mat4 to_eigen(const Mat4T<double>& m) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) r(i, k) = m[i][k];
  return r;
}

Mat4 jet_value(const Mat4T<Jet>& m) { return jet_coeff(m, 0, 0, 0); }

Mat4 jet_coeff(const Mat4T<Jet>& m, int a, int b, int c) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) r(i, k) = m[i][k].coeff(a, b, c);
  return r;
}

CoefficientMatrices assemble_matrices(const BackgroundValues& bv, double alpha,
                                      const ViscosityScaling& scaling) {
  CoefficientMatrices m;
  m.alpha = alpha;
  m.A0 = to_eigen(matrix_A0<double>(bv.rho_p, bv.p_rho, bv.beta_p));
  m.A1 = to_eigen(matrix_A1<double>(bv.rho_p, bv.u1_p, bv.p_rho, bv.p_theta, bv.beta_p));
  m.A2 = to_eigen(matrix_A2<double>(bv.rho_p, bv.u2_p, bv.p_rho, bv.p_theta, bv.beta_p));
  m.A1m = Mat4::Zero();
  m.A1m(0, 1) = m.A1m(1, 0) = 1.0;
  m.A1m(1, 3) = m.A1m(3, 1) = alpha;
  m.A1r = m.A1 - m.A1m;
  std::array<std::array<double, 2>, 2> du{{{bv.grad_u(0, 0), bv.grad_u(0, 1)},
                                           {bv.grad_u(1, 0), bv.grad_u(1, 1)}}};
  auto I = matrix_I<double>(du, bv.theta_p, bv.p_rho, scaling);
  m.I1 = to_eigen(I[0]);
  m.I2 = to_eigen(I[1]);
  return m;
}

double ResidualReport::max() const { return std::max({continuity, momentum, energy}); }

ResidualReport nsf_background_residual(const BackgroundState& bg, const ViscosityScaling& scaling,
                                       double X1, double X2, int n1, int n2, double t) {
  ResidualReport rep;
  bool viscous = !(bg.kind == BackgroundState::Kind::Analytic && bg.inviscid_exact);
  double e2 = scaling.epsilon * scaling.epsilon;
  double mu = viscous ? scaling.mu_bar * e2 : 0.0;
  double lam = viscous ? scaling.lambda_bar * e2 : 0.0;
  double kap = viscous ? scaling.kappa_bar * e2 : 0.0;

  for (int i = 0; i < n1; ++i)
    for (int k = 0; k < n2; ++k) {
      double x1 = n1 > 1 ? X1 * i / (n1 - 1) : 0.0;
      double x2 = n2 > 1 ? X2 * k / (n2 - 1) : 0.0;
      StateJets s = sample_state_seeded(bg, x1, x2, t);
      const Jet u[2] = {s.u1, s.u2};
      Jet du[2][2];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) du[a][b] = u[a].partial(b);
      Jet div = du[0][0] + du[1][1];

      Jet cont = s.rho.partial(2) + (s.rho * s.u1).partial(0) + (s.rho * s.u2).partial(1);
      rep.continuity = std::max(rep.continuity, std::abs(cont.value()));

      Jet S[2][2];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          S[a][b] = mu * (du[a][b] + du[b][a]);
          if (a == b) S[a][b] += lam * div;
        }
      for (int a = 0; a < 2; ++a) {
        Jet r = s.rho * (u[a].partial(2) + s.u1 * du[a][0] + s.u2 * du[a][1]) + s.p.partial(a) -
                S[a][0].partial(0) - S[a][1].partial(1);
        rep.momentum = std::max(rep.momentum, std::abs(r.value()));
      }

      Jet dth1 = s.theta.partial(0), dth2 = s.theta.partial(1);
      Jet heat = s.rho * s.c_v * (s.theta.partial(2) + s.u1 * dth1 + s.u2 * dth2) +
                 s.theta * s.p_theta * div - kap * (dth1.partial(0) + dth2.partial(1));
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) heat -= S[a][b] * du[a][b];
      rep.energy = std::max(rep.energy, std::abs(heat.value()));
    }
  return rep;
}

}  // namespace nsf
