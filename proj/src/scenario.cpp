#include "armimo/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "armimo/errors.hpp"
#include "armimo/kernels.hpp"
#include "armimo/pilot_optimizer.hpp"
#include "armimo/sinr_analysis.hpp"

namespace armimo {
namespace {

const char* const kSweepVars[] = {"p_p", "a", "a_hat", "K", "n_r"};

bool known_sweep_var(const std::string& v) {
  return std::find(std::begin(kSweepVars), std::end(kSweepVars), v) != std::end(kSweepVars);
}

int as_count(double v, const char* what) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-9 || r < 1) {
    throw ConfigError(std::string(what) + " sweep values must be positive integers");
  }
  return static_cast<int>(r);
}

std::string point_label(const std::string& var, std::optional<double> v) {
  if (!v) return "single point";
  std::ostringstream os;
  os << "sweep " << var << "=" << *v;
  return os.str();
}

std::optional<double> db_or_empty(double linear) {
  if (!(linear > 0.0) || !std::isfinite(linear)) return std::nullopt;
  return to_db(linear);
}

std::vector<UserTemplate> templates(const Scenario& sc) {
  if (!sc.users.empty()) return sc.users;
  return std::vector<UserTemplate>(static_cast<std::size_t>(sc.cfg.K), sc.user);
}

bool has_mismatch(const Scenario& sc) {
  if (!sc.assumed_a) return false;
  for (const auto& t : templates(sc)) {
    if (t.a != *sc.assumed_a) return true;
  }
  return false;
}

struct Deq {
  double thm2 = 0.0;
  DetEquivResult fp;
};

Deq deterministic_equivalents(const std::vector<MatrixUserParams>& users, const SystemConfig& cfg) {
  const ReceiverModel model = ReceiverModel::build(users, cfg);
  const PhiFamily family = PhiFamily::from_model(model);
  Deq d;
  d.fp = det_equiv_general(family);
  // Users are i.i.d. across antennas, so every Phi_k and beta is a multiple of I.
  std::vector<double> phi_k;
  for (const auto& m : family.phi_k) phi_k.push_back(m(0, 0).real());
  d.thm2 = theorem2_root(family.phi(0, 0).real(), phi_k, family.beta(0, 0).real(), cfg.n_r);
  return d;
}

void simulate_point(const Scenario& p, const std::string& var, std::optional<double> value,
                    ScenarioResult& out) {
  auto base_row = [&](ReceiverKind kind) {
    ResultRow r;
    r.sweep_var = var;
    r.sweep_value = value;
    r.receiver = kind;
    r.trials = p.trials;
    r.seed = p.seed;
    return r;
  };
  std::vector<ReceiverKind> kinds = p.receivers;
  if (p.trials == 0) kinds = {ReceiverKind::Proposed};

  std::vector<MatrixUserParams> users;
  std::optional<std::vector<MatrixUserParams>> assumed;
  try {
    users = build_users(p);
    if (p.assumed_a) assumed = build_users(p, *p.assumed_a);
  } catch (const OutOfDomain& e) {
    for (ReceiverKind k : kinds) {
      ResultRow r = base_row(k);
      r.error = std::string(e.name());
      out.rows.push_back(std::move(r));
    }
    return;
  }

  const bool want_deq = !has_mismatch(p) &&
                        std::find(kinds.begin(), kinds.end(), ReceiverKind::Proposed) != kinds.end();
  std::optional<Deq> deq;
  if (want_deq) deq = deterministic_equivalents(users, p.cfg);

  std::vector<SinrReport> reports;
  if (p.trials > 0) {
    McScenario mc{p.cfg, users, assumed};
    McOptions opt;
    opt.trials = p.trials;
    opt.seed = p.seed;
    opt.threads = p.threads;
    opt.cdf_points = p.cdf ? 200 : 0;
    reports = average_sinr_mc(mc, kinds, opt);
  }
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    ResultRow r = base_row(kinds[i]);
    if (!reports.empty()) {
      r.mc_mean_db = db_or_empty(reports[i].mean);
      r.ci_lo_db = db_or_empty(reports[i].ci_lo);
      r.ci_hi_db = db_or_empty(reports[i].ci_hi);
      r.cdf = std::move(reports[i].cdf);
    }
    if (deq && kinds[i] == ReceiverKind::Proposed) {
      r.deq_thm2_db = db_or_empty(deq->thm2);
      r.deq_fp_db = db_or_empty(deq->fp.gamma);
      r.fp_iters = deq->fp.state.iterations;
    }
    out.rows.push_back(std::move(r));
  }
}

void pilot_point(const Scenario& p, const std::string& var, std::optional<double> value,
                 ScenarioResult& out) {
  PilotRow row;
  row.sweep_var = var;
  row.sweep_value = value;
  row.K = p.cfg.K;
  row.n_r = p.cfg.n_r;
  row.a = p.user.a;
  PilotOptProblem prob;
  prob.K = p.cfg.K;
  prob.tau_p = p.cfg.tau_p;
  prob.tau_d = p.cfg.tau_d;
  prob.p_tot = p.cfg.p_tot;
  prob.alpha = alpha_from_db(p.user.path_loss_db);
  prob.a = p.user.a;
  prob.c = p.user.c;
  prob.sigma_p2 = p.cfg.sigma_p2;
  prob.sigma_d2 = p.cfg.sigma_d2;
  const PilotOptResult res = optimal_pilot_power(prob);
  row.p_p_opt_mw = res.p_p;
  row.objective = res.objective;
  row.method = res.method;
  row.deq_thm2_db = db_or_empty(symmetric_sinr_at(prob, res.p_p, p.cfg.n_r));
  if (res.flagged) out.metadata["discrepancy " + point_label(var, value)] = res.note;
  out.pilot_rows.push_back(std::move(row));
}

}  // namespace

std::string_view mode_name(ScenarioMode m) {
  return m == ScenarioMode::Simulate ? "simulate" : "pilot_opt";
}

void Scenario::validate() const {
  try {
    cfg.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  if (!(cfg.sigma_d2 > 0.0)) throw ConfigError("sigma_d2 must be > 0");
  if (trials < 0) throw ConfigError("trials must be >= 0");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (n_r_per_user < 0) throw ConfigError("n_r_per_user must be >= 0");
  if (mode == ScenarioMode::Simulate && receivers.empty()) throw ConfigError("no receivers selected");
  if (!users.empty() && static_cast<int>(users.size()) != cfg.K) {
    throw ConfigError("users list length must equal K");
  }
  if (sweep) {
    if (!known_sweep_var(sweep->var)) throw ConfigError("unknown sweep variable '" + sweep->var + "'");
    if (sweep->values.empty()) throw ConfigError("sweep grid is empty");
    if (sweep->var == "K" || sweep->var == "n_r") {
      for (double v : sweep->values) as_count(v, sweep->var.c_str());
    }
    if (sweep->var == "K" && !users.empty()) throw ConfigError("cannot sweep K with an explicit users list");
  }
  if (mode == ScenarioMode::PilotOpt) {
    if (!users.empty()) throw ConfigError("pilot_opt needs the symmetric user template");
    if (sweep && (sweep->var == "p_p" || sweep->var == "a_hat")) {
      throw ConfigError("pilot_opt sweeps a, K or n_r");
    }
  }
}

Scenario at_sweep_point(const Scenario& sc, double value) {
  Scenario p = sc;
  const std::string v = sc.sweep ? sc.sweep->var : std::string();
  if (v == "p_p") {
    p.user.p_p = value;
    for (auto& u : p.users) u.p_p = value;
  } else if (v == "a") {
    p.user.a = value;
    for (auto& u : p.users) u.a = value;
  } else if (v == "a_hat") {
    p.assumed_a = value;
  } else if (v == "K") {
    p.cfg.K = as_count(value, "K");
  } else if (v == "n_r") {
    p.cfg.n_r = as_count(value, "n_r");
  }
  if (p.n_r_per_user > 0) p.cfg.n_r = p.n_r_per_user * p.cfg.K;
  return p;
}

std::vector<MatrixUserParams> build_users(const Scenario& sc, std::optional<double> a_override) {
  std::vector<MatrixUserParams> out;
  for (const auto& t : templates(sc)) {
    const double a = a_override.value_or(t.a);
    const UserParams u = UserParams::from_budget(alpha_from_db(t.path_loss_db), a, t.c, t.p_p, sc.cfg);
    out.push_back(MatrixUserParams::from_scalar(u, sc.cfg.n_r));
  }
  return out;
}

ScenarioResult run_scenario(const Scenario& sc) {
  sc.validate();
  ScenarioResult out;
  out.name = sc.name;
  out.mode = sc.mode;
  {
    std::ostringstream norm;
    norm << "c=" << sc.user.c << " sigma_p2=" << sc.cfg.sigma_p2 << " sigma_d2=" << sc.cfg.sigma_d2
         << " path_loss_db=" << sc.user.path_loss_db;
    out.metadata["normalization"] = norm.str();
  }
  out.metadata["mode"] = std::string(mode_name(sc.mode));
  out.metadata["simd_backend"] = std::string(kernels::backend_name(kernels::active_backend()));
  for (const auto& w : sc.cfg.warnings()) out.metadata["warning"] = w;

  std::vector<std::optional<double>> points;
  if (sc.sweep) {
    points.assign(sc.sweep->values.begin(), sc.sweep->values.end());
  } else {
    points.push_back(std::nullopt);
  }
  const std::string var = sc.sweep ? sc.sweep->var : "none";
  for (const auto& value : points) {
    const Scenario p = at_sweep_point(sc, value.value_or(0.0));
    try {
      p.validate();
      if (sc.mode == ScenarioMode::Simulate) {
        simulate_point(p, var, value, out);
      } else {
        pilot_point(p, var, value, out);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ContextError(e, point_label(var, value));
    }
  }
  return out;
}

}  // namespace armimo
