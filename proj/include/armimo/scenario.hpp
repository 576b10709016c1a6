#pragma once

// Experiment description and the sweep driver that turns it into result rows.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "armimo/channel_model.hpp"
#include "armimo/monte_carlo.hpp"
#include "armimo/receivers.hpp"

namespace armimo {

enum class ScenarioMode { Simulate, PilotOpt };

// Per-user physical parameters as they appear in a config file. The data power
// is always derived from the budget.
struct UserTemplate {
  double path_loss_db = 90.0;
  double a = 0.0;
  double c = 1.0;
  double p_p = 100.0;
};

struct SweepSpec {
  std::string var;  // p_p | a | a_hat | K | n_r
  std::vector<double> values;
};

struct Scenario {
  std::string name = "scenario";
  ScenarioMode mode = ScenarioMode::Simulate;
  SystemConfig cfg{5, 100, 1, 11, 250.0, 1e-7, 1e-7};
  UserTemplate user;                // replicated K times unless `users` is given
  std::vector<UserTemplate> users;  // explicit list; user 0 is tagged
  std::optional<double> assumed_a;  // receiver-side AR coefficient
  std::vector<ReceiverKind> receivers{ReceiverKind::Proposed};
  int trials = 1000;  // 0: deterministic equivalents only
  std::uint64_t seed = 1;
  int threads = 0;
  bool cdf = false;
  int n_r_per_user = 0;  // > 0: N_r = n_r_per_user * K at every point
  std::optional<SweepSpec> sweep;

  // Throws ConfigError.
  void validate() const;
};

struct ResultRow {
  std::string sweep_var = "none";
  std::optional<double> sweep_value;
  ReceiverKind receiver = ReceiverKind::Proposed;
  std::optional<double> mc_mean_db;
  std::optional<double> ci_lo_db;
  std::optional<double> ci_hi_db;
  std::optional<double> deq_thm2_db;
  std::optional<double> deq_fp_db;
  std::optional<int> fp_iters;
  int trials = 0;
  std::uint64_t seed = 0;
  std::string error;  // module error name when the point was rejected
  std::vector<std::pair<double, double>> cdf;

  bool operator==(const ResultRow&) const = default;
};

struct PilotRow {
  std::string sweep_var = "none";
  std::optional<double> sweep_value;
  int K = 0;
  int n_r = 0;
  double a = 0.0;
  std::optional<double> p_p_opt_mw;
  std::optional<double> objective;
  std::string method;
  std::optional<double> deq_thm2_db;
  std::string error;

  bool operator==(const PilotRow&) const = default;
};

struct ScenarioResult {
  std::string name;
  ScenarioMode mode = ScenarioMode::Simulate;
  std::vector<ResultRow> rows;
  std::vector<PilotRow> pilot_rows;
  std::map<std::string, std::string> metadata;
};

// Scenario with the sweep variable applied.
Scenario at_sweep_point(const Scenario& sc, double value);

// Physical users of one point; throws OutOfDomain for infeasible pilot power.
std::vector<MatrixUserParams> build_users(const Scenario& sc, std::optional<double> a_override = {});

// Runs every sweep point in order. Infeasible pilot powers become rows marked
// OutOfDomain; other module errors propagate as ContextError naming the point.
ScenarioResult run_scenario(const Scenario& sc);

std::string_view mode_name(ScenarioMode m);

}  // namespace armimo
