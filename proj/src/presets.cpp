#include "armimo/presets.hpp"

#include <cstdio>

#include "armimo/config.hpp"
#include "armimo/errors.hpp"

namespace armimo {
namespace {

using RK = ReceiverKind;

std::string tag(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::vector<double> a_grid() {
  std::vector<double> g = make_range(0.0, 0.1, 0.9);
  g.push_back(0.95);
  return g;
}

Figure fig1() {
  Scenario s = preset_base(5, 100);
  s.name = "fig1";
  s.user.a = 0.95;
  s.receivers = {RK::Proposed,  RK::ProposedPerfectCsi, RK::ArAwareCov, RK::ConventionalInst,
                 RK::ConventionalCov, RK::Naive, RK::Mrc1, RK::Mrc2, RK::Mrc3};
  s.trials = 2000;
  s.cdf = true;
  return {"fig1", "CDF of the instantaneous SINR, K=5, N_r=100, P_p=100 mW, a=0.95", {s}};
}

Figure fig2() {
  Scenario s = preset_base(5, 100);
  s.name = "fig2";
  s.user.a = 0.95;
  s.receivers = {RK::Proposed, RK::ArAwareCov, RK::ConventionalInst};
  s.sweep = SweepSpec{"p_p", {10, 25, 50, 75, 100, 125, 150, 175, 200, 225}};
  return {"fig2", "average SINR vs pilot power, analysis and simulation, K=5, N_r=100, a=0.95", {s}};
}

Figure fig3() {
  Scenario s = preset_base(5, 100);
  s.name = "fig3";
  s.receivers = {RK::Proposed, RK::ArAwareCov, RK::ConventionalInst, RK::ConventionalCov};
  s.sweep = SweepSpec{"a", a_grid()};
  return {"fig3", "average SINR vs AR coefficient, K=5, N_r=100, P_p=100 mW", {s}};
}

Scenario pilot_family(const std::string& name, int K, int n_r) {
  Scenario s = preset_base(K, n_r);
  s.name = name;
  s.mode = ScenarioMode::PilotOpt;
  s.trials = 0;
  s.sweep = SweepSpec{"a", make_range(0.0, 0.05, 0.95)};
  return s;
}

Figure fig4() {
  Figure f{"fig4", "optimum pilot power vs a for K = 1, 3, 10, 20, 50 (N_r = 100)", {}};
  for (int K : {1, 3, 10, 20, 50}) {
    f.scenarios.push_back(pilot_family("fig4_K" + std::to_string(K), K, 100));
  }
  return f;
}

Figure fig5() {
  Figure f{"fig5", "SINR at the optimum pilot power vs a", {}};
  const std::pair<int, int> cases[] = {{10, 20}, {10, 100}, {50, 100}};
  for (auto [K, n_r] : cases) {
    f.scenarios.push_back(
        pilot_family("fig5_K" + std::to_string(K) + "_Nr" + std::to_string(n_r), K, n_r));
  }
  return f;
}

Figure fig6() {
  Figure f{"fig6", "SINR vs K with N_r = 2K and N_r = 3K for a = 0, 0.5, 0.95", {}};
  for (int per : {2, 3}) {
    for (double a : {0.0, 0.5, 0.95}) {
      Scenario s = preset_base(5, 5 * per);
      s.name = "fig6_Nr" + std::to_string(per) + "K" + tag("_a%g", a);
      s.user.a = a;
      s.n_r_per_user = per;
      s.trials = 1000;
      s.sweep = SweepSpec{"K", {5, 10, 15, 20, 25, 30}};
      f.scenarios.push_back(s);
    }
  }
  return f;
}

Figure fig7() {
  Figure f{"fig7", "average SINR vs true a and assumed a_hat, N_r=20, K=5", {}};
  for (double a : a_grid()) {
    Scenario s = preset_base(5, 20);
    s.name = "fig7" + tag("_a%g", a);
    s.user.a = a;
    s.receivers = {RK::Proposed, RK::ConventionalInst};
    s.trials = 2000;
    s.sweep = SweepSpec{"a_hat", a_grid()};
    f.scenarios.push_back(s);
  }
  return f;
}

Figure pilot_sweep_figure(const std::string& name, double a) {
  Figure f{name, "analytic SINR vs pilot power, K = 1 and 10, N_r = 10, 50, 100" + tag(", a=%g", a), {}};
  for (int K : {1, 10}) {
    for (int n_r : {10, 50, 100}) {
      Scenario s = preset_base(K, n_r);
      s.name = name + "_K" + std::to_string(K) + "_Nr" + std::to_string(n_r);
      s.user.a = a;
      s.trials = 0;
      s.sweep = SweepSpec{"p_p", make_range(5.0, 10.0, 245.0)};
      f.scenarios.push_back(s);
    }
  }
  return f;
}

}  // namespace

Scenario preset_base(int K, int n_r) {
  Scenario s;
  s.cfg = SystemConfig{K, n_r, 1, 11, 250.0, kPresetNoise, kPresetNoise};
  s.user = UserTemplate{90.0, 0.0, 1.0, 100.0};
  s.receivers = {ReceiverKind::Proposed};
  s.trials = 1000;
  s.seed = 20240501;
  return s;
}

std::vector<std::string> figure_names() {
  return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
}

Figure figure_preset(std::string_view name) {
  if (name == "fig1") return fig1();
  if (name == "fig2") return fig2();
  if (name == "fig3") return fig3();
  if (name == "fig4") return fig4();
  if (name == "fig5") return fig5();
  if (name == "fig6") return fig6();
  if (name == "fig7") return fig7();
  if (name == "fig8") return pilot_sweep_figure("fig8", 0.0);
  if (name == "fig9") return pilot_sweep_figure("fig9", 0.95);
  throw UnknownPreset("no figure preset named '" + std::string(name) + "'");
}

}  // namespace armimo
