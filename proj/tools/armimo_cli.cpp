// armimo: command-line front end for the AR(1) MU-MIMO receiver simulator.
//
//   armimo simulate  --config s.json --out r.csv [--format csv|json] [--seed N] [--trials N] [--threads N]
//   armimo det-equiv --config s.json [--out r.csv]
//   armimo pilot-opt --config s.json [--sweep a=0:0.05:0.95] [--out r.csv]
//   armimo figure    --name fig1 --out dir [--trials N] [--threads N] [--seed N]
//
// Exit status: 0 ok, 2 configuration error, 3 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "armimo/config.hpp"
#include "armimo/emit.hpp"
#include "armimo/errors.hpp"
#include "armimo/kernels.hpp"
#include "armimo/presets.hpp"

namespace {

using namespace armimo;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> threads;

  void apply(Scenario& sc) const {
    if (seed) sc.seed = *seed;
    if (trials) sc.trials = *trials;
    if (threads) sc.threads = *threads;
  }
};

void write_or_print(const ScenarioResult& r, OutputFormat fmt, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << (fmt == OutputFormat::Json ? result_to_json(r).dump(2) + "\n" : result_to_csv(r));
  } else {
    emit(r, fmt, out);
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Uplink MU-MIMO receivers over AR(1) fading: simulation, analysis, pilot power"};
  app.require_subcommand(1);
  std::string simd;
  app.add_option("--simd", simd, "force kernel backend (scalar|avx2)");

  Overrides ov;
  std::string config, out, format = "csv", sweep, name;

  auto* sim = app.add_subcommand("simulate", "Monte Carlo SINR for every receiver and sweep point");
  sim->add_option("--config", config, "scenario JSON")->required();
  sim->add_option("--out", out, "output file ('-' for stdout)");
  sim->add_option("--format", format, "csv or json");
  sim->add_option("--seed", ov.seed, "master seed");
  sim->add_option("--trials", ov.trials, "Monte Carlo trials per point");
  sim->add_option("--threads", ov.threads, "worker threads (0: all cores)");

  auto* deq = app.add_subcommand("det-equiv", "deterministic-equivalent SINR only (no Monte Carlo)");
  deq->add_option("--config", config, "scenario JSON")->required();
  deq->add_option("--out", out, "output file ('-' for stdout)");
  deq->add_option("--format", format, "csv or json");

  auto* pil = app.add_subcommand("pilot-opt", "SINR-optimal pilot power");
  pil->add_option("--config", config, "scenario JSON")->required();
  pil->add_option("--sweep", sweep, "e.g. a=0:0.05:0.95");
  pil->add_option("--out", out, "output file ('-' for stdout)");
  pil->add_option("--format", format, "csv or json");

  auto* fig = app.add_subcommand("figure", "run a figure preset into a directory");
  fig->add_option("--name", name, "fig1 .. fig9")->required();
  fig->add_option("--out", out, "output directory")->required();
  fig->add_option("--format", format, "csv or json");
  fig->add_option("--seed", ov.seed, "master seed");
  fig->add_option("--trials", ov.trials, "Monte Carlo trials per point");
  fig->add_option("--threads", ov.threads, "worker threads (0: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!simd.empty()) {
      if (simd == "scalar") {
        kernels::select_backend(kernels::Backend::Scalar);
      } else if (simd == "avx2") {
        kernels::select_backend(kernels::Backend::Avx2);
      } else {
        throw ConfigError("--simd must be scalar or avx2");
      }
    }
    const OutputFormat fmt = parse_format(format);

    if (*sim) {
      Scenario sc = load_scenario(config);
      ov.apply(sc);
      if (sc.mode != ScenarioMode::Simulate) throw ConfigError("simulate needs mode simulate");
      write_or_print(run_scenario(sc), fmt, out);
    } else if (*deq) {
      Scenario sc = load_scenario(config);
      if (sc.mode != ScenarioMode::Simulate) throw ConfigError("det-equiv needs mode simulate");
      sc.trials = 0;
      write_or_print(run_scenario(sc), fmt, out);
    } else if (*pil) {
      Scenario sc = load_scenario(config);
      sc.mode = ScenarioMode::PilotOpt;
      if (!sweep.empty()) sc.sweep = parse_sweep(sweep);
      write_or_print(run_scenario(sc), fmt, out);
    } else if (*fig) {
      Figure f = figure_preset(name);
      std::filesystem::create_directories(out);
      for (Scenario sc : f.scenarios) {
        ov.apply(sc);
        if (sc.mode == ScenarioMode::PilotOpt) sc.trials = 0;
        const auto ext = fmt == OutputFormat::Json ? ".json" : ".csv";
        const auto path = std::filesystem::path(out) / (sc.name + ext);
        emit(run_scenario(sc), fmt, path.string());
        std::cerr << "wrote " << path.string() << '\n';
      }
    }
  } catch (const UnknownPreset& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "ConfigError: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
