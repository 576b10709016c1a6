#pragma once

// Monte Carlo averages of the instantaneous SINR of the tagged user over fresh
// channel, pilot-noise and estimate draws.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "armimo/channel_model.hpp"
#include "armimo/receivers.hpp"

namespace armimo {

struct McScenario {
  SystemConfig cfg;
  std::vector<MatrixUserParams> users;  // the channels actually evolve with these
  // Statistics the receivers are built from; defaults to `users`. Only the
  // AR matrices are expected to differ (assumed a_hat).
  std::optional<std::vector<MatrixUserParams>> assumed;
};

struct McOptions {
  int trials = 1000;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency
  int cdf_points = 200;
  bool keep_samples = false;
};

struct SinrReport {
  ReceiverKind kind = ReceiverKind::Proposed;
  int trials = 0;
  double mean = 0.0;   // linear
  double ci_lo = 0.0;  // 95% CI of the mean, linear
  double ci_hi = 0.0;
  std::vector<std::pair<double, double>> cdf;  // (SINR dB, probability)
  std::vector<double> samples;                 // linear, when keep_samples
};

// All kinds share each trial's draws (common random numbers). Trial i uses
// Rng::stream(seed, i), so the result does not depend on the thread count.
// Errors are rethrown as ContextError naming the lowest failing trial.
std::vector<SinrReport> average_sinr_mc(const McScenario& scenario,
                                        std::span<const ReceiverKind> kinds,
                                        const McOptions& options);

// Sum with pairwise splitting; the split points depend only on the length.
double pairwise_sum(std::span<const double> values);

}  // namespace armimo
