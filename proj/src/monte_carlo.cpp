#include "armimo/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "armimo/errors.hpp"
#include "armimo/estimation.hpp"
#include "armimo/rng.hpp"

namespace armimo {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

struct TrialFailure {
  std::int64_t trial = -1;
  std::exception_ptr error;
};

class TrialRunner {
 public:
  TrialRunner(const McScenario& sc, std::span<const ReceiverKind> kinds)
      : sc_(sc), kinds_(kinds.begin(), kinds.end()) {
    sc_.cfg.validate();
    if (sc_.users.empty()) throw DimensionMismatch("scenario has no users");
    if (sc_.assumed && sc_.assumed->size() != sc_.users.size()) {
      throw DimensionMismatch("assumed statistics must cover every user");
    }
    for (const auto& u : sc_.users) {
      u.validate();
      processes_.emplace_back(u.A, u.C);
      gains_.push_back(u.alpha * u.alpha * u.p);
    }
    truth_ = std::make_shared<const ReceiverModel>(ReceiverModel::build(sc_.users, sc_.cfg));
    if (sc_.assumed) {
      for (const auto& u : *sc_.assumed) u.validate();
      belief_ = std::make_shared<const ReceiverModel>(ReceiverModel::build(*sc_.assumed, sc_.cfg));
    } else {
      belief_ = truth_;
    }
  }

  // SINR of every kind for one trial, written to out[kind_index].
  void run(std::uint64_t seed, std::uint64_t trial, std::span<double> out) const {
    Rng rng = Rng::stream(seed, trial);
    const std::size_t K = sc_.users.size();
    std::vector<CVector> zeta(K);
    std::vector<CVector> channels(K);
    for (std::size_t k = 0; k < K; ++k) {
      const auto& u = sc_.users[k];
      const ChannelState st = processes_[k].draw_pair(rng);
      const CVector y_tm1 = received_pilot(st.h_tm1, u.alpha, u.p_p, sc_.cfg, rng);
      const CVector y_t = received_pilot(st.h_t, u.alpha, u.p_p, sc_.cfg, rng);
      zeta[k] = stack_observations(y_t, y_tm1);
      channels[k] = st.h_t;
    }
    const ReceiverInputs belief(belief_, zeta);
    std::optional<ReceiverInputs> truth;
    if (belief_ != truth_) truth.emplace(truth_, zeta);
    const ReceiverInputs& scoring = truth ? *truth : belief;
    for (std::size_t i = 0; i < kinds_.size(); ++i) {
      const Receiver g = build_receiver(kinds_[i], belief, &channels);
      if (kinds_[i] == ReceiverKind::ProposedPerfectCsi) {
        out[i] = genie_sinr(g.g, channels, gains_, sc_.cfg.sigma_d2);
      } else {
        out[i] = conditional_sinr(g.g, scoring);
      }
    }
  }

  std::size_t kind_count() const { return kinds_.size(); }

 private:
  McScenario sc_;
  std::vector<ReceiverKind> kinds_;
  std::vector<Ar1Process> processes_;
  std::vector<double> gains_;
  std::shared_ptr<const ReceiverModel> truth_;
  std::shared_ptr<const ReceiverModel> belief_;
};

SinrReport summarize(ReceiverKind kind, std::vector<double> samples, const McOptions& opt) {
  SinrReport r;
  r.kind = kind;
  r.trials = static_cast<int>(samples.size());
  const double n = static_cast<double>(samples.size());
  r.mean = pairwise_sum(samples) / n;
  double half = std::numeric_limits<double>::quiet_NaN();
  if (samples.size() > 1) {
    std::vector<double> dev(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) dev[i] = (samples[i] - r.mean) * (samples[i] - r.mean);
    const double var = pairwise_sum(dev) / (n - 1.0);
    half = 1.959963984540054 * std::sqrt(var / n);
  }
  r.ci_lo = r.mean - half;
  r.ci_hi = r.mean + half;
  if (opt.cdf_points > 0) {
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const int pts = opt.cdf_points;
    r.cdf.reserve(static_cast<std::size_t>(pts));
    for (int j = 0; j < pts; ++j) {
      const double q = (j + 0.5) / pts;
      const auto idx = std::min(sorted.size() - 1, static_cast<std::size_t>(q * n));
      r.cdf.emplace_back(to_db(sorted[idx]), q);
    }
  }
  if (opt.keep_samples) r.samples = std::move(samples);
  return r;
}

}  // namespace

std::vector<SinrReport> average_sinr_mc(const McScenario& scenario,
                                        std::span<const ReceiverKind> kinds,
                                        const McOptions& options) {
  if (options.trials < 1) throw InvalidParameter("trials must be >= 1");
  const TrialRunner runner(scenario, kinds);
  const auto trials = static_cast<std::size_t>(options.trials);
  const std::size_t nk = runner.kind_count();
  std::vector<double> table(trials * nk);

  unsigned threads = options.threads > 0 ? static_cast<unsigned>(options.threads)
                                         : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials));

  std::atomic<std::size_t> next{0};
  std::mutex fail_mu;
  TrialFailure failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        runner.run(options.seed, t, std::span<double>(table).subspan(t * nk, nk));
      } catch (const Error&) {
        std::lock_guard lock(fail_mu);
        if (failure.trial < 0 || static_cast<std::int64_t>(t) < failure.trial) {
          failure = {static_cast<std::int64_t>(t), std::current_exception()};
        }
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure.trial >= 0) {
    try {
      std::rethrow_exception(failure.error);
    } catch (const Error& e) {
      throw ContextError(e, "trial " + std::to_string(failure.trial));
    }
  }

  std::vector<SinrReport> out;
  for (std::size_t i = 0; i < nk; ++i) {
    std::vector<double> samples(trials);
    for (std::size_t t = 0; t < trials; ++t) samples[t] = table[t * nk + i];
    out.push_back(summarize(kinds[i], std::move(samples), options));
  }
  return out;
}

}  // namespace armimo
