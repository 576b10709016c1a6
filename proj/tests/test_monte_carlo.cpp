#include <catch_amalgamated.hpp>

#include <cstring>

#include "armimo/errors.hpp"
#include "armimo/monte_carlo.hpp"
#include "armimo/sinr_analysis.hpp"
#include "helpers.hpp"

using namespace armimo;

namespace {

McScenario iid_scenario(int K, int n, double a, double sigma_p2, double sigma_d2) {
  McScenario sc;
  sc.cfg = testutil::unit_config(K, n, sigma_p2, sigma_d2);
  for (int k = 0; k < K; ++k) sc.users.push_back(testutil::iid_user(n, a, 1.0, 1.0, 1.0 + 0.1 * k));
  return sc;
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("pairwise sum", "[mc]") {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / static_cast<double>(i + 1);
  double ref = 0.0;
  for (double x : v) ref += x;
  CHECK(pairwise_sum(v) == Catch::Approx(ref).epsilon(1e-14));
  CHECK(pairwise_sum(std::span<const double>()) == 0.0);
}

TEST_CASE("single user with perfect pilots: chi-square mean", "[mc]") {
  // gamma = alpha^2 P ||h||^2 / sigma_d2 and E ||h||^2 = N_r c.
  const int n = 6;
  McScenario sc;
  sc.cfg = testutil::unit_config(1, n, 0.0, 0.5);
  sc.users.push_back(testutil::iid_user(n, 0.7, 1.5, 1.0, 2.0, 0.8));
  const ReceiverKind kinds[] = {ReceiverKind::Proposed, ReceiverKind::ProposedPerfectCsi};
  McOptions opt;
  opt.trials = 20000;
  opt.seed = 3;
  const auto rep = average_sinr_mc(sc, kinds, opt);
  const double expect = n * 1.5 * (0.64 * 2.0 / 0.5);
  for (const auto& r : rep) {
    CHECK(r.ci_lo < expect);
    CHECK(r.ci_hi > expect);
  }
  CHECK(rep[0].mean == Catch::Approx(rep[1].mean).epsilon(1e-8));
}

TEST_CASE("noise-dominated limit", "[mc]") {
  const ReceiverKind kinds[] = {ReceiverKind::Proposed};
  McOptions opt;
  opt.trials = 200;
  double prev = 1e300;
  for (double s2 : {1.0, 1e3, 1e6, 1e9}) {
    const auto rep = average_sinr_mc(iid_scenario(3, 8, 0.5, 0.5, s2), kinds, opt);
    CHECK(rep[0].mean < prev);
    prev = rep[0].mean;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("results do not depend on the thread count", "[mc]") {
  const auto sc = iid_scenario(4, 10, 0.9, 0.5, 0.5);
  std::vector<ReceiverKind> kinds(std::begin(kAllReceiverKinds), std::end(kAllReceiverKinds));
  McOptions opt;
  opt.trials = 301;
  opt.seed = 77;
  opt.keep_samples = true;
  opt.threads = 1;
  const auto a = average_sinr_mc(sc, kinds, opt);
  opt.threads = 8;
  const auto b = average_sinr_mc(sc, kinds, opt);
  opt.threads = 3;
  const auto c = average_sinr_mc(sc, kinds, opt);
  REQUIRE(a.size() == kinds.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(bit_equal(a[i].mean, b[i].mean));
    CHECK(bit_equal(a[i].ci_lo, c[i].ci_lo));
    CHECK(a[i].samples == b[i].samples);
    CHECK(a[i].cdf == c[i].cdf);
  }
  opt.seed = 78;
  CHECK(!bit_equal(average_sinr_mc(sc, kinds, opt)[7].mean, a[7].mean));
}

TEST_CASE("report shape", "[mc]") {
  const ReceiverKind kinds[] = {ReceiverKind::Proposed, ReceiverKind::Naive};
  McOptions opt;
  opt.trials = 500;
  opt.keep_samples = true;
  const auto rep = average_sinr_mc(iid_scenario(2, 4, 0.5, 0.5, 0.5), kinds, opt);
  for (const auto& r : rep) {
    CHECK(r.trials == 500);
    CHECK(r.ci_lo < r.mean);
    CHECK(r.mean < r.ci_hi);
    REQUIRE(r.cdf.size() == 200);
    for (std::size_t j = 1; j < r.cdf.size(); ++j) {
      CHECK(r.cdf[j].first >= r.cdf[j - 1].first);
      CHECK(r.cdf[j].second > r.cdf[j - 1].second);
    }
    double m = 0.0;
    for (double s : r.samples) m += s;
    CHECK(r.mean == Catch::Approx(m / 500.0).epsilon(1e-12));
  }
  CHECK(rep[0].kind == ReceiverKind::Proposed);
  CHECK(rep[0].mean >= rep[1].mean);
}

TEST_CASE("mismatched statistics change only the receiver", "[mc]") {
  auto sc = iid_scenario(3, 8, 0.0, 0.5, 0.5);
  auto assumed = sc.users;
  for (auto& u : assumed) u.A = 0.9 * CMatrix::Identity(8, 8);
  const ReceiverKind kinds[] = {ReceiverKind::Proposed, ReceiverKind::ConventionalInst};
  McOptions opt;
  opt.trials = 2000;
  const auto right = average_sinr_mc(sc, kinds, opt);
  sc.assumed = assumed;
  const auto wrong = average_sinr_mc(sc, kinds, opt);
  // Block-fading receiver does not use A; the proposed one is hurt.
  CHECK(bit_equal(right[1].mean, wrong[1].mean));
  CHECK(wrong[0].mean < right[0].mean);
}

TEST_CASE("trial errors carry the trial index", "[mc]") {
  // A = 0 makes the one-step prediction vanish.
  const ReceiverKind kinds[] = {ReceiverKind::Mrc3};
  McOptions opt;
  opt.trials = 50;
  opt.threads = 4;
  try {
    average_sinr_mc(iid_scenario(2, 4, 0.0, 0.5, 0.5), kinds, opt);
    FAIL("expected an error");
  } catch (const ContextError& e) {
    CHECK(e.name() == "ZeroVector");
    CHECK(std::string(e.what()).find("trial 0") != std::string::npos);
  }
  opt.trials = 0;
  CHECK_THROWS_AS(average_sinr_mc(iid_scenario(2, 4, 0.0, 0.5, 0.5), kinds, opt), InvalidParameter);
}
