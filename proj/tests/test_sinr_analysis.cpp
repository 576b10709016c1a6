#include <catch_amalgamated.hpp>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "armimo/errors.hpp"
#include "armimo/sinr_analysis.hpp"
#include "helpers.hpp"

using namespace armimo;
using testutil::Instance;

namespace {

PhiFamily iid_family(int n, double phi, const std::vector<double>& phi_k, double beta) {
  const CMatrix I = CMatrix::Identity(n, n);
  PhiFamily f;
  f.phi = phi * I;
  for (double v : phi_k) f.phi_k.push_back(v * I);
  f.beta = beta * I;
  f.sigma_d2 = beta;
  return f;
}

// Fresh stacked observations for every user of a fixed model.
std::vector<CVector> draw_zeta(const std::vector<MatrixUserParams>& users, const SystemConfig& cfg,
                               Rng& rng) {
  std::vector<CVector> z;
  for (const auto& u : users) {
    const Ar1Process proc(u.A, u.C);
    const auto st = proc.draw_pair(rng);
    z.push_back(stack_observations(received_pilot(st.h_t, u.alpha, u.p_p, cfg, rng),
                                   received_pilot(st.h_tm1, u.alpha, u.p_p, cfg, rng)));
  }
  return z;
}

}  // namespace

TEST_CASE("instantaneous SINR", "[sinr]") {
  Rng rng(2);
  // Energy decomposition: with mu = b^H J^-1 b, the MMSE SINR is mu / (1 - mu).
  for (int t = 0; t < 20; ++t) {
    const Instance inst = testutil::random_instance(4, 3, rng);
    const auto in = inst.inputs();
    const auto ne = build_b_J(in);
    const double mu = (ne.b.adjoint() * ne.J.inverse() * ne.b)(0).real();
    const double gamma = instantaneous_sinr(in);
    CHECK(gamma == Catch::Approx(mu / (1.0 - mu)).epsilon(1e-10));
    CHECK(conditional_sinr(g_proposed(in).g, in) == Catch::Approx(gamma).epsilon(1e-10));
  }

  // Noiseless pilots, single user: matched-filter SNR.
  std::vector<MatrixUserParams> users{testutil::iid_user(5, 0.3, 1.0, 1.0, 2.0, 0.8)};
  const Instance one = testutil::draw_instance(testutil::unit_config(1, 5, 0.0, 0.7), users, rng);
  const double snr = 0.64 * 2.0 * one.channels[0].h_t.squaredNorm() / 0.7;
  CHECK(instantaneous_sinr(one.inputs()) == Catch::Approx(snr).epsilon(1e-8));

  std::vector<CVector> zeros(1, CVector::Zero(10));
  CHECK(instantaneous_sinr(ReceiverInputs(one.model, zeros)) == 0.0);
}

TEST_CASE("phi closed forms", "[sinr]") {
  CHECK(phi_scalar(1.0, 1.0, 1.0, 0.0, 1.0) == Catch::Approx(0.5).epsilon(1e-14));
  CHECK(phi_scalar(1.0, 1.0, 1.0, 0.9, 1.0) == Catch::Approx(0.62696).margin(1e-5));
  CHECK(phi_scalar(0.5, 3.0, 2.0, 0.7, 0.0) == Catch::Approx(0.25 * 3.0 * 2.0).epsilon(1e-14));

  // Matrix form on C = cI, A = aI.
  const auto u = testutil::iid_user(3, 0.6, 1.4, 2.0, 1.5, 0.9);
  const SystemConfig cfg = testutil::unit_config(1, 3, 0.8, 0.2);
  const auto model = ReceiverModel::build({u}, cfg);
  const double expect = phi_scalar(0.9, 1.5, 1.4, 0.6, u.pilot_noise(cfg));
  CHECK((phi_matrix(*model.users[0]) - expect * CMatrix::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("theorem 2 root", "[sinr]") {
  const double none[] = {0.0};
  CHECK(theorem2_root(2.0, std::span<const double>(none, 0), 0.5, 10) == Catch::Approx(40.0));
  // beta/phi = 1, N_r = 4, K = 3: g^2 - g - 4 = 0.
  const double two[] = {1.0, 1.0};
  const double golden = (1.0 + std::sqrt(17.0)) / 2.0;
  CHECK(theorem2_root(1.0, two, 1.0, 4) == Catch::Approx(golden).epsilon(1e-12));
  CHECK(symmetric_sinr(1.0, 1.0, 4, 3) == Catch::Approx(golden).epsilon(1e-14));
  CHECK(symmetric_sinr(2.0, 1.0, 8, 1) == Catch::Approx(16.0).epsilon(1e-14));

  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    const double phi = std::exp(4 * rng.normal());
    const double beta = phi * std::exp(2 * rng.normal());
    const int K = 1 + static_cast<int>(rng.uniform() * 10);
    const int n_r = K + static_cast<int>(rng.uniform() * 120);
    std::vector<double> pk(static_cast<std::size_t>(K - 1), phi);
    CHECK(theorem2_root(phi, pk, beta, n_r) ==
          Catch::Approx(symmetric_sinr(phi, beta, n_r, K)).epsilon(1e-12));
  }
  // K = N_r and a vanishing phi/beta drive the SINR to zero.
  std::vector<double> v;
  for (double ratio : {1e2, 1e4, 1e6}) {
    v.push_back(symmetric_sinr(1.0, ratio, 16, 16));
  }
  CHECK(v[0] > v[1]);
  CHECK(v[1] > v[2]);
  // Small root of r g^2 + (r - 1) g - N: g ~ N / (r - 1).
  CHECK(v[2] == Catch::Approx(16.0 / (1e6 - 1.0)).epsilon(1e-3));

  CHECK_THROWS_AS(theorem2_root(0.0, two, 1.0, 4), InvalidParameter);
}

TEST_CASE("theorem 2 monotonicity and scale covariance", "[sinr]") {
  const std::vector<double> pk{0.7, 1.3, 0.4};
  const double base = theorem2_root(1.0, pk, 0.5, 16);
  CHECK(theorem2_root(1.0, pk, 0.5, 17) > base);
  CHECK(theorem2_root(1.1, pk, 0.5, 16) > base);
  CHECK(theorem2_root(1.0, pk, 0.55, 16) < base);
  for (std::size_t k = 0; k < pk.size(); ++k) {
    auto bumped = pk;
    bumped[k] *= 1.1;
    CHECK(theorem2_root(1.0, bumped, 0.5, 16) < base);
  }
  for (double kappa : {1e-12, 1e-3, 7.0, 1e9}) {
    std::vector<double> scaled;
    for (double x : pk) scaled.push_back(kappa * x);
    CHECK(theorem2_root(kappa, scaled, kappa * 0.5, 16) == Catch::Approx(base).epsilon(1e-12));
  }
  // Grid over N_r and beta.
  double prev = 0.0;
  for (int n = 4; n <= 128; n += 4) {
    const double g = theorem2_root(1.0, pk, 0.5, n);
    CHECK(g > prev);
    prev = g;
  }
  prev = 1e300;
  for (double b = 0.01; b < 100.0; b *= 1.5) {
    const double g = theorem2_root(1.0, pk, b, 16);
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("fixed point agrees with theorem 2 on i.i.d. inputs", "[sinr]") {
  Rng rng(6);
  for (int t = 0; t < 100; ++t) {
    const int K = 1 + static_cast<int>(rng.uniform() * 10);
    const int n = 2 * K + static_cast<int>(rng.uniform() * (129 - 2 * K));
    const double phi = 0.1 + rng.uniform();
    std::vector<double> pk;
    for (int k = 1; k < K; ++k) pk.push_back(0.1 + rng.uniform());
    const double beta = 0.05 + rng.uniform();
    const auto fp = det_equiv_general(iid_family(n, phi, pk, beta), 1e-12);
    CHECK(fp.gamma == Catch::Approx(theorem2_root(phi, pk, beta, n)).epsilon(1e-8));
  }
  // No interferers: tr(Phi beta^-1).
  const auto k1 = det_equiv_general(iid_family(6, 0.5, {}, 0.25));
  CHECK(k1.gamma == Catch::Approx(12.0).epsilon(1e-14));
  CHECK(k1.state.iterations == 0);
}

TEST_CASE("fixed point on correlated users", "[sinr]") {
  Rng rng(7);
  const Instance inst = testutil::random_instance(12, 4, rng);
  const auto fam = PhiFamily::from_model(*inst.model);
  const auto plain = det_equiv_general(fam, 1e-12);
  const auto damped = det_equiv_general(fam, 1e-12, 2000, 0.5);
  CHECK(damped.gamma == Catch::Approx(plain.gamma).epsilon(1e-9));
  CHECK(plain.state.residual <= 1e-12);
  CHECK_THROWS_AS(det_equiv_general(fam, 1e-14, 1), NoConvergence);
  CHECK_THROWS_AS(det_equiv_general(fam, 1e-10, 10, 0.0), InvalidParameter);
}

TEST_CASE("deterministic equivalent tracks the Monte Carlo mean", "[sinr][mc]") {
  Rng rng(8);
  const int n = 32, K = 4;
  const SystemConfig cfg = testutil::unit_config(K, n, 0.5, 0.5);
  std::vector<MatrixUserParams> users(K, testutil::iid_user(n, 0.9, 1.0, 1.0, 1.0));
  auto model = std::make_shared<const ReceiverModel>(ReceiverModel::build(users, cfg));
  const auto fp = det_equiv_general(PhiFamily::from_model(*model));
  std::vector<double> g;
  for (int t = 0; t < 4000; ++t) g.push_back(instantaneous_sinr(ReceiverInputs(model, draw_zeta(users, cfg, rng))));
  const auto ms = testutil::mean_se(g);
  // Finite-size bias is small against the sample spread at this size.
  CHECK(std::abs(ms.mean - fp.gamma) / fp.gamma < 0.02);
}

TEST_CASE("SINR concentrates as N_r grows", "[sinr][mc]") {
  Rng rng(9);
  std::vector<double> variances;
  for (int n : {8, 32, 128}) {
    const int K = 4;
    const SystemConfig cfg = testutil::unit_config(K, n, 0.5, 0.5);
    std::vector<MatrixUserParams> users(K, testutil::iid_user(n, 0.5, 1.0, 1.0, 1.0));
    auto model = std::make_shared<const ReceiverModel>(ReceiverModel::build(users, cfg));
    const double gbar = det_equiv_general(PhiFamily::from_model(*model)).gamma;
    std::vector<double> ratio;
    for (int t = 0; t < 400; ++t) {
      ratio.push_back(instantaneous_sinr(ReceiverInputs(model, draw_zeta(users, cfg, rng))) / gbar);
    }
    const auto ms = testutil::mean_se(ratio);
    variances.push_back(ms.se * ms.se * 400.0);
  }
  CHECK(variances[0] > variances[1]);
  CHECK(variances[1] > variances[2]);
}

TEST_CASE("dyad moments", "[sinr][rmt]") {
  Rng rng(10);
  const std::vector<double> lam4(4, 1.0), lam64(64, 1.0);
  const std::vector<double> mixed{0.2, 1.0, 3.0, 0.8, 1.5};
  const auto r1 = dyad_moment_oracle(mixed, 1, 100000, rng);
  CHECK(std::abs(r1.value - 1.3) < 3 * r1.std_error);
  const auto r24 = dyad_moment_oracle(lam4, 2, 100000, rng);
  CHECK(std::abs(r24.value - 1.25) < 3 * r24.std_error);
  const auto r264 = dyad_moment_oracle(lam64, 2, 100000, rng);
  CHECK(std::abs(r264.value - 65.0 / 64.0) < 3 * r264.std_error);
  CHECK(std::abs(r264.value - 1.0) < std::abs(r24.value - 1.0));
  CHECK_THROWS_AS(dyad_moment_oracle(lam4, 4, 100, rng), InvalidParameter);
}

TEST_CASE("empirical Stieltjes transform", "[sinr][rmt]") {
  const double one[] = {1.0};
  CHECK(empirical_stieltjes(one, -1.0) == Catch::Approx(0.5));
  const std::vector<double> zeros(10, 0.0);
  CHECK(empirical_stieltjes(zeros, -4.0) == Catch::Approx(0.25));
  CHECK_THROWS_AS(empirical_stieltjes(one, 1.0), PoleProximity);

  // Spectra of sampled v v^H, v ~ CN(0, I/n): n - 1 zeros and omega ~ Gamma(n, 1/n).
  // E{1/(omega + beta)} = int_0^inf exp(-beta t) (1 + t/n)^-n dt.
  const int n = 64, trials = 1500;
  const double beta = 1.0;
  Rng rng(11);
  std::vector<double> eig;
  eig.reserve(static_cast<std::size_t>(n * trials));
  for (int t = 0; t < trials; ++t) {
    const CVector v = rng.complex_normal_vector(n, 1.0 / n);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(v * v.adjoint(), Eigen::EigenvaluesOnly);
    // Clamp roundoff so the zero eigenvalues are exact.
    for (Eigen::Index i = 0; i < n; ++i) eig.push_back(std::max(0.0, es.eigenvalues()(i)));
  }
  boost::math::quadrature::exp_sinh<double> integrator;
  const double tail = integrator.integrate(
      [&](double t) { return std::exp(-beta * t) * std::pow(1.0 + t / n, -n); });
  const double analytic = (n - 1.0) / n / beta + tail / n;
  const auto est = empirical_stieltjes_grouped(eig, -beta, static_cast<std::size_t>(n));
  CHECK(std::abs(est.value - analytic) < 3 * est.std_error);
  CHECK(est.std_error > 0.0);
}

TEST_CASE("empirical R-transform", "[sinr][rmt]") {
  // Two-point spectrum (1 - p) delta_0 + p delta_omega: w z^2 - (w omega + 1) z + (1 - p) omega = 0.
  const int n = 200;
  const double omega = 1.3, p = 1.0 / n;
  std::vector<double> eig(n, 0.0);
  eig.back() = omega;
  for (double w : {-0.1, -1.0, -5.0}) {
    const double A = w, B = -(w * omega + 1.0), C = (1.0 - p) * omega;
    const double z = (-B + std::sqrt(B * B - 4 * A * C)) / (2 * A);  // the negative root
    REQUIRE(z < 0.0);
    CHECK(empirical_r_transform(eig, w) == Catch::Approx(z - 1.0 / w).epsilon(1e-9));
    // First order in 1/n: n R(w) -> omega / (1 - omega w).
    CHECK(n * empirical_r_transform(eig, w) == Catch::Approx(omega / (1.0 - omega * w)).epsilon(5.0 / n));
  }
  // Point mass at lambda: R(w) = lambda.
  const std::vector<double> flat(20, 0.7);
  CHECK(empirical_r_transform(flat, -2.0) == Catch::Approx(0.7).epsilon(1e-9));
  CHECK_THROWS_AS(empirical_r_transform(flat, 0.5), InvalidParameter);
}
