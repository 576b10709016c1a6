#include <catch_amalgamated.hpp>

#include "armimo/channel_model.hpp"
#include "armimo/errors.hpp"
#include "armimo/estimation.hpp"
#include "helpers.hpp"

using namespace armimo;

namespace {

// Direct evaluation through the full 2N x 2N inverse.
CMatrix direct_E(const CMatrix& C, const CMatrix& A, double s) {
  const Eigen::Index n = C.rows();
  CMatrix cov(2 * n, 2 * n);
  cov << C + s * CMatrix::Identity(n, n), A * C, (A * C).adjoint(), C + s * CMatrix::Identity(n, n);
  CMatrix cross(n, 2 * n);
  cross << C, A * C;
  return cross * cov.inverse();
}

}  // namespace

TEST_CASE("scalar closed forms", "[estimation]") {
  // c = 1, s = 1, a = 0.9: denominator (c+s)^2 - a^2 c^2 = 3.19.
  const auto st = scalar_conditional(1.0, 0.9, 1.0);
  CHECK(st.e_hat == Catch::Approx(1.19 / 3.19).epsilon(1e-14));
  CHECK(std::real(st.e_check) == Catch::Approx(0.9 / 3.19).epsilon(1e-14));
  CHECK(st.e_hat == Catch::Approx(0.37304).margin(5e-6));
  CHECK(std::real(st.e_check) == Catch::Approx(0.28213).margin(5e-6));
  CHECK(st.z == Catch::Approx(0.37304).margin(5e-6));

  const auto a0 = scalar_conditional(1.0, 0.0, 1.0);
  CHECK(a0.e_hat == Catch::Approx(0.5));
  CHECK(std::abs(a0.e_check) == 0.0);
  CHECK(a0.z == Catch::Approx(0.5));

  const auto s0 = scalar_conditional(2.0, 0.7, 0.0);
  CHECK(s0.e_hat == Catch::Approx(1.0));
  CHECK(std::abs(s0.e_check) == 0.0);
  CHECK(s0.z == Catch::Approx(0.0).margin(1e-15));

  CHECK_THROWS_AS(scalar_conditional(1.0, 1.0, 1.0), InvalidParameter);
}

TEST_CASE("matrix form agrees with the scalar form and the direct inverse", "[estimation]") {
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const double c = 0.1 + 3.0 * rng.uniform();
    const double a = 0.99 * rng.uniform();
    const double s = 0.01 + 5.0 * rng.uniform();
    const int n = 3;
    const CMatrix I = CMatrix::Identity(n, n);
    const auto m = conditional_matrices(c * I, a * I, s);
    const auto sc = scalar_conditional(c, a, s);
    CHECK((m.E.leftCols(n) - sc.e_hat * I).norm() < 1e-12);
    CHECK((m.E.rightCols(n) - sc.e_check * I).norm() < 1e-12);
    CHECK((m.Z - sc.z * I).norm() < 1e-12 * c);
  }
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = testutil::correlated_user(4, rng);
    const double s = 0.05 + rng.uniform();
    const auto m = conditional_matrices(u.C, u.A, s);
    const CMatrix E = direct_E(u.C, u.A, s);
    CHECK((m.E - E).norm() < 1e-10 * E.norm());
    // R_mmse = E Cov(zeta) E^H and Z = C - R_mmse.
    const CMatrix R = m.E * m.zeta_covariance() * m.E.adjoint();
    CHECK((m.R_mmse - R).norm() < 1e-12 * u.C.norm());
    CHECK((m.Z - (u.C - m.R_mmse)).norm() < 1e-12 * u.C.norm());
    Eigen::SelfAdjointEigenSolver<CMatrix> ez(m.Z), er(m.R_mmse), ed(u.C - m.R_mmse);
    CHECK(ez.eigenvalues().minCoeff() > -1e-12);
    CHECK(er.eigenvalues().minCoeff() > -1e-12);
    CHECK(ed.eigenvalues().minCoeff() > -1e-12);
  }
}

TEST_CASE("limits: block fading and perfect observation", "[estimation]") {
  Rng rng(23);
  const auto u = testutil::correlated_user(3, rng);
  const double s = 0.4;
  const auto blk = conditional_matrices(u.C, CMatrix::Zero(3, 3), s);
  const auto mem = memoryless_stats(u.C, s);
  CHECK((blk.E.leftCols(3) - mem.W).norm() < 1e-12);
  CHECK(blk.E.rightCols(3).norm() < 1e-12);
  CHECK((blk.Z - mem.Q).norm() < 1e-12);

  const CVector y_t = rng.complex_normal_vector(3);
  const CVector y_tm1 = rng.complex_normal_vector(3);
  CHECK((mmse_estimate(y_t, y_tm1, blk) - memoryless_estimate(y_t, u.C, s)).norm() < 1e-12);

  // C = I, s = 1: W = I/2, Q = I/2.
  const auto half = memoryless_stats(CMatrix::Identity(2, 2), 1.0);
  CHECK((half.W - 0.5 * CMatrix::Identity(2, 2)).norm() < 1e-15);
  CHECK((half.Q - 0.5 * CMatrix::Identity(2, 2)).norm() < 1e-15);

  // s = 0 reproduces the channel.
  const Ar1Process proc(u.A, u.C);
  const auto pair = proc.draw_pair(rng);
  const auto perfect = conditional_matrices(u.C, u.A, 0.0);
  CHECK((mmse_estimate(pair.h_t, pair.h_tm1, perfect) - pair.h_t).norm() < 1e-9 * pair.h_t.norm());
  CHECK(perfect.Z.norm() < 1e-9);
  CHECK((memoryless_estimate(pair.h_t, u.C, 0.0) - pair.h_t).norm() == 0.0);
}

TEST_CASE("scalar statistics are monotone in the pilot noise", "[estimation]") {
  for (double a : {0.0, 0.3, 0.9, 0.99}) {
    double prev_e = 2.0, prev_z = -1.0;
    for (int i = 1; i <= 400; ++i) {
      const double s = 1e-3 * std::pow(1.03, i);
      const auto st = scalar_conditional(1.3, a, s);
      CHECK(st.e_hat < prev_e);
      CHECK(st.z > prev_z);
      CHECK(st.z >= 0.0);
      CHECK(st.z <= 1.3);
      prev_e = st.e_hat;
      prev_z = st.z;
    }
  }
}

TEST_CASE("MMSE estimate covariance and orthogonality", "[estimation][mc]") {
  Rng rng(99);
  const auto u = testutil::correlated_user(2, rng);
  const SystemConfig cfg{1, 2, 1, 1, 10.0, 0.5, 0.5};
  const double s = u.pilot_noise(cfg);
  const auto st = conditional_matrices(u.C, u.A, s);
  const Ar1Process proc(u.A, u.C);

  const int n = 100000;
  // Entry (i, j) of each sample product, real and imaginary parts separately.
  std::vector<std::vector<double>> cov(8, std::vector<double>(n)), orth(8, std::vector<double>(n));
  for (int t = 0; t < n; ++t) {
    const auto pair = proc.draw_pair(rng);
    const CVector yt = received_pilot(pair.h_t, u.alpha, u.p_p, cfg, rng);
    const CVector ym = received_pilot(pair.h_tm1, u.alpha, u.p_p, cfg, rng);
    const CVector hh = mmse_estimate(yt, ym, st);
    const CVector err = pair.h_t - hh;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const Complex c = hh(i) * std::conj(hh(j));
        const Complex o = err(i) * std::conj(hh(j));
        cov[2 * (2 * i + j)][t] = c.real();
        cov[2 * (2 * i + j) + 1][t] = c.imag();
        orth[2 * (2 * i + j)][t] = o.real();
        orth[2 * (2 * i + j) + 1][t] = o.imag();
      }
    }
  }
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const int idx = 2 * (2 * i + j);
      const auto re = testutil::mean_se(cov[idx]);
      const auto im = testutil::mean_se(cov[idx + 1]);
      CHECK(std::abs(re.mean - st.R_mmse(i, j).real()) < 3 * re.se);
      CHECK(std::abs(im.mean - st.R_mmse(i, j).imag()) < 3 * im.se + 1e-15);
      const auto ore = testutil::mean_se(orth[idx]);
      const auto oim = testutil::mean_se(orth[idx + 1]);
      CHECK(std::abs(ore.mean) < 3 * ore.se);
      CHECK(std::abs(oim.mean) < 3 * oim.se + 1e-15);
    }
  }
}

TEST_CASE("estimation input validation", "[estimation]") {
  CHECK_THROWS_AS(conditional_matrices(CMatrix::Identity(2, 2), CMatrix::Identity(3, 3), 1.0),
                  DimensionMismatch);
  CHECK_THROWS_AS(conditional_matrices(CMatrix::Identity(2, 2), CMatrix::Zero(2, 2), -1.0),
                  InvalidParameter);
  CHECK_THROWS_AS(stack_observations(CVector::Zero(2), CVector::Zero(3)), DimensionMismatch);
}
