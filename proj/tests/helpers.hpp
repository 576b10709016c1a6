#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "armimo/channel_model.hpp"
#include "armimo/estimation.hpp"
#include "armimo/receivers.hpp"
#include "armimo/rng.hpp"

namespace testutil {

using namespace armimo;

inline CMatrix random_matrix(Eigen::Index r, Eigen::Index c, Rng& rng) {
  CMatrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = rng.complex_normal();
  return m;
}

inline CVector random_vector(Eigen::Index n, Rng& rng) { return rng.complex_normal_vector(n); }

// Random unitary from the QR of a Gaussian matrix.
inline CMatrix random_unitary(Eigen::Index n, Rng& rng) {
  Eigen::HouseholderQR<CMatrix> qr(random_matrix(n, n, rng));
  return qr.householderQ() * CMatrix::Identity(n, n);
}

// Correlated user: C = U diag(lambda) U^H, A = U diag(a_i) U^H with |a_i| < 1,
// so Theta = C - A C A^H stays PSD.
inline MatrixUserParams correlated_user(Eigen::Index n, Rng& rng, double alpha = 1.0) {
  const CMatrix U = random_unitary(n, rng);
  RVector lam(n);
  CVector ad(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lam(i) = 0.3 + 1.7 * rng.uniform();
    ad(i) = std::polar(0.95 * rng.uniform(), 0.5 * rng.normal());
  }
  MatrixUserParams u;
  u.alpha = alpha;
  u.C = hermitian_part(U * lam.cast<Complex>().asDiagonal() * U.adjoint());
  u.A = U * ad.asDiagonal() * U.adjoint();
  u.p_p = 0.5 + rng.uniform();
  u.p = 0.5 + rng.uniform();
  return u;
}

inline MatrixUserParams iid_user(Eigen::Index n, double a, double c, double p_p, double p,
                                 double alpha = 1.0) {
  MatrixUserParams u;
  u.alpha = alpha;
  u.A = a * CMatrix::Identity(n, n);
  u.C = c * CMatrix::Identity(n, n);
  u.p_p = p_p;
  u.p = p;
  return u;
}

inline SystemConfig unit_config(int K, int n_r, double sigma_p2 = 0.5, double sigma_d2 = 0.3) {
  return SystemConfig{K, n_r, 1, 11, 250.0, sigma_p2, sigma_d2};
}

struct Instance {
  SystemConfig cfg;
  std::vector<MatrixUserParams> users;
  std::shared_ptr<const ReceiverModel> model;
  std::vector<ChannelState> channels;
  std::vector<CVector> zeta;

  ReceiverInputs inputs() const { return ReceiverInputs(model, zeta); }
  std::vector<CVector> current_channels() const {
    std::vector<CVector> h;
    for (const auto& c : channels) h.push_back(c.h_t);
    return h;
  }
};

// Draws channels and pilot observations from the users' own model.
inline Instance draw_instance(const SystemConfig& cfg, std::vector<MatrixUserParams> users, Rng& rng) {
  Instance in;
  in.cfg = cfg;
  in.users = std::move(users);
  in.model = std::make_shared<const ReceiverModel>(ReceiverModel::build(in.users, cfg));
  for (const auto& u : in.users) {
    const Ar1Process proc(u.A, u.C);
    const ChannelState st = proc.draw_pair(rng);
    const CVector y_tm1 = received_pilot(st.h_tm1, u.alpha, u.p_p, cfg, rng);
    const CVector y_t = received_pilot(st.h_t, u.alpha, u.p_p, cfg, rng);
    in.channels.push_back(st);
    in.zeta.push_back(stack_observations(y_t, y_tm1));
  }
  return in;
}

inline Instance random_instance(int n_r, int K, Rng& rng, bool correlated = true) {
  const SystemConfig cfg = unit_config(K, n_r, 0.2 + rng.uniform(), 0.1 + rng.uniform());
  std::vector<MatrixUserParams> users;
  for (int k = 0; k < K; ++k) {
    if (correlated) {
      users.push_back(correlated_user(n_r, rng, 0.5 + rng.uniform()));
    } else {
      users.push_back(iid_user(n_r, 0.95 * rng.uniform(), 0.5 + rng.uniform(), 0.5 + rng.uniform(),
                               0.5 + rng.uniform(), 0.5 + rng.uniform()));
    }
  }
  return draw_instance(cfg, std::move(users), rng);
}

// Sample mean and its standard error.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  const double var = ss / static_cast<double>(x.size() - 1);
  return {m, std::sqrt(var / static_cast<double>(x.size()))};
}

}  // namespace testutil
