#pragma once

// AR(1) Rayleigh-fading channel trajectories and the de-spread pilot / data
// observations of a single-cell uplink with single-antenna users.

#include <optional>
#include <string>
#include <vector>

#include "armimo/rng.hpp"
#include "armimo/types.hpp"

namespace armimo {

struct SystemConfig {
  int K = 1;         // users
  int n_r = 1;       // receive antennas
  int tau_p = 1;     // pilot symbols per block
  int tau_d = 1;     // data symbols per block
  double p_tot = 0;  // per-user energy budget per block (mW)
  double sigma_p2 = 0;
  double sigma_d2 = 0;

  // Throws InvalidParameter.
  void validate() const;
  // Non-fatal findings, e.g. more users than orthogonal pilots.
  std::vector<std::string> warnings() const;
  // Data power left after spending p_p per pilot symbol; throws OutOfDomain
  // unless 0 < p_p < p_tot / tau_p.
  double data_power(double p_p) const;
};

// Path loss given in dB (positive attenuation) -> amplitude alpha.
double alpha_from_db(double loss_db);

// i.i.d. per-antenna user: A = a I, C = c I.
struct UserParams {
  double alpha = 1.0;
  Complex a{0.0, 0.0};
  double c = 1.0;
  double p_p = 0.0;
  double p = 0.0;

  // Builds a user whose data power is the remainder of the budget.
  static UserParams from_budget(double alpha, Complex a, double c, double p_p,
                                const SystemConfig& cfg);
  void validate() const;
  // Per-entry variance s of the de-spread pilot noise.
  double pilot_noise(const SystemConfig& cfg) const;
};

struct MatrixUserParams {
  double alpha = 1.0;
  CMatrix A;
  CMatrix C;
  double p_p = 0.0;
  double p = 0.0;

  static MatrixUserParams from_scalar(const UserParams& u, int n_r);
  // Spectral radius of A < 1, C Hermitian PSD, Theta PSD; throws NotPSD /
  // InvalidParameter.
  void validate() const;
  double pilot_noise(const SystemConfig& cfg) const;
  Eigen::Index dim() const { return C.rows(); }
};

struct ChannelState {
  CVector h_t;
  CVector h_tm1;
};

struct PilotObservation {
  CVector y_t;
  CVector y_tm1;
};

// Theta = C - A C A^H, symmetrized. Throws NotPSD when an eigenvalue falls below
// -1e-10 * trace(C), i.e. the (A, C) pair is not stationary.
CMatrix process_noise_cov(const CMatrix& C, const CMatrix& A);

// Square-root factor L with L L^H = C for a Hermitian PSD C. Diagonal
// covariances keep only the diagonal so sampling is O(n).
class GaussianFactor {
 public:
  GaussianFactor() = default;
  explicit GaussianFactor(const CMatrix& C);

  CVector sample(Rng& rng) const;
  // out = L * w for a given white vector w.
  void apply(const CVector& white, CVector& out) const;
  Eigen::Index dim() const { return n_; }

 private:
  Eigen::Index n_ = 0;
  bool diagonal_ = false;
  RVector diag_sqrt_;
  CMatrix factor_;
};

// h ~ CN(0, C). Throws NotPSD.
CVector sample_stationary(const CMatrix& C, Rng& rng);

// h(t) = A h(t-1) + theta, theta ~ CN(0, Theta).
CVector ar1_step(const CVector& h_prev, const CMatrix& A, const CMatrix& Theta, Rng& rng);

// Precomputed AR(1) generator for repeated trajectories of one user.
class Ar1Process {
 public:
  Ar1Process(const CMatrix& A, const CMatrix& C);

  CVector stationary(Rng& rng) const { return stationary_.sample(rng); }
  CVector step(const CVector& h_prev, Rng& rng) const;
  ChannelState draw_pair(Rng& rng) const;

  const CMatrix& theta() const { return theta_; }

 private:
  CMatrix A_;
  CMatrix theta_;
  GaussianFactor stationary_;
  GaussianFactor innovation_;
  std::optional<double> scalar_a_;  // set when A is a real multiple of I
};

// De-spread pilot statistic h + w, w ~ CN(0, s I), s = sigma_p2 / (alpha^2 P_p tau_p).
CVector received_pilot(const CVector& h, double alpha, double p_p, const SystemConfig& cfg,
                       Rng& rng);
CVector received_pilot(const CVector& h, const UserParams& user, const SystemConfig& cfg,
                       Rng& rng);

// y = sum_k alpha_k sqrt(P_k) h_k x_k + n_d, n_d ~ CN(0, sigma_d2 I).
CVector received_data(const CMatrix& H, std::span<const double> alphas,
                      std::span<const double> powers, const CVector& x,
                      const SystemConfig& cfg, Rng& rng);
CVector received_data(const CMatrix& H, const std::vector<UserParams>& users, const CVector& x,
                      const SystemConfig& cfg, Rng& rng);

// Unit-modulus QPSK symbol drawn uniformly.
Complex qpsk_symbol(Rng& rng);

}  // namespace armimo
