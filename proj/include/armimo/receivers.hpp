#pragma once

// Linear uplink receivers for the tagged user (index 0): the AR-aware MU-MIMO
// MMSE receiver G* = b^H J^-1 and the baselines it is compared against.

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "armimo/channel_model.hpp"
#include "armimo/estimation.hpp"
#include "armimo/types.hpp"

namespace armimo {

enum class ReceiverKind {
  Naive,
  ConventionalCov,
  ArAwareCov,
  ConventionalInst,
  Mrc1,
  Mrc2,
  Mrc3,
  Proposed,
  ProposedPerfectCsi,
};

inline constexpr ReceiverKind kAllReceiverKinds[] = {
    ReceiverKind::Naive,    ReceiverKind::ConventionalCov, ReceiverKind::ArAwareCov,
    ReceiverKind::ConventionalInst, ReceiverKind::Mrc1,    ReceiverKind::Mrc2,
    ReceiverKind::Mrc3,     ReceiverKind::Proposed,        ReceiverKind::ProposedPerfectCsi,
};

std::string_view receiver_name(ReceiverKind kind);
// Throws ConfigError for unknown names.
ReceiverKind parse_receiver(std::string_view name);

struct Receiver {
  CRowVector g;
  ReceiverKind kind = ReceiverKind::Proposed;
};

// Per-user statistics the receiver believes in, shared by every trial of a
// sweep point.
struct UserModel {
  double alpha = 1.0;
  double p = 0.0;
  ConditionalStats cond;
  MemorylessStats mem;

  double gain() const { return alpha * alpha * p; }
};

struct ReceiverModel {
  std::vector<std::shared_ptr<const UserModel>> users;
  double sigma_d2 = 0.0;
  CMatrix beta;        // sum_k gain_k Z_k + sigma_d2 I
  CMatrix beta_mem;    // sum_k gain_k Q_k + sigma_d2 I
  CMatrix cov_interf;  // sum_{k>=2} gain_k C_k + sigma_d2 I
  // Constant parts of the covariance-based receivers, inverted once so those
  // receivers reduce to a rank-1 update per slot. Empty if singular.
  CMatrix ar_cov_inv;    // (gain_1 Z_1 + cov_interf)^-1
  CMatrix conv_cov_inv;  // (gain_1 Q_1 + cov_interf)^-1

  static ReceiverModel build(const std::vector<MatrixUserParams>& users,
                             const SystemConfig& cfg);
  Eigen::Index dim() const { return beta.rows(); }
  std::size_t user_count() const { return users.size(); }
};

// Observations of one data slot: stacked pilot statistics zeta_k of every user,
// with the derived estimates cached.
class ReceiverInputs {
 public:
  ReceiverInputs(std::shared_ptr<const ReceiverModel> model, std::vector<CVector> zeta);

  const ReceiverModel& model() const { return *model_; }
  const UserModel& user(std::size_t k) const { return *model_->users[k]; }
  std::size_t user_count() const { return zeta_.size(); }
  double sigma_d2() const { return model_->sigma_d2; }

  const CVector& zeta(std::size_t k) const { return zeta_[k]; }
  // E_k zeta_k
  const CVector& mmse_mean(std::size_t k) const { return mean_[k]; }
  // W_k y_k(t)
  const CVector& memoryless(std::size_t k) const { return mem_[k]; }

 private:
  std::shared_ptr<const ReceiverModel> model_;
  std::vector<CVector> zeta_;
  std::vector<CVector> mean_;
  std::vector<CVector> mem_;
};

struct NormalEquations {
  CVector b;
  CMatrix J;
};

// b = alpha sqrt(P) E zeta (tagged user),
// J = sum_k gain_k (E_k zeta_k zeta_k^H E_k^H + Z_k) + sigma_d2 I.
NormalEquations build_b_J(const ReceiverInputs& in);

// Throws SolveFailure when the normal-equation residual exceeds 1e-8 ||b||.
Receiver g_proposed(const ReceiverInputs& in);

// Single-user form alpha sqrt(P) h^H (alpha^2 P h h^H + sigma_d2 I)^-1.
Receiver g_naive(const CVector& h_hat, double alpha, double p, double sigma_d2);

// Block-fading MU-MIMO MMSE on memoryless estimates of all users, regularized by
// their error covariances Q_k (dropped when force_zero_q).
Receiver g_conventional_inst(const ReceiverInputs& in, bool force_zero_q = false);

// Two-lag estimate for the tagged user, interferers through their covariances.
Receiver g_ar_aware_cov(const ReceiverInputs& in);

// Memoryless estimate for the tagged user, interferers through their covariances.
Receiver g_conventional_cov(const ReceiverInputs& in);

// v^H / ||v||^2 with v the memoryless estimate (1), the two-lag estimate (2) or
// its one-step AR prediction A E zeta (3). Throws ZeroVector.
Receiver g_mrc(const ReceiverInputs& in, int variant);

// G* built on the true channels (Z = 0).
Receiver g_perfect_csi(const std::vector<CVector>& channels, std::span<const double> gains,
                       double sigma_d2);

// Dispatch by kind. ProposedPerfectCsi needs the true channels.
Receiver build_receiver(ReceiverKind kind, const ReceiverInputs& in,
                        const std::vector<CVector>* true_channels = nullptr);

Complex estimate_symbol(const Receiver& g, const CVector& y);

// E{|G y - x|^2 | zeta} = 1 - 2 Re(alpha sqrt(P) G E zeta) + G J G^H.
double conditional_mse(const CRowVector& g, const ReceiverInputs& in);

// SINR of any combiner g when h_k | zeta_k ~ CN(E_k zeta_k, Z_k) under the
// statistics held by `truth`:
//   gain_1 |g m_1|^2 / (sum_{k>=2} gain_k |g m_k|^2 + g beta g^H).
// For g = G* this is the instantaneous SINR.
double conditional_sinr(const CRowVector& g, const ReceiverInputs& truth);

// Same ratio with the channels known exactly (Z_k = 0).
double genie_sinr(const CRowVector& g, const std::vector<CVector>& channels,
                  std::span<const double> gains, double sigma_d2);

}  // namespace armimo
