#include "armimo/receivers.hpp"

#include <array>
#include <cmath>
#include <string>

#include "armimo/errors.hpp"
#include "armimo/kernels.hpp"

namespace armimo {
namespace {

constexpr std::array<std::string_view, 9> kNames = {
    "naive", "conventional_cov", "ar_aware_cov", "conventional_inst", "mrc1",
    "mrc2",  "mrc3",             "proposed",     "proposed_perfect_csi",
};

// Empty when singular; only the receiver that needs it reports the failure.
CMatrix try_spd_inverse(const CMatrix& m) {
  Eigen::LLT<CMatrix> llt(hermitian_part(m));
  if (llt.info() != Eigen::Success) return {};
  return llt.solve(CMatrix::Identity(m.rows(), m.cols()));
}

const CMatrix& require_inverse(const CMatrix& inv, const char* what) {
  if (inv.size() == 0) throw SolveFailure(std::string(what) + " is not positive definite");
  return inv;
}

// sqrt(w) v^H (X + w v v^H)^-1 given X^-1, by Sherman-Morrison.
CRowVector rank1_mmse(const CMatrix& x_inv, const CVector& v, double w) {
  const CVector xv = x_inv * v;
  const double q = kernels::dotc(as_span(v), as_span(xv)).real();
  return (std::sqrt(w) / (1.0 + w * q)) * xv.adjoint();
}

// sqrt(w0) v_0^H (base + sum_k w_k v_k v_k^H)^-1 by a direct Hermitian solve.
CRowVector direct_mmse(CMatrix J, const std::vector<const CVector*>& vs,
                       std::span<const double> w) {
  const auto n = static_cast<std::size_t>(J.rows());
  for (std::size_t k = 0; k < vs.size(); ++k) {
    kernels::her_rank1(as_flat(J), n, w[k], as_span(*vs[k]));
  }
  Eigen::LLT<CMatrix> llt(J);
  if (llt.info() != Eigen::Success) throw SolveFailure("interference-plus-noise matrix is singular");
  const CVector x = llt.solve(*vs[0]);
  return std::sqrt(w[0]) * x.adjoint();
}

std::vector<double> gains_of(const ReceiverInputs& in) {
  std::vector<double> g(in.user_count());
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = in.user(k).gain();
  return g;
}

void require_users(const ReceiverInputs& in) {
  if (in.user_count() == 0) throw DimensionMismatch("receiver needs at least the tagged user");
}

}  // namespace

std::string_view receiver_name(ReceiverKind kind) { return kNames[static_cast<std::size_t>(kind)]; }

ReceiverKind parse_receiver(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<ReceiverKind>(i);
  }
  throw ConfigError("unknown receiver '" + std::string(name) + "'");
}

ReceiverModel ReceiverModel::build(const std::vector<MatrixUserParams>& users,
                                   const SystemConfig& cfg) {
  if (users.empty()) throw DimensionMismatch("no users");
  const Eigen::Index n = users.front().dim();
  ReceiverModel m;
  m.sigma_d2 = cfg.sigma_d2;
  const CMatrix noise = cfg.sigma_d2 * CMatrix::Identity(n, n);
  m.beta = noise;
  m.beta_mem = noise;
  m.cov_interf = noise;
  for (std::size_t k = 0; k < users.size(); ++k) {
    const auto& u = users[k];
    if (u.dim() != n) throw DimensionMismatch("users have different antenna counts");
    auto um = std::make_shared<UserModel>();
    um->alpha = u.alpha;
    um->p = u.p;
    const double s = u.pilot_noise(cfg);
    um->cond = conditional_matrices(u.C, u.A, s);
    um->mem = memoryless_stats(u.C, s);
    const double g = um->gain();
    m.beta += g * um->cond.Z;
    m.beta_mem += g * um->mem.Q;
    if (k > 0) m.cov_interf += g * u.C;
    m.users.push_back(std::move(um));
  }
  const UserModel& tagged = *m.users.front();
  m.ar_cov_inv = try_spd_inverse(m.cov_interf + tagged.gain() * tagged.cond.Z);
  m.conv_cov_inv = try_spd_inverse(m.cov_interf + tagged.gain() * tagged.mem.Q);
  return m;
}

ReceiverInputs::ReceiverInputs(std::shared_ptr<const ReceiverModel> model, std::vector<CVector> zeta)
    : model_(std::move(model)), zeta_(std::move(zeta)) {
  if (zeta_.size() != model_->user_count()) {
    throw DimensionMismatch("one stacked observation per user required");
  }
  const Eigen::Index n = model_->dim();
  mean_.reserve(zeta_.size());
  mem_.reserve(zeta_.size());
  for (std::size_t k = 0; k < zeta_.size(); ++k) {
    if (zeta_[k].size() != 2 * n) throw DimensionMismatch("zeta must have length 2 N_r");
    const UserModel& u = *model_->users[k];
    mean_.push_back(u.cond.E * zeta_[k]);
    mem_.push_back(u.mem.W * zeta_[k].head(n));
  }
}

NormalEquations build_b_J(const ReceiverInputs& in) {
  require_users(in);
  NormalEquations out;
  const UserModel& tagged = in.user(0);
  out.b = (tagged.alpha * std::sqrt(tagged.p)) * in.mmse_mean(0);
  out.J = in.model().beta;
  const auto n = static_cast<std::size_t>(out.J.rows());
  for (std::size_t k = 0; k < in.user_count(); ++k) {
    kernels::her_rank1(as_flat(out.J), n, in.user(k).gain(), as_span(in.mmse_mean(k)));
  }
  return out;
}

Receiver g_proposed(const ReceiverInputs& in) {
  const NormalEquations ne = build_b_J(in);
  Eigen::LLT<CMatrix> llt(ne.J);
  if (llt.info() != Eigen::Success) throw SolveFailure("J is not positive definite");
  const CVector x = llt.solve(ne.b);
  const double residual = (ne.J * x - ne.b).norm();
  if (!x.allFinite() || residual > 1e-8 * ne.b.norm()) {
    throw SolveFailure("normal-equation residual " + std::to_string(residual) + " too large");
  }
  return {x.adjoint(), ReceiverKind::Proposed};
}

Receiver g_naive(const CVector& h_hat, double alpha, double p, double sigma_d2) {
  // Sherman-Morrison on (w h h^H + sigma_d2 I)^-1.
  const double w = alpha * alpha * p;
  const double energy = kernels::squared_norm(as_span(h_hat));
  if (energy == 0.0) return {CRowVector::Zero(h_hat.size()), ReceiverKind::Naive};
  if (!(sigma_d2 > 0.0)) {
    return {h_hat.adjoint() / (alpha * std::sqrt(p) * energy), ReceiverKind::Naive};
  }
  const double scale = alpha * std::sqrt(p) / (w * energy + sigma_d2);
  return {scale * h_hat.adjoint(), ReceiverKind::Naive};
}

Receiver g_conventional_inst(const ReceiverInputs& in, bool force_zero_q) {
  require_users(in);
  const auto w = gains_of(in);
  std::vector<const CVector*> vs;
  for (std::size_t k = 0; k < in.user_count(); ++k) vs.push_back(&in.memoryless(k));
  const Eigen::Index n = in.model().dim();
  CMatrix base = force_zero_q ? CMatrix(in.sigma_d2() * CMatrix::Identity(n, n))
                              : in.model().beta_mem;
  return {direct_mmse(std::move(base), vs, w), ReceiverKind::ConventionalInst};
}

Receiver g_ar_aware_cov(const ReceiverInputs& in) {
  require_users(in);
  return {rank1_mmse(require_inverse(in.model().ar_cov_inv, "AR-aware covariance"), in.mmse_mean(0), in.user(0).gain()),
          ReceiverKind::ArAwareCov};
}

Receiver g_conventional_cov(const ReceiverInputs& in) {
  require_users(in);
  return {rank1_mmse(require_inverse(in.model().conv_cov_inv, "block-fading covariance"), in.memoryless(0), in.user(0).gain()),
          ReceiverKind::ConventionalCov};
}

Receiver g_mrc(const ReceiverInputs& in, int variant) {
  require_users(in);
  CVector v;
  ReceiverKind kind;
  switch (variant) {
    case 1:
      v = in.memoryless(0);
      kind = ReceiverKind::Mrc1;
      break;
    case 2:
      v = in.mmse_mean(0);
      kind = ReceiverKind::Mrc2;
      break;
    case 3:
      v = in.user(0).cond.A * in.mmse_mean(0);
      kind = ReceiverKind::Mrc3;
      break;
    default:
      throw InvalidParameter("MRC variant must be 1, 2 or 3");
  }
  const double energy = kernels::squared_norm(as_span(v));
  if (!(energy > 0.0)) throw ZeroVector("MRC channel proxy is zero");
  return {v.adjoint() / energy, kind};
}

Receiver g_perfect_csi(const std::vector<CVector>& channels, std::span<const double> gains,
                       double sigma_d2) {
  if (channels.empty() || channels.size() != gains.size()) {
    throw DimensionMismatch("one gain per channel required");
  }
  const Eigen::Index n = channels.front().size();
  std::vector<const CVector*> vs;
  for (const auto& h : channels) {
    if (h.size() != n) throw DimensionMismatch("channels differ in length");
    vs.push_back(&h);
  }
  CMatrix base = sigma_d2 * CMatrix::Identity(n, n);
  return {direct_mmse(std::move(base), vs, gains), ReceiverKind::ProposedPerfectCsi};
}

Receiver build_receiver(ReceiverKind kind, const ReceiverInputs& in,
                        const std::vector<CVector>* true_channels) {
  switch (kind) {
    case ReceiverKind::Naive: {
      const UserModel& u = in.user(0);
      return g_naive(in.memoryless(0), u.alpha, u.p, in.sigma_d2());
    }
    case ReceiverKind::ConventionalCov:
      return g_conventional_cov(in);
    case ReceiverKind::ArAwareCov:
      return g_ar_aware_cov(in);
    case ReceiverKind::ConventionalInst:
      return g_conventional_inst(in);
    case ReceiverKind::Mrc1:
      return g_mrc(in, 1);
    case ReceiverKind::Mrc2:
      return g_mrc(in, 2);
    case ReceiverKind::Mrc3:
      return g_mrc(in, 3);
    case ReceiverKind::Proposed:
      return g_proposed(in);
    case ReceiverKind::ProposedPerfectCsi: {
      if (true_channels == nullptr) throw InvalidParameter("perfect-CSI receiver needs true channels");
      const auto w = gains_of(in);
      return g_perfect_csi(*true_channels, w, in.sigma_d2());
    }
  }
  throw InvalidParameter("unknown receiver kind");
}

Complex estimate_symbol(const Receiver& g, const CVector& y) {
  if (g.g.size() != y.size()) throw DimensionMismatch("receiver and observation differ in length");
  return kernels::dotu(as_span(g.g), as_span(y));
}

double conditional_mse(const CRowVector& g, const ReceiverInputs& in) {
  const NormalEquations ne = build_b_J(in);
  if (g.size() != ne.b.size()) throw DimensionMismatch("receiver length differs from N_r");
  const CVector gh = g.adjoint();
  const Complex gb = kernels::dotu(as_span(g), as_span(ne.b));
  const CVector Jg = ne.J * gh;
  const double quad = kernels::dotc(as_span(gh), as_span(Jg)).real();
  return 1.0 - 2.0 * gb.real() + quad;
}

double conditional_sinr(const CRowVector& g, const ReceiverInputs& truth) {
  require_users(truth);
  if (g.size() != truth.model().dim()) throw DimensionMismatch("receiver length differs from N_r");
  const auto gs = as_span(g);
  const double signal = truth.user(0).gain() * std::norm(kernels::dotu(gs, as_span(truth.mmse_mean(0))));
  double interference = 0.0;
  for (std::size_t k = 1; k < truth.user_count(); ++k) {
    interference += truth.user(k).gain() * std::norm(kernels::dotu(gs, as_span(truth.mmse_mean(k))));
  }
  const CVector gh = g.adjoint();
  const CVector bg = truth.model().beta * gh;
  interference += kernels::dotc(as_span(gh), as_span(bg)).real();
  if (!(interference > 0.0)) throw SolveFailure("interference-plus-noise power is not positive");
  return signal / interference;
}

double genie_sinr(const CRowVector& g, const std::vector<CVector>& channels,
                  std::span<const double> gains, double sigma_d2) {
  if (channels.empty() || channels.size() != gains.size()) {
    throw DimensionMismatch("one gain per channel required");
  }
  const auto gs = as_span(g);
  const double signal = gains[0] * std::norm(kernels::dotu(gs, as_span(channels[0])));
  double interference = sigma_d2 * kernels::squared_norm(gs);
  for (std::size_t k = 1; k < channels.size(); ++k) {
    interference += gains[k] * std::norm(kernels::dotu(gs, as_span(channels[k])));
  }
  if (!(interference > 0.0)) throw SolveFailure("interference-plus-noise power is not positive");
  return signal / interference;
}

}  // namespace armimo
