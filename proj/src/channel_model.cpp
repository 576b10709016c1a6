#include "armimo/channel_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "armimo/errors.hpp"
#include "armimo/kernels.hpp"

namespace armimo {

void SystemConfig::validate() const {
  if (K < 1 || n_r < 1 || tau_p < 1 || tau_d < 1) {
    throw InvalidParameter("K, N_r, tau_p and tau_d must all be >= 1");
  }
  if (!(p_tot > 0.0)) throw InvalidParameter("P_tot must be > 0");
  if (!(sigma_p2 >= 0.0) || !(sigma_d2 >= 0.0)) {
    throw InvalidParameter("noise variances must be >= 0");
  }
}

std::vector<std::string> SystemConfig::warnings() const {
  std::vector<std::string> out;
  if (K > tau_p) {
    std::ostringstream msg;
    msg << "K=" << K << " exceeds tau_p=" << tau_p
        << "; pilots are modeled as orthogonal regardless";
    out.push_back(msg.str());
  }
  return out;
}

double SystemConfig::data_power(double p_p) const {
  const double limit = p_tot / tau_p;
  if (!(p_p > 0.0) || !(p_p < limit)) {
    std::ostringstream msg;
    msg << "pilot power " << p_p << " outside (0, " << limit << ")";
    throw OutOfDomain(msg.str());
  }
  return (p_tot - tau_p * p_p) / tau_d;
}

double alpha_from_db(double loss_db) { return std::pow(10.0, -loss_db / 20.0); }

UserParams UserParams::from_budget(double alpha, Complex a, double c, double p_p,
                                   const SystemConfig& cfg) {
  UserParams u{alpha, a, c, p_p, cfg.data_power(p_p)};
  u.validate();
  return u;
}

void UserParams::validate() const {
  if (!(alpha > 0.0)) throw InvalidParameter("alpha must be > 0");
  if (!(std::abs(a) < 1.0)) throw InvalidParameter("|a| must be < 1 for stationarity");
  if (!(c > 0.0)) throw InvalidParameter("c must be > 0");
  if (!(p_p > 0.0) || !(p > 0.0)) throw InvalidParameter("pilot and data powers must be > 0");
}

double UserParams::pilot_noise(const SystemConfig& cfg) const {
  return cfg.sigma_p2 / (alpha * alpha * p_p * cfg.tau_p);
}

MatrixUserParams MatrixUserParams::from_scalar(const UserParams& u, int n_r) {
  const CMatrix eye = CMatrix::Identity(n_r, n_r);
  return {u.alpha, u.a * eye, u.c * eye, u.p_p, u.p};
}

void MatrixUserParams::validate() const {
  if (A.rows() != A.cols() || C.rows() != C.cols() || A.rows() != C.rows()) {
    throw DimensionMismatch("A and C must be square and of equal size");
  }
  if (!(alpha > 0.0)) throw InvalidParameter("alpha must be > 0");
  if (!(p_p > 0.0) || !(p > 0.0)) throw InvalidParameter("pilot and data powers must be > 0");
  Eigen::ComplexEigenSolver<CMatrix> eig(A, false);
  if (eig.eigenvalues().cwiseAbs().maxCoeff() >= 1.0) {
    throw InvalidParameter("spectral radius of A must be < 1");
  }
  if ((C - C.adjoint()).norm() > 1e-10 * (1.0 + C.norm())) {
    throw NotPSD("C is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> ceig(C, Eigen::EigenvaluesOnly);
  if (ceig.eigenvalues().minCoeff() < -1e-10 * std::abs(C.trace())) {
    throw NotPSD("C has a negative eigenvalue");
  }
  process_noise_cov(C, A);
}

double MatrixUserParams::pilot_noise(const SystemConfig& cfg) const {
  return cfg.sigma_p2 / (alpha * alpha * p_p * cfg.tau_p);
}

CMatrix process_noise_cov(const CMatrix& C, const CMatrix& A) {
  if (A.rows() != A.cols() || C.rows() != C.cols() || A.cols() != C.rows()) {
    throw DimensionMismatch("process_noise_cov: A and C must be conformable squares");
  }
  const CMatrix theta = hermitian_part(C - A * C * A.adjoint());
  if (theta.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(theta, Eigen::EigenvaluesOnly);
    const double floor = -1e-10 * std::abs(C.trace());
    if (eig.eigenvalues().minCoeff() < floor) {
      throw NotPSD("Theta = C - A C A^H has a negative eigenvalue; (A, C) is not stationary");
    }
  }
  return theta;
}

GaussianFactor::GaussianFactor(const CMatrix& C) : n_(C.rows()) {
  if (C.rows() != C.cols()) throw DimensionMismatch("covariance must be square");
  const double tol = 1e-10 * std::max(1.0, std::abs(C.trace()));
  const CMatrix off = C - CMatrix(C.diagonal().asDiagonal());
  if (off.norm() == 0.0) {
    diagonal_ = true;
    diag_sqrt_.resize(n_);
    for (Eigen::Index i = 0; i < n_; ++i) {
      const double d = C(i, i).real();
      if (d < -tol || std::abs(C(i, i).imag()) > tol) throw NotPSD("diagonal covariance entry < 0");
      diag_sqrt_(i) = std::sqrt(std::max(d, 0.0));
    }
    return;
  }
  if ((C - C.adjoint()).norm() > tol) throw NotPSD("covariance is not Hermitian");
  Eigen::LDLT<CMatrix> ldlt(C);
  if (ldlt.info() != Eigen::Success) throw NotPSD("pivoted Cholesky failed");
  const Eigen::VectorXd d = ldlt.vectorD().real();
  if (d.size() > 0 && d.minCoeff() < -tol) throw NotPSD("covariance has a negative pivot");
  const RVector root = d.cwiseMax(0.0).cwiseSqrt();
  const CMatrix lower = ldlt.matrixL();
  CMatrix scaled = lower * root.cast<Complex>().asDiagonal();
  factor_ = ldlt.transpositionsP().transpose() * scaled;
}

void GaussianFactor::apply(const CVector& white, CVector& out) const {
  if (diagonal_) {
    out = diag_sqrt_.cast<Complex>().cwiseProduct(white);
  } else {
    out.noalias() = factor_ * white;
  }
}

CVector GaussianFactor::sample(Rng& rng) const {
  const CVector white = rng.complex_normal_vector(n_);
  CVector out(n_);
  apply(white, out);
  return out;
}

CVector sample_stationary(const CMatrix& C, Rng& rng) { return GaussianFactor(C).sample(rng); }

CVector ar1_step(const CVector& h_prev, const CMatrix& A, const CMatrix& Theta, Rng& rng) {
  if (A.cols() != h_prev.size() || A.rows() != Theta.rows() || Theta.rows() != Theta.cols()) {
    throw DimensionMismatch("ar1_step: A, Theta and h_prev are not conformable");
  }
  CVector out = A * h_prev;
  out += GaussianFactor(Theta).sample(rng);
  return out;
}

Ar1Process::Ar1Process(const CMatrix& A, const CMatrix& C)
    : A_(A), theta_(process_noise_cov(C, A)), stationary_(C), innovation_(theta_) {
  const Complex a00 = A.rows() > 0 ? A(0, 0) : Complex(0.0);
  const CMatrix residual = A - a00 * CMatrix::Identity(A.rows(), A.cols());
  if (residual.norm() == 0.0 && a00.imag() == 0.0) scalar_a_ = a00.real();
}

CVector Ar1Process::step(const CVector& h_prev, Rng& rng) const {
  CVector noise = innovation_.sample(rng);
  if (scalar_a_) {
    CVector out(h_prev.size());
    kernels::scale_add(as_span(out), *scalar_a_, as_span(h_prev), 1.0, as_span(noise));
    return out;
  }
  CVector out = A_ * h_prev;
  out += noise;
  return out;
}

ChannelState Ar1Process::draw_pair(Rng& rng) const {
  ChannelState s;
  s.h_tm1 = stationary(rng);
  s.h_t = step(s.h_tm1, rng);
  return s;
}

CVector received_pilot(const CVector& h, double alpha, double p_p, const SystemConfig& cfg,
                       Rng& rng) {
  if (!(alpha > 0.0) || !(p_p > 0.0)) throw OutOfDomain("pilot power and alpha must be > 0");
  const double s = cfg.sigma_p2 / (alpha * alpha * p_p * cfg.tau_p);
  if (s == 0.0) return h;
  CVector out(h.size());
  const CVector noise = rng.complex_normal_vector(h.size());
  kernels::scale_add(as_span(out), 1.0, as_span(h), std::sqrt(s), as_span(noise));
  return out;
}

CVector received_pilot(const CVector& h, const UserParams& user, const SystemConfig& cfg,
                       Rng& rng) {
  return received_pilot(h, user.alpha, user.p_p, cfg, rng);
}

CVector received_data(const CMatrix& H, std::span<const double> alphas,
                      std::span<const double> powers, const CVector& x,
                      const SystemConfig& cfg, Rng& rng) {
  const auto k = static_cast<std::size_t>(H.cols());
  if (alphas.size() != k || powers.size() != k || static_cast<std::size_t>(x.size()) != k) {
    throw DimensionMismatch("received_data: H columns, user list and symbols differ in size");
  }
  CVector y = rng.complex_normal_vector(H.rows(), cfg.sigma_d2);
  for (std::size_t i = 0; i < k; ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    y += (alphas[i] * std::sqrt(powers[i]) * x(col)) * H.col(col);
  }
  return y;
}

CVector received_data(const CMatrix& H, const std::vector<UserParams>& users, const CVector& x,
                      const SystemConfig& cfg, Rng& rng) {
  std::vector<double> alphas, powers;
  for (const auto& u : users) {
    alphas.push_back(u.alpha);
    powers.push_back(u.p);
  }
  return received_data(H, alphas, powers, x, cfg, rng);
}

Complex qpsk_symbol(Rng& rng) {
  const double r = std::numbers::sqrt2 / 2.0;
  const auto bits = rng.engine()() >> 62;
  return {(bits & 1U) ? r : -r, (bits & 2U) ? r : -r};
}

}  // namespace armimo
