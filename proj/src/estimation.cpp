#include "armimo/estimation.hpp"

#include "armimo/errors.hpp"

namespace armimo {
namespace {

void check_inputs(const CMatrix& C, const CMatrix& A, double s) {
  if (C.rows() != C.cols() || A.rows() != A.cols() || A.rows() != C.rows()) {
    throw DimensionMismatch("conditional_matrices: A and C must be square and equal-sized");
  }
  if (!(s >= 0.0)) throw InvalidParameter("pilot noise variance s must be >= 0");
}

// X P^-1 for Hermitian positive definite P given its factorization.
CMatrix right_solve(const Eigen::LLT<CMatrix>& llt, const CMatrix& X) {
  return llt.solve(X.adjoint()).adjoint();
}

CMatrix joint_covariance(const CMatrix& C, const CMatrix& A) {
  const Eigen::Index n = C.rows();
  CMatrix M(2 * n, 2 * n);
  const CMatrix AC = A * C;
  M.topLeftCorner(n, n) = C;
  M.topRightCorner(n, n) = AC;
  M.bottomLeftCorner(n, n) = AC.adjoint();
  M.bottomRightCorner(n, n) = C;
  return M;
}

}  // namespace

CMatrix ConditionalStats::zeta_covariance() const {
  return M + s * CMatrix::Identity(M.rows(), M.cols());
}

ConditionalStats conditional_matrices(const CMatrix& C, const CMatrix& A, double s) {
  check_inputs(C, A, s);
  const Eigen::Index n = C.rows();
  ConditionalStats out;
  out.C = C;
  out.A = A;
  out.s = s;
  out.M = joint_covariance(C, A);
  const CMatrix AC = A * C;
  const CMatrix CAh = AC.adjoint();

  if (s == 0.0) {
    // Perfect observations: minimum-norm solution of E M = [C, AC].
    CMatrix rhs(n, 2 * n);
    rhs << C, AC;
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(out.M);
    out.E = cod.solve(rhs.adjoint()).adjoint();
  } else {
    const CMatrix P = C + s * CMatrix::Identity(n, n);
    Eigen::LLT<CMatrix> p_llt(P);
    if (p_llt.info() != Eigen::Success) throw SingularBlock("C + sI is not positive definite");
    const CMatrix Pinv_B = p_llt.solve(AC);
    const CMatrix schur = hermitian_part(P - AC.adjoint() * Pinv_B);
    Eigen::LLT<CMatrix> s_llt(schur);
    if (s_llt.info() != Eigen::Success) throw SingularBlock("Schur complement is singular");
    const CMatrix E2 = right_solve(s_llt, AC - C * Pinv_B);
    const CMatrix E1 = right_solve(p_llt, C - E2 * AC.adjoint());
    out.E.resize(n, 2 * n);
    out.E << E1, E2;
  }

  out.Z = hermitian_part(C - out.E.leftCols(n) * C - out.E.rightCols(n) * CAh);
  out.R_mmse = hermitian_part(C - out.Z);
  return out;
}

ScalarConditionalStats scalar_conditional(double c, Complex a, double s) {
  if (!(c > 0.0) || !(s >= 0.0) || !(std::abs(a) < 1.0)) {
    throw InvalidParameter("scalar_conditional requires c > 0, s >= 0, |a| < 1");
  }
  const double a2 = std::norm(a);
  const double denom = (c + s) * (c + s) - a2 * c * c;
  const double core = c + s - a2 * c;
  ScalarConditionalStats out;
  out.s = s;
  out.e_hat = c * core / denom;
  out.e_check = a * c * s / denom;
  out.z = c * s * core / denom;
  return out;
}

MemorylessStats memoryless_stats(const CMatrix& C, double s) {
  if (C.rows() != C.cols()) throw DimensionMismatch("C must be square");
  const Eigen::Index n = C.rows();
  MemorylessStats out;
  if (s == 0.0) {
    out.W = CMatrix::Identity(n, n);
    out.Q = CMatrix::Zero(n, n);
    return out;
  }
  Eigen::LLT<CMatrix> llt(C + s * CMatrix::Identity(n, n));
  if (llt.info() != Eigen::Success) throw SingularBlock("C + sI is not positive definite");
  out.W = right_solve(llt, C);
  out.Q = hermitian_part(C - out.W * C);
  return out;
}

CVector stack_observations(const CVector& y_t, const CVector& y_tm1) {
  if (y_t.size() != y_tm1.size()) throw DimensionMismatch("observations differ in length");
  CVector zeta(2 * y_t.size());
  zeta << y_t, y_tm1;
  return zeta;
}

CVector mmse_estimate(const CVector& y_t, const CVector& y_tm1, const ConditionalStats& stats) {
  if (y_t.size() != stats.dim() || y_tm1.size() != stats.dim()) {
    throw DimensionMismatch("mmse_estimate: observation length differs from N_r");
  }
  const Eigen::Index n = stats.dim();
  return stats.E.leftCols(n) * y_t + stats.E.rightCols(n) * y_tm1;
}

CVector memoryless_estimate(const CVector& y_t, const CMatrix& C, double s) {
  return memoryless_estimate(y_t, memoryless_stats(C, s));
}

CVector memoryless_estimate(const CVector& y_t, const MemorylessStats& stats) {
  if (y_t.size() != stats.W.cols()) throw DimensionMismatch("memoryless_estimate: size");
  return stats.W * y_t;
}

}  // namespace armimo
