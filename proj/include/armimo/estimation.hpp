#pragma once

// Two-observation MMSE channel estimation for AR(1) channels and the
// statistics of the channel conditioned on the stacked pilot observations.

#include "armimo/types.hpp"

namespace armimo {

// Conditional law h(t) | zeta ~ CN(E zeta, Z) with zeta = [y_p(t); y_p(t-1)], the
// two de-spread pilot observations of one user.
struct ConditionalStats {
  CMatrix E;       // N x 2N
  CMatrix Z;       // N x N, conditional error covariance
  CMatrix R_mmse;  // N x N, covariance of E zeta
  CMatrix M;       // 2N x 2N joint covariance of [h(t); h(t-1)]
  CMatrix C;
  CMatrix A;
  double s = 0.0;  // per-entry pilot noise variance

  Eigen::Index dim() const { return C.rows(); }
  // Cov(zeta) = M + s I.
  CMatrix zeta_covariance() const;
};

struct ScalarConditionalStats {
  double e_hat = 0.0;
  Complex e_check{0.0, 0.0};
  double z = 0.0;
  double s = 0.0;
};

// Block-fading (single observation) estimator: h_mem = W y_p(t), error cov Q.
struct MemorylessStats {
  CMatrix W;  // C (C + s I)^-1
  CMatrix Q;  // C - C (C + s I)^-1 C
};

// E = [C, AC] [[C+S, AC], [CA^H, C+S]]^-1, Z = C - E [C; CA^H], R_mmse = C - Z.
// The 2N x 2N inverse is applied through the Schur complement of the C + sI
// blocks; s = 0 takes the pseudo-inverse limit. Throws SingularBlock.
ConditionalStats conditional_matrices(const CMatrix& C, const CMatrix& A, double s);

// Closed forms for C = cI, A = aI.
ScalarConditionalStats scalar_conditional(double c, Complex a, double s);

MemorylessStats memoryless_stats(const CMatrix& C, double s);

CVector stack_observations(const CVector& y_t, const CVector& y_tm1);

// h_hat_MMSE(t) = E [y_t; y_tm1].
CVector mmse_estimate(const CVector& y_t, const CVector& y_tm1, const ConditionalStats& stats);

CVector memoryless_estimate(const CVector& y_t, const CMatrix& C, double s);
CVector memoryless_estimate(const CVector& y_t, const MemorylessStats& stats);

}  // namespace armimo
