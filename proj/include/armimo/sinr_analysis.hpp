#pragma once

// Instantaneous and deterministic-equivalent SINR of the AR-aware MMSE receiver,
// plus empirical random-matrix oracles for rank-one (dyad) spectra.

#include <cstdint>
#include <span>
#include <vector>

#include "armimo/receivers.hpp"
#include "armimo/rng.hpp"
#include "armimo/types.hpp"

namespace armimo {

// gamma = gain_1 zeta^H E^H J_1^-1 E zeta with J_1 = J - gain_1 E zeta zeta^H E^H.
// Throws SolveFailure.
double instantaneous_sinr(const ReceiverInputs& in);

// Phi = alpha^2 P E [C; C A^H].
CMatrix phi_matrix(const UserModel& user);
// phi = alpha^2 P (e_hat c + e_check c a*), for C = cI, A = aI.
double phi_scalar(double alpha, double p, double c, Complex a, double s);

struct PhiFamily {
  CMatrix phi;                 // tagged user
  std::vector<CMatrix> phi_k;  // interferers k = 2..K
  CMatrix beta;                // sum_k alpha_k^2 P_k Z_k + sigma_d2 I
  double sigma_d2 = 0.0;       // sets the starting point delta_k = 1 / sigma_d2

  static PhiFamily from_model(const ReceiverModel& model);
};

struct FixedPointState {
  RVector delta;
  int iterations = 0;
  double residual = 0.0;  // max |delta_new - delta_old| of the last update
};

struct DetEquivResult {
  double gamma = 0.0;
  FixedPointState state;
};

// gamma_bar = tr(Phi T), T = (sum_{k>=2} Phi_k / (1 + delta_k) + beta)^-1,
// delta_k = tr(Phi_k T), by (optionally damped) Picard iteration.
// Throws NoConvergence.
DetEquivResult det_equiv_general(const PhiFamily& family, double tol = 1e-10, int max_iter = 200,
                                 double damping = 1.0);

// Unique positive root of beta = N_r phi / g - sum_k phi_k / (1 + g phi_k / phi) over
// (0, N_r phi / beta]. Bisection, then Newton polish. The residual is taken on
// the equation divided by phi and relative to N_r/g, so `tol` does not depend
// on the power scale. Throws BracketFailure.
double theorem2_root(double phi, std::span<const double> phi_k, double beta, int n_r,
                     double tol = 1e-12);

// Positive root of beta/phi = N_r/g - (K-1)/(1+g).
double symmetric_sinr(double phi, double beta, int n_r, int K);

struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Nonzero eigenvalue omega = sum_i |v_i|^2 of v v^H, v_i ~ CN(0, lambda_i / n).
std::vector<double> sample_dyad_eigenvalues(std::span<const double> lambdas, int trials, Rng& rng);

// E{omega^r} for the dyad above; tends to mean(lambda)^r as n grows.
MomentEstimate dyad_moment_oracle(std::span<const double> lambdas, int r, int trials, Rng& rng);

// Mean of 1/(x - s). Throws PoleProximity if any |x - s| < 1e-12.
double empirical_stieltjes(std::span<const double> eigenvalues, double s);

// Same, with the standard error taken over groups of `group` consecutive
// eigenvalues (one group per sampled matrix).
MomentEstimate empirical_stieltjes_grouped(std::span<const double> eigenvalues, double s,
                                           std::size_t group);

// R(w) = G^-1(-w) - 1/w for the empirical Stieltjes transform G, w < 0.
// Throws InvalidParameter for w >= 0.
double empirical_r_transform(std::span<const double> eigenvalues, double w);

}  // namespace armimo
