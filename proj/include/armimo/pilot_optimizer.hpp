#pragma once

// SINR-optimal pilot power for the symmetric i.i.d. case under the per-user
// budget tau_p P_p + tau_d P = P_tot.

#include <array>
#include <string>
#include <vector>

namespace armimo {

struct PilotOptProblem {
  int K = 1;
  int tau_p = 1;
  int tau_d = 1;
  double p_tot = 0.0;
  double alpha = 1.0;
  double a = 0.0;
  double c = 1.0;
  double sigma_p2 = 0.0;
  double sigma_d2 = 0.0;

  // Throws InvalidParameter.
  void validate() const;
  double upper() const { return p_tot / tau_p; }
};

// (Kc + sd2 td / (alpha^2 (P_tot - P_p tau_p))) ((c + s')^2 - a^2 c^2) /
//   ((a^2 + 1) s' + c - a^2 c),   s' = sp2 / (alpha^2 P_p tau_p).
// Equals c^2 (beta/phi + K); minimizing it maximizes phi/beta. Throws OutOfDomain.
double objective(double p_p, const PilotOptProblem& prob);

// c[i] multiplies P_p^i. The derivative of the objective satisfies
// f'(P_p) Den(P_p) = -Q(P_p) with Den > 0 on the feasible interval.
using QuarticCoeffs = std::array<double, 5>;

QuarticCoeffs quartic_coeffs(const PilotOptProblem& prob);
// Coefficients exactly as typeset in the source derivation (c3 carries a sign
// slip); kept so the discrepancy can be reported.
QuarticCoeffs quartic_coeffs_as_printed(const PilotOptProblem& prob);

double eval_quartic(const QuarticCoeffs& c, double x);
// The positive factor Den(P_p) above.
double derivative_denominator(double p_p, const PilotOptProblem& prob);

// Real roots via companion-matrix eigenvalues, |Im| <= 1e-9 (1 + |Re|) after
// scaling x by `scale`.
std::vector<double> quartic_real_roots(const QuarticCoeffs& c, double scale = 1.0);

// Max relative mismatch between Q and -f' Den (central differences) at a few
// interior points, scaled by sum |c_i x^i|.
double coefficient_check(const QuarticCoeffs& c, const PilotOptProblem& prob);

struct GridResult {
  double p_p = 0.0;
  double objective = 0.0;
  double step = 0.0;
};

// P_p = upper * j / (points + 1), j = 1..points.
GridResult grid_search(const PilotOptProblem& prob, int points = 10000);

struct PilotOptResult {
  double p_p = 0.0;
  double objective = 0.0;
  std::string method;  // "quartic" or "grid"
  std::vector<double> interior_roots;
  GridResult grid;
  double coeff_check = 0.0;
  bool flagged = false;  // quartic path rejected, grid result returned
  std::string note;
};

PilotOptResult optimal_pilot_power(const PilotOptProblem& prob, int grid_points = 10000);

// Scalar-root SINR (linear) of the symmetric system at pilot power p_p.
double symmetric_sinr_at(const PilotOptProblem& prob, double p_p, int n_r);

}  // namespace armimo
