#include "armimo/pilot_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "armimo/errors.hpp"
#include "armimo/estimation.hpp"
#include "armimo/sinr_analysis.hpp"

namespace armimo {

void PilotOptProblem::validate() const {
  if (K < 1 || tau_p < 1 || tau_d < 1) throw InvalidParameter("K, tau_p, tau_d must be >= 1");
  if (!(p_tot > 0.0) || !(alpha > 0.0) || !(c > 0.0)) {
    throw InvalidParameter("P_tot, alpha and c must be > 0");
  }
  if (!(sigma_p2 > 0.0) || !(sigma_d2 > 0.0)) throw InvalidParameter("noise variances must be > 0");
  if (!(std::abs(a) < 1.0)) throw InvalidParameter("|a| must be < 1");
}

double objective(double p_p, const PilotOptProblem& pr) {
  if (!(p_p > 0.0) || !(p_p < pr.upper())) {
    std::ostringstream msg;
    msg << "P_p = " << p_p << " outside (0, " << pr.upper() << ")";
    throw OutOfDomain(msg.str());
  }
  const double al2 = pr.alpha * pr.alpha;
  const double a2 = pr.a * pr.a;
  const double s = pr.sigma_p2 / (al2 * p_p * pr.tau_p);
  const double load = pr.K * pr.c + pr.sigma_d2 * pr.tau_d / (al2 * (pr.p_tot - p_p * pr.tau_p));
  const double num = (pr.c + s) * (pr.c + s) - a2 * pr.c * pr.c;
  const double den = (a2 + 1.0) * s + pr.c - a2 * pr.c;
  return load * num / den;
}

namespace {

struct Terms {
  double a2, am1, c, al2, al4, al6, K, sp2, sd2, td, tp, Pt;
};

Terms terms(const PilotOptProblem& p) {
  const double al2 = p.alpha * p.alpha;
  return {p.a * p.a, p.a * p.a - 1.0, p.c, al2, al2 * al2, al2 * al2 * al2,
          static_cast<double>(p.K), p.sigma_p2, p.sigma_d2, static_cast<double>(p.tau_d),
          static_cast<double>(p.tau_p), p.p_tot};
}

QuarticCoeffs common_coeffs(const Terms& t) {
  QuarticCoeffs q{};
  const double tp2 = t.tp * t.tp;
  const double load = t.c * t.K * t.Pt * t.al2 + t.sd2 * t.td;
  q[4] = t.am1 * t.am1 * t.c * t.c * t.c * t.al6 * (t.K * t.sp2 - t.sd2 * t.td) * tp2 * tp2;
  q[2] = t.c * t.al2 * t.sp2 *
         (t.am1 * t.am1 * t.c * t.c * t.K * t.Pt * t.Pt * t.al4 +
          t.sp2 * ((1.0 + t.a2) * t.K * t.sp2 + (t.a2 - 5.0) * t.sd2 * t.td) +
          t.am1 * t.c * t.Pt * t.al2 * (4.0 * t.K * t.sp2 + t.am1 * t.sd2 * t.td)) *
         tp2;
  q[1] = -2.0 * t.sp2 * t.sp2 * (t.am1 * t.c * t.Pt * t.al2 + t.sp2 + t.a2 * t.sp2) * load * t.tp;
  q[0] = (t.a2 + 1.0) * t.Pt * t.sp2 * t.sp2 * t.sp2 * load;
  return q;
}

}  // namespace

QuarticCoeffs quartic_coeffs(const PilotOptProblem& prob) {
  const Terms t = terms(prob);
  QuarticCoeffs q = common_coeffs(t);
  q[3] = -2.0 * t.am1 * t.c * t.c * t.al4 * t.sp2 *
         (t.am1 * t.c * t.K * t.Pt * t.al2 + t.K * t.sp2 - 2.0 * t.sd2 * t.td) * t.tp * t.tp * t.tp;
  return q;
}

QuarticCoeffs quartic_coeffs_as_printed(const PilotOptProblem& prob) {
  const Terms t = terms(prob);
  QuarticCoeffs q = common_coeffs(t);
  q[3] = 2.0 * t.am1 * t.c * t.c * t.al4 * t.sp2 *
         (t.am1 * t.c * t.K * t.Pt * t.al2 - t.K * t.sp2 + 2.0 * t.sd2 * t.td) * t.tp * t.tp * t.tp;
  return q;
}

double eval_quartic(const QuarticCoeffs& c, double x) {
  return (((c[4] * x + c[3]) * x + c[2]) * x + c[1]) * x + c[0];
}

double derivative_denominator(double p_p, const PilotOptProblem& pr) {
  const double al2 = pr.alpha * pr.alpha;
  const double a2 = pr.a * pr.a;
  const double rest = pr.p_tot - pr.tau_p * p_p;
  const double lin = (1.0 + a2) * pr.sigma_p2 + (1.0 - a2) * al2 * pr.c * pr.tau_p * p_p;
  return al2 * al2 * pr.tau_p * p_p * p_p * rest * rest * lin * lin;
}

std::vector<double> quartic_real_roots(const QuarticCoeffs& c, double scale) {
  // Polynomial in y = x / scale, normalized by its largest coefficient.
  std::array<double, 5> q{};
  double big = 0.0;
  for (int i = 0; i < 5; ++i) {
    q[i] = c[i] * std::pow(scale, i);
    big = std::max(big, std::abs(q[i]));
  }
  if (big == 0.0) return {};
  for (double& v : q) v /= big;
  int deg = 4;
  while (deg > 0 && std::abs(q[deg]) <= 1e-14) --deg;
  if (deg == 0) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -q[i] / q[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<double> roots;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const auto z = es.eigenvalues()(i);
    if (std::abs(z.imag()) <= 1e-9 * (1.0 + std::abs(z.real()))) roots.push_back(z.real() * scale);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double coefficient_check(const QuarticCoeffs& c, const PilotOptProblem& prob) {
  double worst = 0.0;
  const double up = prob.upper();
  for (double frac : {0.07, 0.21, 0.43, 0.66, 0.88}) {
    const double x = frac * up;
    const double h = 1e-5 * x;
    const double fd = (objective(x + h, prob) - objective(x - h, prob)) / (2.0 * h);
    const double lhs = -fd * derivative_denominator(x, prob);
    double mag = 0.0;
    for (int i = 0; i < 5; ++i) mag += std::abs(c[i] * std::pow(x, i));
    worst = std::max(worst, std::abs(lhs - eval_quartic(c, x)) / mag);
  }
  return worst;
}

GridResult grid_search(const PilotOptProblem& prob, int points) {
  if (points < 1) throw InvalidParameter("grid needs at least one point");
  GridResult best;
  best.objective = std::numeric_limits<double>::infinity();
  best.step = prob.upper() / (points + 1);
  for (int j = 1; j <= points; ++j) {
    const double x = best.step * j;
    const double f = objective(x, prob);
    if (f < best.objective) {
      best.objective = f;
      best.p_p = x;
    }
  }
  return best;
}

PilotOptResult optimal_pilot_power(const PilotOptProblem& prob, int grid_points) {
  prob.validate();
  PilotOptResult out;
  out.grid = grid_search(prob, grid_points);
  const QuarticCoeffs q = quartic_coeffs(prob);
  out.coeff_check = coefficient_check(q, prob);
  const double up = prob.upper();
  for (double r : quartic_real_roots(q, up)) {
    if (r > 0.0 && r < up) out.interior_roots.push_back(r);
  }

  auto use_grid = [&](const std::string& why) {
    out.p_p = out.grid.p_p;
    out.objective = out.grid.objective;
    out.method = "grid";
    out.flagged = true;
    out.note = why;
    return out;
  };
  if (!(out.coeff_check <= 1e-6)) return use_grid("quartic coefficients disagree with the derivative");
  if (out.interior_roots.empty()) return use_grid("no interior root");

  double best_x = 0.0, best_f = std::numeric_limits<double>::infinity();
  for (double r : out.interior_roots) {
    const double f = objective(r, prob);
    if (f < best_f) {
      best_f = f;
      best_x = r;
    }
  }
  // A true stationary minimum cannot lose to a grid point.
  if (best_f > out.grid.objective * (1.0 + 1e-12)) {
    return use_grid("quartic root is worse than the grid optimum");
  }
  out.p_p = best_x;
  out.objective = best_f;
  out.method = "quartic";
  return out;
}

double symmetric_sinr_at(const PilotOptProblem& pr, double p_p, int n_r) {
  if (!(p_p > 0.0) || !(p_p < pr.upper())) throw OutOfDomain("pilot power outside the budget");
  const double p = (pr.p_tot - pr.tau_p * p_p) / pr.tau_d;
  const double s = pr.sigma_p2 / (pr.alpha * pr.alpha * p_p * pr.tau_p);
  const double phi = phi_scalar(pr.alpha, p, pr.c, pr.a, s);
  const ScalarConditionalStats st = scalar_conditional(pr.c, pr.a, s);
  const double beta = pr.K * pr.alpha * pr.alpha * p * st.z + pr.sigma_d2;
  return symmetric_sinr(phi, beta, n_r, pr.K);
}

}  // namespace armimo
