#include "armimo/sinr_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "armimo/errors.hpp"
#include "armimo/estimation.hpp"
#include "armimo/kernels.hpp"

namespace armimo {

double instantaneous_sinr(const ReceiverInputs& in) {
  NormalEquations ne = build_b_J(in);
  const CVector& m = in.mmse_mean(0);
  const double g = in.user(0).gain();
  const auto n = static_cast<std::size_t>(ne.J.rows());
  kernels::her_rank1(as_flat(ne.J), n, -g, as_span(m));
  Eigen::LLT<CMatrix> llt(ne.J);
  if (llt.info() != Eigen::Success) throw SolveFailure("J_1 is not positive definite");
  const CVector x = llt.solve(m);
  if (!x.allFinite()) throw SolveFailure("J_1 solve produced non-finite values");
  return g * kernels::dotc(as_span(m), as_span(x)).real();
}

CMatrix phi_matrix(const UserModel& user) {
  return hermitian_part(user.gain() * user.cond.R_mmse);
}

double phi_scalar(double alpha, double p, double c, Complex a, double s) {
  const ScalarConditionalStats st = scalar_conditional(c, a, s);
  return alpha * alpha * p * (st.e_hat * c + (st.e_check * c * std::conj(a)).real());
}

PhiFamily PhiFamily::from_model(const ReceiverModel& model) {
  PhiFamily f;
  f.phi = phi_matrix(*model.users.front());
  for (std::size_t k = 1; k < model.users.size(); ++k) f.phi_k.push_back(phi_matrix(*model.users[k]));
  f.beta = model.beta;
  f.sigma_d2 = model.sigma_d2;
  return f;
}

namespace {

CMatrix resolvent(const PhiFamily& f, const RVector& delta) {
  CMatrix S = f.beta;
  for (std::size_t k = 0; k < f.phi_k.size(); ++k) S += f.phi_k[k] / (1.0 + delta(static_cast<Eigen::Index>(k)));
  Eigen::LLT<CMatrix> llt(hermitian_part(S));
  if (llt.info() != Eigen::Success) throw SolveFailure("resolvent argument is not positive definite");
  return llt.solve(CMatrix::Identity(S.rows(), S.cols()));
}

// tr(A B) for Hermitian A, B without forming the product.
double trace_product(const CMatrix& a, const CMatrix& b) {
  return (a.array() * b.transpose().array()).sum().real();
}

}  // namespace

DetEquivResult det_equiv_general(const PhiFamily& family, double tol, int max_iter, double damping) {
  if (!(damping > 0.0 && damping <= 1.0)) throw InvalidParameter("damping must lie in (0, 1]");
  const auto k = static_cast<Eigen::Index>(family.phi_k.size());
  DetEquivResult out;
  const double start = family.sigma_d2 > 0.0 ? 1.0 / family.sigma_d2 : 1.0;
  RVector delta = RVector::Constant(k, start);
  if (k == 0) {
    out.gamma = trace_product(family.phi, resolvent(family, delta));
    out.state.delta = delta;
    return out;
  }
  for (int it = 1; it <= max_iter; ++it) {
    const CMatrix T = resolvent(family, delta);
    RVector next(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      next(i) = trace_product(family.phi_k[static_cast<std::size_t>(i)], T);
    }
    next = damping * next + (1.0 - damping) * delta;
    const double residual = (next - delta).cwiseAbs().maxCoeff();
    delta = next;
    out.state.iterations = it;
    out.state.residual = residual;
    if (!std::isfinite(residual)) break;
    if (residual <= tol) {
      out.state.delta = delta;
      out.gamma = trace_product(family.phi, resolvent(family, delta));
      return out;
    }
  }
  throw NoConvergence("fixed point residual " + std::to_string(out.state.residual) + " after " +
                      std::to_string(out.state.iterations) + " iterations");
}

double theorem2_root(double phi, std::span<const double> phi_k, double beta, int n_r, double tol) {
  if (!(phi > 0.0) || !(beta > 0.0) || n_r < 1) {
    throw InvalidParameter("theorem2_root needs phi > 0, beta > 0, N_r >= 1");
  }
  for (double v : phi_k) {
    if (!(v >= 0.0)) throw InvalidParameter("interferer phi_k must be >= 0");
  }
  const double ratio = beta / phi;
  // h(g) = N_r/g - sum (phi_k/phi)/(1 + g phi_k/phi) - beta/phi, decreasing in g.
  auto h = [&](double g) {
    double acc = n_r / g - ratio;
    for (double v : phi_k) {
      const double r = v / phi;
      acc -= r / (1.0 + g * r);
    }
    return acc;
  };
  auto dh = [&](double g) {
    double acc = -n_r / (g * g);
    for (double v : phi_k) {
      const double r = v / phi;
      acc += r * r / ((1.0 + g * r) * (1.0 + g * r));
    }
    return acc;
  };
  double hi = n_r / ratio;
  if (phi_k.empty()) return hi;
  double lo = hi * 1e-300;
  if (!(h(lo) > 0.0) || !(h(hi) <= 0.0)) throw BracketFailure("no sign change on (0, N_r phi / beta]");
  for (int i = 0; i < 200 && (hi - lo) > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 0.0 ? lo : hi) = mid;
  }
  double g = 0.5 * (lo + hi);
  for (int i = 0; i < 8; ++i) {
    const double step = h(g) / dh(g);
    const double next = g - step;
    if (!(next > 0.0) || !std::isfinite(next)) break;
    g = next;
    if (std::abs(step) <= 1e-16 * g) break;
  }
  if (!(std::abs(h(g)) <= tol * (n_r / g))) {
    throw BracketFailure("root residual " + std::to_string(h(g)) + " above tolerance");
  }
  return g;
}

double symmetric_sinr(double phi, double beta, int n_r, int K) {
  if (!(phi > 0.0) || !(beta > 0.0) || n_r < 1 || K < 1) {
    throw InvalidParameter("symmetric_sinr needs phi > 0, beta > 0, N_r >= 1, K >= 1");
  }
  // r g^2 + (r - N + K - 1) g - N = 0
  const double r = beta / phi;
  const double b = r - n_r + (K - 1);
  const double disc = std::sqrt(b * b + 4.0 * r * n_r);
  return b >= 0.0 ? 2.0 * n_r / (b + disc) : (disc - b) / (2.0 * r);
}

std::vector<double> sample_dyad_eigenvalues(std::span<const double> lambdas, int trials, Rng& rng) {
  if (lambdas.empty()) throw InvalidParameter("need at least one lambda");
  const double n = static_cast<double>(lambdas.size());
  std::vector<double> out(static_cast<std::size_t>(std::max(trials, 0)));
  for (auto& w : out) {
    double acc = 0.0;
    for (double l : lambdas) acc += rng.exponential(l / n);
    w = acc;
  }
  return out;
}

MomentEstimate dyad_moment_oracle(std::span<const double> lambdas, int r, int trials, Rng& rng) {
  if (r < 1 || r > 3) throw InvalidParameter("moment order must be 1, 2 or 3");
  if (trials < 2) throw InvalidParameter("need at least two trials");
  const auto omega = sample_dyad_eigenvalues(lambdas, trials, rng);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const double x = std::pow(omega[i], r);
    const double d = x - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (x - mean);
  }
  const double var = m2 / static_cast<double>(omega.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(omega.size()))};
}

double empirical_stieltjes(std::span<const double> eigenvalues, double s) {
  if (eigenvalues.empty()) throw InvalidParameter("no eigenvalue samples");
  double acc = 0.0;
  for (double x : eigenvalues) {
    const double d = x - s;
    if (std::abs(d) < 1e-12) throw PoleProximity("sample within 1e-12 of s");
    acc += 1.0 / d;
  }
  return acc / static_cast<double>(eigenvalues.size());
}

MomentEstimate empirical_stieltjes_grouped(std::span<const double> eigenvalues, double s,
                                           std::size_t group) {
  if (group == 0 || eigenvalues.size() % group != 0 || eigenvalues.size() / group < 2) {
    throw InvalidParameter("eigenvalue count must be a multiple (>= 2) of the group size");
  }
  const std::size_t groups = eigenvalues.size() / group;
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < groups; ++i) {
    const double x = empirical_stieltjes(eigenvalues.subspan(i * group, group), s);
    const double d = x - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (x - mean);
  }
  const double var = m2 / static_cast<double>(groups - 1);
  return {mean, std::sqrt(var / static_cast<double>(groups))};
}

double empirical_r_transform(std::span<const double> eigenvalues, double w) {
  if (!(w < 0.0)) throw InvalidParameter("R-transform argument must be negative");
  if (eigenvalues.empty()) throw InvalidParameter("no eigenvalue samples");
  const double xmin = *std::min_element(eigenvalues.begin(), eigenvalues.end());
  // G(z) = mean 1/(x - z) rises from 0 to +inf on (-inf, xmin); solve G(z) = -w.
  const double target = -w;
  auto f = [&](double z) { return empirical_stieltjes(eigenvalues, z) - target; };
  double lo = xmin - 1.0;
  while (f(lo) > 0.0) lo = xmin - 2.0 * (xmin - lo);
  double hi = xmin - 1e-9 * std::max(1.0, std::abs(xmin));
  if (f(hi) < 0.0) throw BracketFailure("R-transform argument outside the empirical range");
  boost::uintmax_t iters = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  const double z = 0.5 * (bracket.first + bracket.second);
  return z - 1.0 / w;
}

}  // namespace armimo
