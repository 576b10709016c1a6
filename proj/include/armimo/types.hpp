#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

#include <Eigen/Dense>

namespace armimo {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline std::span<const Complex> as_span(const CVector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
inline std::span<Complex> as_span(CVector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

inline std::span<const Complex> as_span(const CRowVector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// Column-major storage of a square matrix as a flat span.
inline std::span<const Complex> as_flat(const CMatrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}
inline std::span<Complex> as_flat(CMatrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

inline CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace armimo
