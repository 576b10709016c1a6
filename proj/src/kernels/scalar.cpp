#include "armimo/kernels.hpp"

namespace armimo::kernels {
namespace {

Complex dotc_scalar(const Complex* x, const Complex* y, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

Complex dotu_scalar(const Complex* x, const Complex* y, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr - xi * yi;
    im += xr * yi + xi * yr;
  }
  return {re, im};
}

double squared_norm_scalar(const Complex* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return acc;
}

void her_rank1_scalar(Complex* a, std::size_t n, double w, const Complex* v) {
  for (std::size_t j = 0; j < n; ++j) {
    // column j gets w * v * conj(v_j)
    const Complex s = w * std::conj(v[j]);
    Complex* col = a + j * n;
    for (std::size_t i = 0; i < n; ++i) {
      col[i] = Complex(col[i].real() + v[i].real() * s.real() - v[i].imag() * s.imag(),
                       col[i].imag() + v[i].real() * s.imag() + v[i].imag() * s.real());
    }
  }
}

void scale_add_scalar(Complex* out, double scale_prev, const Complex* prev,
                      double scale_noise, const Complex* noise, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = Complex(scale_prev * prev[i].real() + scale_noise * noise[i].real(),
                     scale_prev * prev[i].imag() + scale_noise * noise[i].imag());
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{dotc_scalar, dotu_scalar, squared_norm_scalar,
                                 her_rank1_scalar, scale_add_scalar};
  return table;
}

}  // namespace armimo::kernels
