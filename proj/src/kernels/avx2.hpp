#pragma once

// Raw interleaved (re, im) double entry points of the AVX2 kernels. Kept free of
// <complex> so the AVX2 translation unit never emits inline library code that
// the linker could pick for non-AVX call sites.

#include <cstddef>

namespace armimo::kernels::avx2 {

void dotc(const double* x, const double* y, std::size_t n, double* out);
void dotu(const double* x, const double* y, std::size_t n, double* out);
double squared_norm(const double* x, std::size_t n);
void her_rank1(double* a, std::size_t n, double w, const double* v);
void scale_add(double* out, double scale_prev, const double* prev, double scale_noise,
               const double* noise, std::size_t n);

}  // namespace armimo::kernels::avx2
