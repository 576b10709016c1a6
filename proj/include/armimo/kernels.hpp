#pragma once

// Complex double inner loops used by the simulator's hot paths. Each kernel has
// a scalar reference implementation and, on x86-64, an AVX2/FMA variant. The
// active table is chosen once at startup from CPUID and can be forced with
// ARMIMO_SIMD=scalar|avx2 or select_backend().

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace armimo::kernels {

using Complex = std::complex<double>;

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  // sum_i conj(x_i) * y_i
  Complex (*dotc)(const Complex* x, const Complex* y, std::size_t n);
  // sum_i x_i * y_i
  Complex (*dotu)(const Complex* x, const Complex* y, std::size_t n);
  // sum_i |x_i|^2
  double (*squared_norm)(const Complex* x, std::size_t n);
  // A += w * v v^H, A column-major n x n
  void (*her_rank1)(Complex* a, std::size_t n, double w, const Complex* v);
  // out_i = scale_prev * prev_i + scale_noise * noise_i
  void (*scale_add)(Complex* out, double scale_prev, const Complex* prev,
                    double scale_noise, const Complex* noise, std::size_t n);
};

const KernelTable& scalar_table();
#if defined(ARMIMO_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

bool backend_available(Backend b);
// Throws InvalidParameter if the backend is not available on this CPU/build.
void select_backend(Backend b);
Backend active_backend();
std::string_view backend_name(Backend b);
const KernelTable& active();

// Convenience wrappers over the active table.
inline Complex dotc(std::span<const Complex> x, std::span<const Complex> y) {
  return active().dotc(x.data(), y.data(), x.size());
}
inline Complex dotu(std::span<const Complex> x, std::span<const Complex> y) {
  return active().dotu(x.data(), y.data(), x.size());
}
inline double squared_norm(std::span<const Complex> x) {
  return active().squared_norm(x.data(), x.size());
}
inline void her_rank1(std::span<Complex> a, std::size_t n, double w,
                      std::span<const Complex> v) {
  active().her_rank1(a.data(), n, w, v.data());
}
inline void scale_add(std::span<Complex> out, double scale_prev,
                      std::span<const Complex> prev, double scale_noise,
                      std::span<const Complex> noise) {
  active().scale_add(out.data(), scale_prev, prev.data(), scale_noise, noise.data(),
                     out.size());
}

}  // namespace armimo::kernels
