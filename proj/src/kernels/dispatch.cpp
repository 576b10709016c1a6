#include <atomic>
#include <cstdlib>
#include <string>

#include "armimo/errors.hpp"
#include "armimo/kernels.hpp"

#if defined(ARMIMO_HAVE_AVX2)
#include "avx2.hpp"
#endif

namespace armimo::kernels {

#if defined(ARMIMO_HAVE_AVX2)
namespace {

const double* raw(const Complex* p) { return reinterpret_cast<const double*>(p); }
double* raw(Complex* p) { return reinterpret_cast<double*>(p); }

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{
      [](const Complex* x, const Complex* y, std::size_t n) {
        double out[2];
        avx2::dotc(raw(x), raw(y), n, out);
        return Complex(out[0], out[1]);
      },
      [](const Complex* x, const Complex* y, std::size_t n) {
        double out[2];
        avx2::dotu(raw(x), raw(y), n, out);
        return Complex(out[0], out[1]);
      },
      [](const Complex* x, std::size_t n) { return avx2::squared_norm(raw(x), n); },
      [](Complex* a, std::size_t n, double w, const Complex* v) {
        avx2::her_rank1(raw(a), n, w, raw(v));
      },
      [](Complex* out, double sp, const Complex* prev, double sn, const Complex* noise,
         std::size_t n) { avx2::scale_add(raw(out), sp, raw(prev), sn, raw(noise), n); },
  };
  return table;
}
#endif

namespace {

bool cpu_has_avx2() {
#if defined(ARMIMO_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  if (const char* env = std::getenv("ARMIMO_SIMD")) {
    const std::string choice(env);
    if (choice == "scalar") return Backend::Scalar;
    if (choice == "avx2" && cpu_has_avx2()) return Backend::Avx2;
  }
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{initial_backend()};
  return backend;
}

}  // namespace

bool backend_available(Backend b) {
  return b == Backend::Scalar || (b == Backend::Avx2 && cpu_has_avx2());
}

void select_backend(Backend b) {
  if (!backend_available(b)) {
    throw InvalidParameter("kernel backend " + std::string(backend_name(b)) +
                           " is not available on this CPU/build");
  }
  current().store(b);
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable& active() {
#if defined(ARMIMO_HAVE_AVX2)
  if (active_backend() == Backend::Avx2) return avx2_table();
#endif
  return scalar_table();
}

}  // namespace armimo::kernels
