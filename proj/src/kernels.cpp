#include "qrc/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <mutex>

namespace qrc::kernels {

namespace {

void leaky_blend_i8_scalar(double* dst, const std::int8_t* m, double eta, std::size_t n) {
  const double keep = 1.0 - eta;
  for (std::size_t i = 0; i < n; ++i) {
    dst[i] = keep * dst[i] + eta * static_cast<double>(m[i]);
  }
}

void add_rows_scalar(double* acc, const double* row, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += row[i];
}

void axpy_scalar(double* acc, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += a * x[i];
}

void scale_scalar(double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void accum_sq_diff_scalar(double* acc, const double* x, const double* mu, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = x[i] - mu[i];
    acc[i] += diff * diff;
  }
}

void standardize_scalar(double* dst, const double* src, const double* mu,
                        const double* inv_std, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = (src[i] - mu[i]) * inv_std[i];
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void gram_rank1_upper_scalar(double* c, const double* x, std::size_t d) {
  for (std::size_t i = 0; i < d; ++i) {
    const double xi = x[i];
    double* crow = c + i * d;
    for (std::size_t j = i; j < d; ++j) crow[j] += xi * x[j];
  }
}

// Explicit re/im arithmetic rather than std::complex operator* so the AVX2
// variant can reproduce the exact operation order.
void apply_gate_2x2_scalar(std::complex<double>* amps, std::size_t n, unsigned target,
                           const std::complex<double>* m) {
  const double m00r = m[0].real(), m00i = m[0].imag();
  const double m01r = m[1].real(), m01i = m[1].imag();
  const double m10r = m[2].real(), m10i = m[2].imag();
  const double m11r = m[3].real(), m11i = m[3].imag();
  const std::size_t stride = std::size_t{1} << target;
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t k = 0; k < stride; ++k) {
      std::complex<double>& a0 = amps[base + k];
      std::complex<double>& a1 = amps[base + k + stride];
      const double a0r = a0.real(), a0i = a0.imag();
      const double a1r = a1.real(), a1i = a1.imag();
      const double r0 = (m00r * a0r - m00i * a0i) + (m01r * a1r - m01i * a1i);
      const double i0 = (m00r * a0i + m00i * a0r) + (m01r * a1i + m01i * a1r);
      const double r1 = (m10r * a0r - m10i * a0i) + (m11r * a1r - m11i * a1i);
      const double i1 = (m10r * a0i + m10i * a0r) + (m11r * a1i + m11i * a1r);
      a0 = {r0, i0};
      a1 = {r1, i1};
    }
  }
}

void abs2_scalar(double* out, const std::complex<double>* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double re = a[i].real(), im = a[i].imag();
    out[i] = re * re + im * im;
  }
}

constexpr Ops kScalarOps = {
    leaky_blend_i8_scalar, add_rows_scalar,    axpy_scalar,
    scale_scalar,          accum_sq_diff_scalar, standardize_scalar,
    dot_scalar,            gram_rank1_upper_scalar, apply_gate_2x2_scalar,
    abs2_scalar,           "scalar",
};

}  // namespace

const Ops& scalar_ops() noexcept { return kScalarOps; }

#if !defined(QRC_HAVE_AVX2_TU)
const Ops& avx2_ops() noexcept { return kScalarOps; }
bool avx2_compiled() noexcept { return false; }
bool avx2_supported() noexcept { return false; }
#else
bool avx2_compiled() noexcept { return true; }
bool avx2_supported() noexcept {
#if defined(__GNUC__) || defined(__clang__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}
#endif

const Ops& active() noexcept {
  static const Ops* chosen = [] {
    const char* force = std::getenv("QRC_KERNELS");
    if (force != nullptr) {
      if (std::strcmp(force, "scalar") == 0) return &scalar_ops();
      if (std::strcmp(force, "avx2") == 0 && avx2_supported()) return &avx2_ops();
    }
    return avx2_supported() ? &avx2_ops() : &scalar_ops();
  }();
  return *chosen;
}

}  // namespace qrc::kernels
