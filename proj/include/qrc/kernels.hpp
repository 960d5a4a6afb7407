#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

namespace qrc::kernels {

/// Table of the arithmetic inner loops shared by the feature, readout, and
/// statevector code. Every entry has a scalar reference implementation and,
/// on x86-64, an AVX2 variant selected at runtime. Elementwise kernels are
/// bit-identical across variants (no FMA, same operation order); reduction
/// kernels (`dot`) may differ in summation order only.
struct Ops {
  /// dst[i] = (1 - eta) * dst[i] + eta * double(m[i])  (leaky trace blend)
  void (*leaky_blend_i8)(double* dst, const std::int8_t* m, double eta, std::size_t n);

  /// acc[i] += row[i]
  void (*add_rows)(double* acc, const double* row, std::size_t n);

  /// acc[i] += a * x[i]
  void (*axpy)(double* acc, double a, const double* x, std::size_t n);

  /// x[i] *= a
  void (*scale)(double* x, double a, std::size_t n);

  /// acc[i] += (x[i] - mu[i])^2
  void (*accum_sq_diff)(double* acc, const double* x, const double* mu, std::size_t n);

  /// dst[i] = (src[i] - mu[i]) * inv_std[i]  (standardizer application)
  void (*standardize)(double* dst, const double* src, const double* mu,
                      const double* inv_std, std::size_t n);

  /// sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);

  /// c[i*d + j] += x[i] * x[j] for all j >= i (upper triangle of a rank-1
  /// Gram update; the X^T X accumulation of the ridge solver)
  void (*gram_rank1_upper)(double* c, const double* x, std::size_t d);

  /// Applies a 2x2 unitary to the amplitude pairs split by `target` bit.
  /// m is row-major {m00, m01, m10, m11}; n is the total amplitude count.
  void (*apply_gate_2x2)(std::complex<double>* amps, std::size_t n, unsigned target,
                         const std::complex<double>* m);

  /// out[i] = |a[i]|^2
  void (*abs2)(double* out, const std::complex<double>* a, std::size_t n);

  const char* name;
};

/// Scalar reference table. Always available.
const Ops& scalar_ops() noexcept;

/// AVX2 table, or the scalar table when AVX2 was not compiled in. Callers
/// that need the real thing should check avx2_compiled()/avx2_supported().
const Ops& avx2_ops() noexcept;

/// True when the AVX2 translation unit is part of this build.
bool avx2_compiled() noexcept;

/// True when the running CPU supports AVX2 (false if not compiled in).
bool avx2_supported() noexcept;

/// Dispatched table: AVX2 when supported, else scalar. The environment
/// variable QRC_KERNELS=scalar|avx2 forces a backend (useful for the
/// equivalence tests and for pinning results).
const Ops& active() noexcept;

}  // namespace qrc::kernels
