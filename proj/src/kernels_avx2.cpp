// AVX2 variants of the kernel table. Compiled with -mavx2 only (no FMA):
// every elementwise kernel performs the same multiplies and adds in the
// same order as the scalar reference, so results are bit-identical. The
// only reassociated kernel is the `dot` reduction (lane-split partial
// sums), which the equivalence tests cover with a tolerance.

#include "qrc/kernels.hpp"

#if defined(QRC_HAVE_AVX2_TU)

#include <immintrin.h>

#include <cstring>

namespace qrc::kernels {

namespace {

void leaky_blend_i8_avx2(double* dst, const std::int8_t* m, double eta, std::size_t n) {
  const double keep = 1.0 - eta;
  const __m256d vkeep = _mm256_set1_pd(keep);
  const __m256d veta = _mm256_set1_pd(eta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    std::int32_t packed;
    std::memcpy(&packed, m + i, 4);
    const __m128i bytes = _mm_cvtsi32_si128(packed);
    const __m256d vm = _mm256_cvtepi32_pd(_mm_cvtepi8_epi32(bytes));
    const __m256d vd = _mm256_loadu_pd(dst + i);
    const __m256d out = _mm256_add_pd(_mm256_mul_pd(vkeep, vd), _mm256_mul_pd(veta, vm));
    _mm256_storeu_pd(dst + i, out);
  }
  for (; i < n; ++i) dst[i] = keep * dst[i] + eta * static_cast<double>(m[i]);
}

void add_rows_avx2(double* acc, const double* row, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(row + i)));
  }
  for (; i < n; ++i) acc[i] += row[i];
}

void axpy_avx2(double* acc, double a, const double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), prod));
  }
  for (; i < n; ++i) acc[i] += a * x[i];
}

void scale_avx2(double* x, double a, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
  }
  for (; i < n; ++i) x[i] *= a;
}

void accum_sq_diff_avx2(double* acc, const double* x, const double* mu, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(mu + i));
    const __m256d sq = _mm256_mul_pd(diff, diff);
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), sq));
  }
  for (; i < n; ++i) {
    const double diff = x[i] - mu[i];
    acc[i] += diff * diff;
  }
}

void standardize_avx2(double* dst, const double* src, const double* mu,
                      const double* inv_std, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d centered = _mm256_sub_pd(_mm256_loadu_pd(src + i), _mm256_loadu_pd(mu + i));
    _mm256_storeu_pd(dst + i, _mm256_mul_pd(centered, _mm256_loadu_pd(inv_std + i)));
  }
  for (; i < n; ++i) dst[i] = (src[i] - mu[i]) * inv_std[i];
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void gram_rank1_upper_avx2(double* c, const double* x, std::size_t d) {
  for (std::size_t i = 0; i < d; ++i) {
    const __m256d xi = _mm256_set1_pd(x[i]);
    double* crow = c + i * d;
    std::size_t j = i;
    for (; j + 4 <= d; j += 4) {
      const __m256d prod = _mm256_mul_pd(xi, _mm256_loadu_pd(x + j));
      _mm256_storeu_pd(crow + j, _mm256_add_pd(_mm256_loadu_pd(crow + j), prod));
    }
    const double xis = x[i];
    for (; j < d; ++j) crow[j] += xis * x[j];
  }
}

// (m_r + i m_i) * (a_r + i a_i) for two packed complex values per vector.
// mr/mi may carry different constants in the low and high 128-bit lanes.
inline __m256d cmul(__m256d a, __m256d mr, __m256d mi) {
  const __m256d t1 = _mm256_mul_pd(a, mr);
  const __m256d asw = _mm256_permute_pd(a, 0x5);
  const __m256d t2 = _mm256_mul_pd(asw, mi);
  return _mm256_addsub_pd(t1, t2);
}

void apply_gate_2x2_avx2(std::complex<double>* amps, std::size_t n, unsigned target,
                         const std::complex<double>* m) {
  double* d = reinterpret_cast<double*>(amps);
  const double m00r = m[0].real(), m00i = m[0].imag();
  const double m01r = m[1].real(), m01i = m[1].imag();
  const double m10r = m[2].real(), m10i = m[2].imag();
  const double m11r = m[3].real(), m11i = m[3].imag();

  if (target == 0) {
    // Adjacent pairs: each 256-bit vector holds one (a0, a1) pair. The low
    // lane computes m00*a0 + m01*a1, the high lane m10*a0 + m11*a1.
    const __m256d r_0010 = _mm256_set_pd(m10r, m10r, m00r, m00r);
    const __m256d i_0010 = _mm256_set_pd(m10i, m10i, m00i, m00i);
    const __m256d r_0111 = _mm256_set_pd(m11r, m11r, m01r, m01r);
    const __m256d i_0111 = _mm256_set_pd(m11i, m11i, m01i, m01i);
    for (std::size_t k = 0; k < 2 * n; k += 4) {
      const __m256d v = _mm256_loadu_pd(d + k);
      const __m256d lo = _mm256_permute4x64_pd(v, 0x44);  // [a0, a0]
      const __m256d hi = _mm256_permute4x64_pd(v, 0xEE);  // [a1, a1]
      const __m256d out = _mm256_add_pd(cmul(lo, r_0010, i_0010), cmul(hi, r_0111, i_0111));
      _mm256_storeu_pd(d + k, out);
    }
    return;
  }

  const __m256d m00rv = _mm256_set1_pd(m00r), m00iv = _mm256_set1_pd(m00i);
  const __m256d m01rv = _mm256_set1_pd(m01r), m01iv = _mm256_set1_pd(m01i);
  const __m256d m10rv = _mm256_set1_pd(m10r), m10iv = _mm256_set1_pd(m10i);
  const __m256d m11rv = _mm256_set1_pd(m11r), m11iv = _mm256_set1_pd(m11i);
  const std::size_t stride = std::size_t{1} << target;  // in complex values
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t k = 0; k < stride; k += 2) {
      double* p0 = d + 2 * (base + k);
      double* p1 = d + 2 * (base + k + stride);
      const __m256d a0 = _mm256_loadu_pd(p0);
      const __m256d a1 = _mm256_loadu_pd(p1);
      const __m256d r0 = _mm256_add_pd(cmul(a0, m00rv, m00iv), cmul(a1, m01rv, m01iv));
      const __m256d r1 = _mm256_add_pd(cmul(a0, m10rv, m10iv), cmul(a1, m11rv, m11iv));
      _mm256_storeu_pd(p0, r0);
      _mm256_storeu_pd(p1, r1);
    }
  }
}

void abs2_avx2(double* out, const std::complex<double>* a, std::size_t n) {
  const double* d = reinterpret_cast<const double*>(a);
  std::size_t i = 0;
  alignas(32) double lanes[4];
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(d + 2 * i);
    const __m256d sq = _mm256_mul_pd(v, v);
    _mm256_store_pd(lanes, _mm256_hadd_pd(sq, sq));
    out[i] = lanes[0];
    out[i + 1] = lanes[2];
  }
  for (; i < n; ++i) {
    const double re = a[i].real(), im = a[i].imag();
    out[i] = re * re + im * im;
  }
}

constexpr Ops kAvx2Ops = {
    leaky_blend_i8_avx2, add_rows_avx2,    axpy_avx2,
    scale_avx2,          accum_sq_diff_avx2, standardize_avx2,
    dot_avx2,            gram_rank1_upper_avx2, apply_gate_2x2_avx2,
    abs2_avx2,           "avx2",
};

}  // namespace

const Ops& avx2_ops() noexcept { return kAvx2Ops; }

}  // namespace qrc::kernels

#endif  // QRC_HAVE_AVX2_TU
