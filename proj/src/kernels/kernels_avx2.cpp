// AVX2 + FMA variants. This translation unit is compiled with
// -mavx2 -mfma and must only be entered via the dispatch table.
#include "banet/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <cmath>
#include <limits>

#if defined(__GLIBC__)
// glibc's libmvec exp, 4 doubles per call.
extern "C" __m256d _ZGVdN4v_exp(__m256d);
#define BANET_HAVE_MVEC 1
#endif

namespace banet::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

inline __m256d exp4(__m256d x) {
#if defined(BANET_HAVE_MVEC)
  return _ZGVdN4v_exp(x);
#else
  alignas(32) double t[4];
  _mm256_store_pd(t, x);
  t[0] = std::exp(t[0]);
  t[1] = std::exp(t[1]);
  t[2] = std::exp(t[2]);
  t[3] = std::exp(t[3]);
  return _mm256_load_pd(t);
#endif
}

void softmax_from_logits_avx2(const double* logw, double* out, std::size_t n) {
  std::size_t i = 0;
  double m;
  if (n >= 4) {
    __m256d vmax = _mm256_loadu_pd(logw);
    for (i = 4; i + 3 < n; i += 4)
      vmax = _mm256_max_pd(vmax, _mm256_loadu_pd(logw + i));
    alignas(32) double t[4];
    _mm256_store_pd(t, vmax);
    m = t[0] > t[1] ? t[0] : t[1];
    if (t[2] > m) m = t[2];
    if (t[3] > m) m = t[3];
  } else {
    m = logw[0];
    i = 1;
  }
  for (; i < n; ++i)
    if (logw[i] > m) m = logw[i];

  const __m256d vm = _mm256_set1_pd(m);
  __m256d vsum = _mm256_setzero_pd();
  for (i = 0; i + 3 < n; i += 4) {
    __m256d e = exp4(_mm256_sub_pd(_mm256_loadu_pd(logw + i), vm));
    _mm256_storeu_pd(out + i, e);
    vsum = _mm256_add_pd(vsum, e);
  }
  double sum = hsum(vsum);
  for (; i < n; ++i) {
    out[i] = std::exp(logw[i] - m);
    sum += out[i];
  }
  const double inv = 1.0 / sum;
  const __m256d vinv = _mm256_set1_pd(inv);
  for (i = 0; i + 3 < n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(out + i), vinv));
  for (; i < n; ++i) out[i] *= inv;
}

void mix_uniform_avx2(double* p, std::size_t n, double eta) {
  const double floor = eta / static_cast<double>(n);
  const double keep = 1.0 - eta;
  const __m256d vfloor = _mm256_set1_pd(floor);
  const __m256d vkeep = _mm256_set1_pd(keep);
  std::size_t i = 0;
  for (; i + 3 < n; i += 4)
    _mm256_storeu_pd(p + i, _mm256_fmadd_pd(vkeep, _mm256_loadu_pd(p + i), vfloor));
  for (; i < n; ++i) p[i] = keep * p[i] + floor;
}

void complement_multiply_avx2(double* acc, const double* q, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 3 < n; i += 4) {
    __m256d c = _mm256_sub_pd(one, _mm256_loadu_pd(q + i));
    _mm256_storeu_pd(acc + i, _mm256_mul_pd(_mm256_loadu_pd(acc + i), c));
  }
  for (; i < n; ++i) acc[i] *= (1.0 - q[i]);
}

void vector_add_avx2(double* acc, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 3 < n; i += 4)
    _mm256_storeu_pd(acc + i,
                     _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) acc[i] += x[i];
}

double gamma_terms_avx2(const double* p, const double* qsum, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  __m256d vsum = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 3 < n; i += 4) {
    __m256d vp = _mm256_loadu_pd(p + i);
    __m256d vq = _mm256_loadu_pd(qsum + i);
    __m256d t = _mm256_div_pd(vp, _mm256_add_pd(vp, vq));
    __m256d mask = _mm256_cmp_pd(vp, zero, _CMP_GT_OQ);
    vsum = _mm256_add_pd(vsum, _mm256_blendv_pd(zero, t, mask));
  }
  double sum = hsum(vsum);
  for (; i < n; ++i) {
    if (p[i] > 0.0) sum += p[i] / (p[i] + qsum[i]);
  }
  return sum;
}

void ucb_indices_avx2(const double* sums, const double* counts, double bonus_num,
                      double* out, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d vinf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  const __m256d vb = _mm256_set1_pd(bonus_num);
  std::size_t i = 0;
  for (; i + 3 < n; i += 4) {
    __m256d vc = _mm256_loadu_pd(counts + i);
    __m256d mean = _mm256_div_pd(_mm256_loadu_pd(sums + i), vc);
    __m256d bonus = _mm256_sqrt_pd(_mm256_div_pd(vb, vc));
    __m256d val = _mm256_add_pd(mean, bonus);
    __m256d iszero = _mm256_cmp_pd(vc, zero, _CMP_EQ_OQ);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(val, vinf, iszero));
  }
  for (; i < n; ++i) {
    if (counts[i] == 0.0) {
      out[i] = std::numeric_limits<double>::infinity();
    } else {
      out[i] = sums[i] / counts[i] + std::sqrt(bonus_num / counts[i]);
    }
  }
}

}  // namespace

const Ops* avx2_ops_impl() {
  static const Ops ops = {
      softmax_from_logits_avx2, mix_uniform_avx2, complement_multiply_avx2,
      vector_add_avx2,          gamma_terms_avx2, ucb_indices_avx2,
  };
  return &ops;
}

}  // namespace banet::kernels

#endif  // __AVX2__
