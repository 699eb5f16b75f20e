#include "qrm/sturm_kernels.hpp"

#include <cfloat>
#include <cmath>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#endif

namespace qrm::kernels {

double pivmin_for(const double* off2, std::size_t n) {
    double m = 1.0;
    for (std::size_t i = 0; i + 1 < n; ++i) m = std::fmax(m, off2[i]);
    return m * (DBL_MIN / DBL_EPSILON);
}

void sturm_count_scalar(const double* diag, const double* off2, std::size_t n,
                        const double* shifts, std::int64_t* counts,
                        std::size_t nshift, double pivmin) {
    for (std::size_t s = 0; s < nshift; ++s) {
        const double x = shifts[s];
        double q = diag[0] - x;
        std::int64_t c = q < 0.0 ? 1 : 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (std::fabs(q) < pivmin) q = -pivmin;
            q = diag[i] - x - off2[i - 1] / q;
            c += q < 0.0 ? 1 : 0;
        }
        counts[s] = c;
    }
}

#if defined(__x86_64__) || defined(_M_X64)

__attribute__((target("avx2")))
static inline __m256d guard_pivot_avx2(__m256d q, __m256d pivmin, __m256d negpiv) {
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d small = _mm256_cmp_pd(_mm256_and_pd(q, absmask), pivmin, _CMP_LT_OQ);
    return _mm256_blendv_pd(q, negpiv, small);
}

__attribute__((target("avx2")))
void sturm_count_avx2(const double* diag, const double* off2, std::size_t n,
                      const double* shifts, std::int64_t* counts,
                      std::size_t nshift, double pivmin) {
    const __m256d vpiv = _mm256_set1_pd(pivmin);
    const __m256d vneg = _mm256_set1_pd(-pivmin);
    const __m256d zero = _mm256_setzero_pd();

    std::size_t s = 0;
    // Two interleaved batches of four shifts; the serial division chains of
    // the two batches overlap, which is what hides the divide latency.
    for (; s + 8 <= nshift; s += 8) {
        __m256d xa = _mm256_loadu_pd(shifts + s);
        __m256d xb = _mm256_loadu_pd(shifts + s + 4);
        __m256d qa = _mm256_sub_pd(_mm256_set1_pd(diag[0]), xa);
        __m256d qb = _mm256_sub_pd(_mm256_set1_pd(diag[0]), xb);
        __m256i ca = _mm256_sub_epi64(_mm256_setzero_si256(),
                                      _mm256_castpd_si256(_mm256_cmp_pd(qa, zero, _CMP_LT_OQ)));
        __m256i cb = _mm256_sub_epi64(_mm256_setzero_si256(),
                                      _mm256_castpd_si256(_mm256_cmp_pd(qb, zero, _CMP_LT_OQ)));
        for (std::size_t i = 1; i < n; ++i) {
            const __m256d d = _mm256_set1_pd(diag[i]);
            const __m256d e = _mm256_set1_pd(off2[i - 1]);
            qa = guard_pivot_avx2(qa, vpiv, vneg);
            qb = guard_pivot_avx2(qb, vpiv, vneg);
            qa = _mm256_sub_pd(_mm256_sub_pd(d, xa), _mm256_div_pd(e, qa));
            qb = _mm256_sub_pd(_mm256_sub_pd(d, xb), _mm256_div_pd(e, qb));
            ca = _mm256_sub_epi64(ca, _mm256_castpd_si256(_mm256_cmp_pd(qa, zero, _CMP_LT_OQ)));
            cb = _mm256_sub_epi64(cb, _mm256_castpd_si256(_mm256_cmp_pd(qb, zero, _CMP_LT_OQ)));
        }
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(counts + s), ca);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(counts + s + 4), cb);
    }
    for (; s + 4 <= nshift; s += 4) {
        __m256d x = _mm256_loadu_pd(shifts + s);
        __m256d q = _mm256_sub_pd(_mm256_set1_pd(diag[0]), x);
        __m256i c = _mm256_sub_epi64(_mm256_setzero_si256(),
                                     _mm256_castpd_si256(_mm256_cmp_pd(q, zero, _CMP_LT_OQ)));
        for (std::size_t i = 1; i < n; ++i) {
            q = guard_pivot_avx2(q, vpiv, vneg);
            q = _mm256_sub_pd(_mm256_sub_pd(_mm256_set1_pd(diag[i]), x),
                              _mm256_div_pd(_mm256_set1_pd(off2[i - 1]), q));
            c = _mm256_sub_epi64(c, _mm256_castpd_si256(_mm256_cmp_pd(q, zero, _CMP_LT_OQ)));
        }
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(counts + s), c);
    }
    if (s < nshift)
        sturm_count_scalar(diag, off2, n, shifts + s, counts + s, nshift - s, pivmin);
}

__attribute__((target("avx512f")))
static inline __m512d guard_pivot_avx512(__m512d q, __m512d pivmin, __m512d negpiv) {
    __m512d absq = _mm512_abs_pd(q);
    __mmask8 small = _mm512_cmp_pd_mask(absq, pivmin, _CMP_LT_OQ);
    return _mm512_mask_mov_pd(q, small, negpiv);
}

__attribute__((target("avx512f")))
void sturm_count_avx512(const double* diag, const double* off2, std::size_t n,
                        const double* shifts, std::int64_t* counts,
                        std::size_t nshift, double pivmin) {
    const __m512d vpiv = _mm512_set1_pd(pivmin);
    const __m512d vneg = _mm512_set1_pd(-pivmin);
    const __m512d zero = _mm512_setzero_pd();
    const __m512i one = _mm512_set1_epi64(1);

    std::size_t s = 0;
    for (; s + 16 <= nshift; s += 16) {
        __m512d xa = _mm512_loadu_pd(shifts + s);
        __m512d xb = _mm512_loadu_pd(shifts + s + 8);
        __m512d qa = _mm512_sub_pd(_mm512_set1_pd(diag[0]), xa);
        __m512d qb = _mm512_sub_pd(_mm512_set1_pd(diag[0]), xb);
        __m512i ca = _mm512_maskz_mov_epi64(_mm512_cmp_pd_mask(qa, zero, _CMP_LT_OQ), one);
        __m512i cb = _mm512_maskz_mov_epi64(_mm512_cmp_pd_mask(qb, zero, _CMP_LT_OQ), one);
        for (std::size_t i = 1; i < n; ++i) {
            const __m512d d = _mm512_set1_pd(diag[i]);
            const __m512d e = _mm512_set1_pd(off2[i - 1]);
            qa = guard_pivot_avx512(qa, vpiv, vneg);
            qb = guard_pivot_avx512(qb, vpiv, vneg);
            qa = _mm512_sub_pd(_mm512_sub_pd(d, xa), _mm512_div_pd(e, qa));
            qb = _mm512_sub_pd(_mm512_sub_pd(d, xb), _mm512_div_pd(e, qb));
            ca = _mm512_mask_add_epi64(ca, _mm512_cmp_pd_mask(qa, zero, _CMP_LT_OQ), ca, one);
            cb = _mm512_mask_add_epi64(cb, _mm512_cmp_pd_mask(qb, zero, _CMP_LT_OQ), cb, one);
        }
        _mm512_storeu_si512(counts + s, ca);
        _mm512_storeu_si512(counts + s + 8, cb);
    }
    for (; s + 8 <= nshift; s += 8) {
        __m512d x = _mm512_loadu_pd(shifts + s);
        __m512d q = _mm512_sub_pd(_mm512_set1_pd(diag[0]), x);
        __m512i c = _mm512_maskz_mov_epi64(_mm512_cmp_pd_mask(q, zero, _CMP_LT_OQ), one);
        for (std::size_t i = 1; i < n; ++i) {
            q = guard_pivot_avx512(q, vpiv, vneg);
            q = _mm512_sub_pd(_mm512_sub_pd(_mm512_set1_pd(diag[i]), x),
                              _mm512_div_pd(_mm512_set1_pd(off2[i - 1]), q));
            c = _mm512_mask_add_epi64(c, _mm512_cmp_pd_mask(q, zero, _CMP_LT_OQ), c, one);
        }
        _mm512_storeu_si512(counts + s, c);
    }
    if (s < nshift)
        sturm_count_avx2(diag, off2, n, shifts + s, counts + s, nshift - s, pivmin);
}

SturmBatchFn select_kernel() {
    if (__builtin_cpu_supports("avx512f")) return sturm_count_avx512;
    if (__builtin_cpu_supports("avx2")) return sturm_count_avx2;
    return sturm_count_scalar;
}

const char* selected_kernel_name() {
    if (__builtin_cpu_supports("avx512f")) return "avx512";
    if (__builtin_cpu_supports("avx2")) return "avx2";
    return "scalar";
}

#else

SturmBatchFn select_kernel() { return sturm_count_scalar; }
const char* selected_kernel_name() { return "scalar"; }

#endif

}  // namespace qrm::kernels
