// Compiled with -mavx2 only when the toolchain targets x86-64; dispatch
// guarantees these entry points are reached only on AVX2-capable CPUs.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "agripv/kernels.hpp"

namespace agripv::kernels {

namespace {

inline __m256d sin_of_tan(__m256d u) {
    const __m256d one = _mm256_set1_pd(1.0);
    return _mm256_div_pd(u, _mm256_sqrt_pd(_mm256_add_pd(one, _mm256_mul_pd(u, u))));
}

}  // namespace

void sky_view_avx2(const RowSection& rows, std::span<const double> xs, std::span<double> out) {
    const int n = rows.rows_each_side;
    const std::size_t count = xs.size();
    const std::size_t vec_end = count - count % 4;

    const __m256d inv_z1 = _mm256_set1_pd(1.0 / rows.z1);
    const __m256d inv_z2 = _mm256_set1_pd(1.0 / rows.z2);
    const __m256d x1 = _mm256_set1_pd(rows.x1);
    const __m256d x2 = _mm256_set1_pd(rows.x2);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d half = _mm256_set1_pd(0.5);

    for (std::size_t i = 0; i < vec_end; i += 4) {
        const __m256d x = _mm256_loadu_pd(xs.data() + i);
        auto ends = [&](int k, __m256d& lo, __m256d& hi) {
            const __m256d base = _mm256_sub_pd(_mm256_set1_pd(k * rows.pitch), x);
            const __m256d s1 = sin_of_tan(_mm256_mul_pd(_mm256_add_pd(base, x1), inv_z1));
            const __m256d s2 = sin_of_tan(_mm256_mul_pd(_mm256_add_pd(base, x2), inv_z2));
            lo = _mm256_min_pd(s1, s2);
            hi = _mm256_max_pd(s1, s2);
        };
        __m256d lo, hi;
        ends(-n, lo, hi);
        __m256d visible = _mm256_add_pd(lo, one);
        __m256d prev_hi = hi;
        for (int k = -n + 1; k <= n; ++k) {
            ends(k, lo, hi);
            visible = _mm256_add_pd(visible, _mm256_max_pd(zero, _mm256_sub_pd(lo, prev_hi)));
            prev_hi = hi;
        }
        visible = _mm256_add_pd(visible, _mm256_sub_pd(one, prev_hi));
        _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(half, visible));
    }
    if (vec_end < count)
        sky_view_scalar(rows, xs.subspan(vec_end), out.subspan(vec_end));
}

void beam_mask_avx2(const ShadowBand& band, std::span<const double> xs, std::span<double> out) {
    if (band.length >= band.pitch) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    const std::size_t count = xs.size();
    const std::size_t vec_end = count - count % 4;
    const __m256d start = _mm256_set1_pd(band.start);
    const __m256d pitch = _mm256_set1_pd(band.pitch);
    const __m256d inv_p = _mm256_set1_pd(1.0 / band.pitch);
    const __m256d length = _mm256_set1_pd(band.length);
    const __m256d one = _mm256_set1_pd(1.0);
    for (std::size_t i = 0; i < vec_end; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(xs.data() + i), start);
        const __m256d r = _mm256_sub_pd(d, _mm256_mul_pd(pitch, _mm256_floor_pd(_mm256_mul_pd(d, inv_p))));
        const __m256d lit = _mm256_cmp_pd(r, length, _CMP_GE_OQ);
        _mm256_storeu_pd(out.data() + i, _mm256_and_pd(lit, one));
    }
    if (vec_end < count)
        beam_mask_scalar(band, xs.subspan(vec_end), out.subspan(vec_end));
}

}  // namespace agripv::kernels
