// AVX2 kernels: two complex doubles per 256-bit lane. The complex product
// uses mul + addsub (no FMA) so results match the scalar reference bit for
// bit; compiled with -mavx2 -ffp-contract=off.
#include "sciforge/spectral_kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace sciforge::spectral::kernels {

namespace {

// [a0r a0i a1r a1i] * [b0r b0i b1r b1i], complex per 128-bit half
inline __m256d cmul_pd(__m256d a, __m256d b) {
    __m256d ar = _mm256_movedup_pd(a);             // a0r a0r a1r a1r
    __m256d ai = _mm256_unpackhi_pd(a, a);         // a0i a0i a1i a1i
    __m256d bswap = _mm256_shuffle_pd(b, b, 0x5);  // b0i b0r b1i b1r
    return _mm256_addsub_pd(_mm256_mul_pd(ar, b), _mm256_mul_pd(ai, bswap));
}

void cmul_avx2(cplx* dst, const cplx* a, const cplx* b, std::size_t n) {
    auto* d = reinterpret_cast<double*>(dst);
    const auto* pa = reinterpret_cast<const double*>(a);
    const auto* pb = reinterpret_cast<const double*>(b);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(pa + 2 * i);
        __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        _mm256_storeu_pd(d + 2 * i, cmul_pd(va, vb));
    }
    for (; i < n; ++i) {
        double ar = a[i].real(), ai = a[i].imag();
        double br = b[i].real(), bi = b[i].imag();
        dst[i] = {ar * br - ai * bi, ar * bi + ai * br};
    }
}

void scale_avx2(cplx* data, std::size_t n, double factor) {
    auto* d = reinterpret_cast<double*>(data);
    const __m256d f = _mm256_set1_pd(factor);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(d + 2 * i), f));
    for (; i < n; ++i)
        data[i] = {data[i].real() * factor, data[i].imag() * factor};
}

void conjugate_avx2(cplx* data, std::size_t n) {
    auto* d = reinterpret_cast<double*>(data);
    const __m256d mask = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        _mm256_storeu_pd(d + 2 * i, _mm256_xor_pd(_mm256_loadu_pd(d + 2 * i), mask));
    for (; i < n; ++i)
        data[i] = {data[i].real(), -data[i].imag()};
}

void radix2_stage_avx2(cplx* y, std::size_t n, std::size_t half, const cplx* w,
                       std::size_t wstride) {
    for (std::size_t block = 0; block < n; block += 2 * half) {
        cplx* lo = y + block;
        cplx* hi = lo + half;
        auto* plo = reinterpret_cast<double*>(lo);
        auto* phi = reinterpret_cast<double*>(hi);
        std::size_t k = 0;
        for (; k + 2 <= half; k += 2) {
            __m256d tw;
            if (wstride == 1) {
                tw = _mm256_loadu_pd(reinterpret_cast<const double*>(w + k));
            } else {
                __m128d w0 =
                    _mm_loadu_pd(reinterpret_cast<const double*>(w + k * wstride));
                __m128d w1 = _mm_loadu_pd(
                    reinterpret_cast<const double*>(w + (k + 1) * wstride));
                tw = _mm256_set_m128d(w1, w0);
            }
            __m256d u = _mm256_loadu_pd(plo + 2 * k);
            __m256d v = cmul_pd(tw, _mm256_loadu_pd(phi + 2 * k));
            _mm256_storeu_pd(plo + 2 * k, _mm256_add_pd(u, v));
            _mm256_storeu_pd(phi + 2 * k, _mm256_sub_pd(u, v));
        }
        for (; k < half; ++k) {
            const cplx t = w[k * wstride];
            double tr = t.real(), ti = t.imag();
            double hr = hi[k].real(), hx = hi[k].imag();
            const cplx v{tr * hr - ti * hx, tr * hx + ti * hr};
            const cplx u = lo[k];
            lo[k] = u + v;
            hi[k] = u - v;
        }
    }
}

}  // namespace

const Backend& avx2_backend() {
    static const Backend backend{
        "avx2", &cmul_avx2, &scale_avx2, &conjugate_avx2, &radix2_stage_avx2,
    };
    return backend;
}

}  // namespace sciforge::spectral::kernels

#endif
