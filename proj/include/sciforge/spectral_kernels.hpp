#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace sciforge::spectral::kernels {

using cplx = std::complex<double>;

/// Data-parallel inner loops of the transforms. Every operation exists as a
/// scalar reference and, on x86-64, an AVX2 variant; the two are bit-exact
/// (same operation order, no FMA contraction) so backend choice never
/// changes results.
struct Backend {
    std::string_view name;

    /// dst[i] = a[i] * b[i]
    void (*cmul)(cplx* dst, const cplx* a, const cplx* b, std::size_t n);
    /// data[i] *= factor
    void (*scale)(cplx* data, std::size_t n, double factor);
    /// data[i] = conj(data[i])
    void (*conjugate)(cplx* data, std::size_t n);
    /// One radix-2 decimation-in-time stage over a contiguous block of
    /// length n: for every block of 2*half and every k < half,
    ///   u = y[k];  v = w[k*wstride] * y[k+half];
    ///   y[k] = u + v;  y[k+half] = u - v.
    void (*radix2_stage)(cplx* y, std::size_t n, std::size_t half, const cplx* w,
                         std::size_t wstride);
};

const Backend& scalar_backend();
#if defined(__x86_64__) || defined(_M_X64)
const Backend& avx2_backend();
#endif

bool avx2_supported();

/// Backend picked at first use: AVX2 when the CPU has it, scalar otherwise.
/// SCIFORGE_SIMD=scalar|avx2 in the environment forces the choice.
const Backend& active_backend();

}  // namespace sciforge::spectral::kernels
