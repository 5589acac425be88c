// Scalar reference kernels. Complex products are written out longhand so
// the AVX2 lanes compute the identical IEEE operation sequence; this file
// is compiled with -ffp-contract=off to keep mul/add from fusing.
#include "sciforge/spectral_kernels.hpp"

namespace sciforge::spectral::kernels {

namespace {

void cmul_scalar(cplx* dst, const cplx* a, const cplx* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double ar = a[i].real(), ai = a[i].imag();
        double br = b[i].real(), bi = b[i].imag();
        dst[i] = {ar * br - ai * bi, ar * bi + ai * br};
    }
}

void scale_scalar(cplx* data, std::size_t n, double factor) {
    for (std::size_t i = 0; i < n; ++i)
        data[i] = {data[i].real() * factor, data[i].imag() * factor};
}

void conjugate_scalar(cplx* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        data[i] = {data[i].real(), -data[i].imag()};
}

void radix2_stage_scalar(cplx* y, std::size_t n, std::size_t half, const cplx* w,
                         std::size_t wstride) {
    for (std::size_t block = 0; block < n; block += 2 * half) {
        cplx* lo = y + block;
        cplx* hi = lo + half;
        for (std::size_t k = 0; k < half; ++k) {
            const cplx t = w[k * wstride];
            double tr = t.real(), ti = t.imag();
            double hr = hi[k].real(), hi_ = hi[k].imag();
            const cplx v{tr * hr - ti * hi_, tr * hi_ + ti * hr};
            const cplx u = lo[k];
            lo[k] = u + v;
            hi[k] = u - v;
        }
    }
}

}  // namespace

const Backend& scalar_backend() {
    static const Backend backend{
        "scalar", &cmul_scalar, &scale_scalar, &conjugate_scalar,
        &radix2_stage_scalar,
    };
    return backend;
}

}  // namespace sciforge::spectral::kernels
