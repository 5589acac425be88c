#include <cstdlib>
#include <string_view>

#include "sciforge/spectral_kernels.hpp"

namespace sciforge::spectral::kernels {

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

namespace {

const Backend& pick_backend() {
    const char* forced_env = std::getenv("SCIFORGE_SIMD");
    std::string_view forced = forced_env ? forced_env : "";
#if defined(__x86_64__) || defined(_M_X64)
    if (forced == "avx2")
        return avx2_backend();
    if (forced == "scalar")
        return scalar_backend();
    if (avx2_supported())
        return avx2_backend();
#else
    (void)forced;
#endif
    return scalar_backend();
}

}  // namespace

const Backend& active_backend() {
    static const Backend& chosen = pick_backend();
    return chosen;
}

}  // namespace sciforge::spectral::kernels
