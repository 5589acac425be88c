#include "sciforge/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <thread>

#include "sciforge/spectral_kernels.hpp"
#include "sciforge/text_format.hpp"

namespace sciforge::spectral {

using kernels::cplx;

SpectralField SpectralField::zeros(Shape shape) {
    std::size_t total = 1;
    for (auto n : shape)
        total *= n;
    return {std::move(shape), std::vector<cplx>(total)};
}

RealField RealField::zeros(Shape shape) {
    std::size_t total = 1;
    for (auto n : shape)
        total *= n;
    return {std::move(shape), std::vector<double>(total)};
}

namespace detail {

namespace {

bool is_pow2(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

std::vector<std::uint32_t> bit_reversal(std::size_t n) {
    std::vector<std::uint32_t> table(n);
    for (std::size_t i = 0, j = 0; i < n; ++i) {
        table[i] = static_cast<std::uint32_t>(j);
        for (std::size_t bit = n >> 1; (j ^= bit) < bit; bit >>= 1) {
        }
    }
    return table;
}

// exp(sign * 2*pi*i * k / n) for k < n/2
std::vector<cplx> twiddles(std::size_t n, double sign) {
    std::vector<cplx> w(n / 2);
    for (std::size_t k = 0; k < w.size(); ++k) {
        double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
                       static_cast<double>(n);
        w[k] = {std::cos(angle), std::sin(angle)};
    }
    return w;
}

}  // namespace

/// One-dimensional transform of a fixed length: radix-2 for powers of two,
/// Bluestein's chirp transform over a power-of-two convolution otherwise.
class LineFft {
public:
    explicit LineFft(std::size_t n) : n_(n), pow2_(is_pow2(n)) {
        if (n_ <= 1)
            return;
        if (pow2_) {
            fwd_ = twiddles(n_, -1.0);
            inv_ = twiddles(n_, +1.0);
            rev_ = bit_reversal(n_);
            return;
        }
        m_ = next_pow2(2 * n_ - 1);
        mfwd_ = twiddles(m_, -1.0);
        minv_ = twiddles(m_, +1.0);
        mrev_ = bit_reversal(m_);
        chirp_.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            // exp(-i*pi*j^2/n); j^2 taken mod 2n keeps the angle exact
            std::size_t q = (j * j) % (2 * n_);
            double angle =
                -std::numbers::pi * static_cast<double>(q) / static_cast<double>(n_);
            chirp_[j] = {std::cos(angle), std::sin(angle)};
        }
        std::vector<cplx> b(m_, cplx{0.0, 0.0});
        b[0] = std::conj(chirp_[0]);
        for (std::size_t j = 1; j < n_; ++j)
            b[j] = b[m_ - j] = std::conj(chirp_[j]);
        pow2_transform(b.data(), m_, mfwd_, mrev_);
        bspec_ = std::move(b);
    }

    std::size_t size() const noexcept { return n_; }

    void forward(cplx* line) const {
        if (n_ <= 1)
            return;
        if (pow2_) {
            pow2_transform(line, n_, fwd_, rev_);
            return;
        }
        const auto& k = kernels::active_backend();
        std::vector<cplx> work(m_, cplx{0.0, 0.0});
        k.cmul(work.data(), line, chirp_.data(), n_);
        pow2_transform(work.data(), m_, mfwd_, mrev_);
        k.cmul(work.data(), work.data(), bspec_.data(), m_);
        pow2_transform(work.data(), m_, minv_, mrev_);
        k.scale(work.data(), m_, 1.0 / static_cast<double>(m_));
        k.cmul(line, work.data(), chirp_.data(), n_);
    }

    // includes the 1/n factor
    void inverse(cplx* line) const {
        if (n_ <= 1)
            return;
        const auto& k = kernels::active_backend();
        if (pow2_) {
            pow2_transform(line, n_, inv_, rev_);
            k.scale(line, n_, 1.0 / static_cast<double>(n_));
            return;
        }
        k.conjugate(line, n_);
        forward(line);
        k.conjugate(line, n_);
        k.scale(line, n_, 1.0 / static_cast<double>(n_));
    }

private:
    static void pow2_transform(cplx* data, std::size_t n,
                               const std::vector<cplx>& w,
                               const std::vector<std::uint32_t>& rev) {
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t j = rev[i];
            if (i < j)
                std::swap(data[i], data[j]);
        }
        const auto& k = kernels::active_backend();
        for (std::size_t half = 1; half < n; half <<= 1)
            k.radix2_stage(data, n, half, w.data(), n / (2 * half));
    }

    std::size_t n_;
    bool pow2_;
    std::vector<cplx> fwd_, inv_;
    std::vector<std::uint32_t> rev_;
    // Bluestein state
    std::size_t m_ = 0;
    std::vector<cplx> mfwd_, minv_;
    std::vector<std::uint32_t> mrev_;
    std::vector<cplx> chirp_;
    std::vector<cplx> bspec_;
};

class PlanState {
public:
    explicit PlanState(const Shape& shape) {
        for (std::size_t n : shape)
            if (!lines_.count(n))
                lines_.emplace(n, LineFft(n));
    }

    const LineFft& line(std::size_t n) const { return lines_.at(n); }

private:
    std::map<std::size_t, LineFft> lines_;
};

namespace {

std::string shape_text(const Shape& shape) {
    std::string out = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i)
            out += ", ";
        out += std::to_string(shape[i]);
    }
    return out + "]";
}

void run_lines(std::size_t count, int threads,
               const std::function<void(std::size_t)>& body);

/// Apply `line_op` along `axis` of a row-major array. Lines off the last
/// axis are gathered into a contiguous buffer and scattered back.
template <typename LineOp>
void transform_axis(std::vector<cplx>& data, const Shape& shape, std::size_t axis,
                    int threads, const LineOp& line_op) {
    const std::size_t n = shape[axis];
    std::size_t stride = 1;
    for (std::size_t d = axis + 1; d < shape.size(); ++d)
        stride *= shape[d];
    std::size_t outer = 1;
    for (std::size_t d = 0; d < axis; ++d)
        outer *= shape[d];
    const std::size_t lines = outer * stride;

    run_lines(lines, threads, [&](std::size_t index) {
        const std::size_t o = index / stride;
        const std::size_t s = index % stride;
        cplx* base = data.data() + o * n * stride + s;
        if (stride == 1) {
            line_op(base);
            return;
        }
        std::vector<cplx> buffer(n);
        for (std::size_t k = 0; k < n; ++k)
            buffer[k] = base[k * stride];
        line_op(buffer.data());
        for (std::size_t k = 0; k < n; ++k)
            base[k * stride] = buffer[k];
    });
}

void run_lines(std::size_t count, int threads,
               const std::function<void(std::size_t)>& body) {
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers)
                body(i);
        });
    }
    for (auto& t : pool)
        t.join();
}

}  // namespace

}  // namespace detail

FftPlan::FftPlan(Shape shape, TransformKind kind, int threads)
    : shape_(std::move(shape)), kind_(kind), threads_(threads) {
    if (shape_.empty() || shape_.size() > 3)
        throw BadShape("rank must be 1..3, got " + std::to_string(shape_.size()));
    for (auto n : shape_)
        if (n == 0)
            throw BadShape("zero extent in " + detail::shape_text(shape_));
    if (threads_ < 1)
        throw BadShape("thread count must be >= 1");
    state_ = std::make_shared<detail::PlanState>(shape_);
}

Shape FftPlan::spectrum_shape() const {
    Shape s = shape_;
    if (kind_ == TransformKind::RealToComplex)
        s.back() = s.back() / 2 + 1;
    return s;
}

FftPlan make_plan(Shape shape, TransformKind kind,
                  const std::map<std::string, std::string>& environment) {
    int threads = 1;
    auto it = environment.find("OMP_NUM_THREADS");
    if (it != environment.end()) {
        auto value = parse_integer(it->second);
        if (!value || *value < 1)
            throw BadThreadCount(it->second);
        threads = static_cast<int>(*value);
    }
    return FftPlan(std::move(shape), kind, threads);
}

namespace {

void require_shape(const Shape& expected, const Shape& actual, const char* what) {
    if (expected != actual)
        throw ShapeMismatch(std::string(what) + ": expected " +
                            detail::shape_text(expected) + ", got " +
                            detail::shape_text(actual));
}

}  // namespace

SpectralField fft(const FftPlan& plan, const SpectralField& field) {
    if (plan.kind() != TransformKind::ComplexToComplex)
        throw ShapeMismatch("fft needs a ComplexToComplex plan");
    require_shape(plan.shape(), field.shape, "fft input");
    SpectralField out = field;
    for (std::size_t axis = 0; axis < out.shape.size(); ++axis) {
        const auto& line = plan.state_->line(out.shape[axis]);
        detail::transform_axis(out.data, out.shape, axis, plan.threads(),
                               [&](cplx* p) { line.forward(p); });
    }
    return out;
}

SpectralField ifft(const FftPlan& plan, const SpectralField& spectrum) {
    if (plan.kind() != TransformKind::ComplexToComplex)
        throw ShapeMismatch("ifft needs a ComplexToComplex plan");
    require_shape(plan.shape(), spectrum.shape, "ifft input");
    SpectralField out = spectrum;
    for (std::size_t axis = 0; axis < out.shape.size(); ++axis) {
        const auto& line = plan.state_->line(out.shape[axis]);
        detail::transform_axis(out.data, out.shape, axis, plan.threads(),
                               [&](cplx* p) { line.inverse(p); });
    }
    return out;
}

SpectralField rfft(const FftPlan& plan, const RealField& field) {
    if (plan.kind() != TransformKind::RealToComplex)
        throw ShapeMismatch("rfft needs a RealToComplex plan");
    require_shape(plan.shape(), field.shape, "rfft input");

    const Shape& shape = plan.shape();
    const std::size_t n_last = shape.back();
    const std::size_t keep = n_last / 2 + 1;
    const std::size_t rows = field.size() / n_last;

    // full transform along the last axis, then keep the non-negative bins
    SpectralField out;
    out.shape = plan.spectrum_shape();
    out.data.resize(rows * keep);
    const auto& last_line = plan.state_->line(n_last);
    detail::run_lines(rows, plan.threads(), [&](std::size_t r) {
        std::vector<cplx> buffer(n_last);
        const double* src = field.data.data() + r * n_last;
        for (std::size_t k = 0; k < n_last; ++k)
            buffer[k] = {src[k], 0.0};
        last_line.forward(buffer.data());
        std::copy(buffer.begin(), buffer.begin() + static_cast<long>(keep),
                  out.data.begin() + static_cast<long>(r * keep));
    });

    for (std::size_t axis = 0; axis + 1 < shape.size(); ++axis) {
        const auto& line = plan.state_->line(shape[axis]);
        detail::transform_axis(out.data, out.shape, axis, plan.threads(),
                               [&](cplx* p) { line.forward(p); });
    }
    return out;
}

RealField irfft(const FftPlan& plan, const SpectralField& spectrum) {
    if (plan.kind() != TransformKind::RealToComplex)
        throw ShapeMismatch("irfft needs a RealToComplex plan");
    require_shape(plan.spectrum_shape(), spectrum.shape, "irfft input");

    const Shape& shape = plan.shape();
    const std::size_t rank = shape.size();
    const std::size_t n_last = shape.back();
    const std::size_t keep = n_last / 2 + 1;

    // rebuild the full spectrum from Hermitian symmetry:
    // full[i..., k] = conj(half[(-i) mod n ..., n_last - k]) for k > n/2
    SpectralField full = SpectralField::zeros(shape);
    const std::size_t rows = full.size() / n_last;
    Shape outer(shape.begin(), shape.end() - 1);
    for (std::size_t r = 0; r < rows; ++r) {
        // decompose r into outer indices
        std::size_t rem = r;
        std::size_t mirrored = 0;
        for (std::size_t d = outer.size(); d-- > 0;) {
            std::size_t idx = rem % outer[d];
            rem /= outer[d];
            std::size_t mirror_idx = idx == 0 ? 0 : outer[d] - idx;
            std::size_t stride = 1;
            for (std::size_t e = d + 1; e < outer.size(); ++e)
                stride *= outer[e];
            mirrored += mirror_idx * stride;
        }
        const cplx* half_row = spectrum.data.data() + r * keep;
        const cplx* mirror_row = spectrum.data.data() + mirrored * keep;
        cplx* dst = full.data.data() + r * n_last;
        for (std::size_t k = 0; k < keep; ++k)
            dst[k] = half_row[k];
        for (std::size_t k = keep; k < n_last; ++k)
            dst[k] = std::conj(mirror_row[n_last - k]);
    }

    for (std::size_t axis = 0; axis < rank; ++axis) {
        const auto& line = plan.state_->line(shape[axis]);
        detail::transform_axis(full.data, full.shape, axis, plan.threads(),
                               [&](cplx* p) { line.inverse(p); });
    }

    double residue = 0.0;
    for (const auto& v : full.data)
        residue = std::max(residue, std::abs(v.imag()));
    if (residue > 1e-10)
        throw NonHermitianInput(residue);

    RealField out;
    out.shape = shape;
    out.data.resize(full.size());
    for (std::size_t i = 0; i < full.size(); ++i)
        out.data[i] = full.data[i].real();
    return out;
}

}  // namespace sciforge::spectral
