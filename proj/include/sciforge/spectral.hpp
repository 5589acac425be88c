#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sciforge/errors.hpp"

namespace sciforge::spectral {

class BadShape : public Error {
public:
    explicit BadShape(const std::string& detail) : Error("bad shape: " + detail) {}
};

class BadThreadCount : public Error {
public:
    explicit BadThreadCount(const std::string& value)
        : Error("OMP_NUM_THREADS='" + value + "' is not a positive integer") {}
};

class ShapeMismatch : public Error {
public:
    explicit ShapeMismatch(const std::string& detail)
        : Error("shape mismatch: " + detail) {}
};

class NonHermitianInput : public Error {
public:
    explicit NonHermitianInput(double residue)
        : Error("spectrum is not Hermitian: imaginary residue " +
                std::to_string(residue)) {}
};

using Shape = std::vector<std::size_t>;

/// Complex field in row-major order, last axis fastest.
struct SpectralField {
    Shape shape;
    std::vector<std::complex<double>> data;

    static SpectralField zeros(Shape shape);
    std::size_t size() const noexcept { return data.size(); }
};

struct RealField {
    Shape shape;
    std::vector<double> data;

    static RealField zeros(Shape shape);
    std::size_t size() const noexcept { return data.size(); }
};

enum class TransformKind { ComplexToComplex, RealToComplex };

namespace detail {
class PlanState;
}

/// Immutable transform descriptor for one logical shape of rank 1..3.
/// Twiddle tables are precomputed at plan time; transform calls are pure
/// and safe to share across threads. Thread count never affects results.
class FftPlan {
public:
    FftPlan(Shape shape, TransformKind kind, int threads);

    const Shape& shape() const noexcept { return shape_; }
    TransformKind kind() const noexcept { return kind_; }
    int threads() const noexcept { return threads_; }
    /// For RealToComplex, the spectrum shape (last extent n/2 + 1).
    Shape spectrum_shape() const;

private:
    friend SpectralField fft(const FftPlan&, const SpectralField&);
    friend SpectralField ifft(const FftPlan&, const SpectralField&);
    friend SpectralField rfft(const FftPlan&, const RealField&);
    friend RealField irfft(const FftPlan&, const SpectralField&);

    Shape shape_;
    TransformKind kind_;
    int threads_;
    std::shared_ptr<const detail::PlanState> state_;
};

/// threads = OMP_NUM_THREADS when set (must be a positive integer), else 1.
FftPlan make_plan(Shape shape, TransformKind kind,
                  const std::map<std::string, std::string>& environment);

/// Unnormalized forward DFT along every axis.
SpectralField fft(const FftPlan& plan, const SpectralField& field);
/// Inverse DFT scaled by 1/N so that ifft(fft(x)) == x.
SpectralField ifft(const FftPlan& plan, const SpectralField& spectrum);
/// Forward transform of a real field; the last axis keeps only the
/// non-negative frequencies (extent n/2 + 1).
SpectralField rfft(const FftPlan& plan, const RealField& field);
/// Inverse of rfft. The reconstruction's imaginary residue must stay below
/// 1e-10 max-abs, then is discarded.
RealField irfft(const FftPlan& plan, const SpectralField& spectrum);

}  // namespace sciforge::spectral
