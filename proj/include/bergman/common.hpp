#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace bergman {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// A point of C^n. Membership in the polydisc is a separate predicate.
struct PolyDiscPoint {
    std::vector<Complex> coords;

    PolyDiscPoint() = default;
    PolyDiscPoint(std::initializer_list<Complex> c) : coords(c) {}
    explicit PolyDiscPoint(std::vector<Complex> c) : coords(std::move(c)) {}

    std::size_t dim() const noexcept { return coords.size(); }
    const Complex& operator[](std::size_t i) const { return coords[i]; }
    Complex& operator[](std::size_t i) { return coords[i]; }

    bool in_polydisc() const noexcept {
        for (const auto& c : coords)
            if (!(std::abs(c) < 1.0)) return false;
        return true;
    }
};

/// Values (p_1(w), ..., p_n(w)) of the elementary symmetric polynomials.
struct SymmetrizedPoint {
    std::vector<Complex> coords;

    SymmetrizedPoint() = default;
    SymmetrizedPoint(std::initializer_list<Complex> c) : coords(c) {}
    explicit SymmetrizedPoint(std::vector<Complex> c) : coords(std::move(c)) {}

    std::size_t dim() const noexcept { return coords.size(); }
    const Complex& operator[](std::size_t i) const { return coords[i]; }
};

// Error taxonomy. Every failure mode named by an operation contract has its
// own type so callers (and the CLI exit codes) can tell them apart.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

class PoleProximity : public Error {
public:
    using Error::Error;
};

class BranchLocus : public Error {
public:
    using Error::Error;
};

class InterpolationInconsistent : public Error {
public:
    using Error::Error;
};

class EmptyRegion : public Error {
public:
    using Error::Error;
};

class NonIntegrable : public Error {
public:
    using Error::Error;
};

class AmbiguousFit : public Error {
public:
    using Error::Error;
};

class QuadratureNotConverged : public Error {
public:
    using Error::Error;
};

class IntegrationOverflow : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

inline void require(bool cond, const char* what) {
    if (!cond) throw InvalidArgument(what);
}

}  // namespace bergman
