#pragma once

// Shared vocabulary: error kinds, estimates with error bars, the precision
// policy and the single principal-branch power primitive.

#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace superzeta {

enum class ErrorKind {
    pole,              // evaluation at a pole (s = 1 for Hurwitz, s in {1,2} for superzetas, ...)
    zero,              // log of an entire function evaluated at one of its zeros
    domain,            // argument outside the convergence/validity region
    branch,            // a base lands on the cut (-inf, 0] for a non-integer exponent
    convergence,       // series or quadrature did not reach the requested tolerance
    configuration,     // bad policy, cache limit exceeded, invalid surface data
    budget,            // enumeration exceeded its work budget
    io,                // file could not be opened or written
    malformed,         // file content does not parse
    checksum,          // stored hash does not match content
    cutoff_mismatch,   // stored cutoff differs from the requested one
    insufficient_data  // ledger does not carry the spectral data needed
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::pole: return "pole";
        case ErrorKind::zero: return "zero";
        case ErrorKind::domain: return "domain";
        case ErrorKind::branch: return "branch";
        case ErrorKind::convergence: return "convergence";
        case ErrorKind::configuration: return "configuration";
        case ErrorKind::budget: return "budget";
        case ErrorKind::io: return "io";
        case ErrorKind::malformed: return "malformed";
        case ErrorKind::checksum: return "checksum";
        case ErrorKind::cutoff_mismatch: return "cutoff_mismatch";
        case ErrorKind::insufficient_data: return "insufficient_data";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// True for errors that describe the numeric input rather than the setup.
    bool is_numeric() const noexcept {
        switch (kind_) {
            case ErrorKind::pole:
            case ErrorKind::zero:
            case ErrorKind::domain:
            case ErrorKind::branch:
            case ErrorKind::convergence:
                return true;
            default:
                return false;
        }
    }

private:
    ErrorKind kind_;
};

/// A value together with an absolute error estimate.
template <std::floating_point Real = double>
struct Estimate {
    std::complex<Real> value{};
    Real abs_error{0};
};

template <std::floating_point Real = double>
struct PrecisionPolicy {
    Real tolerance = Real(1e-14);  // target absolute accuracy
    int series_order = 8;          // m: Bernoulli terms in asymptotic series
    Real shift_threshold = Real(20);  // R: recurse until Re(z) > R

    void validate() const {
        const Real eps = std::numeric_limits<Real>::epsilon();
        if (!(tolerance >= Real(10) * eps))
            throw Error(ErrorKind::configuration, "tolerance below 10x working epsilon");
        if (series_order < 2) throw Error(ErrorKind::configuration, "series order must be >= 2");
        if (!(shift_threshold > 0)) throw Error(ErrorKind::configuration, "shift threshold must be positive");
    }
};

template <std::floating_point Real>
constexpr Real pi_v = std::numbers::pi_v<Real>;

template <std::floating_point Real>
bool is_nonpositive_integer(const std::complex<Real>& z) {
    return z.imag() == 0 && z.real() <= 0 && std::floor(z.real()) == z.real();
}

template <std::floating_point Real>
bool is_integer(const std::complex<Real>& z) {
    return z.imag() == 0 && std::floor(z.real()) == z.real();
}

template <std::floating_point Real>
bool on_cut(const std::complex<Real>& w) {
    return w.imag() == 0 && w.real() <= 0;
}

/// Principal logarithm, arg in (-pi, pi]. Throws on w == 0.
template <std::floating_point Real>
std::complex<Real> principal_log(const std::complex<Real>& w) {
    if (w == std::complex<Real>(0)) throw Error(ErrorKind::branch, "log of zero");
    return std::log(w);
}

/// w^p on the principal branch. Every non-integer power in the library goes
/// through here. Integer exponents are exact for any nonzero base; a
/// non-integer exponent with base on (-inf, 0] raises a branch error.
template <std::floating_point Real>
std::complex<Real> principal_pow(const std::complex<Real>& w, const std::complex<Real>& p) {
    if (is_integer(p) && std::abs(p.real()) < Real(1 << 30)) {
        const long n = static_cast<long>(p.real());
        if (w == std::complex<Real>(0)) {
            if (n > 0) return {0, 0};
            if (n == 0) return {1, 0};
            throw Error(ErrorKind::pole, "negative power of zero");
        }
        std::complex<Real> base = n < 0 ? std::complex<Real>(1) / w : w;
        unsigned long e = static_cast<unsigned long>(n < 0 ? -n : n);
        std::complex<Real> result(1);
        while (e) {
            if (e & 1UL) result *= base;
            base *= base;
            e >>= 1;
        }
        return result;
    }
    if (on_cut(w)) throw Error(ErrorKind::branch, "non-integer power of a base on (-inf, 0]");
    return std::exp(p * std::log(w));
}

template <std::floating_point Real>
std::complex<Real> principal_pow(const std::complex<Real>& w, Real p) {
    return principal_pow(w, std::complex<Real>(p));
}

/// sin(pi s) / (pi (j - s)), finite at s = j.
template <std::floating_point Real>
std::complex<Real> sin_pi_over_pi_shift(const std::complex<Real>& s, int j) {
    const std::complex<Real> d = s - Real(j);
    // sin(pi s) = (-1)^j sin(pi d)
    const Real sign = (j % 2 == 0) ? Real(1) : Real(-1);
    if (std::abs(d) < Real(1e-4)) {
        const std::complex<Real> x = pi_v<Real> * d;
        const std::complex<Real> x2 = x * x;
        // sin(x)/x series
        const std::complex<Real> sinc = Real(1) - x2 / Real(6) + x2 * x2 / Real(120) - x2 * x2 * x2 / Real(5040);
        return -sign * sinc;
    }
    return sign * std::sin(pi_v<Real> * d) / (pi_v<Real> * (-d));
}

}  // namespace superzeta
