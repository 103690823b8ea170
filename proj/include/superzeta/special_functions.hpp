#pragma once

// Complex special functions: log-gamma, polygamma, Hurwitz zeta and its
// s-derivative, Barnes G, the G1 factor of the Selberg zeta function,
// polylogarithm and Milnor gamma of depth r.
//
// Every function takes a PrecisionPolicy; the defaults reach about 1e-14
// absolute accuracy in double precision on moderate arguments.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "superzeta/bernoulli.hpp"
#include "superzeta/core.hpp"

namespace superzeta {

namespace detail {

template <std::floating_point Real>
Real half_log_two_pi() {
    return Real(0.5) * std::log(Real(2) * pi_v<Real>);
}

// Stirling series for log Gamma(w), Re(w) large.
template <std::floating_point Real>
std::complex<Real> stirling_log_gamma(const std::complex<Real>& w, int m) {
    const auto& bern = bernoulli_cache();
    std::complex<Real> result = (w - Real(0.5)) * std::log(w) - w + half_log_two_pi<Real>();
    const std::complex<Real> inv = Real(1) / w;
    const std::complex<Real> inv2 = inv * inv;
    std::complex<Real> p = inv;
    for (int j = 1; j < m; ++j) {
        result += bern.value<Real>(2 * j) / Real((2 * j - 1) * (2 * j)) * p;
        p *= inv2;
    }
    return result;
}

template <std::floating_point Real>
std::complex<Real> asymptotic_digamma(const std::complex<Real>& w, int m) {
    const auto& bern = bernoulli_cache();
    std::complex<Real> result = std::log(w) - Real(0.5) / w;
    const std::complex<Real> inv2 = Real(1) / (w * w);
    std::complex<Real> p = inv2;
    for (int k = 1; k <= m; ++k) {
        result -= bern.value<Real>(2 * k) / Real(2 * k) * p;
        p *= inv2;
    }
    return result;
}

// log G(w+1) for Re(w) large.
template <std::floating_point Real>
std::complex<Real> asymptotic_log_barnes_g(const std::complex<Real>& w, int m, Real zeta_prime_m1) {
    const auto& bern = bernoulli_cache();
    const std::complex<Real> lw = std::log(w);
    std::complex<Real> result = Real(0.5) * w * w * (lw - Real(1.5)) - lw / Real(12) +
                                w * half_log_two_pi<Real>() + zeta_prime_m1;
    const std::complex<Real> inv2 = Real(1) / (w * w);
    std::complex<Real> p = inv2;
    for (int k = 1; k < m; ++k) {
        result += bern.value<Real>(2 * k + 2) / Real(4 * k * (k + 1)) * p;
        p *= inv2;
    }
    return result;
}

template <std::floating_point Real>
struct HurwitzParts {
    std::complex<Real> value;
    std::complex<Real> s_derivative;
    Real abs_error;
};

// Euler-Maclaurin for zeta_H(s, z), optionally with the term-wise
// differentiated s-derivative.
template <std::floating_point Real>
HurwitzParts<Real> hurwitz_euler_maclaurin(const std::complex<Real>& s, const std::complex<Real>& z,
                                           bool want_derivative, const PrecisionPolicy<Real>& policy) {
    if (s == std::complex<Real>(1)) throw Error(ErrorKind::pole, "Hurwitz zeta has a simple pole at s = 1");
    if (is_nonpositive_integer(z)) throw Error(ErrorKind::pole, "Hurwitz zeta undefined for z in -N");

    const auto& bern = bernoulli_cache();
    constexpr int correction_terms = 8;
    const Real b_next = bern.value<Real>(2 * correction_terms + 2);

    // Remainder after K correction terms at a = z + M:
    //   |B_{2K+2}/(2K+2)! (s)_{2K+1} a^{-s-2K-1}| * |s+2K+1| / (Re(s)+2K+1).
    auto remainder_bound = [&](const std::complex<Real>& a) {
        std::complex<Real> poch(1), poch_d(0);
        Real factorial = 1;
        for (int j = 0; j < 2 * correction_terms + 1; ++j) {
            poch_d = poch_d * (s + Real(j)) + poch;
            poch *= s + Real(j);
        }
        for (int j = 2; j <= 2 * correction_terms + 2; ++j) factorial *= Real(j);
        // the s-derivative of the remainder does not vanish with (s)_{2K+1}
        const Real poch_mag =
            want_derivative ? std::abs(poch_d) + std::abs(poch) * std::abs(std::log(a)) : std::abs(poch);
        const Real mag = poch_mag * std::abs(b_next) / factorial *
                         std::exp(-(s.real() + Real(2 * correction_terms + 1)) * std::log(std::abs(a)) +
                                  s.imag() * std::arg(a));
        const Real re_shift = s.real() + Real(2 * correction_terms + 1);
        return re_shift > 0 ? mag * std::abs(s + Real(2 * correction_terms + 1)) / re_shift : mag * Real(1e6);
    };

    // Smallest shift that keeps the remainder below tolerance; a large shift
    // would only add cancellation when Re(s) < 0.
    long m_shift = std::max<long>(0L, static_cast<long>(std::ceil(Real(1) - z.real())));
    Real bound = remainder_bound(z + Real(m_shift));
    while (bound > policy.tolerance * Real(0.01) && m_shift < 1000000L) {
        m_shift += std::max<long>(1L, m_shift / 4);
        bound = remainder_bound(z + Real(m_shift));
    }
    if (bound > policy.tolerance) throw Error(ErrorKind::convergence, "Hurwitz zeta Euler-Maclaurin did not converge");

    std::complex<Real> value(0), deriv(0);
    Real magnitude = 0;
    for (long n = 0; n < m_shift; ++n) {
        const std::complex<Real> w = z + Real(n);
        const std::complex<Real> term = principal_pow(w, -s);
        value += term;
        magnitude += std::abs(term);
        if (want_derivative) deriv -= principal_log(w) * term;
    }
    const std::complex<Real> a = z + Real(m_shift);
    const std::complex<Real> log_a = principal_log(a);
    const std::complex<Real> a_pow = principal_pow(a, -s);  // a^{-s}
    const std::complex<Real> sm1 = s - Real(1);

    value += a * a_pow / sm1 + Real(0.5) * a_pow;
    magnitude += std::abs(a * a_pow / sm1);
    if (want_derivative) {
        deriv += -log_a * a * a_pow / sm1 - a * a_pow / (sm1 * sm1) - Real(0.5) * log_a * a_pow;
    }

    // Pochhammer (s)_{2k-1} and its s-derivative, built incrementally.
    std::complex<Real> poch = s;
    std::complex<Real> poch_d(1);
    std::complex<Real> a_power = a_pow / a;  // a^{-s-1}
    const std::complex<Real> inv_a2 = Real(1) / (a * a);
    Real factorial = 2;  // (2k)!
    for (int k = 1; k <= correction_terms; ++k) {
        const Real c = bern.value<Real>(2 * k) / factorial;
        value += c * poch * a_power;
        magnitude += std::abs(c * poch * a_power);
        if (want_derivative) deriv += c * a_power * (poch_d - log_a * poch);
        for (int j = 2 * k - 1; j <= 2 * k; ++j) {
            poch_d = poch_d * (s + Real(j)) + poch;
            poch = poch * (s + Real(j));
        }
        a_power *= inv_a2;
        factorial *= Real((2 * k + 1) * (2 * k + 2));
    }
    const Real rounding = Real(4) * std::numeric_limits<Real>::epsilon() * magnitude *
                          (want_derivative ? std::max<Real>(Real(1), std::abs(log_a)) : Real(1));
    return {value, deriv, bound + rounding};
}

}  // namespace detail

/// log Gamma(z): continuous branch, real on (0, inf), cut along (-inf, 0].
template <std::floating_point Real>
std::complex<Real> log_gamma(const std::complex<Real>& z, const PrecisionPolicy<Real>& policy = {}) {
    if (is_nonpositive_integer(z)) throw Error(ErrorKind::pole, "Gamma has a pole at z in -N");
    std::complex<Real> w = z;
    std::complex<Real> shift(0);
    while (w.real() < policy.shift_threshold) {
        shift += std::log(w);
        w += Real(1);
    }
    return detail::stirling_log_gamma(w, policy.series_order) - shift;
}

template <std::floating_point Real>
Real log_gamma(Real x, const PrecisionPolicy<Real>& policy = {}) {
    return log_gamma(std::complex<Real>(x), policy).real();
}

/// Gamma(z) assembled from the log.
template <std::floating_point Real>
std::complex<Real> gamma(const std::complex<Real>& z, const PrecisionPolicy<Real>& policy = {}) {
    return std::exp(log_gamma(z, policy));
}

/// 1/Gamma(z), entire: zero at z in -N.
template <std::floating_point Real>
std::complex<Real> reciprocal_gamma(const std::complex<Real>& z, const PrecisionPolicy<Real>& policy = {}) {
    if (is_nonpositive_integer(z)) return {0, 0};
    return std::exp(-log_gamma(z, policy));
}

template <std::floating_point Real>
std::complex<Real> digamma(const std::complex<Real>& z, const PrecisionPolicy<Real>& policy = {}) {
    if (is_nonpositive_integer(z)) throw Error(ErrorKind::pole, "digamma has a pole at z in -N");
    std::complex<Real> w = z;
    std::complex<Real> shift(0);
    while (w.real() < policy.shift_threshold) {
        shift += Real(1) / w;
        w += Real(1);
    }
    return detail::asymptotic_digamma(w, policy.series_order) - shift;
}

template <std::floating_point Real>
Estimate<Real> hurwitz_zeta_estimate(const std::complex<Real>& s, const std::complex<Real>& z,
                                     const PrecisionPolicy<Real>& policy = {}) {
    const auto parts = detail::hurwitz_euler_maclaurin(s, z, false, policy);
    return {parts.value, parts.abs_error};
}

/// zeta_H(s, z) = sum_{n>=0} (z+n)^{-s}, continued to all s != 1.
template <std::floating_point Real>
std::complex<Real> hurwitz_zeta(const std::complex<Real>& s, const std::complex<Real>& z,
                                const PrecisionPolicy<Real>& policy = {}) {
    return detail::hurwitz_euler_maclaurin(s, z, false, policy).value;
}

/// d/ds zeta_H(s, z), differentiated term by term (no finite differences).
template <std::floating_point Real>
std::complex<Real> hurwitz_zeta_s_derivative(const std::complex<Real>& s, const std::complex<Real>& z,
                                             const PrecisionPolicy<Real>& policy = {}) {
    return detail::hurwitz_euler_maclaurin(s, z, true, policy).s_derivative;
}

/// psi^{(n)}(z). n >= 1 goes through (-1)^{n+1} n! zeta_H(n+1, z).
template <std::floating_point Real>
std::complex<Real> polygamma(int n, const std::complex<Real>& z, const PrecisionPolicy<Real>& policy = {}) {
    if (n < 0) throw Error(ErrorKind::domain, "polygamma order must be non-negative");
    if (is_nonpositive_integer(z)) throw Error(ErrorKind::pole, "polygamma has a pole at z in -N");
    if (n == 0) return digamma(z, policy);
    Real factorial = 1;
    for (int k = 2; k <= n; ++k) factorial *= Real(k);
    const Real sign = (n % 2 == 1) ? Real(1) : Real(-1);
    return sign * factorial * hurwitz_zeta(std::complex<Real>(Real(n + 1)), z, policy);
}

/// zeta'(-1), computed once per precision type.
template <std::floating_point Real>
Real zeta_prime_minus_one() {
    static const Real value =
        hurwitz_zeta_s_derivative(std::complex<Real>(-1), std::complex<Real>(1)).real();
    return value;
}

/// log G(z+1) for the Barnes G-function, continued along horizontal shift
/// paths. z+1 in {0, -1, -2, ...} is a zero of G and raises ErrorKind::zero.
template <std::floating_point Real>
std::complex<Real> log_barnes_g(const std::complex<Real>& z, const PrecisionPolicy<Real>& policy = {}) {
    if (is_nonpositive_integer(z + Real(1))) throw Error(ErrorKind::zero, "G(z+1) vanishes for z+1 in -N");
    // log G(z+1) = log G(z+k+1) - sum_{j=1}^{k} log Gamma(z+j)
    // The shifted sum grows like w^2 log w, so the series is entered early
    // (Re(w) > 8) and carried to twice the usual order instead of at R.
    const Real threshold = std::min<Real>(policy.shift_threshold, Real(8));
    std::complex<Real> w = z;
    std::complex<Real> shift(0);
    if (w.real() < threshold) {
        std::complex<Real> lg = log_gamma(z + Real(1), policy);
        while (w.real() < threshold) {
            shift += lg;
            lg += std::log(w + Real(1));
            w += Real(1);
        }
    }
    return detail::asymptotic_log_barnes_g(w, 2 * policy.series_order, zeta_prime_minus_one<Real>()) - shift;
}

/// log G1(z) = (vol/2pi) (z log 2pi + 2 log G(z+1) - log Gamma(z)).
template <std::floating_point Real>
std::complex<Real> log_g1(const std::complex<Real>& z, Real vol, const PrecisionPolicy<Real>& policy = {}) {
    if (!(vol > 0)) throw Error(ErrorKind::domain, "volume must be positive");
    if (is_nonpositive_integer(z)) throw Error(ErrorKind::zero, "G1 vanishes at z in -N");
    const Real log_two_pi = std::log(Real(2) * pi_v<Real>);
    return vol / (Real(2) * pi_v<Real>) * (z * log_two_pi + Real(2) * log_barnes_g(z, policy) - log_gamma(z, policy));
}

/// Li_r(w) = sum_{k>=1} w^k / k^r for |w| < 1.
template <std::floating_point Real>
Estimate<Real> polylog_estimate(int r, const std::complex<Real>& w, const PrecisionPolicy<Real>& policy = {}) {
    if (r < 1) throw Error(ErrorKind::domain, "polylog degree must be positive");
    const Real aw = std::abs(w);
    if (!(aw < 1)) throw Error(ErrorKind::domain, "polylog series requires |w| < 1");
    std::complex<Real> sum(0);
    std::complex<Real> p = w;
    for (long k = 1; k < 100000000L; ++k) {
        sum += p / std::pow(Real(k), Real(r));
        p *= w;
        const Real tail = std::abs(p) / (std::pow(Real(k + 1), Real(r)) * (Real(1) - aw));
        if (tail <= policy.tolerance * Real(0.1) || std::abs(p) == 0) return {sum, tail};
    }
    throw Error(ErrorKind::convergence, "polylog series did not converge");
}

template <std::floating_point Real>
std::complex<Real> polylog(int r, const std::complex<Real>& w, const PrecisionPolicy<Real>& policy = {}) {
    return polylog_estimate(r, w, policy).value;
}

/// log Gamma_r(z) = d/dw zeta_H(w, z) at w = 1 - r.
template <std::floating_point Real>
std::complex<Real> log_milnor_gamma(int r, const std::complex<Real>& z, const PrecisionPolicy<Real>& policy = {}) {
    if (r < 1) throw Error(ErrorKind::domain, "Milnor gamma depth must be positive");
    return hurwitz_zeta_s_derivative(std::complex<Real>(Real(1 - r)), z, policy);
}

template <std::floating_point Real>
std::complex<Real> milnor_gamma(int r, const std::complex<Real>& z, const PrecisionPolicy<Real>& policy = {}) {
    return std::exp(log_milnor_gamma(r, z, policy));
}

}  // namespace superzeta
