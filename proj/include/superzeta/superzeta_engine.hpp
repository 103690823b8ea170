#pragma once

// Superzeta functions of order-two entire functions: direct sums over zeros
// for Re(s) > 2, the continuation to Re(s) < 3 built from asymptotic
// expansion data, residues at s = 1, 2 and zeta-regularized products.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "superzeta/bernoulli.hpp"
#include "superzeta/core.hpp"
#include "superzeta/quadrature.hpp"
#include "superzeta/special_functions.hpp"

namespace superzeta {

enum class SuperzetaMethod { direct_sum, continued };

inline const char* to_string(SuperzetaMethod m) {
    return m == SuperzetaMethod::direct_sum ? "direct-sum" : "continued";
}

template <std::floating_point Real = double>
struct SuperzetaValue {
    std::complex<Real> value{};
    Real abs_error_estimate{0};
    SuperzetaMethod method{SuperzetaMethod::continued};
};

template <std::floating_point Real = double>
struct Zero {
    std::complex<Real> location;
    Real multiplicity = 1;  // real weight: G1 carries (vol/2pi)(2n+1)
};

/// Zeros at y0 - n for n >= first, with multiplicity c0 + c1 n. The sum over
/// this tail is closed through Hurwitz zeta, so nothing is truncated.
template <std::floating_point Real = double>
struct LatticeTail {
    std::complex<Real> origin{0};
    long first = 0;
    Real c0 = 0;
    Real c1 = 0;
};

template <std::floating_point Real = double>
struct ZeroSequence {
    std::vector<Zero<Real>> entries;
    std::optional<LatticeTail<Real>> tail;
    Real growth_exponent = 2;

    /// Zeros of G(z+1): -n with multiplicity n.
    static ZeroSequence barnes() {
        ZeroSequence out;
        out.tail = LatticeTail<Real>{std::complex<Real>(0), 1, Real(0), Real(1)};
        return out;
    }

    /// Zeros of G1: -n with multiplicity (vol/2pi)(2n+1).
    static ZeroSequence g1(Real vol) {
        ZeroSequence out;
        const Real w = vol / (Real(2) * pi_v<Real>);
        out.tail = LatticeTail<Real>{std::complex<Real>(0), 0, w, Real(2) * w};
        return out;
    }
};

/// sum_k m_k (z - y_k)^{-s}, Re(s) > 2.
template <std::floating_point Real>
SuperzetaValue<Real> superzeta_direct(const std::complex<Real>& s, const std::complex<Real>& z,
                                      const ZeroSequence<Real>& zeros, const PrecisionPolicy<Real>& policy = {}) {
    if (!(s.real() > Real(2))) throw Error(ErrorKind::domain, "direct superzeta sum needs Re(s) > 2");
    std::complex<Real> acc(0);
    Real magnitude = 0;
    for (const auto& e : zeros.entries) {
        const std::complex<Real> w = z - e.location;
        if (on_cut(w)) throw Error(ErrorKind::branch, "z - y_k lies on (-inf, 0]");
        const std::complex<Real> term = e.multiplicity * principal_pow(w, -s);
        acc += term;
        magnitude += std::abs(term);
    }
    Real err = 0;
    if (zeros.tail) {
        const auto& t = *zeros.tail;
        // n = (w + first) - d where w runs over a + k, d = z - origin
        const std::complex<Real> d = z - t.origin;
        const std::complex<Real> a = d + Real(t.first);
        if (is_nonpositive_integer(a) || on_cut(a))
            throw Error(ErrorKind::branch, "lattice tail reaches (-inf, 0]");
        const auto h0 = hurwitz_zeta_estimate(s, a, policy);
        std::complex<Real> tail_sum = (t.c0 - t.c1 * d) * h0.value;
        err += std::abs(t.c0 - t.c1 * d) * h0.abs_error;
        if (t.c1 != 0) {
            const auto h1 = hurwitz_zeta_estimate(s - Real(1), a, policy);
            tail_sum += t.c1 * h1.value;
            err += std::abs(t.c1) * h1.abs_error;
        }
        acc += tail_sum;
        magnitude += std::abs(tail_sum);
    }
    err += Real(4) * std::numeric_limits<Real>::epsilon() * magnitude;
    return {acc, err, SuperzetaMethod::direct_sum};
}

/// (log Delta_f)'''(z) = 2 Z_f(3, z).
template <std::floating_point Real>
std::complex<Real> log_delta_third_derivative(const std::complex<Real>& z, const ZeroSequence<Real>& zeros,
                                              const PrecisionPolicy<Real>& policy = {}) {
    return Real(2) * superzeta_direct(std::complex<Real>(3), z, zeros, policy).value;
}

template <std::floating_point Real = double>
struct AlgebraicTerm {
    std::complex<Real> a;
    Real mu;
};

template <std::floating_point Real = double>
struct RemainderValue {
    std::complex<Real> h;         // h_n(z)
    std::complex<Real> h_third;   // h_n'''(z)
};

/// log Delta_f(z) ~ a2 z^2 (log z - 3/2) + b2 z^2 + a1 z (log z - 1) + b1 z
///                  + a0 log z + b0 + sum_k a_k z^{mu_k} + h_n(z).
template <std::floating_point Real = double>
struct AsymptoticData {
    std::complex<Real> a2_tilde{0}, b2{0}, a1_tilde{0}, b1{0}, a0_tilde{0}, b0{0};
    std::vector<AlgebraicTerm<Real>> algebraic_terms;  // mu strictly decreasing
    // h_n after subtracting the first n algebraic terms; empty means h == 0
    std::function<RemainderValue<Real>(int n, const std::complex<Real>& z)> remainder;
    Real tail_decay = -std::numeric_limits<Real>::infinity();  // decay of h_n with n = all terms
    Real sector_angle = pi_v<Real> / 2;

    void validate() const {
        for (std::size_t k = 1; k < algebraic_terms.size(); ++k)
            if (!(algebraic_terms[k].mu < algebraic_terms[k - 1].mu))
                throw Error(ErrorKind::configuration, "algebraic exponents must be strictly decreasing");
        if (!algebraic_terms.empty() && !(algebraic_terms.front().mu < 1))
            throw Error(ErrorKind::configuration, "algebraic exponents must be below 1");
        if (!(sector_angle > 0 && sector_angle < pi_v<Real>))
            throw Error(ErrorKind::configuration, "sector angle must lie in (0, pi)");
    }

    /// Decay order of h_n.
    Real decay(int n) const {
        return n < static_cast<int>(algebraic_terms.size()) ? algebraic_terms[static_cast<std::size_t>(n)].mu
                                                            : tail_decay;
    }

    RemainderValue<Real> remainder_at(int n, const std::complex<Real>& z) const {
        if (!remainder) return {};
        return remainder(n, z);
    }
};

namespace detail {

// Third derivative of the leading (non-algebraic) part of the expansion.
template <std::floating_point Real>
std::complex<Real> leading_third_derivative(const AsymptoticData<Real>& d, const std::complex<Real>& z) {
    const std::complex<Real> inv = Real(1) / z;
    return d.a2_tilde * Real(2) * inv - d.a1_tilde * inv * inv + d.a0_tilde * Real(2) * inv * inv * inv;
}

template <std::floating_point Real>
std::complex<Real> leading_part(const AsymptoticData<Real>& d, const std::complex<Real>& z) {
    const std::complex<Real> lz = principal_log(z);
    return d.a2_tilde * z * z * (lz - Real(1.5)) + d.b2 * z * z + d.a1_tilde * z * (lz - Real(1)) + d.b1 * z +
           d.a0_tilde * lz + d.b0;
}

// (z^mu)''' = mu (mu-1) (mu-2) z^{mu-3}
template <std::floating_point Real>
std::complex<Real> power_third_derivative(Real mu, const std::complex<Real>& z) {
    return mu * (mu - 1) * (mu - 2) * principal_pow(z, std::complex<Real>(mu - 3));
}

// Gamma(s - mu) / (Gamma(s) Gamma(-mu)), entire in s for integer -mu > 0.
template <std::floating_point Real>
std::complex<Real> gamma_ratio(const std::complex<Real>& s, Real mu, const PrecisionPolicy<Real>& policy) {
    if (mu >= 0 && std::floor(mu) == mu) return {0, 0};
    if (mu < 0 && std::floor(mu) == mu) {
        const int m = static_cast<int>(-mu);
        std::complex<Real> poch(1);
        Real factorial = 1;
        for (int j = 0; j < m; ++j) poch *= s + Real(j);
        for (int j = 2; j < m; ++j) factorial *= Real(j);
        return poch / factorial;
    }
    return gamma(s - mu, policy) * reciprocal_gamma(s, policy) * reciprocal_gamma(std::complex<Real>(-mu), policy);
}

template <std::floating_point Real>
int select_k0(const AsymptoticData<Real>& d, Real re_s) {
    const Real threshold = re_s - Real(1.5);
    const int n = static_cast<int>(d.algebraic_terms.size());
    for (int k = 0; k < n; ++k)
        if (d.algebraic_terms[static_cast<std::size_t>(k)].mu < threshold) return k;
    if (d.tail_decay < threshold) return n;
    throw Error(ErrorKind::convergence, "not enough algebraic terms for Re(s) = " + std::to_string(double(re_s)));
}

template <std::floating_point Real>
void check_sector(const AsymptoticData<Real>& d, const std::complex<Real>& z) {
    if (z == std::complex<Real>(0) || !(std::abs(std::arg(z)) < d.sector_angle))
        throw Error(ErrorKind::domain, "z outside the open sector of the asymptotic expansion");
}

}  // namespace detail

/// Continuation of the superzeta function to Re(s) < 3 from asymptotic data.
template <std::floating_point Real>
SuperzetaValue<Real> voros_continue(const std::complex<Real>& s, const std::complex<Real>& z,
                                    const AsymptoticData<Real>& asym, const QuadratureSpec<Real>& quad = {},
                                    const PrecisionPolicy<Real>& policy = {}) {
    asym.validate();
    detail::check_sector(asym, z);
    if (!(s.real() < Real(3))) throw Error(ErrorKind::domain, "continued superzeta needs Re(s) < 3");
    if (s == std::complex<Real>(1) || s == std::complex<Real>(2))
        throw Error(ErrorKind::pole, "superzeta has simple poles at s = 1 and s = 2");

    const Real eps = std::numeric_limits<Real>::epsilon();
    const std::complex<Real> one(1), two(2);
    std::complex<Real> value = Real(2) * asym.a2_tilde * principal_pow(z, two - s) / ((s - one) * (s - two)) -
                               asym.a1_tilde * principal_pow(z, one - s) / (s - one) +
                               asym.a0_tilde * principal_pow(z, -s);
    Real magnitude = std::abs(value);

    const int k0 = detail::select_k0(asym, s.real());
    for (int k = 0; k < k0; ++k) {
        const auto& t = asym.algebraic_terms[static_cast<std::size_t>(k)];
        const std::complex<Real> term =
            t.a * detail::gamma_ratio(s, t.mu, policy) * principal_pow(z, std::complex<Real>(t.mu) - s);
        value -= term;
        magnitude += std::abs(term);
    }

    Real err = 0;
    if (asym.remainder) {
        const std::complex<Real> prefactor = reciprocal_gamma(s, policy) * reciprocal_gamma(Real(3) - s, policy);
        if (prefactor != std::complex<Real>(0)) {
            const std::complex<Real> weight_exp = two - s;
            const auto est = integrate_half_line<Real>(
                [&](Real y) {
                    const std::complex<Real> h3 = asym.remainder_at(k0, z + y).h_third;
                    if (h3 == std::complex<Real>(0)) return h3;  // underflow far out; weight may overflow
                    return h3 * std::exp(weight_exp * std::log(y));
                },
                quad);
            value += prefactor * est.value;
            err += std::abs(prefactor) * est.abs_error;
            magnitude += std::abs(prefactor * est.value);
        }
    }
    err += Real(16) * eps * magnitude;
    return {value, err, SuperzetaMethod::continued};
}

/// d/ds of the continued superzeta at s = 0, from the closed expression
/// -[a2 z^2 (log z - 3/2) + a1 z (log z - 1) + a0 log z + sum a_k z^{mu_k} + h(z)].
template <std::floating_point Real>
std::complex<Real> derivative_at_zero(const std::complex<Real>& z, const AsymptoticData<Real>& asym) {
    asym.validate();
    detail::check_sector(asym, z);
    const int k0 = detail::select_k0(asym, Real(0));
    const std::complex<Real> lz = principal_log(z);
    std::complex<Real> acc = asym.a2_tilde * z * z * (lz - Real(1.5)) + asym.a1_tilde * z * (lz - Real(1)) +
                             asym.a0_tilde * lz;
    for (int k = 0; k < k0; ++k) {
        const auto& t = asym.algebraic_terms[static_cast<std::size_t>(k)];
        acc += t.a * principal_pow(z, std::complex<Real>(t.mu));
    }
    acc += asym.remainder_at(k0, z).h;
    return -acc;
}

/// log D_f(z) = -(b2 z^2 + b1 z + b0) + log Delta_f(z), given log Delta_f.
template <std::floating_point Real>
std::complex<Real> log_regularized_product(const std::complex<Real>& z, const AsymptoticData<Real>& asym,
                                           const std::function<std::complex<Real>(const std::complex<Real>&)>& log_delta) {
    return log_delta(z) - (asym.b2 * z * z + asym.b1 * z + asym.b0);
}

/// log D_f(z) = -d/ds Z_f(s, z) at s = 0.
template <std::floating_point Real>
std::complex<Real> log_regularized_product(const std::complex<Real>& z, const AsymptoticData<Real>& asym) {
    return -derivative_at_zero(z, asym);
}

template <std::floating_point Real>
std::complex<Real> regularized_product(const std::complex<Real>& z, const AsymptoticData<Real>& asym,
                                       const std::function<std::complex<Real>(const std::complex<Real>&)>& log_delta) {
    return std::exp(log_regularized_product(z, asym, log_delta));
}

template <std::floating_point Real = double>
struct ResidueEstimate {
    std::complex<Real> value{};
    Real spread{0};  // max distance of a single ray from the average
};

/// Residue at s0 in {1, 2}: (s - s0) Z(s) averaged over four rays s0 + eps w,
/// w in {1, i, -1, -i}. The average is exact up to O(eps^4).
template <std::floating_point Real>
ResidueEstimate<Real> residue_at(int s0, const std::complex<Real>& z, const AsymptoticData<Real>& asym,
                                 const QuadratureSpec<Real>& quad = {}, Real radius = Real(1e-2),
                                 const PrecisionPolicy<Real>& policy = {}) {
    if (s0 != 1 && s0 != 2) throw Error(ErrorKind::domain, "residues exist only at s = 1 and s = 2");
    const std::complex<Real> rays[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::complex<Real> samples[4];
    std::complex<Real> mean(0);
    for (int i = 0; i < 4; ++i) {
        const std::complex<Real> ds = radius * rays[i];
        samples[i] = ds * voros_continue(Real(s0) + ds, z, asym, quad, policy).value;
        mean += samples[i];
    }
    mean /= Real(4);
    Real spread = 0;
    for (const auto& v : samples) spread = std::max(spread, std::abs(v - mean));
    return {mean, spread};
}

// ---------------------------------------------------------------------------
// Asymptotic data for the two reference families.

namespace detail {

// Builds the remainder evaluator from the exact function, its third
// derivative and an unbounded generator of algebraic terms. Large |z| uses
// the continued series, which avoids cancellation against the leading part.
template <std::floating_point Real>
void attach_series_remainder(AsymptoticData<Real>& d, std::function<AlgebraicTerm<Real>(int)> term,
                             std::function<std::complex<Real>(const std::complex<Real>&)> log_delta,
                             std::function<std::complex<Real>(const std::complex<Real>&)> log_delta_third,
                             int stored_terms, int series_terms = 30, Real series_radius = Real(15)) {
    for (int k = 0; k < stored_terms; ++k) d.algebraic_terms.push_back(term(k));
    const AsymptoticData<Real> leading = d;  // copy without remainder
    d.remainder = [leading, term, log_delta, log_delta_third, series_terms, series_radius](
                      int n, const std::complex<Real>& z) -> RemainderValue<Real> {
        RemainderValue<Real> out;
        if (std::abs(z) >= series_radius) {
            for (int k = n; k < n + series_terms; ++k) {
                const AlgebraicTerm<Real> t = term(k);
                out.h += t.a * principal_pow(z, std::complex<Real>(t.mu));
                out.h_third += t.a * power_third_derivative(t.mu, z);
            }
            return out;
        }
        out.h = log_delta(z) - leading_part(leading, z);
        out.h_third = log_delta_third(z) - leading_third_derivative(leading, z);
        for (int k = 0; k < n; ++k) {
            const AlgebraicTerm<Real> t = term(k);
            out.h -= t.a * principal_pow(z, std::complex<Real>(t.mu));
            out.h_third -= t.a * power_third_derivative(t.mu, z);
        }
        return out;
    };
}

}  // namespace detail

/// Expansion of log G(z+1): z^2/2 (log z - 3/2) + z/2 log 2pi - log z / 12
/// + zeta'(-1) + sum_k B_{2k+2} / (4k(k+1)) z^{-2k}.
template <std::floating_point Real = double>
AsymptoticData<Real> barnes_asymptotic_data(int stored_terms = 12) {
    AsymptoticData<Real> d;
    d.a2_tilde = Real(0.5);
    d.b1 = Real(0.5) * std::log(Real(2) * pi_v<Real>);
    d.a0_tilde = Real(-1) / Real(12);
    d.b0 = zeta_prime_minus_one<Real>();
    auto term = [](int idx) {
        const int k = idx + 1;
        return AlgebraicTerm<Real>{bernoulli_cache().value<Real>(2 * k + 2) / Real(4 * k * (k + 1)), Real(-2 * k)};
    };
    auto log_delta = [](const std::complex<Real>& z) { return log_barnes_g(z); };
    auto third = [](const std::complex<Real>& z) {
        return Real(2) * (hurwitz_zeta(std::complex<Real>(2), z) - z * hurwitz_zeta(std::complex<Real>(3), z));
    };
    detail::attach_series_remainder<Real>(d, term, log_delta, third, stored_terms);
    return d;
}

/// Expansion of log G1(z) for a surface of area vol.
template <std::floating_point Real = double>
AsymptoticData<Real> g1_asymptotic_data(Real vol, int stored_terms = 24) {
    if (!(vol > 0)) throw Error(ErrorKind::configuration, "volume must be positive");
    const Real w = vol / (Real(2) * pi_v<Real>);
    const Real log_two_pi = std::log(Real(2) * pi_v<Real>);
    AsymptoticData<Real> d;
    d.a2_tilde = w;
    d.a1_tilde = -w;
    d.b1 = Real(2) * w * log_two_pi;
    d.a0_tilde = w / Real(3);
    d.b0 = w * (Real(2) * zeta_prime_minus_one<Real>() - Real(0.5) * log_two_pi);
    // mu = -1, -2, -3, ...: odd powers from -log Gamma, even from 2 log G(z+1)
    auto term = [w](int idx) {
        const int p = idx + 1;
        const auto& bern = bernoulli_cache();
        if (p % 2 == 1) {
            const int j = (p + 1) / 2;
            return AlgebraicTerm<Real>{-w * bern.value<Real>(2 * j) / Real((2 * j - 1) * 2 * j), Real(-p)};
        }
        const int k = p / 2;
        return AlgebraicTerm<Real>{w * bern.value<Real>(2 * k + 2) / Real(2 * k * (k + 1)), Real(-p)};
    };
    auto log_delta = [vol](const std::complex<Real>& z) { return log_g1(z, vol); };
    auto third = [vol](const std::complex<Real>& z) {
        return vol / pi_v<Real> *
               (Real(2) * hurwitz_zeta(std::complex<Real>(2), z) -
                (Real(2) * z - Real(1)) * hurwitz_zeta(std::complex<Real>(3), z));
    };
    detail::attach_series_remainder<Real>(d, term, log_delta, third, stored_terms);
    return d;
}

}  // namespace superzeta
