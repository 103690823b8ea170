#pragma once

// Exact Bernoulli numbers (B_1 = -1/2 convention) and Bernoulli polynomials.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "superzeta/core.hpp"

namespace superzeta {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Immutable table B_0..B_N built once from sum_{j=0}^{n} C(n+1, j) B_j = 0.
class BernoulliCache {
public:
    static constexpr int default_size = 100;

    explicit BernoulliCache(int max_index = default_size) {
        if (max_index < 1) throw Error(ErrorKind::configuration, "Bernoulli cache needs at least B_0, B_1");
        values_.reserve(static_cast<std::size_t>(max_index) + 1);
        values_.emplace_back(1);
        for (int n = 1; n <= max_index; ++n) {
            if (n > 1 && n % 2 == 1) {
                values_.emplace_back(0);
                continue;
            }
            // B_n = -1/(n+1) sum_{j<n} C(n+1, j) B_j
            Rational acc = 0;
            BigInt binom = 1;  // C(n+1, 0)
            for (int j = 0; j < n; ++j) {
                acc += Rational(binom) * values_[static_cast<std::size_t>(j)];
                binom = binom * (n + 1 - j) / (j + 1);
            }
            values_.push_back(-acc / (n + 1));
        }
        as_double_.reserve(values_.size());
        for (const auto& b : values_) as_double_.push_back(static_cast<long double>(b));
    }

    int max_index() const { return static_cast<int>(values_.size()) - 1; }

    const Rational& exact(int n) const {
        check(n);
        return values_[static_cast<std::size_t>(n)];
    }

    template <std::floating_point Real = double>
    Real value(int n) const {
        check(n);
        return static_cast<Real>(as_double_[static_cast<std::size_t>(n)]);
    }

private:
    void check(int n) const {
        if (n < 0) throw Error(ErrorKind::domain, "Bernoulli index must be non-negative");
        if (n > max_index())
            throw Error(ErrorKind::configuration,
                        "Bernoulli index " + std::to_string(n) + " exceeds cache size " + std::to_string(max_index()));
    }

    std::vector<Rational> values_;
    std::vector<long double> as_double_;
};

/// Process-wide cache, constructed on first use (thread-safe static init).
inline const BernoulliCache& bernoulli_cache() {
    static const BernoulliCache cache;
    return cache;
}

inline Rational bernoulli_number(int n) { return bernoulli_cache().exact(n); }

/// B_n(z) = sum_j C(n, j) B_j z^{n-j}, evaluated by Horner in z.
template <std::floating_point Real>
std::complex<Real> bernoulli_polynomial(int n, const std::complex<Real>& z) {
    if (n < 0) throw Error(ErrorKind::domain, "Bernoulli polynomial degree must be non-negative");
    const auto& cache = bernoulli_cache();
    std::vector<Real> coeff(static_cast<std::size_t>(n) + 1);  // coefficient of z^{n-j}
    Real binom = 1;
    for (int j = 0; j <= n; ++j) {
        coeff[static_cast<std::size_t>(j)] = binom * cache.value<Real>(j);
        binom = binom * Real(n - j) / Real(j + 1);
    }
    std::complex<Real> acc(0);
    for (int j = 0; j <= n; ++j) acc = acc * z + coeff[static_cast<std::size_t>(j)];
    return acc;
}

}  // namespace superzeta
