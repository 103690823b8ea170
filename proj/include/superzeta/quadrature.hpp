#pragma once

// Integrals over [0, inf) split at y0: the piece [0, y0] absorbs the
// algebraic endpoint behaviour, the piece [y0, inf) the decaying tail.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "superzeta/core.hpp"

namespace superzeta {

enum class QuadratureScheme { double_exponential, adaptive };

template <std::floating_point Real = double>
struct QuadratureSpec {
    Real split = Real(1);                                  // y0
    int max_refinements = 10;                              // levels of node halving
    Real upper = std::numeric_limits<Real>::infinity();    // Y; finite Y drops [Y, inf)
    Real tolerance = Real(1e-13);                          // relative target per piece
    QuadratureScheme scheme = QuadratureScheme::double_exponential;

    void validate() const {
        if (!(split > 0)) throw Error(ErrorKind::configuration, "quadrature split must be positive");
        if (max_refinements < 2 || max_refinements > 30)
            throw Error(ErrorKind::configuration, "quadrature refinements out of range");
        if (!(upper > split)) throw Error(ErrorKind::configuration, "quadrature upper limit must exceed split");
        if (!(tolerance > 0)) throw Error(ErrorKind::configuration, "quadrature tolerance must be positive");
    }

    /// Same layout with one level fewer: used for self-convergence checks.
    QuadratureSpec coarser() const {
        QuadratureSpec out = *this;
        out.max_refinements = max_refinements - 1;
        return out;
    }
};

namespace detail {

// Node tables are expensive to build; keep one per thread and level count.
template <class Integrator, std::floating_point Real>
Integrator& cached_integrator(int levels) {
    thread_local std::map<int, Integrator> cache;
    auto it = cache.find(levels);
    if (it == cache.end()) it = cache.emplace(levels, Integrator(static_cast<std::size_t>(levels))).first;
    return it->second;
}

}  // namespace detail

/// int_0^inf f(y) dy with an absolute error estimate (difference between the
/// last two refinement levels, plus the rounding floor of the L1 norm).
template <std::floating_point Real = double>
Estimate<Real> integrate_half_line(const std::function<std::complex<Real>(Real)>& f,
                                   const QuadratureSpec<Real>& spec = {}) {
    namespace bq = boost::math::quadrature;
    spec.validate();
    const Real eps = std::numeric_limits<Real>::epsilon();
    Real err_head = 0, err_tail = 0, l1_head = 0, l1_tail = 0;
    std::complex<Real> head, tail;

    // Boost trims abscissas where f is non-finite, so f is passed through as is.
    auto guarded = [&f](Real y) { return f(y); };

    try {
        if (spec.scheme == QuadratureScheme::double_exponential) {
            auto& ts = detail::cached_integrator<bq::tanh_sinh<Real>, Real>(spec.max_refinements);
            head = ts.integrate(guarded, Real(0), spec.split, spec.tolerance, &err_head, &l1_head);
            if (std::isinf(spec.upper)) {
                auto& es = detail::cached_integrator<bq::exp_sinh<Real>, Real>(spec.max_refinements);
                tail = es.integrate(guarded, spec.split, std::numeric_limits<Real>::infinity(), spec.tolerance,
                                    &err_tail, &l1_tail);
            } else {
                tail = ts.integrate(guarded, spec.split, spec.upper, spec.tolerance, &err_tail, &l1_tail);
            }
        } else {
            using GK = bq::gauss_kronrod<Real, 31>;
            const unsigned depth = static_cast<unsigned>(spec.max_refinements);
            head = GK::integrate(guarded, Real(0), spec.split, depth, spec.tolerance, &err_head, &l1_head);
            tail = GK::integrate(guarded, spec.split, spec.upper, depth, spec.tolerance, &err_tail, &l1_tail);
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorKind::convergence, std::string("quadrature failed: ") + e.what());
    }

    const std::complex<Real> total = head + tail;
    if (!std::isfinite(total.real()) || !std::isfinite(total.imag()))
        throw Error(ErrorKind::convergence, "quadrature produced a non-finite value");
    const Real rounding = Real(8) * eps * (l1_head + l1_tail);
    return {total, err_head + err_tail + rounding};
}

}  // namespace superzeta
