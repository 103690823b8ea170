#pragma once

// Complete zetas Z+-, the superzeta functions zeta_B+-(s, z) of the spectra
// of 1/2 I +- B, regularized determinants det(zI - (1/2 I +- B)), their
// higher-depth variants and the divisor bookkeeping at special points.
//
// All Selberg-side quantities are evaluated from the Euler product of a
// GeodesicTable, so every function here requires Re(z) > 1. Error estimates
// refer to the Selberg zeta of the given table; truncation of the table
// itself is reported by the hyperbolic_surface estimates.

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "superzeta/core.hpp"
#include "superzeta/hyperbolic_surface.hpp"
#include "superzeta/quadrature.hpp"
#include "superzeta/special_functions.hpp"
#include "superzeta/superzeta_engine.hpp"
#include "superzeta/surface_config.hpp"

namespace superzeta {

enum class ZetaSide { plus, minus };

inline const char* to_string(ZetaSide side) { return side == ZetaSide::plus ? "plus" : "minus"; }

enum class DeterminantMethod { closed_form, superzeta_derivative };

inline const char* to_string(DeterminantMethod m) {
    return m == DeterminantMethod::closed_form ? "closed-form" : "superzeta-derivative";
}

namespace detail {

template <std::floating_point Real>
void require_half_plane(const std::complex<Real>& z) {
    if (!(z.real() > Real(1)))
        throw Error(ErrorKind::domain, "Selberg-side quantities are evaluated only for Re(z) > 1");
}

template <std::floating_point Real>
void require_not_pole(const std::complex<Real>& s) {
    if (s == std::complex<Real>(1) || s == std::complex<Real>(2))
        throw Error(ErrorKind::pole, "superzeta functions have simple poles at s = 1 and s = 2");
}

template <std::floating_point Real>
Real factorial(int n) {
    Real f = 1;
    for (int k = 2; k <= n; ++k) f *= Real(k);
    return f;
}

// (log F)'(z + y) along the ray and the Taylor data (log F)^{(j)}(z), j = 1..n.
template <std::floating_point Real>
struct LogDerivativeRay {
    std::function<std::complex<Real>(Real)> at;
    std::function<std::vector<std::complex<Real>>(int)> taylor;
};

template <std::floating_point Real>
LogDerivativeRay<Real> selberg_ray(const std::complex<Real>& z, const GeodesicTable& table,
                                   const SurfaceConfig* with_h) {
    LogDerivativeRay<Real> ray;
    ray.at = [z, &table, with_h](Real y) {
        const std::complex<Real> w = z + y;
        std::complex<Real> v = selberg_log_derivative(1, w, table);
        if (with_h) v += log_h_derivatives(1, w, *with_h)[1];
        return v;
    };
    ray.taylor = [z, &table, with_h](int n) {
        std::vector<std::complex<Real>> d(static_cast<std::size_t>(n) + 1);
        std::vector<std::complex<Real>> h;
        if (with_h) h = log_h_derivatives(n, z, *with_h);
        for (int j = 1; j <= n; ++j) {
            d[static_cast<std::size_t>(j)] = selberg_log_derivative(j, z, table);
            if (with_h) d[static_cast<std::size_t>(j)] += h[static_cast<std::size_t>(j)];
        }
        return d;
    };
    return ray;
}

// f(y) y^{-s}, formed in log space so a vanishing f never meets an overflowing power.
template <std::floating_point Real>
std::complex<Real> times_power(const std::complex<Real>& f, const std::complex<Real>& s, Real y) {
    if (f == std::complex<Real>(0)) return f;
    return std::exp(std::log(f) - s * std::log(y));
}

// (sin pi s / pi) int_0^inf f(y) y^{-s} dy, continued past Re(s) = 1 by
// subtracting the Taylor polynomial of f on [0, delta]. Near y = 0 the
// subtracted integrand is summed from the next Taylor terms instead.
template <std::floating_point Real>
Estimate<Real> mellin_sine_term(const std::complex<Real>& s, const LogDerivativeRay<Real>& ray,
                                const QuadratureSpec<Real>& quad) {
    const std::complex<Real> sine = std::sin(pi_v<Real> * s) / pi_v<Real>;
    if (s.real() < Real(0.5)) {
        auto integrand = [&](Real y) { return times_power(ray.at(y), s, y); };
        const auto I = integrate_half_line<Real>(integrand, quad);
        return {sine * I.value, std::abs(sine) * I.abs_error};
    }
    const int n = static_cast<int>(std::floor(s.real())) + 1;
    const int extra = 10;
    const auto d = ray.taylor(n + extra);
    std::vector<std::complex<Real>> c(d.size());
    for (int j = 1; j <= n + extra; ++j)
        c[static_cast<std::size_t>(j)] = d[static_cast<std::size_t>(j)] / factorial<Real>(j - 1);
    const Real delta = quad.split;
    const Real y_small = Real(1e-2) * delta;
    auto integrand = [&](Real y) -> std::complex<Real> {
        if (y >= delta) return times_power(ray.at(y), s, y);
        std::complex<Real> acc(0);
        if (y < y_small) {
            Real p = std::pow(y, Real(n));
            for (int j = n + 1; j <= n + extra; ++j, p *= y) acc += c[static_cast<std::size_t>(j)] * p;
            return times_power(acc, s, y);
        }
        acc = ray.at(y);
        Real p = 1;
        for (int j = 1; j <= n; ++j, p *= y) acc -= c[static_cast<std::size_t>(j)] * p;
        return times_power(acc, s, y);
    };
    const auto I = integrate_half_line<Real>(integrand, quad);
    std::complex<Real> total = sine * I.value;
    Real err = std::abs(sine) * I.abs_error;
    for (int j = 1; j <= n; ++j) {
        const std::complex<Real> term = c[static_cast<std::size_t>(j)] * std::exp((Real(j) - s) * std::log(delta)) *
                                        sin_pi_over_pi_shift(s, j);
        total += term;
        err += Real(8) * std::numeric_limits<Real>::epsilon() * std::abs(term);
    }
    return {total, err};
}

// int_0^inf f(y) y^{r-1} dy.
template <std::floating_point Real>
Estimate<Real> mellin_moment(int r, const LogDerivativeRay<Real>& ray, const QuadratureSpec<Real>& quad) {
    auto integrand = [&](Real y) -> std::complex<Real> {
        return r == 1 ? ray.at(y) : times_power(ray.at(y), std::complex<Real>(Real(1 - r)), y);
    };
    return integrate_half_line<Real>(integrand, quad);
}

}  // namespace detail

/// G1-part of the superzeta functions: (vol/pi) [zeta_H(s-1, z) - (z - 1/2) zeta_H(s, z)].
template <std::floating_point Real>
std::complex<Real> script_g1(const std::complex<Real>& s, const std::complex<Real>& z, Real vol,
                             const PrecisionPolicy<Real>& policy = {}) {
    if (is_nonpositive_integer(z)) throw Error(ErrorKind::domain, "z must avoid the zeros 0, -1, -2, ... of G1");
    if (s == std::complex<Real>(2))
        throw Error(ErrorKind::pole, "script G1 has a simple pole at s = 2 with residue vol/pi");
    if (s == std::complex<Real>(1))
        throw Error(ErrorKind::pole, "script G1 has a simple pole at s = 1 with residue -(vol/2pi)(2z-1)");
    return vol / pi_v<Real> *
           (hurwitz_zeta(s - Real(1), z, policy) - (z - Real(0.5)) * hurwitz_zeta(s, z, policy));
}

/// d/ds script_g1.
template <std::floating_point Real>
std::complex<Real> script_g1_s_derivative(const std::complex<Real>& s, const std::complex<Real>& z, Real vol,
                                          const PrecisionPolicy<Real>& policy = {}) {
    if (is_nonpositive_integer(z)) throw Error(ErrorKind::domain, "z must avoid the zeros 0, -1, -2, ... of G1");
    detail::require_not_pole(s);
    return vol / pi_v<Real> *
           (hurwitz_zeta_s_derivative(s - Real(1), z, policy) -
            (z - Real(0.5)) * hurwitz_zeta_s_derivative(s, z, policy));
}

/// zeta_B+(s, z) = -script_g1(s, z) + c zeta_H(s, z - 1/2) + (sin pi s / pi) int_0^inf (Z'/Z)(z+y) y^{-s} dy.
template <std::floating_point Real>
SuperzetaValue<Real> zeta_b_plus(const std::complex<Real>& s, const std::complex<Real>& z, const GeodesicTable& table,
                                 const SurfaceConfig& config, const QuadratureSpec<Real>& quad = {}) {
    detail::require_half_plane(z);
    detail::require_not_pole(s);
    const Real vol = static_cast<Real>(config.vol());
    const Real c = static_cast<Real>(config.cusps);
    const auto mellin = detail::mellin_sine_term(s, detail::selberg_ray<Real>(z, table, nullptr), quad);
    std::complex<Real> v = -script_g1(s, z, vol) + mellin.value;
    if (config.cusps > 0) v += c * hurwitz_zeta(s, z - Real(0.5));
    return {v, mellin.abs_error + Real(64) * std::numeric_limits<Real>::epsilon() * std::abs(v),
            SuperzetaMethod::continued};
}

/// zeta_B-(s, z) = -script_g1(s, z) + c zeta_H(s, z) + (sin pi s / pi) int_0^inf ((ZH)'/(ZH))(z+y) y^{-s} dy.
template <std::floating_point Real>
SuperzetaValue<Real> zeta_b_minus(const std::complex<Real>& s, const std::complex<Real>& z,
                                  const GeodesicTable& table, const SurfaceConfig& config,
                                  const QuadratureSpec<Real>& quad = {}) {
    detail::require_half_plane(z);
    detail::require_not_pole(s);
    const Real vol = static_cast<Real>(config.vol());
    const Real c = static_cast<Real>(config.cusps);
    const auto mellin = detail::mellin_sine_term(s, detail::selberg_ray<Real>(z, table, &config), quad);
    std::complex<Real> v = -script_g1(s, z, vol) + mellin.value;
    if (config.cusps > 0) v += c * hurwitz_zeta(s, z);
    return {v, mellin.abs_error + Real(64) * std::numeric_limits<Real>::epsilon() * std::abs(v),
            SuperzetaMethod::continued};
}

/// Residue of zeta_B+- at s0 in {1, 2} from four rays s0 + eps w, w in {1, i, -1, -i}.
template <std::floating_point Real>
ResidueEstimate<Real> zeta_b_residue(ZetaSide side, int s0, const std::complex<Real>& z, const GeodesicTable& table,
                                     const SurfaceConfig& config, const QuadratureSpec<Real>& quad = {},
                                     Real radius = Real(1e-2)) {
    if (s0 != 1 && s0 != 2) throw Error(ErrorKind::domain, "residues exist only at s = 1 and s = 2");
    const std::complex<Real> rays[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::complex<Real> samples[4];
    std::complex<Real> mean(0);
    for (int i = 0; i < 4; ++i) {
        const std::complex<Real> ds = radius * rays[i];
        const std::complex<Real> s = Real(s0) + ds;
        const auto v = side == ZetaSide::plus ? zeta_b_plus(s, z, table, config, quad)
                                              : zeta_b_minus(s, z, table, config, quad);
        samples[i] = ds * v.value;
        mean += samples[i];
    }
    mean /= Real(4);
    Real spread = 0;
    for (const auto& v : samples) spread = std::max(spread, std::abs(v - mean));
    return {mean, spread};
}

// ---------------------------------------------------------------------------
// Complete zetas and determinants.

/// Z+(z) = Z(z) / (G1(z) Gamma(z - 1/2)^c) and Z-(z) = Z+(z) phi(z).
template <std::floating_point Real = double>
struct CompleteZeta {
    const GeodesicTable& table;
    const SurfaceConfig& config;
    ZetaSide side = ZetaSide::plus;

    std::complex<Real> log_value(const std::complex<Real>& z) const {
        detail::require_half_plane(z);
        std::complex<Real> v = selberg_log_z(z, table) - log_g1(z, static_cast<Real>(config.vol()));
        if (config.cusps > 0) v -= static_cast<Real>(config.cusps) * log_gamma(z - Real(0.5));
        if (side == ZetaSide::minus) v += log_scattering_phi(z, config);
        return v;
    }

    std::complex<Real> value(const std::complex<Real>& z) const { return std::exp(log_value(z)); }
};

template <std::floating_point Real = double>
struct DeterminantResult {
    std::complex<Real> value{};
    std::complex<Real> log_value{};
    std::complex<Real> upsilon_factor{};
    std::complex<Real> zeta_side_factor{};
    Real abs_error = 0;
    DeterminantMethod method = DeterminantMethod::closed_form;
};

/// log Upsilon+(z) = (vol/2pi)(2z log 2pi + 2 zeta'(-1) - 1/2 log 2pi) + (c/2) log 2pi.
template <std::floating_point Real>
std::complex<Real> log_upsilon_plus(const std::complex<Real>& z, Real vol, Real c) {
    const Real l2p = std::log(Real(2) * pi_v<Real>);
    return vol / (Real(2) * pi_v<Real>) * (Real(2) * z * l2p + Real(2) * zeta_prime_minus_one<Real>() -
                                           Real(0.5) * l2p) +
           Real(0.5) * c * l2p;
}

/// log Upsilon-(z) = ((vol/pi) log 2pi - c1) z + (vol/2pi)(2 zeta'(-1) - log sqrt(2pi)) - c2 + (c/2) log 2.
template <std::floating_point Real>
std::complex<Real> log_upsilon_minus(const std::complex<Real>& z, Real vol, Real c, Real c1, Real c2) {
    const Real l2p = std::log(Real(2) * pi_v<Real>);
    return (vol / pi_v<Real> * l2p - c1) * z +
           vol / (Real(2) * pi_v<Real>) * (Real(2) * zeta_prime_minus_one<Real>() - Real(0.5) * l2p) - c2 +
           Real(0.5) * c * std::log(Real(2));
}

namespace detail {

template <std::floating_point Real>
std::complex<Real> log_upsilon(ZetaSide side, const std::complex<Real>& z, const SurfaceConfig& cfg) {
    const Real vol = static_cast<Real>(cfg.vol());
    const Real c = static_cast<Real>(cfg.cusps);
    return side == ZetaSide::plus
               ? log_upsilon_plus(z, vol, c)
               : log_upsilon_minus(z, vol, c, static_cast<Real>(cfg.c1), static_cast<Real>(cfg.c2));
}

template <std::floating_point Real>
DeterminantResult<Real> assemble(const std::complex<Real>& log_upsilon, const std::complex<Real>& log_total,
                                 Real log_error, DeterminantMethod method) {
    DeterminantResult<Real> out;
    out.log_value = log_total;
    out.value = std::exp(log_total);
    out.upsilon_factor = std::exp(log_upsilon);
    out.zeta_side_factor = std::exp(log_total - log_upsilon);
    out.abs_error = std::abs(out.value) * log_error;
    out.method = method;
    return out;
}

template <std::floating_point Real>
DeterminantResult<Real> det_closed(ZetaSide side, const std::complex<Real>& z, const GeodesicTable& table,
                                   const SurfaceConfig& config) {
    const std::complex<Real> lu = log_upsilon(side, z, config);
    const std::complex<Real> lz = CompleteZeta<Real>{table, config, side}.log_value(z);
    const Real rounding = Real(64) * std::numeric_limits<Real>::epsilon() * (std::abs(lu) + std::abs(lz) + Real(1));
    return assemble(lu, lu + lz, rounding, DeterminantMethod::closed_form);
}

// -d/ds zeta_B+-(s, z) at s = 1 - r, term by term. At s = 1 - r the sine
// prefactor contributes cos(pi s) = (-1)^{r-1} times the y^{r-1} moment.
template <std::floating_point Real>
Estimate<Real> minus_zeta_b_derivative(ZetaSide side, int r, const std::complex<Real>& z, const GeodesicTable& table,
                                       const SurfaceConfig& config, const QuadratureSpec<Real>& quad) {
    require_half_plane(z);
    if (r < 1) throw Error(ErrorKind::domain, "depth r must be positive");
    const Real vol = static_cast<Real>(config.vol());
    const Real c = static_cast<Real>(config.cusps);
    const std::complex<Real> s(Real(1 - r));
    std::complex<Real> v = script_g1_s_derivative(s, z, vol);
    if (config.cusps > 0) {
        const std::complex<Real> a = side == ZetaSide::plus ? z - Real(0.5) : z;
        v -= c * hurwitz_zeta_s_derivative(s, a);
    }
    const auto moment =
        mellin_moment(r, selberg_ray<Real>(z, table, side == ZetaSide::minus ? &config : nullptr), quad);
    const Real sign = (r % 2 == 1) ? Real(1) : Real(-1);
    v -= sign * moment.value;
    return {v, moment.abs_error + Real(64) * std::numeric_limits<Real>::epsilon() * std::abs(v)};
}

}  // namespace detail

/// det(zI - (1/2 I + B)) = Upsilon+(z) Z+(z).
template <std::floating_point Real>
DeterminantResult<Real> det_plus(const std::complex<Real>& z, const GeodesicTable& table, const SurfaceConfig& config) {
    return detail::det_closed(ZetaSide::plus, z, table, config);
}

/// det(zI - (1/2 I - B)) = Upsilon-(z) Z-(z).
template <std::floating_point Real>
DeterminantResult<Real> det_minus(const std::complex<Real>& z, const GeodesicTable& table,
                                  const SurfaceConfig& config) {
    return detail::det_closed(ZetaSide::minus, z, table, config);
}

/// exp(-d/ds zeta_B+-(s, z) at s = 0).
template <std::floating_point Real>
DeterminantResult<Real> det_via_superzeta(ZetaSide side, const std::complex<Real>& z, const GeodesicTable& table,
                                          const SurfaceConfig& config, const QuadratureSpec<Real>& quad = {}) {
    const auto d = detail::minus_zeta_b_derivative(side, 1, z, table, config, quad);
    return detail::assemble(detail::log_upsilon(side, z, config), d.value, d.abs_error,
                            DeterminantMethod::superzeta_derivative);
}

/// phi(z) = pi^{c/2} e^{c1 z + c2} det_-(z) / det_+(z).
template <std::floating_point Real>
std::complex<Real> phi_quotient(const std::complex<Real>& z, const GeodesicTable& table, const SurfaceConfig& config) {
    const auto dp = det_plus(z, table, config);
    const auto dm = det_minus(z, table, config);
    const Real c = static_cast<Real>(config.cusps);
    return std::exp(Real(0.5) * c * std::log(pi_v<Real>) + static_cast<Real>(config.c1) * z +
                    static_cast<Real>(config.c2) + dm.log_value - dp.log_value);
}

// ---------------------------------------------------------------------------
// Higher depth.

template <std::floating_point Real = double>
struct HigherDepthResult {
    std::complex<Real> value{};             // from the Milnor-gamma path
    std::complex<Real> log_closed{};        // log Gamma_r(z-1/2)^{-c} [Z^(r)]^{(-1)^{r-1}(r-1)!} (...)^{vol/pi}
    std::complex<Real> log_superzeta{};     // -d/ds zeta_B+ at s = 1 - r
    std::complex<Real> mellin_integral{};   // int_0^inf (Z'/Z)(z+y) y^{r-1} dy
    std::complex<Real> mellin_dirichlet{};  // (r-1)! sum Lambda(P) N(P)^{-z} (log N(P))^{-r}
    Real abs_error = 0;                     // of log_superzeta
    Real path_discrepancy = 0;              // |log_closed - log_superzeta|
    Real mellin_discrepancy = 0;            // |mellin_integral - mellin_dirichlet|
};

template <std::floating_point Real>
HigherDepthResult<Real> higher_depth_det(int r, const std::complex<Real>& z, const GeodesicTable& table,
                                         const SurfaceConfig& config, const QuadratureSpec<Real>& quad = {}) {
    detail::require_half_plane(z);
    if (r < 1) throw Error(ErrorKind::domain, "depth r must be positive");
    const Real vol = static_cast<Real>(config.vol());
    const Real c = static_cast<Real>(config.cusps);
    const Real sign = (r % 2 == 1) ? Real(1) : Real(-1);
    const Real fact = detail::factorial<Real>(r - 1);
    HigherDepthResult<Real> out;

    const std::complex<Real> log_poly = poly_selberg_log(r, z, table);
    out.log_closed = vol / pi_v<Real> * (log_milnor_gamma(r + 1, z) - (z - Real(0.5)) * log_milnor_gamma(r, z)) +
                     sign * fact * log_poly;
    if (config.cusps > 0) out.log_closed -= c * log_milnor_gamma(r, z - Real(0.5));
    out.value = std::exp(out.log_closed);

    const auto d = detail::minus_zeta_b_derivative(ZetaSide::plus, r, z, table, config, quad);
    out.log_superzeta = d.value;
    out.abs_error = d.abs_error;
    out.path_discrepancy = std::abs(out.log_closed - out.log_superzeta);

    out.mellin_integral = detail::mellin_moment(r, detail::selberg_ray<Real>(z, table, nullptr), quad).value;
    out.mellin_dirichlet = -fact * log_poly;
    out.mellin_discrepancy = std::abs(out.mellin_integral - out.mellin_dirichlet);
    return out;
}

// ---------------------------------------------------------------------------
// Divisor bookkeeping.

struct EigenvalueEntry {
    double lambda = 0;
    int mult = 1;
};

struct PhiPole {
    std::complex<double> s;  // Re(s) < 1/2
    int order = 1;
};

struct DivisorLedger {
    int d_quarter = 0;
    double tr_phi_half = 0;
    int cusps = 0;
    std::optional<int> cusp_forms_quarter;
    std::vector<EigenvalueEntry> eigenvalues;
    std::vector<ScatteringPole> residual;  // poles sigma_i of phi in (1/2, 1]
    std::vector<PhiPole> resonances;
    bool spectrum_complete = false;        // eigenvalues and resonances list everything

    static DivisorLedger from_config(const SurfaceConfig& cfg) {
        DivisorLedger l;
        l.d_quarter = cfg.d_quarter;
        l.tr_phi_half = cfg.tr_phi_half;
        l.cusps = cfg.cusps;
        l.residual = cfg.poles;
        return l;
    }

    int eigen_multiplicity(double lambda) const {
        int m = 0;
        for (const auto& e : eigenvalues)
            if (std::abs(e.lambda - lambda) <= 1e-12 * std::max(1.0, std::abs(lambda))) m += e.mult;
        return m;
    }

    void validate() const {
        if (d_quarter < 0 || cusps < 0) throw Error(ErrorKind::configuration, "ledger counts must be non-negative");
        if (2.0 * d_quarter + 0.5 * (cusps + tr_phi_half) < 0)
            throw Error(ErrorKind::domain, "multiplicity at s = 1/2 would be negative");
        if (!spectrum_complete) return;
        for (const auto& p : residual)
            if (eigen_multiplicity(p.sigma * (1 - p.sigma)) < p.mult)
                throw Error(ErrorKind::domain, "residual multiplicity would be negative");
    }
};

/// Multiplicity of the zero of Z+ at s = 1/2: 2 d_{1/4} + (c + tr Phi(1/2)) / 2.
inline double multiplicity_at_half(const DivisorLedger& ledger) {
    const double a = 2.0 * ledger.d_quarter + 0.5 * (ledger.cusps + ledger.tr_phi_half);
    if (a < 0) throw Error(ErrorKind::domain, "multiplicity at s = 1/2 is negative for these inputs");
    return a;
}

/// m(r): multiplicity of 1/2 + ir in the spectrum of 1/2 I + B.
inline double singular_multiplicity(const std::complex<double>& r, const DivisorLedger& ledger) {
    if (r == std::complex<double>(0)) {
        if (!ledger.cusp_forms_quarter)
            throw Error(ErrorKind::insufficient_data, "cusp-form multiplicity at 1/4 is not recorded");
        return 2.0 * *ledger.cusp_forms_quarter + 0.5 * (ledger.cusps + ledger.tr_phi_half);
    }
    const std::complex<double> lambda = 0.25 + r * r;
    const bool real_lambda = std::abs(lambda.imag()) <= 1e-14 * std::max(1.0, std::abs(lambda));
    auto need_spectrum = [&] {
        if (!ledger.spectrum_complete)
            throw Error(ErrorKind::insufficient_data, "ledger does not list the spectrum near this point");
    };
    double m = 0;
    if (real_lambda && lambda.real() >= 0) {
        need_spectrum();
        m += ledger.eigen_multiplicity(lambda.real());
    }
    if (r.imag() > 0) {
        const std::complex<double> s = 0.5 + std::complex<double>(0, 1) * r;
        auto near = [&](const std::complex<double>& a) { return std::abs(a - s) <= 1e-12 * std::max(1.0, std::abs(s)); };
        for (const auto& p : ledger.residual)
            if (near({1 - p.sigma, 0})) m -= p.mult;
        need_spectrum();
        for (const auto& p : ledger.resonances)
            if (near(p.s)) m += p.order;
    }
    return m;
}

// ---------------------------------------------------------------------------
// The normalization of Z'(1).

/// 2^{c/2} exp[(vol/2pi)(2 zeta'(-1) + (3/2) log 2pi)] for raw data (vol >= 0, c >= 0).
inline double det_star_constant(double vol, int cusps) {
    if (vol < 0 || cusps < 0) throw Error(ErrorKind::domain, "volume and cusp count must be non-negative");
    const double l2p = std::log(2.0 * std::numbers::pi);
    return std::exp(0.5 * cusps * std::log(2.0) +
                    vol / (2.0 * std::numbers::pi) * (2.0 * zeta_prime_minus_one<double>() + 1.5 * l2p));
}

inline double det_star_constant(const SurfaceConfig& config) { return det_star_constant(config.vol(), config.cusps); }

/// DET*(-B + 1/2 I) = C Z'(1) for a simple zero of Z at 1.
inline double det_star_from_zprime(double zprime1, double vol, int cusps) {
    if (!(zprime1 > 0)) throw Error(ErrorKind::domain, "Z'(1) must be positive at the simple zero s = 1");
    return det_star_constant(vol, cusps) * zprime1;
}

inline double det_star_from_zprime(double zprime1, const SurfaceConfig& config) {
    return det_star_from_zprime(zprime1, config.vol(), config.cusps);
}

}  // namespace superzeta
