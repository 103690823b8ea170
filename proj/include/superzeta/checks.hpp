#pragma once

// Identity checks shared by the command line `check` suites and the
// acceptance runner. Each check measures a maximum error against an
// oracle that does not go through the code path under test.

#include <chrono>
#include <cstdio>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "superzeta/lax_phillips.hpp"
#include "superzeta/table_io.hpp"

namespace superzeta::checks {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double measured = 0;   // max error in the units of `tolerance`
    double tolerance = 0;
    double seconds = 0;
    double time_limit = 0;
    std::string note;
};

struct CheckOptions {
    std::optional<double> tolerance;  // replaces every per-check tolerance
    double table_norm = 1e4;
    double depth_norm = 1e7;          // self-convergence pair X, 2X for the depth check
    int threads = 1;
    SurfaceConfig config = SurfaceConfig::reference();
    std::optional<GeodesicTable> table;  // preloaded table replaces the build
};

class CheckContext {
public:
    explicit CheckContext(CheckOptions opts) : opts_(std::move(opts)) {}

    const CheckOptions& options() const { return opts_; }

    double tol(double fallback) const { return opts_.tolerance.value_or(fallback); }

    /// The X = table_norm table; build time is charged to the first caller.
    const GeodesicTable& table(double* build_seconds = nullptr) {
        if (!table_) {
            const auto t0 = std::chrono::steady_clock::now();
            if (opts_.table) {
                table_ = std::make_unique<GeodesicTable>(*opts_.table);
            } else {
                EnumerationParams p;
                p.threads = opts_.threads;
                table_ = std::make_unique<GeodesicTable>(enumerate_primitive_classes(opts_.table_norm, p));
            }
            const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (build_seconds) *build_seconds += dt;
        }
        return *table_;
    }

private:
    CheckOptions opts_;
    std::unique_ptr<GeodesicTable> table_;
};

namespace detail {

inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

inline double rel_err(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) / std::abs(b); }

template <class F>
CheckResult timed(int id, std::string name, double tolerance, double limit, F&& body) {
    CheckResult r;
    r.id = id;
    r.name = std::move(name);
    r.tolerance = tolerance;
    r.time_limit = limit;
    const auto t0 = std::chrono::steady_clock::now();
    double extra = 0;
    try {
        body(r, extra);
    } catch (const std::exception& e) {
        r.measured = std::numeric_limits<double>::infinity();
        r.note = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() + extra;
    r.passed = r.measured < r.tolerance && r.seconds < r.time_limit;
    if (r.seconds >= r.time_limit) r.note += (r.note.empty() ? "" : "; ") + std::string("time limit exceeded");
    return r;
}

// B_{n}(z) from the explicit expansion sum_k C(n,k) B_k z^{n-k}, with
// Bernoulli numbers entered as rationals.
inline std::complex<long double> bernoulli_poly_oracle(int n, std::complex<long double> z) {
    static const long double B[] = {1.0L, -1.0L / 2, 1.0L / 6, 0, -1.0L / 30, 0, 1.0L / 42, 0, -1.0L / 30};
    std::complex<long double> acc = 0;
    long double binom = 1;
    for (int k = 0; k <= n; ++k) {
        acc += binom * B[k] * std::pow(z, n - k);
        binom = binom * (n - k) / (k + 1);
    }
    return acc;
}

}  // namespace detail

/// zeta_H(-n, z) = -B_{n+1}(z)/(n+1) and zeta_H(n+1, x) = (-1)^{n+1} psi^{(n)}(x)/n!.
/// Errors are absolute for |value| <= 1 and relative above.
inline CheckResult check_hurwitz_bernoulli(CheckContext& ctx) {
    return detail::timed(1, "Hurwitz/Bernoulli and polygamma identities", ctx.tol(1e-11), 10,
                         [](CheckResult& r, double&) {
        using ld = double;
        std::mt19937_64 rng(20240611);
        std::uniform_real_distribution<double> re(0.0, 10.0), im(-2.0, 2.0);
        double abs_max = 0, rel_max = 0;
        for (int i = 0; i < 50; ++i) {
            const std::complex<ld> z(re(rng), im(rng));
            for (int n = 0; n <= 6; ++n) {
                const auto v = hurwitz_zeta(std::complex<ld>(-n), z);
                const auto b = std::complex<ld>(detail::bernoulli_poly_oracle(n + 1, std::complex<long double>(z))) / ld(n + 1);
                abs_max = std::max(abs_max, static_cast<double>(std::abs(v + b) / std::max<ld>(1, std::abs(b))));
            }
            const ld x = z.real();
            ld fact = 1;
            for (int n = 1; n <= 6; ++n) {
                fact *= n;
                const ld sign = (n % 2 == 1) ? 1 : -1;
                const ld expected = sign * boost::math::polygamma(n, x) / fact;
                const ld v = hurwitz_zeta(std::complex<ld>(n + 1), std::complex<ld>(x)).real();
                rel_max = std::max(rel_max, static_cast<double>(std::abs(v - expected) / std::max<ld>(1, std::abs(expected))));
            }
        }
        r.measured = std::max(abs_max, rel_max);
        r.note = "Bernoulli " + detail::sci(abs_max) + ", polygamma " + detail::sci(rel_max) +
                 " (error / max(1, |value|))";
    });
}

/// voros_continue on G1 data against the Hurwitz closed form.
inline CheckResult check_voros_closed_form(CheckContext& ctx) {
    return detail::timed(2, "Voros continuation vs G1 closed form", ctx.tol(1e-8), 60, [](CheckResult& r, double&) {
        const double vol = 2 * std::numbers::pi;
        const auto data = g1_asymptotic_data(vol);
        double worst = 0;
        for (double s : {-1.5, -0.5, 0.0, 0.5, 1.5, 2.5}) {
            for (double z : {1.5, 2.0, 3.0, 5.0, 10.0}) {
                const std::complex<double> a = voros_continue(std::complex<double>(s), std::complex<double>(z), data).value;
                const std::complex<double> b = script_g1(std::complex<double>(s), std::complex<double>(z), vol);
                worst = std::max(worst, std::abs(a - b));
            }
        }
        r.measured = worst;
    });
}

/// Barnes zeros: continued and direct sums in 2 < Re(s) < 3, both against Hurwitz.
inline CheckResult check_overlap_strip(CheckContext& ctx) {
    return detail::timed(3, "overlap strip on Barnes zeros", ctx.tol(1e-9), 30, [](CheckResult& r, double&) {
        const auto data = barnes_asymptotic_data();
        const auto zeros = ZeroSequence<double>::barnes();
        double worst = 0;
        int outside = 0;
        for (double sr : {2.2, 2.5, 2.8}) {
            for (double si : {0.0, 0.7}) {
                for (double z : {1.5, 2.0, 3.0, 5.0}) {
                    const std::complex<double> s(sr, si), w(z);
                    const auto a = voros_continue(s, w, data);
                    const auto b = superzeta_direct(s, w, zeros);
                    const std::complex<double> h = hurwitz_zeta(s - 1.0, w) - w * hurwitz_zeta(s, w);
                    if (std::abs(a.value - b.value) > a.abs_error_estimate + b.abs_error_estimate) ++outside;
                    worst = std::max({worst, std::abs(a.value - h), std::abs(b.value - h)});
                }
            }
        }
        r.measured = outside > 0 ? std::numeric_limits<double>::infinity() : worst;
        if (outside > 0) r.note = std::to_string(outside) + " points outside combined error estimates";
    });
}

/// exp(-d/ds script_G1 at 0) against the normalized G1.
inline CheckResult check_g1_product(CheckContext& ctx) {
    return detail::timed(4, "regularized product of G1", ctx.tol(1e-8), 10, [](CheckResult& r, double&) {
        const double l2p = std::log(2 * std::numbers::pi);
        double worst = 0;
        for (double vol : {2 * std::numbers::pi, 4 * std::numbers::pi}) {
            const auto data = g1_asymptotic_data(vol);
            for (double zr : {1.5, 2.0, 3.0, 5.0}) {
                const std::complex<double> z(zr);
                const std::complex<double> lhs = log_regularized_product(z, data);
                const std::complex<double> rhs =
                    -vol / (2 * std::numbers::pi) * (2.0 * z * l2p + 2 * zeta_prime_minus_one<double>() - 0.5 * l2p) +
                    log_g1(z, vol);
                // relative error of the exponentials
                worst = std::max(worst, std::abs(std::exp(lhs - rhs) - 1.0));
            }
        }
        r.measured = worst;
    });
}

/// Four-ray residues of zeta_B+- at s = 2 and s = 1.
inline CheckResult check_residues(CheckContext& ctx) {
    return detail::timed(5, "residues of zeta_B+- at s = 1, 2", ctx.tol(1e-4), 300, [&ctx](CheckResult& r, double& extra) {
        const auto& t = ctx.table(&extra);
        const auto& cfg = ctx.options().config;
        const double vol = cfg.vol();
        double worst = 0;
        for (double zr : {2.0, 3.0, 5.0}) {
            const std::complex<double> z(zr);
            for (ZetaSide side : {ZetaSide::plus, ZetaSide::minus}) {
                const auto r2 = zeta_b_residue(side, 2, z, t, cfg);
                const auto r1 = zeta_b_residue(side, 1, z, t, cfg);
                worst = std::max(worst, detail::rel_err(r2.value, -vol / std::numbers::pi));
                worst = std::max(worst, detail::rel_err(r1.value, vol / std::numbers::pi * (zr - 0.5) + cfg.cusps));
            }
        }
        r.measured = worst;
    });
}

/// Closed-form Upsilon Z against exp(-d/ds zeta_B at 0).
inline CheckResult check_determinant_dual_path(CheckContext& ctx) {
    return detail::timed(6, "determinant dual path", ctx.tol(1e-6), 120, [&ctx](CheckResult& r, double& extra) {
        const auto& t = ctx.table(&extra);
        const auto& cfg = ctx.options().config;
        double worst = 0;
        for (double re : {1.5, 2.0, 3.0, 4.0}) {
            for (double im : {0.0, 1.0}) {
                const std::complex<double> z(re, im);
                for (ZetaSide side : {ZetaSide::plus, ZetaSide::minus}) {
                    const auto closed = side == ZetaSide::plus ? det_plus(z, t, cfg) : det_minus(z, t, cfg);
                    const auto path = det_via_superzeta(side, z, t, cfg);
                    worst = std::max(worst, detail::rel_err(path.value, closed.value));
                }
            }
        }
        r.measured = worst;
    });
}

/// pi^{c/2} e^{c1 z + c2} det_- / det_+ against phi.
inline CheckResult check_phi_quotient(CheckContext& ctx) {
    return detail::timed(7, "phi quotient identity", ctx.tol(1e-10), 120, [&ctx](CheckResult& r, double& extra) {
        const auto& t = ctx.table(&extra);
        const auto& cfg = ctx.options().config;
        double worst = 0;
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) {
                const std::complex<double> z(1.5 + 4.5 * i / 4, -2.0 + 4.0 * j / 4);
                worst = std::max(worst, detail::rel_err(phi_quotient(z, t, cfg), scattering_phi(z, cfg)));
            }
        }
        r.measured = worst;
    });
}

/// Depth r in {1,2,3}: both paths, the Mellin-Dirichlet identity, and the
/// change of every determinant between tables at X and 2X.
inline CheckResult check_higher_depth(CheckContext& ctx) {
    return detail::timed(8, "higher-depth determinants", ctx.tol(1e-6), 300, [&ctx](CheckResult& r, double&) {
        const auto& cfg = ctx.options().config;
        EnumerationParams p;
        p.threads = ctx.options().threads;
        p.max_nodes = 2'000'000'000LL;
        const double X = ctx.options().depth_norm;
        const GeodesicTable t1 = enumerate_primitive_classes(X, p);
        const GeodesicTable t2 = enumerate_primitive_classes(2 * X, p);
        double path = 0, mellin = 0, change = 0;
        for (int depth : {1, 2, 3}) {
            for (double zr : {2.0, 3.0, 4.0}) {
                const std::complex<double> z(zr);
                const auto a = higher_depth_det(depth, z, t1, cfg);
                const auto b = higher_depth_det(depth, z, t2, cfg);
                path = std::max({path, a.path_discrepancy, b.path_discrepancy});
                mellin = std::max(mellin, a.mellin_discrepancy / std::abs(a.mellin_dirichlet));
                change = std::max(change, std::abs(std::exp(a.log_closed - b.log_closed) - 1.0));
            }
        }
        r.measured = std::max(path, mellin);
        const double change_tol = 1e-8;
        r.note = "path " + detail::sci(path) + ", Mellin-Dirichlet " + detail::sci(mellin) + ", X vs 2X change " +
                 detail::sci(change);
        if (!(change < change_tol)) {
            r.measured = std::numeric_limits<double>::infinity();
            r.note += " exceeds 1e-8";
        }
    });
}

/// Gamma(2) enumeration invariants and rebuild determinism.
inline CheckResult check_enumeration(CheckContext& ctx) {
    return detail::timed(9, "geodesic enumeration", ctx.tol(1e-12), 120, [&ctx](CheckResult& r, double&) {
        EnumerationParams p;
        p.threads = ctx.options().threads;
        const double X = std::max(ctx.options().table_norm, 1e4);
        const GeodesicTable t = enumerate_primitive_classes(X, p);
        std::set<std::string> words;
        for (const auto& c : t.classes) words.insert(c.word);
        const std::string ab = gamma2::canonical_rotation("AB");
        const double expected = 17 + 12 * std::sqrt(2.0);
        double norm_err = std::numeric_limits<double>::infinity();
        for (const auto& c : t.classes)
            if (c.word == ab) norm_err = std::abs(c.norm - expected) / expected;
        int unpaired = 0, imprimitive = 0;
        for (const auto& c : t.classes) {
            if (!words.count(gamma2::canonical_rotation(gamma2::inverse_word(c.word)))) ++unpaired;
            if (gamma2::primitive_period(c.word) != c.word.size() || !gamma2::is_cyclically_reduced(c.word))
                ++imprimitive;
            if (gamma2::word_matrix(c.word).trace() != c.trace) ++imprimitive;
        }
        EnumerationParams q = p;
        q.threads = p.threads == 1 ? 2 : 1;
        const bool same = table_hash(t) == table_hash(enumerate_primitive_classes(X, p)) &&
                          table_hash(t) == table_hash(enumerate_primitive_classes(X, q));
        r.measured = norm_err;
        r.note = std::to_string(t.class_count()) + " classes, " + std::to_string(unpaired) + " unpaired, " +
                 std::to_string(imprimitive) + " invalid, hash " + (same ? "stable" : "unstable");
        if (unpaired || imprimitive || !same) r.measured = std::numeric_limits<double>::infinity();
    });
}

/// zeta'(-1) against finite differences of an independent zeta, and the
/// Z'(1) normalization constant by substitution.
inline CheckResult check_constants(CheckContext& ctx) {
    return detail::timed(10, "constants", ctx.tol(1e-9), 10, [](CheckResult& r, double&) {
        // Richardson-extrapolated central differences
        auto central = [](double h) {
            return (boost::math::zeta(-1 + h) - boost::math::zeta(-1 - h)) / (2 * h);
        };
        const double d1 = central(0.02), d2 = central(0.01), d3 = central(0.005);
        const double r1 = (4 * d2 - d1) / 3, r2 = (4 * d3 - d2) / 3;
        const double oracle = (16 * r2 - r1) / 15;
        const double zp = zeta_prime_minus_one<double>();
        const double zp_err = std::abs(zp - oracle);
        double const_err = 0;
        const double l2p = std::log(2 * std::numbers::pi);
        const std::pair<int, double> cases[] = {{0, 4 * std::numbers::pi}, {3, 2 * std::numbers::pi}, {5, 8 * std::numbers::pi}};
        for (const auto& [c, vol] : cases) {
            const double expected = std::pow(2.0, c / 2.0) * std::exp(vol / (2 * std::numbers::pi) * (2 * oracle + 1.5 * l2p));
            const_err = std::max(const_err, std::abs(det_star_constant(vol, c) - expected) / expected);
        }
        r.measured = std::max(zp_err, const_err);
        r.note = "zeta'(-1) diff " + detail::sci(zp_err) + ", constant rel " + detail::sci(const_err);
    });
}

using CheckFn = CheckResult (*)(CheckContext&);

inline const std::vector<CheckFn>& all_checks() {
    static const std::vector<CheckFn> v = {check_hurwitz_bernoulli, check_voros_closed_form, check_overlap_strip,
                                           check_g1_product,        check_residues,          check_determinant_dual_path,
                                           check_phi_quotient,      check_higher_depth,      check_enumeration,
                                           check_constants};
    return v;
}

/// Check ids per suite name; empty for unknown names.
inline std::vector<int> suite_members(const std::string& suite) {
    static const std::map<std::string, std::vector<int>> suites = {
        {"special", {1, 10}},
        {"voros", {2, 3, 4}},
        {"surface", {9}},
        {"determinants", {5, 6, 7, 8}},
        {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}},
    };
    const auto it = suites.find(suite);
    return it == suites.end() ? std::vector<int>{} : it->second;
}

inline std::vector<CheckResult> run_suite(const std::string& suite, CheckContext& ctx) {
    std::vector<CheckResult> out;
    for (int id : suite_members(suite)) out.push_back(all_checks()[static_cast<std::size_t>(id - 1)](ctx));
    return out;
}

}  // namespace superzeta::checks
