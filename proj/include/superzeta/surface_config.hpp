#pragma once

// Surface data: topology, scattering determinant phi(s) = L(s) H(s) and the
// spectral entries used for multiplicity bookkeeping.
//
//   L(s) = pi^{c/2} (Gamma(s - 1/2) / Gamma(s))^c e^{c1 s + c2}
//   H(s) = 1 + sum_n a(n) u_n^{-2s}

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "superzeta/core.hpp"
#include "superzeta/special_functions.hpp"

namespace superzeta {

struct DirichletTerm {
    double u = 0;  // u_n > 1, strictly increasing
    double a = 0;
};

struct ScatteringPole {
    double sigma = 1;  // in (1/2, 1]
    int mult = 1;
};

struct SurfaceConfig {
    int genus = 0;
    int cusps = 3;
    double c1 = -2.0 * std::log(1.5);
    double c2 = 0;
    std::vector<DirichletTerm> dirichlet;
    int d_quarter = 0;
    double tr_phi_half = -1;
    std::vector<ScatteringPole> poles;

    double vol() const { return 2.0 * std::numbers::pi * (2.0 * genus - 2.0 + cusps); }

    void validate() const {
        if (genus < 0 || cusps < 0) throw Error(ErrorKind::configuration, "genus and cusps must be non-negative");
        if (!(vol() > 0)) throw Error(ErrorKind::configuration, "surface area 2pi(2g-2+c) must be positive");
        if (cusps > 0 && c1 == 0) throw Error(ErrorKind::configuration, "c1 must be nonzero");
        double prev = 1;
        for (const auto& t : dirichlet) {
            if (!(t.u > prev)) throw Error(ErrorKind::configuration, "Dirichlet bases must be > 1 and increasing");
            prev = t.u;
        }
        if (d_quarter < 0) throw Error(ErrorKind::configuration, "d_quarter must be non-negative");
        for (const auto& p : poles) {
            if (!(p.sigma > 0.5 && p.sigma <= 1)) throw Error(ErrorKind::configuration, "pole sigma outside (1/2, 1]");
            if (p.mult < 1 || p.mult > cusps) throw Error(ErrorKind::configuration, "pole multiplicity outside [1, c]");
        }
    }

    /// The shipped reference instance: Gamma(2) topology (g = 0, c = 3) with
    /// a synthetic scattering coefficient set.
    static SurfaceConfig reference() {
        SurfaceConfig c;
        c.c2 = 0.1;
        c.dirichlet = {{1.3, 0.4}, {1.7, -0.25}, {2.2, 0.1}};
        return c;
    }
};

inline void to_json(nlohmann::json& j, const SurfaceConfig& c) {
    j = nlohmann::json{{"genus", c.genus}, {"cusps", c.cusps}, {"c1", c.c1}, {"c2", c.c2},
                       {"d_quarter", c.d_quarter}, {"tr_phi_half", c.tr_phi_half}};
    j["dirichlet"] = nlohmann::json::array();
    for (const auto& t : c.dirichlet) j["dirichlet"].push_back({{"u", t.u}, {"a", t.a}});
    j["poles"] = nlohmann::json::array();
    for (const auto& p : c.poles) j["poles"].push_back({{"sigma", p.sigma}, {"mult", p.mult}});
}

inline SurfaceConfig parse_surface_config(const std::string& text) {
    SurfaceConfig c;
    try {
        const auto j = nlohmann::json::parse(text);
        c.genus = j.at("genus").get<int>();
        c.cusps = j.at("cusps").get<int>();
        c.c1 = j.at("c1").get<double>();
        c.c2 = j.value("c2", 0.0);
        c.d_quarter = j.value("d_quarter", 0);
        c.tr_phi_half = j.value("tr_phi_half", 0.0);
        c.dirichlet.clear();
        for (const auto& t : j.value("dirichlet", nlohmann::json::array()))
            c.dirichlet.push_back({t.at("u").get<double>(), t.at("a").get<double>()});
        c.poles.clear();
        for (const auto& p : j.value("poles", nlohmann::json::array()))
            c.poles.push_back({p.at("sigma").get<double>(), p.at("mult").get<int>()});
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::malformed, std::string("surface config: ") + e.what());
    }
    c.validate();
    return c;
}

inline SurfaceConfig load_surface_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::io, "cannot open surface config " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_surface_config(ss.str());
}

/// H^{(n)}(s), n >= 0.
template <std::floating_point Real>
std::complex<Real> dirichlet_h_derivative(int n, const std::complex<Real>& s, const SurfaceConfig& cfg) {
    std::complex<Real> acc(n == 0 ? 1 : 0);
    for (const auto& t : cfg.dirichlet) {
        const Real lu = Real(-2) * std::log(static_cast<Real>(t.u));
        acc += static_cast<Real>(t.a) * std::pow(lu, Real(n)) * std::exp(lu * s);
    }
    return acc;
}

/// Derivatives 1..n of log H, from f^{(k)} = (H^{(k)} - sum_{j=1}^{k-1} C(k-1, j) H^{(j)} f^{(k-j)}) / H.
template <std::floating_point Real>
std::vector<std::complex<Real>> log_h_derivatives(int n, const std::complex<Real>& s, const SurfaceConfig& cfg) {
    std::vector<std::complex<Real>> h(static_cast<std::size_t>(n) + 1), f(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) h[static_cast<std::size_t>(k)] = dirichlet_h_derivative(k, s, cfg);
    if (h[0] == std::complex<Real>(0)) throw Error(ErrorKind::zero, "H vanishes");
    for (int k = 1; k <= n; ++k) {
        std::complex<Real> acc = h[static_cast<std::size_t>(k)];
        Real binom = 1;  // C(k-1, j)
        for (int j = 1; j <= k - 1; ++j) {
            binom = binom * Real(k - j) / Real(j);
            acc -= binom * h[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(k - j)];
        }
        f[static_cast<std::size_t>(k)] = acc / h[0];
    }
    return f;
}

/// log H(s) on the principal branch (H stays near 1 for Re(s) > 1).
template <std::floating_point Real>
std::complex<Real> log_dirichlet_h(const std::complex<Real>& s, const SurfaceConfig& cfg) {
    const std::complex<Real> h = dirichlet_h_derivative(0, s, cfg);
    if (h == std::complex<Real>(0)) throw Error(ErrorKind::zero, "H vanishes");
    return std::log(h);
}

/// log phi(s), assembled additively from its factors.
template <std::floating_point Real>
std::complex<Real> log_scattering_phi(const std::complex<Real>& s, const SurfaceConfig& cfg) {
    if (!(s.real() > Real(1))) throw Error(ErrorKind::domain, "scattering determinant is evaluated for Re(s) > 1");
    const Real c = static_cast<Real>(cfg.cusps);
    std::complex<Real> acc = Real(0.5) * c * std::log(pi_v<Real>) + static_cast<Real>(cfg.c1) * s +
                             static_cast<Real>(cfg.c2) + log_dirichlet_h(s, cfg);
    if (cfg.cusps > 0) acc += c * (log_gamma(s - Real(0.5)) - log_gamma(s));
    return acc;
}

template <std::floating_point Real>
std::complex<Real> scattering_phi(const std::complex<Real>& s, const SurfaceConfig& cfg) {
    return std::exp(log_scattering_phi(s, cfg));
}

}  // namespace superzeta
