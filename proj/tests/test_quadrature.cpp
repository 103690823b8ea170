#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "superzeta/quadrature.hpp"
#include "superzeta/special_functions.hpp"

namespace sz = superzeta;
using cd = std::complex<double>;

TEST(Quadrature, MellinOfExponentialIsGamma) {
    // int_0^inf e^{-y} y^{a-1} dy = Gamma(a)
    for (cd a : {cd(0.5), cd(1.7, 2.0), cd(0.2, -3.0), cd(4.0, 0.5)}) {
        const auto est = sz::integrate_half_line<double>([&](double y) { return std::exp((a - 1.0) * std::log(y) - y); });
        const cd exact = sz::gamma(a);
        EXPECT_LT(std::abs(est.value - exact), 1e-11) << a;
        EXPECT_LT(est.abs_error, 1e-9) << a;
    }
}

TEST(Quadrature, AlgebraicTail) {
    // int_0^inf y^{1/2} / (1+y)^3 dy = B(3/2, 3/2) = pi/8
    const auto est = sz::integrate_half_line<double>([](double y) { return cd(std::sqrt(y) / std::pow(1 + y, 3)); });
    EXPECT_NEAR(est.value.real(), 3.14159265358979323846 / 8, 1e-11);
}

TEST(Quadrature, AdaptiveSchemeAgrees) {
    sz::QuadratureSpec<double> spec;
    spec.scheme = sz::QuadratureScheme::adaptive;
    spec.upper = 60;
    const auto est = sz::integrate_half_line<double>([](double y) { return cd(std::exp(-y) * y * y); }, spec);
    EXPECT_NEAR(est.value.real(), 2.0, 1e-10);
}

TEST(Quadrature, CoarserLevelStaysWithinEstimate) {
    sz::QuadratureSpec<double> spec;
    auto f = [](double y) { return std::exp(-cd(1, 0.5) * y) * std::pow(y, -0.3); };
    const auto fine = sz::integrate_half_line<double>(f, spec);
    const auto coarse = sz::integrate_half_line<double>(f, spec.coarser());
    EXPECT_LT(std::abs(fine.value - coarse.value), std::max(coarse.abs_error, 1e-12) * 10);
}

TEST(Quadrature, InvalidSpecIsConfigurationError) {
    sz::QuadratureSpec<double> spec;
    spec.split = -1;
    try {
        (void)sz::integrate_half_line<double>([](double) { return cd(1); }, spec);
        FAIL();
    } catch (const sz::Error& e) {
        EXPECT_EQ(e.kind(), sz::ErrorKind::configuration);
    }
}
