#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "superzeta/lax_phillips.hpp"

using namespace superzeta;
using cd = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;

const GeodesicTable& small_table() {
    static const GeodesicTable t = enumerate_primitive_classes(100.0);
    return t;
}

const GeodesicTable& big_table() {
    static const GeodesicTable t = enumerate_primitive_classes(1e4);
    return t;
}

double rel(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

// (sin pi s / pi) int_0^inf (Z'/Z)(z+y) y^{-s} dy, summed term by term:
// each exponential b e^{-b w} contributes e^{-b z} b^{s-1} / Gamma(s).
cd mellin_oracle(cd s, cd z, const GeodesicTable& t) {
    cd acc = 0;
    for (const auto& e : t.entries) {
        for (int l = 1; l <= 60; ++l) {
            const double b = l * e.log_norm;
            acc += double(e.count) * e.log_norm / (1 - std::exp(-b)) * std::exp(-b * z) * std::exp((s - 1.0) * std::log(b));
        }
    }
    return acc * reciprocal_gamma(s);
}

}  // namespace

TEST(ScriptG1, AtZeroMatchesBernoulliValues) {
    for (double vol : {2 * pi, 4 * pi}) {
        for (cd z : {cd(1.5), cd(2.0, 0.7), cd(4.2, -1.0)}) {
            const cd b2 = z * z - z + 1.0 / 6.0;
            const cd expected = vol / pi * (-b2 / 2.0 - (z - 0.5) * (0.5 - z));
            EXPECT_LT(std::abs(script_g1(cd(0), z, vol) - expected), 1e-12);
        }
    }
}

TEST(ScriptG1, ValueAtThree) {
    const double zeta3 = 1.2020569031595942;
    const double expected = 2 * (pi * pi / 6 - zeta3 / 2);
    EXPECT_NEAR(script_g1(cd(3), cd(1), 2 * pi).real(), expected, 1e-13);
}

TEST(ScriptG1, PolesAndResidues) {
    EXPECT_THROW(script_g1(cd(1), cd(2), 2 * pi), Error);
    EXPECT_THROW(script_g1(cd(2), cd(2), 2 * pi), Error);
    try {
        script_g1(cd(2), cd(2), 2 * pi);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::pole);
    }
    const double h = 1e-7;
    const double vol = 4 * pi;
    const cd z(3);
    EXPECT_NEAR((h * script_g1(cd(2 + h), z, vol)).real(), vol / pi, 1e-5);
    EXPECT_NEAR((h * script_g1(cd(1 + h), z, vol)).real(), -vol / (2 * pi) * (2 * 3.0 - 1), 1e-5);
}

TEST(ZetaB, EmptyTableWithoutCuspsIsMinusScriptG1) {
    SurfaceConfig cfg;
    cfg.genus = 2;
    cfg.cusps = 0;
    cfg.c1 = 0;
    const GeodesicTable empty;
    for (cd s : {cd(-1.5), cd(0.5), cd(1.5, 0.3), cd(2.5)}) {
        const cd z(2.5, 0.5);
        EXPECT_EQ(zeta_b_plus(s, z, empty, cfg).value, -script_g1(s, z, cfg.vol()));
    }
}

TEST(ZetaB, MellinTermMatchesTermwiseGammaOracle) {
    const auto& t = small_table();
    const auto cfg = SurfaceConfig::reference();
    const cd z(2.0, 0.5);
    for (cd s : {cd(-1.3), cd(0.3), cd(0.7, -0.4), cd(1.5, 0.2), cd(2.5), cd(3.3, 1.0)}) {
        const cd expected = -script_g1(s, z, cfg.vol()) + 3.0 * hurwitz_zeta(s, z - 0.5) + mellin_oracle(s, z, t);
        const auto v = zeta_b_plus(s, z, t, cfg);
        EXPECT_LT(std::abs(v.value - expected), 1e-10 * std::max(1.0, std::abs(expected))) << "s=" << s;
    }
}

TEST(ZetaB, ContinuousAcrossSubtractionOrders) {
    const auto& t = big_table();
    const auto cfg = SurfaceConfig::reference();
    const cd z(3);
    for (double re : {0.5, 1.0, 3.0}) {
        const double h = 1e-10;
        const cd a = zeta_b_plus(cd(re - h, 0.3), z, t, cfg).value;
        const cd b = zeta_b_plus(cd(re + h, 0.3), z, t, cfg).value;
        EXPECT_LT(std::abs(a - b), 1e-7) << "Re s=" << re;
    }
}

TEST(ZetaB, MinusWithTrivialHDiffersByHurwitzTerms) {
    auto cfg = SurfaceConfig::reference();
    cfg.dirichlet.clear();
    const auto& t = small_table();
    const cd z(2.5, 0.3);
    for (cd s : {cd(-0.5), cd(0.6), cd(1.7, 0.2), cd(2.4)}) {
        const cd diff = zeta_b_minus(s, z, t, cfg).value - zeta_b_plus(s, z, t, cfg).value;
        const cd expected = 3.0 * (hurwitz_zeta(s, z) - hurwitz_zeta(s, z - 0.5));
        EXPECT_LT(std::abs(diff - expected), 1e-11);
    }
}

TEST(ZetaB, ResiduesAtOneAndTwo) {
    const auto& t = big_table();
    const auto cfg = SurfaceConfig::reference();
    const double vol = cfg.vol();
    for (double zr : {2.0, 3.0, 5.0}) {
        const cd z(zr);
        for (ZetaSide side : {ZetaSide::plus, ZetaSide::minus}) {
            const auto r2 = zeta_b_residue(side, 2, z, t, cfg);
            const auto r1 = zeta_b_residue(side, 1, z, t, cfg);
            EXPECT_LT(rel(r2.value, cd(-vol / pi)), 1e-4);
            EXPECT_LT(rel(r1.value, cd(vol / pi * (zr - 0.5) + 3)), 1e-4);
        }
    }
}

TEST(ZetaB, PolesAndDomain) {
    const auto cfg = SurfaceConfig::reference();
    EXPECT_THROW(zeta_b_plus(cd(1), cd(2), small_table(), cfg), Error);
    try {
        zeta_b_minus(cd(0.5), cd(0.9), small_table(), cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::domain);
    }
}

TEST(ZetaB, QuadratureSelfConvergence) {
    const auto& t = big_table();
    const auto cfg = SurfaceConfig::reference();
    QuadratureSpec<double> fine;
    for (cd s : {cd(-0.7), cd(0.8, 0.5), cd(2.3)}) {
        const auto a = zeta_b_minus(s, cd(2.0), t, cfg, fine);
        const auto b = zeta_b_minus(s, cd(2.0), t, cfg, fine.coarser());
        EXPECT_LE(std::abs(a.value - b.value), a.abs_error_estimate + b.abs_error_estimate + 1e-13);
    }
}

TEST(Determinants, UpsilonPlusForGammaTwoTopology) {
    const double l2p = std::log(2 * pi);
    for (cd z : {cd(1.5), cd(2.0, 1.0)}) {
        const cd expected = 2.0 * z * l2p + 2 * zeta_prime_minus_one<double>() + l2p;
        EXPECT_LT(std::abs(log_upsilon_plus(z, 2 * pi, 3.0) - expected), 1e-13);
    }
}

TEST(Determinants, ValueIsUpsilonTimesZetaSide) {
    const auto cfg = SurfaceConfig::reference();
    const auto d = det_minus(cd(2.0, 0.5), big_table(), cfg);
    EXPECT_LT(rel(d.upsilon_factor * d.zeta_side_factor, d.value), 1e-13);
    EXPECT_STREQ(to_string(d.method), "closed-form");
}

TEST(Determinants, DualPathAgreement) {
    const auto& t = big_table();
    const auto cfg = SurfaceConfig::reference();
    for (double re : {1.5, 2.0, 3.0, 4.0}) {
        for (double im : {0.0, 1.5}) {
            const cd z(re, im);
            for (ZetaSide side : {ZetaSide::plus, ZetaSide::minus}) {
                const auto closed = side == ZetaSide::plus ? det_plus(z, t, cfg) : det_minus(z, t, cfg);
                const auto path = det_via_superzeta(side, z, t, cfg);
                EXPECT_LT(rel(path.value, closed.value), 1e-6) << "z=" << z << " side=" << to_string(side);
                EXPECT_LE(std::abs(path.value - closed.value), closed.abs_error + path.abs_error + 1e-12 * std::abs(closed.value));
            }
        }
    }
}

TEST(Determinants, CompleteZetaMinusIsPlusTimesPhi) {
    const auto cfg = SurfaceConfig::reference();
    const cd z(2.2, -0.6);
    const CompleteZeta<double> zp{big_table(), cfg, ZetaSide::plus};
    const CompleteZeta<double> zm{big_table(), cfg, ZetaSide::minus};
    EXPECT_LT(std::abs(zm.log_value(z) - zp.log_value(z) - log_scattering_phi(z, cfg)), 1e-13);
}

TEST(PhiQuotient, MatchesScatteringDeterminantOnGrid) {
    const auto& t = big_table();
    const auto cfg = SurfaceConfig::reference();
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const cd z(1.5 + 4.5 * i / 4, -2.0 + 4.0 * j / 4);
            EXPECT_LT(rel(phi_quotient(z, t, cfg), scattering_phi(z, cfg)), 1e-10) << "z=" << z;
        }
    }
}

TEST(PhiQuotient, TrivialDirichletPartLeavesGammaFactors) {
    auto cfg = SurfaceConfig::reference();
    cfg.dirichlet.clear();
    const cd z(2.5, 1.0);
    const cd L = std::pow(pi, 1.5) * std::pow(gamma(z - 0.5) / gamma(z), 3.0) * std::exp(cfg.c1 * z + cfg.c2);
    EXPECT_LT(rel(phi_quotient(z, small_table(), cfg), L), 1e-12);
}

TEST(PhiQuotient, NoCuspsLeavesExponentialFactor) {
    SurfaceConfig cfg;
    cfg.genus = 2;
    cfg.cusps = 0;
    cfg.c1 = 0.3;
    cfg.c2 = -0.2;
    const cd z(2.0, 0.4);
    EXPECT_LT(rel(phi_quotient(z, small_table(), cfg), std::exp(0.3 * z - 0.2)), 1e-13);
}

TEST(HigherDepth, DualPathsAndMellinDirichlet) {
    const auto& t = big_table();
    const auto cfg = SurfaceConfig::reference();
    for (int r : {1, 2, 3}) {
        for (double zr : {2.0, 3.0, 4.0}) {
            const auto h = higher_depth_det(r, cd(zr), t, cfg);
            EXPECT_LT(h.path_discrepancy, 1e-6) << "r=" << r << " z=" << zr;
            EXPECT_LT(h.mellin_discrepancy, 1e-6 * std::abs(h.mellin_dirichlet)) << "r=" << r << " z=" << zr;
        }
    }
}

TEST(HigherDepth, DepthOneIsTheDeterminant) {
    const auto cfg = SurfaceConfig::reference();
    const cd z(2.5, 0.5);
    const auto h = higher_depth_det(1, z, big_table(), cfg);
    const auto d = det_plus(z, big_table(), cfg);
    EXPECT_LT(std::abs(h.log_closed - d.log_value), 1e-11);
}

TEST(HigherDepth, EmptyTableWithoutCuspsIsPureMilnor) {
    SurfaceConfig cfg;
    cfg.genus = 2;
    cfg.cusps = 0;
    cfg.c1 = 0;
    const GeodesicTable empty;
    const cd z(2.5);
    for (int r : {1, 2, 3}) {
        const auto h = higher_depth_det(r, z, empty, cfg);
        const cd expected = cfg.vol() / pi * (log_milnor_gamma(r + 1, z) - (z - 0.5) * log_milnor_gamma(r, z));
        EXPECT_LT(std::abs(h.log_closed - expected), 1e-13);
        EXPECT_LT(std::abs(h.log_superzeta - expected), 1e-10);
    }
}

TEST(Ledger, MultiplicityAtHalf) {
    DivisorLedger l;
    l.cusps = 3;
    l.tr_phi_half = -1;
    EXPECT_EQ(multiplicity_at_half(l), 1.0);
    l.tr_phi_half = 3;
    EXPECT_EQ(multiplicity_at_half(l), 3.0);
    DivisorLedger m;
    m.d_quarter = 1;
    EXPECT_EQ(multiplicity_at_half(m), 2.0);
    l.tr_phi_half = -5;
    EXPECT_THROW(multiplicity_at_half(l), Error);
}

TEST(Ledger, SingularMultiplicityCases) {
    DivisorLedger l;
    l.cusps = 3;
    l.tr_phi_half = -1;
    l.cusp_forms_quarter = 0;
    l.spectrum_complete = true;
    EXPECT_EQ(singular_multiplicity(cd(0), l), 1.0);
    EXPECT_EQ(singular_multiplicity(cd(0, -0.3), l), 0.0);
    const cd r(0.4, 0.2);
    l.resonances.push_back({0.5 + cd(0, 1) * r, 1});
    EXPECT_EQ(singular_multiplicity(r, l), 1.0);
    l.eigenvalues.push_back({0.25 + 9.5 * 9.5, 2});
    EXPECT_EQ(singular_multiplicity(cd(9.5), l), 2.0);
    EXPECT_EQ(singular_multiplicity(cd(-9.5), l), 2.0);
}

TEST(Ledger, ResidualPointsSubtractPoleOrder) {
    DivisorLedger l;
    l.cusps = 3;
    l.spectrum_complete = true;
    l.residual.push_back({0.8, 1});
    l.eigenvalues.push_back({0.8 * 0.2, 2});
    l.validate();
    // 1/2 + ir = 1 - sigma
    EXPECT_NEAR(singular_multiplicity(cd(0, 0.3), l), 1.0, 1e-12);
    l.eigenvalues.clear();
    EXPECT_THROW(l.validate(), Error);
}

TEST(Ledger, MissingDataIsReported) {
    DivisorLedger l = DivisorLedger::from_config(SurfaceConfig::reference());
    for (cd r : {cd(0), cd(3.0), cd(0, 0.2)}) {
        try {
            singular_multiplicity(r, l);
            FAIL() << "r=" << r;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::insufficient_data);
        }
    }
    // non-real lambda below the axis needs no data
    EXPECT_EQ(singular_multiplicity(cd(1.0, -0.2), l), 0.0);
}

TEST(Ledger, HalfAndZeroAgreeWhenCuspFormCountIsD) {
    for (int d : {0, 1, 2}) {
        for (double tr : {-1.0, 1.0, 3.0}) {
            DivisorLedger l;
            l.cusps = 3;
            l.d_quarter = d;
            l.cusp_forms_quarter = d;
            l.tr_phi_half = tr;
            EXPECT_EQ(multiplicity_at_half(l), singular_multiplicity(cd(0), l));
        }
    }
}

TEST(DetStar, ConstantSubstitutions) {
    // zeta'(-1) = 1/12 - log A with the Glaisher-Kinkelin constant A
    const double zp = 1.0 / 12 - std::log(1.2824271291006226);
    const double l2p = std::log(2 * pi);
    EXPECT_NEAR(det_star_constant(4 * pi, 0), std::exp(2 * (2 * zp + 1.5 * l2p)), 1e-12 * std::exp(2 * (2 * zp + 1.5 * l2p)));
    const double c3 = std::pow(2.0, 1.5) * std::exp(2 * zp + 1.5 * l2p);
    EXPECT_NEAR(det_star_constant(SurfaceConfig::reference()), c3, 1e-12 * c3);
    EXPECT_DOUBLE_EQ(det_star_from_zprime(1.0, 0.0, 0), 1.0);
    EXPECT_NEAR(det_star_from_zprime(0.25, SurfaceConfig::reference()), 0.25 * c3, 1e-12 * c3);
    EXPECT_THROW(det_star_from_zprime(-1.0, SurfaceConfig::reference()), Error);
}
