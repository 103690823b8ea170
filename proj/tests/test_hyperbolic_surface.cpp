#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "superzeta/hyperbolic_surface.hpp"
#include "superzeta/surface_config.hpp"
#include "superzeta/table_io.hpp"

namespace sz = superzeta;
using cd = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

const sz::GeodesicTable& table_1e4() {
    static const sz::GeodesicTable t = sz::enumerate_primitive_classes(1e4);
    return t;
}

sz::GeodesicTable toy_table() {
    sz::GeodesicTable t;
    t.max_norm = 5;
    t.entries.push_back({0, 4.0, std::log(4.0), 1});
    return t;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("superzeta_test_" + name)).string();
}

}  // namespace

TEST(Gamma2Words, ABHasTraceSixAndKnownNorm) {
    const auto m = sz::gamma2::word_matrix("AB");
    EXPECT_EQ(m, (sz::MoebiusMatrix{5, 2, 2, 1}));
    EXPECT_NEAR(sz::norm_from_trace(6), 17 + 12 * std::sqrt(2.0), 1e-12);
    EXPECT_EQ(sz::gamma2::word_matrix("Ab"), (sz::MoebiusMatrix{-3, 2, -2, 1}));
}

TEST(Gamma2Words, WordOfInvertsWordMatrix) {
    for (std::string w : {"AB", "AAb", "abAB", "BBBaBA", "aaaabbbbAB"}) {
        const auto m = sz::gamma2::word_matrix(w);
        const std::string back = sz::gamma2::word_of(m);
        EXPECT_TRUE(sz::gamma2::word_matrix(back).projectively_equal(m)) << w;
    }
}

TEST(Enumeration, ABClassPresentAndExclusions) {
    const auto& t = table_1e4();
    std::set<std::string> words;
    for (const auto& c : t.classes) words.insert(c.word);
    EXPECT_TRUE(words.count("AB"));
    EXPECT_TRUE(words.count("ab"));  // canonical rotation of (AB)^-1 = b a
    EXPECT_FALSE(words.count("Ab"));  // trace -2: parabolic
    EXPECT_FALSE(words.count("ABAB"));
    const auto& first = t.entries.front();
    EXPECT_EQ(std::llabs(first.trace), 6);
    EXPECT_NEAR(first.norm, 17 + 12 * std::sqrt(2.0), 1e-12);
}

TEST(Enumeration, ClassInvariants) {
    const auto& t = table_1e4();
    std::map<std::string, std::int64_t> trace_of;
    for (const auto& c : t.classes) trace_of[c.word] = c.trace;
    EXPECT_EQ(trace_of.size(), t.classes.size());  // no duplicates
    for (const auto& c : t.classes) {
        EXPECT_GT(std::llabs(c.trace), 2);
        EXPECT_LE(c.norm, t.max_norm);
        EXPECT_TRUE(sz::gamma2::is_cyclically_reduced(c.word)) << c.word;
        EXPECT_EQ(sz::gamma2::primitive_period(c.word), c.word.size()) << c.word;
        EXPECT_EQ(sz::gamma2::canonical_rotation(c.word), c.word);
        // every rotation has the same trace
        for (std::size_t i = 1; i < c.word.size(); ++i)
            EXPECT_EQ(sz::gamma2::word_matrix(c.word.substr(i) + c.word.substr(0, i)).trace(), c.trace);
        // inverse class present with equal trace
        const std::string inv = sz::gamma2::canonical_rotation(sz::gamma2::inverse_word(c.word));
        auto it = trace_of.find(inv);
        ASSERT_NE(it, trace_of.end()) << c.word;
        EXPECT_EQ(it->second, c.trace);
    }
}

TEST(Enumeration, MatchesBruteForceOnShortWords) {
    // all cyclically reduced words of length <= 7, primitive, |trace| in (2, T]
    const double X = 2000;
    const auto t = sz::enumerate_primitive_classes(X);
    const std::int64_t T = sz::trace_bound(X);
    const std::size_t max_len = 7;
    std::set<std::string> brute;
    const std::string letters = "ABab";
    std::vector<std::string> frontier = {""};
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<std::string> next;
        for (const auto& w : frontier)
            for (char x : letters)
                if (w.empty() || w.back() != sz::gamma2::inverse_letter(x)) next.push_back(w + x);
        for (const auto& w : next) {
            if (!sz::gamma2::is_cyclically_reduced(w) || sz::gamma2::primitive_period(w) != w.size()) continue;
            const auto tr = std::llabs(sz::gamma2::word_matrix(w).trace());
            if (tr > 2 && tr <= T) brute.insert(sz::gamma2::canonical_rotation(w));
        }
        frontier = std::move(next);
    }
    std::set<std::string> enumerated;
    for (const auto& c : t.classes)
        if (c.word.size() <= max_len) enumerated.insert(c.word);
    EXPECT_EQ(enumerated, brute);
    EXPECT_GT(brute.size(), 50u);
}

TEST(Enumeration, MonotoneCompleteness) {
    const auto small = sz::enumerate_primitive_classes(3000);
    const auto& big = table_1e4();
    std::map<std::int64_t, std::int64_t> big_counts;
    for (const auto& e : big.entries) big_counts[e.trace] = e.count;
    for (const auto& e : small.entries) EXPECT_EQ(big_counts[e.trace], e.count) << e.trace;
}

TEST(Enumeration, DeterministicAcrossThreads) {
    sz::EnumerationParams p;
    p.threads = 4;
    const auto a = sz::enumerate_primitive_classes(1e4, p);
    EXPECT_EQ(sz::table_hash(a), sz::table_hash(table_1e4()));
    ASSERT_EQ(a.classes.size(), table_1e4().classes.size());
    for (std::size_t i = 0; i < a.classes.size(); ++i) EXPECT_EQ(a.classes[i].word, table_1e4().classes[i].word);
}

TEST(Enumeration, BudgetAndDomainErrors) {
    sz::EnumerationParams p;
    p.max_nodes = 100;
    try {
        (void)sz::enumerate_primitive_classes(1e6, p);
        FAIL();
    } catch (const sz::Error& e) {
        EXPECT_EQ(e.kind(), sz::ErrorKind::budget);
    }
    try {
        (void)sz::enumerate_primitive_classes(1.0);
        FAIL();
    } catch (const sz::Error& e) {
        EXPECT_EQ(e.kind(), sz::ErrorKind::domain);
    }
    EXPECT_TRUE(sz::enumerate_primitive_classes(1.5).entries.empty());
}

TEST(Selberg, ToyTableValues) {
    const auto t = toy_table();
    EXPECT_NEAR(std::abs(sz::selberg_log_z(cd(2), t, 2) - (-41.0 / 480.0)), 0.0, 1e-16);
    const cd s(2.3, 0.4);
    const cd d1 = sz::selberg_log_derivative(1, s, t, 1);
    EXPECT_LT(std::abs(d1 - 4.0 / 3.0 * std::log(4.0) * std::exp(-s * std::log(4.0))), 1e-15);
    const cd p2 = sz::poly_selberg_log(2, s, t, 1);
    EXPECT_LT(std::abs(p2 + std::exp(-s * std::log(4.0)) / (std::log(4.0) * 0.75)), 1e-15);
    EXPECT_EQ(sz::selberg_log_z(cd(2), sz::GeodesicTable{}), cd(0));
    EXPECT_EQ(sz::selberg_log_derivative(3, cd(2), sz::GeodesicTable{}), cd(0));
}

TEST(Selberg, DomainError) {
    try {
        (void)sz::selberg_log_z(cd(1.0, 3.0), table_1e4());
        FAIL();
    } catch (const sz::Error& e) {
        EXPECT_EQ(e.kind(), sz::ErrorKind::domain);
    }
}

TEST(Selberg, EulerProductConsistency) {
    const auto& t = table_1e4();
    for (double s = 3; s <= 6; s += 1) {
        const auto est = sz::selberg_log_z_estimate(cd(s, 0.5), t);
        const cd product = sz::selberg_euler_product(cd(s, 0.5), t, 60);
        EXPECT_LT(std::abs(std::exp(est.value) - product), 1e-13 + est.abs_error) << s;
    }
}

TEST(Selberg, SelfConvergenceAtFour) {
    const auto big = sz::enumerate_primitive_classes(2e4);
    const cd a = sz::selberg_log_z(cd(4), table_1e4());
    const cd b = sz::selberg_log_z(cd(4), big);
    EXPECT_LT(std::abs(a - b), 1e-10);
    EXPECT_LT(std::abs(a - b), sz::selberg_log_z_estimate(cd(4), table_1e4()).abs_error);
}

TEST(Selberg, PolyReducesAtDepthOneAndLadder) {
    const auto& t = table_1e4();
    const cd s(2.5, 1.0);
    EXPECT_EQ(sz::poly_selberg_log(1, s, t), sz::selberg_log_z(s, t));
    const double h = 1e-3;
    // d/ds poly(2) = -log Z
    const cd d2 = (sz::poly_selberg_log(2, s + h, t) - sz::poly_selberg_log(2, s - h, t)) / (2 * h);
    EXPECT_LT(std::abs(d2 + sz::selberg_log_z(s, t)), 1e-7);
    // d^2/ds^2 poly(3) = +log Z
    const cd d3 = (sz::poly_selberg_log(3, s + h, t) - 2.0 * sz::poly_selberg_log(3, s, t) +
                   sz::poly_selberg_log(3, s - h, t)) /
                  (h * h);
    EXPECT_LT(std::abs(d3 - sz::selberg_log_z(s, t)), 1e-6);
    // derivative ladder against finite differences of log Z
    const cd fd = (sz::selberg_log_z(s + h, t) - sz::selberg_log_z(s - h, t)) / (2 * h);
    EXPECT_LT(std::abs(fd - sz::selberg_log_derivative(1, s, t)), 1e-7);
}

TEST(Selberg, DerivativeDecay) {
    const auto& t = table_1e4();
    const double alpha = std::sqrt(t.min_norm());
    for (int k : {1, 2}) {
        double ratio_prev = 0;
        for (double s = 2; s <= 10; s += 2) {
            const double ratio = std::abs(sz::selberg_log_derivative(k, cd(s), t)) * std::pow(alpha, s);
            if (ratio_prev > 0) {
                EXPECT_LT(ratio, ratio_prev * 1.01);  // |.| alpha^s bounded and shrinking
            }
            ratio_prev = ratio;
        }
    }
}

TEST(TableIO, RoundTripAndDeterminism) {
    const auto& t = table_1e4();
    const std::string path = temp_path("roundtrip.csv");
    sz::save_table(t, path);
    const auto u = sz::load_table(path, 1e4);
    ASSERT_EQ(u.entries.size(), t.entries.size());
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
        EXPECT_EQ(u.entries[i].trace, t.entries[i].trace);
        EXPECT_EQ(u.entries[i].norm, t.entries[i].norm);
        EXPECT_EQ(u.entries[i].log_norm, t.entries[i].log_norm);
        EXPECT_EQ(u.entries[i].count, t.entries[i].count);
    }
    EXPECT_EQ(sz::serialize_table(u), sz::serialize_table(t));
    EXPECT_EQ(sz::table_hash(sz::enumerate_primitive_classes(1e4)), sz::table_hash(t));
    std::filesystem::remove(path);
}

TEST(TableIO, Errors) {
    const std::string text = sz::serialize_table(table_1e4());
    auto kind_of = [](const std::string& s, double cutoff) {
        try {
            (void)sz::parse_table(s, cutoff);
        } catch (const sz::Error& e) {
            return e.kind();
        }
        return sz::ErrorKind::io;  // sentinel: no error
    };
    EXPECT_EQ(kind_of(text.substr(0, text.size() / 2), 0), sz::ErrorKind::malformed);
    std::string tampered = text;
    const auto pos = tampered.rfind(",2\n");
    ASSERT_NE(pos, std::string::npos);
    tampered.replace(pos, 3, ",4\n");
    // count changes too, so fix the words line to isolate the checksum
    const auto wpos = tampered.find("# words=");
    const auto wend = tampered.find('\n', wpos);
    tampered.replace(wpos, wend - wpos, "# words=" + std::to_string(table_1e4().class_count() + 2));
    EXPECT_EQ(kind_of(tampered, 0), sz::ErrorKind::checksum);
    EXPECT_EQ(kind_of(text, 2e4), sz::ErrorKind::cutoff_mismatch);
    EXPECT_EQ(kind_of("garbage\n", 0), sz::ErrorKind::malformed);
    try {
        (void)sz::load_table(temp_path("does_not_exist.csv"));
        FAIL();
    } catch (const sz::Error& e) {
        EXPECT_EQ(e.kind(), sz::ErrorKind::io);
    }
}

TEST(Scattering, GammaFactorOracle) {
    sz::SurfaceConfig c;
    c.cusps = 1;
    c.genus = 1;
    c.c1 = -std::log(4.0);
    c.c2 = 0;
    EXPECT_NEAR(std::abs(sz::scattering_phi(cd(2), c) - kPi / 32), 0.0, 1e-14);
}

TEST(Scattering, EmptyDirichletIsGammaPart) {
    auto c = sz::SurfaceConfig::reference();
    c.dirichlet.clear();
    const cd s(2.2, -0.7);
    const cd L = std::pow(kPi, 1.5) * std::pow(sz::gamma(s - 0.5) / sz::gamma(s), 3) * std::exp(c.c1 * s + c.c2);
    EXPECT_LT(std::abs(sz::scattering_phi(s, c) / L - 1.0), 1e-13);
}

TEST(Scattering, LogHDerivativesAndDecay) {
    const auto c = sz::SurfaceConfig::reference();
    const cd s(1.8, 0.6);
    const auto f = sz::log_h_derivatives(3, s, c);
    const double h = 1e-3;
    auto lh = [&](cd x) { return sz::log_dirichlet_h(x, c); };
    EXPECT_LT(std::abs((lh(s + h) - lh(s - h)) / (2 * h) - f[1]), 1e-6);
    EXPECT_LT(std::abs((lh(s + h) - 2.0 * lh(s) + lh(s - h)) / (h * h) - f[2]), 1e-5);
    EXPECT_LT(std::abs((lh(s + 2 * h) - 2.0 * lh(s + h) + 2.0 * lh(s - h) - lh(s - 2 * h)) / (2 * h * h * h) - f[3]),
              1e-4);
    // d/ds log H -> 0 like beta^{-Re s}, beta = u_1^2
    const double beta = 1.3 * 1.3;
    for (double x : {4.0, 8.0, 16.0})
        EXPECT_LT(std::abs(sz::log_h_derivatives(1, cd(x), c)[1]) * std::pow(beta, x), 1.0);
}

TEST(SurfaceConfig, ReferenceFileMatchesBuiltIn) {
    const auto c = sz::load_surface_config(SUPERZETA_DATA_DIR "/reference_surface.json");
    const auto r = sz::SurfaceConfig::reference();
    EXPECT_EQ(c.genus, r.genus);
    EXPECT_EQ(c.cusps, r.cusps);
    EXPECT_DOUBLE_EQ(c.c1, r.c1);
    EXPECT_DOUBLE_EQ(c.c2, r.c2);
    ASSERT_EQ(c.dirichlet.size(), r.dirichlet.size());
    EXPECT_NEAR(c.vol(), 2 * kPi, 1e-15);
    EXPECT_EQ(c.tr_phi_half, -1);
}

TEST(SurfaceConfig, InvalidInputs) {
    try {
        (void)sz::parse_surface_config(R"({"genus": 0, "cusps": 2, "c1": -1})");
        FAIL();
    } catch (const sz::Error& e) {
        EXPECT_EQ(e.kind(), sz::ErrorKind::configuration);
    }
    try {
        (void)sz::parse_surface_config(R"({"genus": 0, "cusps": )");
        FAIL();
    } catch (const sz::Error& e) {
        EXPECT_EQ(e.kind(), sz::ErrorKind::malformed);
    }
    try {
        (void)sz::parse_surface_config(
            R"({"genus": 0, "cusps": 3, "c1": -1, "dirichlet": [{"u": 2, "a": 1}, {"u": 1.5, "a": 1}]})");
        FAIL();
    } catch (const sz::Error& e) {
        EXPECT_EQ(e.kind(), sz::ErrorKind::configuration);
    }
}
