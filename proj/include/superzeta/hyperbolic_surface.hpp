#pragma once

// Primitive hyperbolic conjugacy classes of Gamma(2) = <A, B>, with
// A = [[1,2],[0,1]] and B = [[1,0],[2,1]], their norm table, and the Selberg
// zeta function, its s-derivatives and the poly-Selberg sums for Re(s) > 1.
//
// Enumeration goes through PSL2(Z). A primitive hyperbolic class of PSL2(Z)
// is a Lyndon word in R = [[1,1],[0,1]] and L = [[1,0],[1,1]] using both
// letters, and its trace is the trace of the word. If gamma has order k0 in
// PSL2(Z)/Gamma(2) = S3, then gamma^k0 is primitive in Gamma(2) and its
// PSL2(Z) class splits into 6/k0 classes of Gamma(2). Each of those is then
// rewritten as a cyclic word in A, B.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "superzeta/core.hpp"

namespace superzeta {

/// Integer 2x2 matrix of determinant one. Entries are 64-bit; products that
/// would overflow raise a budget error.
struct MoebiusMatrix {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    static std::int64_t mul(std::int64_t x, std::int64_t y) {
        std::int64_t r;
        if (__builtin_mul_overflow(x, y, &r)) throw Error(ErrorKind::budget, "matrix entry overflow");
        return r;
    }
    static std::int64_t add(std::int64_t x, std::int64_t y) {
        std::int64_t r;
        if (__builtin_add_overflow(x, y, &r)) throw Error(ErrorKind::budget, "matrix entry overflow");
        return r;
    }

    MoebiusMatrix operator*(const MoebiusMatrix& o) const {
        return {add(mul(a, o.a), mul(b, o.c)), add(mul(a, o.b), mul(b, o.d)), add(mul(c, o.a), mul(d, o.c)),
                add(mul(c, o.b), mul(d, o.d))};
    }
    MoebiusMatrix inverse() const { return {d, -b, -c, a}; }
    std::int64_t trace() const { return add(a, d); }
    std::int64_t det() const { return mul(a, d) - mul(b, c); }
    bool operator==(const MoebiusMatrix&) const = default;

    /// Equal up to sign (as elements of PSL2).
    bool projectively_equal(const MoebiusMatrix& o) const {
        return *this == o || (a == -o.a && b == -o.b && c == -o.c && d == -o.d);
    }
};

namespace gamma2 {

inline MoebiusMatrix A() { return {1, 2, 0, 1}; }
inline MoebiusMatrix B() { return {1, 0, 2, 1}; }

/// Letters: 'A', 'B' and their inverses 'a', 'b'.
inline MoebiusMatrix letter(char x) {
    switch (x) {
        case 'A': return A();
        case 'a': return A().inverse();
        case 'B': return B();
        case 'b': return B().inverse();
    }
    throw Error(ErrorKind::malformed, std::string("unknown generator letter ") + x);
}

inline MoebiusMatrix word_matrix(const std::string& w) {
    MoebiusMatrix m;
    for (char x : w) m = m * letter(x);
    return m;
}

inline char inverse_letter(char x) {
    switch (x) {
        case 'A': return 'a';
        case 'a': return 'A';
        case 'B': return 'b';
        case 'b': return 'B';
    }
    throw Error(ErrorKind::malformed, std::string("unknown generator letter ") + x);
}

inline std::string inverse_word(const std::string& w) {
    std::string out(w.rbegin(), w.rend());
    for (char& x : out) x = inverse_letter(x);
    return out;
}

inline bool is_cyclically_reduced(const std::string& w) {
    if (w.empty()) return true;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i + 1] == inverse_letter(w[i])) return false;
    return w.size() == 1 || w.back() != inverse_letter(w.front());
}

inline std::string cyclically_reduce(std::string w) {
    std::string stack;
    for (char x : w) {
        if (!stack.empty() && stack.back() == inverse_letter(x))
            stack.pop_back();
        else
            stack.push_back(x);
    }
    std::size_t lo = 0, hi = stack.size();
    while (hi - lo >= 2 && stack[hi - 1] == inverse_letter(stack[lo])) {
        ++lo;
        --hi;
    }
    return stack.substr(lo, hi - lo);
}

/// Lexicographically least rotation.
inline std::string canonical_rotation(const std::string& w) {
    std::string best = w;
    for (std::size_t i = 1; i < w.size(); ++i) {
        std::string r = w.substr(i) + w.substr(0, i);
        if (r < best) best = std::move(r);
    }
    return best;
}

/// Smallest period p dividing |w| with w = (w[0..p))^(|w|/p).
inline std::size_t primitive_period(const std::string& w) {
    const std::size_t n = w.size();
    for (std::size_t p = 1; p < n; ++p) {
        if (n % p) continue;
        bool ok = true;
        for (std::size_t i = p; i < n && ok; ++i) ok = w[i] == w[i - p];
        if (ok) return p;
    }
    return n;
}

/// Writes M (congruent to the identity mod 2) as +-word(A, B).
inline std::string word_of(MoebiusMatrix m) {
    if (((m.a - 1) % 2) != 0 || (m.b % 2) != 0 || (m.c % 2) != 0 || ((m.d - 1) % 2) != 0)
        throw Error(ErrorKind::domain, "matrix is not in Gamma(2)");
    // nearest integer to x / y for y != 0
    auto nearest = [](std::int64_t x, std::int64_t y) {
        return static_cast<std::int64_t>(std::llround(static_cast<long double>(x) / static_cast<long double>(y)));
    };
    std::string out;
    auto emit = [&out](char up, char down, std::int64_t k) {
        const char x = k > 0 ? up : down;
        for (std::int64_t i = 0; i < (k > 0 ? k : -k); ++i) out.push_back(x);
    };
    while (m.c != 0) {
        if (std::llabs(m.a) > std::llabs(m.c)) {
            const std::int64_t k = nearest(m.a, 2 * m.c);  // M = A^k M'
            m = MoebiusMatrix{m.a - 2 * k * m.c, m.b - 2 * k * m.d, m.c, m.d};
            emit('A', 'a', k);
        } else {
            const std::int64_t k = nearest(m.c, 2 * m.a);  // M = B^k M'
            m = MoebiusMatrix{m.a, m.b, m.c - 2 * k * m.a, m.d - 2 * k * m.b};
            emit('B', 'b', k);
        }
    }
    // m = +-[[1, b], [0, 1]] = +-A^{b/2} (with b read through the sign)
    emit('A', 'a', m.a * m.b / 2);
    return out;
}

}  // namespace gamma2

struct PrimitiveClass {
    std::string word;          // canonical cyclic word over A, B, a = A^-1, b = B^-1
    std::int64_t trace = 0;
    double norm = 0;           // ((|t| + sqrt(t^2 - 4)) / 2)^2
    double log_norm = 0;
};

struct TableEntry {
    std::int64_t trace = 0;
    double norm = 0;
    double log_norm = 0;
    std::int64_t count = 0;
};

struct EnumerationParams {
    std::int64_t max_nodes = 50'000'000;  // budget on visited PSL2(Z) prefixes
    unsigned threads = 1;
};

struct GeodesicTable {
    std::string group = "gamma2";
    double max_norm = 0;
    std::vector<TableEntry> entries;      // ascending norm, then trace
    std::vector<PrimitiveClass> classes;  // empty when loaded from a file
    EnumerationParams params;

    std::int64_t class_count() const {
        std::int64_t n = 0;
        for (const auto& e : entries) n += e.count;
        return n;
    }
    double min_norm() const { return entries.empty() ? std::numeric_limits<double>::infinity() : entries.front().norm; }
};

inline double norm_from_trace(std::int64_t t) {
    const double at = static_cast<double>(t < 0 ? -t : t);
    // (t + sqrt(t^2-4))/2 written to avoid cancellation in t^2 - 4
    const double lam = 0.5 * (at + std::sqrt((at - 2.0) * (at + 2.0)));
    return lam * lam;
}

inline double log_norm_from_trace(std::int64_t t) {
    const double at = static_cast<double>(t < 0 ? -t : t);
    return 2.0 * std::acosh(0.5 * at);
}

/// Largest |trace| with norm <= X: t = sqrt(X) + 1/sqrt(X).
inline std::int64_t trace_bound(double max_norm) {
    const double r = std::sqrt(max_norm);
    auto t = static_cast<std::int64_t>(std::floor(r + 1.0 / r + 1e-9));
    while (t > 2 && norm_from_trace(t) > max_norm) --t;
    return t;
}

namespace detail {

// Order of M in SL2(Z/2Z) = S3 (projectively the same group).
inline int order_mod_two(const MoebiusMatrix& m) {
    auto mod2 = [](const MoebiusMatrix& x) {
        auto r = [](std::int64_t v) { return ((v % 2) + 2) % 2; };
        return MoebiusMatrix{r(x.a), r(x.b), r(x.c), r(x.d)};
    };
    const MoebiusMatrix id{1, 0, 0, 1};
    MoebiusMatrix p = mod2(m);
    for (int k = 1; k <= 3; ++k) {
        if (p == id) return k;
        p = mod2(p * mod2(m));
    }
    throw Error(ErrorKind::domain, "element of SL2(Z/2) with order > 3");
}

struct LyndonSearch {
    std::int64_t max_trace;
    std::int64_t max_nodes;
    std::int64_t nodes = 0;
    std::vector<std::string> found;  // primitive PSL2(Z) words (R = 0, L = 1)

    static MoebiusMatrix letter(int x) { return x == 0 ? MoebiusMatrix{1, 1, 0, 1} : MoebiusMatrix{1, 0, 1, 1}; }

    // Fredricksen-Kessler-Maiorana recursion with unbounded length. The
    // prefix a[1..t-1] is a prenecklace with period p; it is a Lyndon word
    // when p == t - 1. A Lyndon word using both letters ends in L, and
    // positive words dominate the identity entrywise, so every proper
    // extension of the prefix P has trace >= trace(P L).
    void run(std::string& a, const MoebiusMatrix& m, std::size_t p) {
        if (++nodes > max_nodes) throw Error(ErrorKind::budget, "geodesic enumeration exceeded its node budget");
        const std::size_t n = a.size() - 1;  // a[0] is a sentinel
        if (n >= 2 && p == n && m.trace() <= max_trace && a.find('0', 1) != std::string::npos &&
            a.find('1', 1) != std::string::npos)
            found.push_back(a.substr(1));
        if (n >= 1 && a[1] == '1') return;          // only L itself starts with L
        if (m.a + m.b + m.d > max_trace) return;  // trace(M L)
        const int lo = a[n + 1 - p] - '0';
        for (int x = lo; x <= 1; ++x) {
            a.push_back(static_cast<char>('0' + x));
            run(a, m * letter(x), x == lo ? p : n + 1);
            a.pop_back();
        }
    }
};

inline MoebiusMatrix psl2z_word_matrix(const std::string& w) {
    MoebiusMatrix m;
    for (char x : w) m = m * LyndonSearch::letter(x - '0');
    return m;
}

// The Gamma(2) classes lying over one primitive PSL2(Z) class.
inline std::vector<PrimitiveClass> split_into_gamma2_classes(const MoebiusMatrix& gamma, double max_norm) {
    const int k0 = order_mod_two(gamma);
    MoebiusMatrix g;
    for (int i = 0; i < k0; ++i) g = g * gamma;
    const std::int64_t t = std::llabs(g.trace());
    if (norm_from_trace(t) > max_norm) return {};

    const MoebiusMatrix R{1, 1, 0, 1}, L{1, 0, 1, 1};
    const std::array<MoebiusMatrix, 6> cosets = {MoebiusMatrix{}, R, L, R * L, L * R, R * L * R};
    std::set<std::string> words;
    for (const auto& h : cosets) {
        const MoebiusMatrix conj = h * g * h.inverse();
        const std::string w = gamma2::canonical_rotation(gamma2::cyclically_reduce(gamma2::word_of(conj)));
        words.insert(w);
    }
    if (words.size() != static_cast<std::size_t>(6 / k0))
        throw Error(ErrorKind::domain, "Gamma(2) class splitting produced an unexpected number of classes");
    std::vector<PrimitiveClass> out;
    for (const auto& w : words) {
        const std::int64_t tw = gamma2::word_matrix(w).trace();
        out.push_back({w, tw, norm_from_trace(tw), log_norm_from_trace(tw)});
    }
    return out;
}

inline std::vector<TableEntry> aggregate(const std::vector<PrimitiveClass>& classes) {
    std::map<std::int64_t, std::int64_t> by_trace;
    for (const auto& c : classes) ++by_trace[c.trace];
    std::vector<TableEntry> out;
    for (const auto& [t, n] : by_trace) out.push_back({t, norm_from_trace(t), log_norm_from_trace(t), n});
    std::sort(out.begin(), out.end(), [](const TableEntry& x, const TableEntry& y) {
        return x.norm != y.norm ? x.norm < y.norm : x.trace < y.trace;
    });
    return out;
}

}  // namespace detail

/// All primitive hyperbolic classes of Gamma(2) with norm <= X.
inline GeodesicTable enumerate_primitive_classes(double max_norm, const EnumerationParams& params = {}) {
    if (!(max_norm > 1)) throw Error(ErrorKind::domain, "cutoff X must exceed 1");
    if (params.max_nodes <= 0) throw Error(ErrorKind::configuration, "node budget must be positive");
    const std::int64_t tmax = trace_bound(max_norm);

    // Split the Lyndon tree at its first letters so subtrees can run in
    // parallel; results are merged in a canonical order afterwards.
    const int seed_depth = 6;

    // Serial walk of the top of the tree, collecting frontier prefixes with
    // their periods.
    struct Frontier {
        std::string prefix;
        std::size_t period;
    };
    std::vector<Frontier> frontier;
    std::vector<std::string> top_words;
    std::int64_t top_nodes = 0;
    {
        std::function<void(std::string&, const MoebiusMatrix&, std::size_t)> walk =
            [&](std::string& a, const MoebiusMatrix& m, std::size_t p) {
                ++top_nodes;
                const std::size_t n = a.size() - 1;
                if (n == static_cast<std::size_t>(seed_depth)) {
                    frontier.push_back({a, p});
                    return;
                }
                if (n >= 2 && p == n && m.trace() <= tmax && a.find('0', 1) != std::string::npos &&
                    a.find('1', 1) != std::string::npos)
                    top_words.push_back(a.substr(1));
                if (n >= 1 && a[1] == '1') return;
                if (m.a + m.b + m.d > tmax) return;
                const int lo = a[n + 1 - p] - '0';
                for (int x = lo; x <= 1; ++x) {
                    a.push_back(static_cast<char>('0' + x));
                    walk(a, m * detail::LyndonSearch::letter(x), x == lo ? p : n + 1);
                    a.pop_back();
                }
            };
        std::string root = "0";
        walk(root, MoebiusMatrix{}, 1);
    }

    const unsigned workers = std::max(1u, params.threads);
    std::vector<std::vector<std::string>> results(frontier.size());
    std::vector<std::int64_t> node_counts(frontier.size(), 0);
    auto process = [&](std::size_t i) {
        detail::LyndonSearch search{tmax, params.max_nodes, 0, {}};
        std::string a = frontier[i].prefix;
        // run() visits the prefix itself first, which the serial walk skipped
        search.run(a, detail::psl2z_word_matrix(a.substr(1)), frontier[i].period);
        results[i] = std::move(search.found);
        node_counts[i] = search.nodes;
    };
    if (workers == 1) {
        for (std::size_t i = 0; i < frontier.size(); ++i) process(i);
    } else {
        std::vector<std::future<void>> jobs;
        std::size_t next = 0;
        std::mutex lock;
        for (unsigned w = 0; w < workers; ++w) {
            jobs.push_back(std::async(std::launch::async, [&] {
                for (;;) {
                    std::size_t i;
                    {
                        std::lock_guard<std::mutex> g(lock);
                        if (next >= frontier.size()) return;
                        i = next++;
                    }
                    process(i);
                }
            }));
        }
        for (auto& j : jobs) j.get();
    }
    std::int64_t total_nodes = top_nodes;
    for (auto n : node_counts) total_nodes += n;
    if (total_nodes > params.max_nodes) throw Error(ErrorKind::budget, "geodesic enumeration exceeded its node budget");

    std::vector<std::string> words = top_words;
    for (auto& r : results) words.insert(words.end(), r.begin(), r.end());

    std::vector<PrimitiveClass> classes;
    for (const auto& w : words) {
        auto part = detail::split_into_gamma2_classes(detail::psl2z_word_matrix(w), max_norm);
        classes.insert(classes.end(), part.begin(), part.end());
    }
    // length-lexicographic canonical order
    std::sort(classes.begin(), classes.end(), [](const PrimitiveClass& x, const PrimitiveClass& y) {
        return x.word.size() != y.word.size() ? x.word.size() < y.word.size() : x.word < y.word;
    });
    GeodesicTable table;
    table.max_norm = max_norm;
    table.params = params;
    table.entries = detail::aggregate(classes);
    table.classes = std::move(classes);
    return table;
}

// ---------------------------------------------------------------------------
// Selberg zeta sums over a norm table.

namespace detail {

// sum over classes and powers l of count * weight(l, log N) * N^{-ls} / (1 - N^{-l}),
// with l-tail and norm-tail estimates.
template <std::floating_point Real, class Weight>
Estimate<Real> selberg_sum(const std::complex<Real>& s, const GeodesicTable& table, int l_max, Weight weight,
                           Real tolerance) {
    if (!(s.real() > Real(1))) throw Error(ErrorKind::domain, "Selberg sums need Re(s) > 1");
    if (table.entries.empty()) return {};
    const Real sigma = s.real();
    const Real log_min = static_cast<Real>(table.entries.front().log_norm);
    if (l_max <= 0) {
        // smallest l with N_min^{-l sigma} < 0.01 tolerance
        l_max = static_cast<int>(std::ceil(std::log(Real(100) / tolerance) / (log_min * sigma)));
        l_max = std::max(l_max, 1);
    }
    std::complex<Real> acc(0);
    Real l_tail = 0;
    for (const auto& e : table.entries) {
        const Real ln = static_cast<Real>(e.log_norm);
        std::complex<Real> inner(0);
        for (int l = 1; l <= l_max; ++l) {
            const Real lln = Real(l) * ln;
            const std::complex<Real> decay = std::exp(-lln * s);
            inner += weight(l, ln) * decay / (-std::expm1(-lln));
        }
        acc += Real(e.count) * inner;
        // next power, bounded geometrically
        const Real lln = Real(l_max + 1) * ln;
        const Real next = std::abs(weight(l_max + 1, ln)) * std::exp(-lln * sigma) / (-std::expm1(-lln));
        l_tail += Real(e.count) * next / (Real(1) - std::exp(-ln * sigma));
    }
    // classes with norm > X: prime geodesic density 1/log x
    const Real X = static_cast<Real>(table.max_norm);
    const Real logX = std::log(X);
    const Real w1 = std::abs(weight(1, logX));
    const Real norm_tail = w1 * std::exp((Real(1) - sigma) * logX) / ((sigma - Real(1)) * logX);
    const Real rounding = Real(8) * std::numeric_limits<Real>::epsilon() * std::abs(acc);
    return {acc, l_tail + norm_tail + rounding};
}

}  // namespace detail

/// log Z(s) = -sum_{P0} sum_l N^{-ls} / (l (1 - N^{-l})).
template <std::floating_point Real>
Estimate<Real> selberg_log_z_estimate(const std::complex<Real>& s, const GeodesicTable& table, int l_max = 0,
                                      Real tolerance = Real(1e-15)) {
    return detail::selberg_sum<Real>(
        s, table, l_max, [](int l, Real) { return Real(-1) / Real(l); }, tolerance);
}

template <std::floating_point Real>
std::complex<Real> selberg_log_z(const std::complex<Real>& s, const GeodesicTable& table, int l_max = 0) {
    return selberg_log_z_estimate(s, table, l_max).value;
}

/// d^k/ds^k log Z(s); each term gains (-l log N)^k.
template <std::floating_point Real>
Estimate<Real> selberg_log_derivative_estimate(int k, const std::complex<Real>& s, const GeodesicTable& table,
                                               int l_max = 0, Real tolerance = Real(1e-15)) {
    if (k < 0) throw Error(ErrorKind::domain, "derivative order must be non-negative");
    return detail::selberg_sum<Real>(
        s, table, l_max,
        [k](int l, Real ln) { return Real(-1) / Real(l) * std::pow(-Real(l) * ln, Real(k)); }, tolerance);
}

template <std::floating_point Real>
std::complex<Real> selberg_log_derivative(int k, const std::complex<Real>& s, const GeodesicTable& table,
                                          int l_max = 0) {
    return selberg_log_derivative_estimate(k, s, table, l_max).value;
}

/// log Z^{(r)}(s) = -sum N^{-ls} / (l^r (log N)^{r-1} (1 - N^{-l})).
template <std::floating_point Real>
Estimate<Real> poly_selberg_log_estimate(int r, const std::complex<Real>& s, const GeodesicTable& table,
                                         int l_max = 0, Real tolerance = Real(1e-15)) {
    if (r < 1) throw Error(ErrorKind::domain, "depth r must be positive");
    return detail::selberg_sum<Real>(
        s, table, l_max,
        [r](int l, Real ln) { return Real(-1) / (std::pow(Real(l), Real(r)) * std::pow(ln, Real(r - 1))); },
        tolerance);
}

template <std::floating_point Real>
std::complex<Real> poly_selberg_log(int r, const std::complex<Real>& s, const GeodesicTable& table, int l_max = 0) {
    return poly_selberg_log_estimate(r, s, table, l_max).value;
}

/// prod_{P0} prod_{n=0}^{n_cut} (1 - N^{-(s+n)}), the truncated Euler product.
template <std::floating_point Real>
std::complex<Real> selberg_euler_product(const std::complex<Real>& s, const GeodesicTable& table, int n_cut) {
    std::complex<Real> log_acc(0);
    for (const auto& e : table.entries) {
        const Real ln = static_cast<Real>(e.log_norm);
        for (int n = 0; n <= n_cut; ++n) log_acc += Real(e.count) * std::log(Real(1) - std::exp(-ln * (s + Real(n))));
    }
    return std::exp(log_acc);
}

}  // namespace superzeta
