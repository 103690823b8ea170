// superzeta: build geodesic tables, evaluate functions at points or on grids,
// and run the identity check suites.
//
// Exit status: 0 success, 1 check failure, 2 usage or setup error, 3 numeric
// domain error.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "superzeta/checks.hpp"
#include "superzeta/lax_phillips.hpp"
#include "superzeta/table_io.hpp"

namespace sz = superzeta;
using cd = std::complex<double>;
using nlohmann::ordered_json;

namespace {

enum Exit { ok = 0, check_failed = 1, setup = 2, numeric = 3 };

bool g_timestamp = false;

std::string timestamp() {
    if (!g_timestamp) return "";
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

struct SetupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int threads_from_env() {
    if (const char* env = std::getenv("SUPERZETA_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw SetupError("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

cd parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) return {std::stod(text), 0.0};
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw SetupError("cannot parse complex value '" + text + "' (use re or re,im)");
    }
}

struct Range {
    double lo = 0, hi = 0;
    int n = 1;
    std::vector<double> points() const {
        std::vector<double> v;
        for (int i = 0; i < n; ++i) v.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
        return v;
    }
};

Range parse_range(const std::string& text) {
    Range r;
    std::istringstream in(text);
    std::string a, b, c;
    if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c))
        throw SetupError("range must be lo:hi:n, got '" + text + "'");
    try {
        r.lo = std::stod(a);
        r.hi = std::stod(b);
        r.n = std::stoi(c);
    } catch (const std::exception&) {
        throw SetupError("cannot parse range '" + text + "'");
    }
    if (r.n < 1 || r.n > 100000) throw SetupError("range point count out of bounds");
    return r;
}

// Config discovery: flag, then SUPERZETA_CONFIG, then ./superzeta.json, then the built-in reference.
struct LoadedConfig {
    sz::SurfaceConfig config;
    std::string path = "builtin:reference";
    std::string hash = "builtin";
};

LoadedConfig load_config(const std::string& flag) {
    std::string path = flag;
    if (path.empty()) {
        if (const char* env = std::getenv("SUPERZETA_CONFIG")) path = env;
        else if (std::filesystem::exists("superzeta.json")) path = "superzeta.json";
    }
    LoadedConfig out;
    if (path.empty()) {
        out.config = sz::SurfaceConfig::reference();
        return out;
    }
    const std::string text = read_file(path);
    out.config = sz::parse_surface_config(text);
    out.path = path;
    out.hash = sz::detail::hex64(sz::detail::fnv1a(text));
    return out;
}

struct LoadedTable {
    sz::GeodesicTable table;
    std::string path;
    std::string hash;
};

LoadedTable load_or_build_table(const std::string& path, double max_norm, int threads) {
    LoadedTable out;
    if (!path.empty()) {
        out.table = sz::load_table(path, 0);
        out.path = path;
    } else {
        sz::EnumerationParams p;
        p.threads = threads;
        out.table = sz::enumerate_primitive_classes(max_norm, p);
        out.path = "built:max_norm=" + fmt17(max_norm);
    }
    out.hash = sz::table_hash(out.table);
    return out;
}

ordered_json error_json(const std::string& kind, const std::string& message) {
    return {{"error", {{"kind", kind}, {"message", message}}}};
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw SetupError("cannot write " + out_path);
    f << text;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
    std::string function;
    std::string s = "2";
    std::string z = "2";
    int r = 1;
    std::optional<double> vol;
    std::string table_path;
    double max_norm = 1e4;
    std::string config_path;
    std::string method = "closed-form";
    std::string grid_var = "z";
    std::string re_range, im_range;
    std::string format;
    std::string out;
};

struct Record {
    cd value;
    double abs_error = 0;
    std::string method;
};

struct FunctionSpec {
    const char* name;
    bool uses_s, uses_z, uses_r, uses_vol, needs_table;
};

const std::vector<FunctionSpec>& functions() {
    static const std::vector<FunctionSpec> v = {
        {"zeta-h", true, true, false, false, false},      {"barnes", false, true, false, false, false},
        {"g1", false, true, false, true, false},          {"milnor", false, true, true, false, false},
        {"selberg", true, false, false, false, true},     {"phi", true, false, false, false, false},
        {"zeta-b-plus", true, true, false, false, true},  {"zeta-b-minus", true, true, false, false, true},
        {"det-plus", false, true, false, false, true},    {"det-minus", false, true, false, false, true},
        {"det-depth", false, true, true, false, true},
    };
    return v;
}

const FunctionSpec* find_function(const std::string& name) {
    for (const auto& f : functions())
        if (name == f.name) return &f;
    return nullptr;
}

double rounding_error(cd v, double scale = 1) {
    return 64 * std::numeric_limits<double>::epsilon() * std::abs(v) * std::max(1.0, scale);
}

Record evaluate(const std::string& fn, cd s, cd z, int r, double vol, const sz::GeodesicTable* table,
                const sz::SurfaceConfig& cfg, const std::string& method) {
    if (fn == "zeta-h") {
        const auto e = sz::hurwitz_zeta_estimate(s, z);
        return {e.value, e.abs_error, "euler-maclaurin"};
    }
    if (fn == "barnes") {
        const cd lg = sz::log_barnes_g(z - 1.0);
        const cd v = std::exp(lg);
        return {v, rounding_error(v, std::abs(lg)), "asymptotic"};
    }
    if (fn == "g1") {
        const cd lg = sz::log_g1(z, vol);
        const cd v = std::exp(lg);
        return {v, rounding_error(v, std::abs(lg)), "asymptotic"};
    }
    if (fn == "milnor") {
        const cd lg = sz::log_milnor_gamma(r, z);
        const cd v = std::exp(lg);
        return {v, rounding_error(v, std::abs(lg)), "hurwitz-derivative"};
    }
    if (fn == "selberg") {
        const auto e = sz::selberg_log_z_estimate(s, *table);
        const cd v = std::exp(e.value);
        return {v, std::abs(v) * e.abs_error, "euler-product"};
    }
    if (fn == "phi") {
        const cd lp = sz::log_scattering_phi(s, cfg);
        const cd v = std::exp(lp);
        return {v, rounding_error(v, std::abs(lp)), "dirichlet-series"};
    }
    if (fn == "zeta-b-plus" || fn == "zeta-b-minus") {
        const auto v = fn == "zeta-b-plus" ? sz::zeta_b_plus(s, z, *table, cfg) : sz::zeta_b_minus(s, z, *table, cfg);
        return {v.value, v.abs_error_estimate, "mellin-representation"};
    }
    if (fn == "det-plus" || fn == "det-minus") {
        const auto side = fn == "det-plus" ? sz::ZetaSide::plus : sz::ZetaSide::minus;
        sz::DeterminantResult<double> d;
        if (method == "closed-form") d = side == sz::ZetaSide::plus ? sz::det_plus(z, *table, cfg) : sz::det_minus(z, *table, cfg);
        else if (method == "superzeta-derivative") d = sz::det_via_superzeta(side, z, *table, cfg);
        else throw SetupError("unknown method '" + method + "'");
        return {d.value, d.abs_error, sz::to_string(d.method)};
    }
    if (fn == "det-depth") {
        const auto h = sz::higher_depth_det(r, z, *table, cfg);
        return {h.value, std::abs(h.value) * (h.path_discrepancy + h.abs_error), "milnor-gamma"};
    }
    throw SetupError("unknown function '" + fn + "'");
}

ordered_json complex_json(cd v) { return ordered_json::array({v.real(), v.imag()}); }

int run_eval(const EvalArgs& a) {
    const FunctionSpec* spec = find_function(a.function);
    if (!spec) {
        std::string names;
        for (const auto& f : functions()) names += std::string(names.empty() ? "" : ", ") + f.name;
        throw SetupError("unknown function '" + a.function + "' (one of: " + names + ")");
    }
    const LoadedConfig cfg = load_config(a.config_path);
    std::optional<LoadedTable> table;
    if (spec->needs_table) table = load_or_build_table(a.table_path, a.max_norm, threads_from_env());
    const double vol = a.vol.value_or(cfg.config.vol());
    const cd s = parse_complex(a.s);
    const cd z = parse_complex(a.z);
    const bool grid = !a.re_range.empty() || !a.im_range.empty();
    const std::string format = a.format.empty() ? (grid ? "csv" : "json") : a.format;
    if (format != "json" && format != "csv") throw SetupError("format must be json or csv");
    if (grid && a.grid_var != "s" && a.grid_var != "z") throw SetupError("grid variable must be s or z");

    ordered_json manifest = {{"command", "eval " + a.function},
                             {"config_path", cfg.path},
                             {"config_hash", cfg.hash},
                             {"table_path", table ? table->path : ""},
                             {"table_hash", table ? table->hash : ""},
                             {"grid", grid ? a.grid_var + " re=" + a.re_range + " im=" + a.im_range : ""},
                             {"tolerance_override", ""},
                             {"format", format},
                             {"timestamp", timestamp()}};
    const sz::GeodesicTable* tp = table ? &table->table : nullptr;

    if (!grid) {
        ordered_json inputs = ordered_json::object();
        if (spec->uses_s) inputs["s"] = complex_json(s);
        if (spec->uses_z) inputs["z"] = complex_json(z);
        if (spec->uses_r) inputs["r"] = a.r;
        if (spec->uses_vol) inputs["vol"] = vol;
        try {
            const Record rec = evaluate(a.function, s, z, a.r, vol, tp, cfg.config, a.method);
            if (format == "json") {
                ordered_json out = {{"manifest", manifest},
                                    {"operation", a.function},
                                    {"inputs", inputs},
                                    {"value_re", rec.value.real()},
                                    {"value_im", rec.value.imag()},
                                    {"abs_error", rec.abs_error},
                                    {"method", rec.method}};
                emit(out.dump(2) + "\n", a.out);
            } else {
                std::string text;
                for (const auto& [k, v] : manifest.items()) text += "# " + k + "=" + v.get<std::string>() + "\n";
                text += "value_re,value_im,abs_error,method\n";
                text += fmt17(rec.value.real()) + "," + fmt17(rec.value.imag()) + "," + fmt17(rec.abs_error) + "," +
                        rec.method + "\n";
                emit(text, a.out);
            }
            return Exit::ok;
        } catch (const sz::Error& e) {
            if (!e.is_numeric()) throw;
            ordered_json out = error_json(sz::to_string(e.kind()), e.what());
            out["manifest"] = manifest;
            out["operation"] = a.function;
            out["inputs"] = inputs;
            emit(out.dump(2) + "\n", a.out);
            return Exit::numeric;
        }
    }

    // grid mode
    const cd base = a.grid_var == "s" ? s : z;
    const Range re = a.re_range.empty() ? Range{base.real(), base.real(), 1} : parse_range(a.re_range);
    const Range im = a.im_range.empty() ? Range{base.imag(), base.imag(), 1} : parse_range(a.im_range);
    std::vector<cd> points;
    for (double x : re.points())
        for (double y : im.points()) points.emplace_back(x, y);

    std::vector<std::string> rows(points.size());
    int numeric_failures = 0;
    auto work = [&](std::size_t begin, std::size_t end) {
        int failures = 0;
        for (std::size_t i = begin; i < end; ++i) {
            const cd p = points[i];
            std::string row = fmt17(p.real()) + "," + fmt17(p.imag()) + ",";
            try {
                const Record rec = evaluate(a.function, a.grid_var == "s" ? p : s, a.grid_var == "z" ? p : z, a.r, vol,
                                            tp, cfg.config, a.method);
                row += fmt17(rec.value.real()) + "," + fmt17(rec.value.imag()) + "," + fmt17(rec.abs_error) + "," +
                       rec.method + ",ok";
            } catch (const sz::Error& e) {
                if (!e.is_numeric()) throw;
                row += "nan,nan,nan,," + std::string(sz::to_string(e.kind()));
                ++failures;
            }
            rows[i] = row;
        }
        return failures;
    };
    const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(threads_from_env()), points.size());
    std::vector<std::future<int>> jobs;
    const std::size_t chunk = (points.size() + nthreads - 1) / nthreads;
    for (std::size_t b = 0; b < points.size(); b += chunk)
        jobs.push_back(std::async(std::launch::async, work, b, std::min(points.size(), b + chunk)));
    for (auto& j : jobs) numeric_failures += j.get();

    const std::string v = a.grid_var;
    if (format == "csv") {
        std::string text;
        for (const auto& [k, val] : manifest.items()) text += "# " + k + "=" + val.get<std::string>() + "\n";
        text += v + "_re," + v + "_im,value_re,value_im,abs_error,method,status\n";
        for (const auto& r : rows) text += r + "\n";
        emit(text, a.out);
    } else {
        ordered_json out = {{"manifest", manifest}, {"operation", a.function}, {"rows", ordered_json::array()}};
        for (const auto& r : rows) out["rows"].push_back(r);
        emit(out.dump(2) + "\n", a.out);
    }
    return numeric_failures > 0 ? Exit::numeric : Exit::ok;
}

// ---------------------------------------------------------------------------
// table build

int run_table_build(const std::string& group, double max_norm, const std::string& out) {
    if (group != "gamma2") throw SetupError("only the gamma2 group is supported");
    if (!(max_norm > 1)) throw SetupError("max-norm must exceed 1");
    sz::EnumerationParams p;
    p.threads = threads_from_env();
    p.max_nodes = 2'000'000'000LL;
    const sz::GeodesicTable t = sz::enumerate_primitive_classes(max_norm, p);
    sz::save_table(t, out);
    std::printf("classes %lld\n", static_cast<long long>(t.class_count()));
    std::printf("rows %zu\n", t.entries.size());
    if (t.entries.empty()) std::printf("alpha none\n");
    else std::printf("alpha %s\n", fmt17(std::sqrt(t.min_norm())).c_str());
    std::printf("hash %s\n", sz::table_hash(t).c_str());
    return Exit::ok;
}

// ---------------------------------------------------------------------------
// check

struct CheckArgs {
    std::string suite;
    std::optional<double> tol;
    std::string table_path;
    double max_norm = 1e4;
    double depth_norm = 1e7;
    std::string config_path;
    std::string format = "text";
    std::string out;
};

int run_check(const CheckArgs& a) {
    if (sz::checks::suite_members(a.suite).empty())
        throw SetupError("unknown suite '" + a.suite + "' (special, voros, surface, determinants, all)");
    if (a.format != "text" && a.format != "json") throw SetupError("format must be text or json");
    const LoadedConfig cfg = load_config(a.config_path);
    sz::checks::CheckOptions opts;
    opts.tolerance = a.tol;
    opts.table_norm = a.max_norm;
    opts.depth_norm = a.depth_norm;
    opts.threads = threads_from_env();
    opts.config = cfg.config;
    std::string table_hash;
    if (!a.table_path.empty()) {
        opts.table = sz::load_table(a.table_path, 0);
        table_hash = sz::table_hash(*opts.table);
    }
    sz::checks::CheckContext ctx(opts);
    const auto results = sz::checks::run_suite(a.suite, ctx);

    ordered_json manifest = {{"command", "check " + a.suite},
                             {"config_path", cfg.path},
                             {"config_hash", cfg.hash},
                             {"table_path", a.table_path.empty() ? "built:max_norm=" + fmt17(a.max_norm) : a.table_path},
                             {"table_hash", table_hash},
                             {"grid", ""},
                             {"tolerance_override", a.tol ? fmt17(*a.tol) : ""},
                             {"format", a.format},
                             {"timestamp", timestamp()}};
    int failures = 0;
    for (const auto& r : results)
        if (!r.passed) ++failures;
    if (a.format == "json") {
        ordered_json out = {{"manifest", manifest}, {"checks", ordered_json::array()}};
        for (const auto& r : results)
            out["checks"].push_back({{"id", r.id},
                                     {"name", r.name},
                                     {"passed", r.passed},
                                     {"max_error", r.measured},
                                     {"tolerance", r.tolerance},
                                     {"note", r.note}});
        out["passed"] = failures == 0;
        emit(out.dump(2) + "\n", a.out);
    } else {
        std::string text;
        for (const auto& [k, v] : manifest.items()) text += "# " + k + "=" + v.get<std::string>() + "\n";
        for (const auto& r : results) {
            char buf[256];
            std::snprintf(buf, sizeof buf, "%s %2d %-44s max_error %.3e tolerance %.1e", r.passed ? "PASS" : "FAIL", r.id,
                          r.name.c_str(), r.measured, r.tolerance);
            text += buf;
            if (!r.note.empty()) text += "  " + r.note;
            text += "\n";
        }
        text += std::to_string(results.size() - static_cast<std::size_t>(failures)) + "/" +
                std::to_string(results.size()) + " passed\n";
        emit(text, a.out);
    }
    return failures == 0 ? Exit::ok : Exit::check_failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Superzeta functions, Lax-Phillips determinants and Selberg zeta tools"};
    app.require_subcommand(1);
    app.add_flag("--timestamp", g_timestamp, "record the wall-clock time in the manifest (breaks byte determinism)");

    auto* table = app.add_subcommand("table", "geodesic tables");
    table->require_subcommand(1);
    auto* build = table->add_subcommand("build", "enumerate primitive classes up to a norm cutoff");
    std::string group = "gamma2", table_out;
    double build_norm = 0;
    build->add_option("--group", group, "group name")->capture_default_str();
    build->add_option("--max-norm", build_norm, "norm cutoff X")->required();
    build->add_option("--out", table_out, "output table file")->required();

    auto* eval = app.add_subcommand("eval", "evaluate a function at a point or on a grid");
    EvalArgs ea;
    eval->add_option("function", ea.function, "zeta-h, barnes, g1, milnor, selberg, phi, zeta-b-plus, zeta-b-minus, "
                                               "det-plus, det-minus, det-depth")
        ->required();
    eval->add_option("--s", ea.s, "s as re or re,im")->capture_default_str();
    eval->add_option("--z", ea.z, "z as re or re,im")->capture_default_str();
    eval->add_option("--r", ea.r, "depth r")->capture_default_str();
    eval->add_option("--vol", ea.vol, "area for g1 (default from config)");
    eval->add_option("--table", ea.table_path, "geodesic table file");
    eval->add_option("--max-norm", ea.max_norm, "cutoff when no table file is given")->capture_default_str();
    eval->add_option("--config", ea.config_path, "surface config JSON");
    eval->add_option("--method", ea.method, "closed-form or superzeta-derivative")->capture_default_str();
    eval->add_option("--grid-var", ea.grid_var, "grid variable s or z")->capture_default_str();
    eval->add_option("--re-range", ea.re_range, "lo:hi:n for the real part");
    eval->add_option("--im-range", ea.im_range, "lo:hi:n for the imaginary part");
    eval->add_option("--format", ea.format, "json or csv");
    eval->add_option("--out", ea.out, "output file (default stdout)");

    auto* check = app.add_subcommand("check", "run identity check suites");
    CheckArgs ca;
    check->add_option("suite", ca.suite, "special, voros, surface, determinants or all")->required();
    check->add_option("--tol", ca.tol, "tolerance replacing every per-check tolerance");
    check->add_option("--table", ca.table_path, "geodesic table file");
    check->add_option("--max-norm", ca.max_norm, "cutoff when no table file is given")->capture_default_str();
    check->add_option("--depth-norm", ca.depth_norm, "X of the X vs 2X depth check")->capture_default_str();
    check->add_option("--config", ca.config_path, "surface config JSON");
    check->add_option("--format", ca.format, "text or json")->capture_default_str();
    check->add_option("--out", ca.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Exit::ok : Exit::setup;
    }

    try {
        if (build->parsed()) return run_table_build(group, build_norm, table_out);
        if (eval->parsed()) return run_eval(ea);
        if (check->parsed()) return run_check(ca);
    } catch (const SetupError& e) {
        std::cout << error_json("setup", e.what()).dump(2) << "\n";
        return Exit::setup;
    } catch (const sz::Error& e) {
        std::cout << error_json(sz::to_string(e.kind()), e.what()).dump(2) << "\n";
        return e.is_numeric() ? Exit::numeric : Exit::setup;
    } catch (const std::exception& e) {
        std::cout << error_json("setup", e.what()).dump(2) << "\n";
        return Exit::setup;
    }
    return Exit::setup;
}
