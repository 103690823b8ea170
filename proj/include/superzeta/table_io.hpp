#pragma once

// GeodesicTable files: CSV rows `trace,norm,log_norm,count` sorted by norm,
// preceded by `# key=value` comment lines for group, cutoff, class count and
// an FNV-1a 64-bit hash of the data rows.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "superzeta/core.hpp"
#include "superzeta/hyperbolic_surface.hpp"

namespace superzeta {

namespace detail {

inline std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string format_row(const TableEntry& e) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%" PRId64 ",%.17g,%.17g,%" PRId64, e.trace, e.norm, e.log_norm, e.count);
    return buf;
}

inline std::string data_rows(const GeodesicTable& t) {
    std::string out;
    for (const auto& e : t.entries) out += format_row(e) + "\n";
    return out;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

inline std::string format_cutoff(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace detail

/// Hash of the data rows as written to disk.
inline std::string table_hash(const GeodesicTable& t) { return detail::hex64(detail::fnv1a(detail::data_rows(t))); }

inline std::string serialize_table(const GeodesicTable& t) {
    std::string out;
    out += "# group=" + t.group + "\n";
    out += "# max_norm=" + detail::format_cutoff(t.max_norm) + "\n";
    out += "# words=" + std::to_string(t.class_count()) + "\n";
    out += "# hash=" + table_hash(t) + "\n";
    out += "trace,norm,log_norm,count\n";
    out += detail::data_rows(t);
    return out;
}

inline void save_table(const GeodesicTable& t, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::io, "cannot write table file " + path);
    f << serialize_table(t);
    if (!f) throw Error(ErrorKind::io, "write failed for " + path);
}

/// Parses table text. A positive expected_cutoff must match the stored one.
inline GeodesicTable parse_table(const std::string& text, double expected_cutoff = 0) {
    std::istringstream in(text);
    std::string line;
    GeodesicTable t;
    std::string stored_hash;
    long long stored_words = -1;
    bool have_cutoff = false, have_header = false;
    auto malformed = [](const std::string& why) { return Error(ErrorKind::malformed, "table file: " + why); };

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(1, eq - 1);
            key.erase(0, key.find_first_not_of(' '));
            const std::string value = line.substr(eq + 1);
            try {
                if (key == "group") t.group = value;
                else if (key == "max_norm") {
                    t.max_norm = std::stod(value);
                    have_cutoff = true;
                } else if (key == "words") stored_words = std::stoll(value);
                else if (key == "hash") stored_hash = value;
            } catch (const std::exception&) {
                throw malformed("bad value for " + key);
            }
            continue;
        }
        if (!have_header) {
            if (line != "trace,norm,log_norm,count") throw malformed("missing column header");
            have_header = true;
            continue;
        }
        TableEntry e;
        std::istringstream row(line);
        std::string f0, f1, f2, f3, extra;
        if (!std::getline(row, f0, ',') || !std::getline(row, f1, ',') || !std::getline(row, f2, ',') ||
            !std::getline(row, f3, ',') || std::getline(row, extra, ','))
            throw malformed("row does not have four fields: " + line);
        try {
            std::size_t used = 0;
            e.trace = std::stoll(f0, &used);
            if (used != f0.size()) throw malformed("trace");
            e.norm = std::stod(f1, &used);
            if (used != f1.size()) throw malformed("norm");
            e.log_norm = std::stod(f2, &used);
            if (used != f2.size()) throw malformed("log_norm");
            e.count = std::stoll(f3, &used);
            if (used != f3.size()) throw malformed("count");
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw malformed("unparsable row: " + line);
        }
        if (std::llabs(e.trace) <= 2 || e.count < 1 || !(e.norm > 1)) throw malformed("invalid row: " + line);
        t.entries.push_back(e);
    }
    if (!have_header || !have_cutoff || stored_hash.empty() || stored_words < 0)
        throw malformed("missing header lines");
    if (t.class_count() != stored_words) throw malformed("class count does not match the words line");
    for (std::size_t i = 1; i < t.entries.size(); ++i)
        if (t.entries[i].norm < t.entries[i - 1].norm) throw malformed("rows not sorted by norm");
    if (table_hash(t) != stored_hash) throw Error(ErrorKind::checksum, "table hash mismatch");
    if (expected_cutoff > 0 && t.max_norm != expected_cutoff)
        throw Error(ErrorKind::cutoff_mismatch, "table cutoff " + detail::format_cutoff(t.max_norm) +
                                                    " differs from requested " + detail::format_cutoff(expected_cutoff));
    return t;
}

inline GeodesicTable load_table(const std::string& path, double expected_cutoff = 0) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::io, "cannot open table file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_table(ss.str(), expected_cutoff);
}

}  // namespace superzeta
