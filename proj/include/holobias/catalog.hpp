#pragma once

// The spectral catalog: principal-series lines (s, p, mult) with s != 0, the
// zero-parameter lines feeding the bias constant, and optional exact-rational
// frequencies over a declared basis. Catalogs are canonicalized on load: one
// representative per equivalence class (s, p) ~ (-s, -p), chosen with s > 0,
// or s = 0 and p >= 0; duplicates merge by summing multiplicity. Catalogs are
// immutable after load and safe to share across threads.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "exact.hpp"

namespace holobias {

struct BasisFrequency {
    std::string name;
    double value = 0.0;
};

struct ExactFrequency {
    std::map<std::string, Rational> coeffs;

    ExactFrequency negated() const {
        ExactFrequency out;
        for (const auto& [name, q] : coeffs) out.coeffs[name] = -q;
        return out;
    }

    std::string key() const {
        std::string k;
        for (const auto& [name, q] : coeffs) {
            if (q == 0) continue;
            k += name + "=" + format_rational(q) + ";";
        }
        return k;
    }
};

struct SpectralLine {
    double s = 0.0;
    int p = 0;
    long long mult = 1;
    std::optional<ExactFrequency> exact;
};

struct SpectrumCatalog {
    std::vector<BasisFrequency> basis;
    bool independence_declared = false;
    std::vector<SpectralLine> lines;      // s != 0, canonical s > 0 after load
    std::vector<SpectralLine> zero_lines; // s = 0, canonical p >= 0 after load

    double basis_value(const std::string& name) const {
        for (const auto& b : basis)
            if (b.name == name) return b.value;
        throw constraint_error("exact frequency references undeclared basis name: " + name);
    }

    double realize(const ExactFrequency& ef) const {
        if (ef.coeffs.empty()) throw constraint_error("exact frequency with no coefficients");
        bool nonzero = false;
        double s = 0.0;
        for (const auto& [name, q] : ef.coeffs) {
            if (q != 0) nonzero = true;
            s += to_double(q) * basis_value(name);
        }
        if (!nonzero) throw constraint_error("exact frequency with all-zero coefficients");
        return s;
    }

    bool all_lines_exact() const {
        return std::all_of(lines.begin(), lines.end(),
                           [](const SpectralLine& l) { return l.exact.has_value(); });
    }

    // Distinct (s, p) classes sharing the same s value; relevant when a
    // declared-independent catalog is sampled one-coordinate-per-class.
    bool has_equal_s_pairs() const {
        for (std::size_t i = 0; i + 1 < lines.size(); ++i)
            for (std::size_t j = i + 1; j < lines.size(); ++j)
                if (lines[i].s == lines[j].s) return true;
        return false;
    }
};

namespace detail {

inline SpectralLine canonical_line(SpectralLine l) {
    const bool flip = l.s < 0.0 || (l.s == 0.0 && l.p < 0);
    if (flip) {
        l.s = -l.s;
        l.p = -l.p;
        if (l.exact) l.exact = l.exact->negated();
    }
    if (l.s == 0.0) l.s = 0.0; // normalize -0.0
    return l;
}

inline SpectrumCatalog canonicalize(SpectrumCatalog cat, std::vector<SpectralLine> raw) {
    struct Key {
        double s;
        int p;
        bool operator<(const Key& o) const { return s != o.s ? s < o.s : p < o.p; }
    };
    std::map<Key, SpectralLine> merged;
    for (SpectralLine l : raw) {
        if (l.mult < 1) throw constraint_error("spectral line with mult < 1");
        if (l.exact) l.s = cat.realize(*l.exact);
        l = canonical_line(l);
        const Key k{l.s, l.p};
        auto it = merged.find(k);
        if (it == merged.end()) {
            merged.emplace(k, l);
        } else {
            const bool both_exact = it->second.exact.has_value() && l.exact.has_value();
            const bool both_float = !it->second.exact && !l.exact;
            const bool same = both_float || (both_exact && it->second.exact->key() == l.exact->key());
            if (!same)
                throw constraint_error("duplicate (s, p) lines with conflicting frequency data");
            it->second.mult += l.mult;
        }
    }
    for (auto& [k, l] : merged)
        (l.s == 0.0 ? cat.zero_lines : cat.lines).push_back(l);
    return cat;
}

inline Rational json_rational(const nlohmann::json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(BigInt(v.get<long long>()), 1);
    throw parse_error("rational coefficient must be \"num/den\" string or integer");
}

} // namespace detail

inline SpectrumCatalog load_catalog_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("catalog JSON: ") + e.what());
    }
    SpectrumCatalog cat;
    std::vector<SpectralLine> raw;
    try {
        if (j.contains("basis"))
            for (const auto& b : j.at("basis"))
                cat.basis.push_back({b.at("name").get<std::string>(), b.at("value").get<double>()});
        cat.independence_declared = j.value("independence_declared", false);
        if (j.contains("lines")) {
            for (const auto& e : j.at("lines")) {
                SpectralLine l;
                l.p = e.at("p").get<int>();
                l.mult = e.value("mult", 1LL);
                const auto& sv = e.at("s");
                if (sv.is_object()) {
                    ExactFrequency ef;
                    for (const auto& [name, coeff] : sv.at("coeffs").items())
                        ef.coeffs[name] = detail::json_rational(coeff);
                    l.exact = ef;
                } else {
                    l.s = sv.get<double>();
                    if (l.s == 0.0) throw parse_error("line with s = 0 belongs in zero_lines");
                }
                raw.push_back(l);
            }
        }
        if (j.contains("zero_lines")) {
            for (const auto& e : j.at("zero_lines")) {
                SpectralLine l;
                l.s = 0.0;
                l.p = e.at("p").get<int>();
                l.mult = e.value("mult", 1LL);
                raw.push_back(l);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("catalog JSON: ") + e.what());
    }
    return detail::canonicalize(std::move(cat), std::move(raw));
}

inline SpectrumCatalog load_catalog_csv(const std::string& text) {
    SpectrumCatalog cat;
    std::vector<SpectralLine> raw;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            if (line != "s,p,mult") throw parse_error("catalog CSV must start with header 's,p,mult'");
            header = false;
            continue;
        }
        std::istringstream row(line);
        std::string fs, fp, fm;
        if (!std::getline(row, fs, ',') || !std::getline(row, fp, ',') || !std::getline(row, fm))
            throw parse_error("catalog CSV row " + std::to_string(lineno) + ": expected s,p,mult");
        SpectralLine l;
        try {
            l.s = std::stod(fs);
            l.p = std::stoi(fp);
            l.mult = std::stoll(fm);
        } catch (const std::exception&) {
            throw parse_error("catalog CSV row " + std::to_string(lineno) + ": malformed number");
        }
        raw.push_back(l);
    }
    if (header) throw parse_error("catalog CSV is empty");
    return detail::canonicalize(std::move(cat), std::move(raw));
}

inline SpectrumCatalog load_catalog_text(const std::string& text, const std::string& format) {
    if (format == "json") return load_catalog_json(text);
    if (format == "csv") return load_catalog_csv(text);
    throw parse_error("unknown catalog format: " + format);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline SpectrumCatalog load_catalog_file(const std::string& path) {
    const auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext != "json" && ext != "csv")
        throw parse_error("catalog path must end in .json or .csv: " + path);
    return load_catalog_text(read_file(path), ext);
}

inline nlohmann::ordered_json catalog_to_json(const SpectrumCatalog& cat) {
    nlohmann::ordered_json j;
    if (!cat.basis.empty()) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& b : cat.basis) arr.push_back({{"name", b.name}, {"value", b.value}});
        j["basis"] = arr;
    }
    j["independence_declared"] = cat.independence_declared;
    auto lines = nlohmann::ordered_json::array();
    for (const auto& l : cat.lines) {
        nlohmann::ordered_json e;
        if (l.exact) {
            nlohmann::ordered_json coeffs;
            for (const auto& [name, q] : l.exact->coeffs) coeffs[name] = format_rational(q);
            e["s"] = {{"coeffs", coeffs}};
        } else {
            e["s"] = l.s;
        }
        e["p"] = l.p;
        e["mult"] = l.mult;
        lines.push_back(e);
    }
    j["lines"] = lines;
    auto zeros = nlohmann::ordered_json::array();
    for (const auto& l : cat.zero_lines) zeros.push_back({{"p", l.p}, {"mult", l.mult}});
    j["zero_lines"] = zeros;
    return j;
}

// Warn-only Weyl-law screen: flags unit windows whose multiplicity total
// exceeds slack * volume * (R^2 + n^2) + slack.
struct WeylWindow {
    int n = 0;
    int R = 0;
    double mult_sum = 0.0;
    double bound = 0.0;
};

inline std::vector<WeylWindow> validate_weyl(const SpectrumCatalog& cat, double volume, double slack) {
    if (!(volume > 0.0)) throw constraint_error("validate_weyl requires volume > 0");
    if (!(slack > 0.0)) throw constraint_error("validate_weyl requires slack > 0");
    // Expand each stored class to both labeled representations (s, p), (-s, -p).
    struct Label {
        double s;
        int p;
        long long mult;
    };
    std::vector<Label> labels;
    double max_s = 0.0;
    auto add = [&](const SpectralLine& l) {
        labels.push_back({l.s, l.p, l.mult});
        if (l.s != 0.0 || l.p != 0) labels.push_back({-l.s, -l.p, l.mult});
        max_s = std::max(max_s, std::abs(l.s));
    };
    for (const auto& l : cat.lines) add(l);
    for (const auto& l : cat.zero_lines) add(l);

    std::vector<WeylWindow> report;
    std::vector<int> ns;
    for (const auto& lab : labels) ns.push_back(lab.p);
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    const int Rmax = static_cast<int>(std::ceil(max_s)) + 1;
    for (int n : ns) {
        for (int R = -Rmax; R <= Rmax; ++R) {
            double sum = 0.0;
            for (const auto& lab : labels)
                if (lab.p == n && lab.s >= R - 1.0 && lab.s <= R + 1.0) sum += static_cast<double>(lab.mult);
            const double bound = slack * volume * (static_cast<double>(R) * R + static_cast<double>(n) * n) + slack;
            if (sum > bound) report.push_back({n, R, sum, bound});
        }
    }
    return report;
}

} // namespace holobias
