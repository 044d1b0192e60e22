#pragma once

// File emitters: CSV for densities and signals, summary JSON, and a minimal
// static SVG line chart. Formatting is fixed-width scientific so identical
// inputs produce byte-identical files.

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "distribution.hpp"
#include "errors.hpp"

namespace holobias {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_xy_csv(const std::string& path, const std::string& header,
                         const std::vector<double>& x, const std::vector<double>& y) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot write file: " + path);
    out << header << "\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        out << format_double(x[i]) << "," << format_double(y[i]) << "\n";
}

inline nlohmann::ordered_json distribution_summary(const BiasDistribution& d) {
    nlohmann::ordered_json j;
    j["mass"] = d.mass;
    j["mean"] = d.mean;
    j["center"] = d.center;
    j["positive_probability"] = d.positive_probability;
    j["symmetry_defect"] = d.symmetry_defect;
    j["method"] = d.method;
    j["support"] = {d.support_lo, d.support_hi};
    if (d.method == "inversion") {
        j["fitted_constant"] = d.fitted_constant;
        j["min_raw_density"] = d.min_raw_density;
    }
    if (d.method == "montecarlo") {
        j["n_samples"] = d.n_samples;
        j["sample_min"] = d.sample_min;
        j["sample_max"] = d.sample_max;
    }
    return j;
}

// Minimal static line chart; no dependencies, fixed 640x400 frame.
inline void write_svg_line(const std::string& path, const std::vector<double>& x,
                           const std::vector<double>& y, const std::string& title) {
    if (x.size() != y.size() || x.size() < 2) throw precondition_error("svg: need >= 2 points");
    double xmin = x.front(), xmax = x.back();
    double ymin = 0.0, ymax = 0.0;
    for (double v : y) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
    }
    if (ymax == ymin) ymax = ymin + 1.0;
    const double W = 640.0, H = 400.0, L = 50.0, R = 10.0, T = 30.0, B = 30.0;
    auto sx = [&](double v) { return L + (v - xmin) / (xmax - xmin) * (W - L - R); };
    auto sy = [&](double v) { return H - B - (v - ymin) / (ymax - ymin) * (H - T - B); };
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot write file: " + path);
    char buf[64];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 400\">\n";
    out << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    out << "<text x=\"10\" y=\"20\" font-family=\"monospace\" font-size=\"13\">" << title
        << "</text>\n";
    std::snprintf(buf, sizeof(buf), "%.1f", sy(0.0));
    out << "<line x1=\"50\" y1=\"" << buf << "\" x2=\"630\" y2=\"" << buf
        << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", sx(x[i]), sy(y[i]));
        out << buf;
    }
    out << "\"/>\n</svg>\n";
}

} // namespace holobias
