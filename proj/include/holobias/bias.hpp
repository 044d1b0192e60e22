#pragma once

// The bias constant b_{f,eta}, the truncated normalized bias signal E^(T),
// and geometric-side sums over geodesic tables.
//
// Sum convention, fixed project-wide: catalogs store one representative per
// equivalence class (s, p) ~ (-s, -p), and every spectral sum multiplies each
// class term by 2 to absorb the conjugate class. With real f this reproduces
// the two-sided sums. Concretely
//
//   b_{f,eta} = ( sum_{p>=1 zero classes} mult * Re fhat(p) - 2 Re fhat(1) ) * 2 c_{0,eta}
//   E^(T)(y)  = sum_{classes, |s|,|p|<T} 2 mult Re( fhat(-p) e^{isy} c_{s,eta} ) + b_{f,eta}

#include <cmath>
#include <complex>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "errors.hpp"
#include "kernels.hpp"

namespace holobias {

// ----- geodesic tables ------------------------------------------------------

struct GeodesicRecord {
    double length = 0.0;           // ell(gamma)
    double holonomy = 0.0;         // hol(gamma) in [0, 2pi)
    double primitive_length = 0.0; // ell(gamma_0)

    long long power() const {
        const double k = length / primitive_length;
        return static_cast<long long>(std::llround(k));
    }
    bool primitive() const { return power() == 1; }
};

inline void validate_record(const GeodesicRecord& g) {
    if (!(g.length > 0.0) || !(g.primitive_length > 0.0))
        throw constraint_error("geodesic record with non-positive length");
    const double k = g.length / g.primitive_length;
    if (!(k >= 1.0 - 1e-9) || std::abs(k - std::llround(k)) > 1e-9 * k)
        throw constraint_error("primitive length does not divide length");
}

inline std::vector<GeodesicRecord> load_geodesics_text(const std::string& text) {
    std::vector<GeodesicRecord> out;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            if (line != "length,holonomy,primitive_length")
                throw parse_error("geodesic CSV must start with header 'length,holonomy,primitive_length'");
            header = false;
            continue;
        }
        std::istringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c))
            throw parse_error("geodesic CSV row " + std::to_string(lineno));
        GeodesicRecord g;
        try {
            g.length = std::stod(a);
            g.holonomy = std::stod(b);
            g.primitive_length = std::stod(c);
        } catch (const std::exception&) {
            throw parse_error("geodesic CSV row " + std::to_string(lineno) + ": malformed number");
        }
        g.holonomy = std::fmod(g.holonomy, kTwoPi);
        if (g.holonomy < 0.0) g.holonomy += kTwoPi;
        validate_record(g);
        out.push_back(g);
    }
    return out;
}

// ----- bias constant ---------------------------------------------------------

struct BiasConstant {
    double value = 0.0;
    double zero_line_contribution = 0.0;
    double trivial_contribution = 0.0;
};

inline BiasConstant bias_constant(const SpectrumCatalog& cat, const HolonomyTestFunction& f,
                                  const SmoothingKernel& kernel, const KernelScale& scale) {
    f.require_bias_mode();
    const double c0 = c_s_eta(kernel, scale, 0.0).value.real();
    double zero_sum = 0.0;
    for (const auto& l : cat.zero_lines) {
        if (l.p == 0) continue;
        zero_sum += static_cast<double>(l.mult) * f.coeff(l.p).real();
    }
    BiasConstant b;
    b.zero_line_contribution = zero_sum * 2.0 * c0;
    b.trivial_contribution = 2.0 * f.coeff(1).real() * 2.0 * c0;
    b.value = b.zero_line_contribution - b.trivial_contribution;
    return b;
}

// ----- truncated signal E^(T) -------------------------------------------------

// Per-class data precomputed once so grid evaluations are a few flops per term.
class SignalEvaluator {
public:
    SignalEvaluator(const SpectrumCatalog& cat, const HolonomyTestFunction& f,
                    const SmoothingKernel& kernel, const KernelScale& scale, double T) {
        f.require_bias_mode();
        for (const auto& l : cat.lines) {
            if (std::abs(l.s) >= T || std::abs(l.p) >= T) continue;
            const std::complex<double> c = c_s_eta(kernel, scale, l.s).value;
            terms_.push_back({l.s, 2.0 * static_cast<double>(l.mult) * f.coeff(-l.p) * c});
        }
        bias_ = bias_constant(cat, f, kernel, scale).value;
        for (const auto& t : terms_) max_s_ = std::max(max_s_, std::abs(t.s));
    }

    double operator()(double y) const {
        double acc = 0.0;
        for (const auto& t : terms_)
            acc += (t.w * std::exp(std::complex<double>{0.0, t.s * y})).real();
        return acc + bias_;
    }

    double bias() const { return bias_; }
    double max_frequency() const { return max_s_; }
    std::size_t term_count() const { return terms_.size(); }

private:
    struct Term {
        double s;
        std::complex<double> w; // 2 mult fhat(-p) c_{s,eta}
    };
    std::vector<Term> terms_;
    double bias_ = 0.0;
    double max_s_ = 0.0;
};

inline double eval_ET(const SpectrumCatalog& cat, const HolonomyTestFunction& f,
                      const SmoothingKernel& kernel, const KernelScale& scale, double T, double y) {
    if (!(y >= scale.eta0)) throw precondition_error("eval_ET requires y >= eta0");
    return SignalEvaluator(cat, f, kernel, scale, T)(y);
}

// ----- geometric side ----------------------------------------------------------

// Weyl discriminant weight (e^u + e^{-u} - 2 cos theta)^{-1}.
inline double weyl_weight(double u, double theta) {
    if (!(u > 0.0)) throw precondition_error("weyl_weight requires u > 0");
    return 1.0 / (std::exp(u) + std::exp(-u) - 2.0 * std::cos(theta));
}

enum class GeoWeighting { plain, length_times_f, weyl_tilde };

struct GeometricSum {
    double value = 0.0;
    double normalized = 0.0; // e^{-y} * value
};

inline GeometricSum geometric_bias_sum(const std::vector<GeodesicRecord>& geodesics,
                                       const HolonomyTestFunction& f, const SmoothingKernel& kernel,
                                       const KernelScale& scale, double y, bool primitive_only,
                                       GeoWeighting weighting) {
    if (!(y > scale.eta)) throw precondition_error("geometric_bias_sum requires y > eta");
    double acc = 0.0;
    for (const auto& g : geodesics) {
        if (!(g.length > 0.0)) throw constraint_error("geodesic record with length <= 0");
        if (primitive_only && !g.primitive()) continue;
        const double win = window_g(kernel, scale, y, g.length);
        if (win == 0.0) continue;
        const double fh = f.evaluate(g.holonomy);
        if (weighting == GeoWeighting::weyl_tilde) {
            const double cosh2 = std::exp(g.length) + std::exp(-g.length);
            acc += g.primitive_length * weyl_weight(g.length, g.holonomy) * cosh2 * win * fh;
        } else {
            acc += g.length * win * fh;
        }
    }
    return {acc, std::exp(-y) * acc};
}

// ----- spectral side of the separable trace formula ---------------------------

enum class TraceParity { even, odd };

struct TraceMainTerms {
    double value = 0.0;
    std::string dropped_error; // error class of the unmodeled remainder
};

// Main terms of the smoothed-window trace formula right-hand side:
//   even: e^y sum_classes 2 mult Re(fhat(-p)) Re(e^{isy} c_{s,eta})
//         - (fhat(1) + fhat(-1)) e^y c_{0,eta}
//   odd:  -e^y sum_classes 2 mult Im(fhat(-p)) Im(e^{isy} c_{s,eta})
// Zero-parameter classes participate at s = 0. The O(1/eta^2 + 1) remainder is
// not modeled; its class is named in the returned metadata.
inline TraceMainTerms trace_rhs_spectral(const SpectrumCatalog& cat, const HolonomyTestFunction& f,
                                         const SmoothingKernel& kernel, const KernelScale& scale,
                                         double y, TraceParity parity) {
    f.require_bias_mode();
    const double ey = std::exp(y);
    double acc = 0.0;
    auto add_line = [&](const SpectralLine& l) {
        const std::complex<double> c = c_s_eta(kernel, scale, l.s).value;
        const std::complex<double> osc = std::exp(std::complex<double>{0.0, l.s * y}) * c;
        const std::complex<double> fh = f.coeff(-l.p);
        if (parity == TraceParity::even)
            acc += 2.0 * static_cast<double>(l.mult) * fh.real() * osc.real();
        else
            acc -= 2.0 * static_cast<double>(l.mult) * fh.imag() * osc.imag();
    };
    for (const auto& l : cat.lines) add_line(l);
    for (const auto& l : cat.zero_lines) add_line(l);
    double value = ey * acc;
    if (parity == TraceParity::even) {
        const double c0 = c_s_eta(kernel, scale, 0.0).value.real();
        value -= (f.coeff(1) + f.coeff(-1)).real() * ey * c0;
    }
    return {value, "O(1/eta^2 + 1)"};
}

} // namespace holobias
