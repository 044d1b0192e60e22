#pragma once

// The limiting distribution of the normalized bias signal: amplitude sets,
// the Bessel-product characteristic function, Fourier inversion to a density,
// and the exact single-factor arcsine law.
//
// The inversion integral is computed as the unnormalized half-line cosine
// transform int_0^Xi prod_j J0(a_j xi) cos(xi (x-b)) dxi on Gauss-Legendre
// panels laid between consecutive zeros of the slowest J0 factor, with the
// overall constant fixed afterwards by enforcing unit mass; the fitted
// constant is reported so the transform-convention ambiguity stays visible.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "bessel.hpp"
#include "bias.hpp"
#include "catalog.hpp"
#include "errors.hpp"
#include "kernels.hpp"

namespace holobias {

struct Amplitude {
    double a = 0.0;        // 2 * mult * |fhat(-p) c_{s,eta}|
    double phase = 0.0;    // arg(fhat(-p) c_{s,eta}); used in sampling only
    std::size_t coord = 0; // torus coordinate (index into catalog line order)
    double s = 0.0;
    int p = 0;
    long long mult = 1;
};

struct AmplitudeSet {
    std::vector<Amplitude> amps; // sorted by max(|s|,|p|) nondecreasing
    double center = 0.0;         // b_{f,eta}
    std::size_t n_coords = 0;

    double amplitude_sum() const {
        double t = 0.0;
        for (const auto& a : amps) t += a.a;
        return t;
    }
    std::size_t positive_count() const {
        std::size_t k = 0;
        for (const auto& a : amps)
            if (a.a > 0.0) ++k;
        return k;
    }
};

// One torus coordinate per distinct (s, p) class by default; the shared mode
// collapses classes with bit-equal s onto one coordinate.
enum class CoordinateMode { per_class, share_equal_s };

inline AmplitudeSet build_amplitude_set(const SpectrumCatalog& cat, const HolonomyTestFunction& f,
                                        const SmoothingKernel& kernel, const KernelScale& scale,
                                        CoordinateMode mode = CoordinateMode::per_class) {
    f.require_bias_mode();
    AmplitudeSet set;
    std::vector<double> seen_s;
    std::vector<std::size_t> coord_of_line(cat.lines.size());
    if (mode == CoordinateMode::share_equal_s) {
        for (std::size_t i = 0; i < cat.lines.size(); ++i) {
            std::size_t j = 0;
            while (j < seen_s.size() && seen_s[j] != cat.lines[i].s) ++j;
            if (j == seen_s.size()) seen_s.push_back(cat.lines[i].s);
            coord_of_line[i] = j;
        }
        set.n_coords = seen_s.size();
    } else {
        for (std::size_t i = 0; i < cat.lines.size(); ++i) coord_of_line[i] = i;
        set.n_coords = cat.lines.size();
    }
    for (std::size_t i = 0; i < cat.lines.size(); ++i) {
        const auto& l = cat.lines[i];
        const std::complex<double> w = f.coeff(-l.p) * c_s_eta(kernel, scale, l.s).value;
        Amplitude amp;
        amp.a = 2.0 * static_cast<double>(l.mult) * std::abs(w);
        amp.phase = std::arg(w);
        amp.coord = coord_of_line[i];
        amp.s = l.s;
        amp.p = l.p;
        amp.mult = l.mult;
        set.amps.push_back(amp);
    }
    std::stable_sort(set.amps.begin(), set.amps.end(), [](const Amplitude& x, const Amplitude& y) {
        return std::max(std::abs(x.s), static_cast<double>(std::abs(x.p)))
             < std::max(std::abs(y.s), static_cast<double>(std::abs(y.p)));
    });
    set.center = bias_constant(cat, f, kernel, scale).value;
    return set;
}

// Characteristic function e^{-i xi b} prod_j J0(a_j xi). Phases drop out under
// linear independence; they are carried by the sampler instead.
inline std::complex<double> char_fn(const AmplitudeSet& set, double xi) {
    double prod = 1.0;
    for (const auto& a : set.amps) prod *= bessel_j0(a.a * xi);
    return std::exp(std::complex<double>{0.0, -xi * set.center}) * prod;
}

// Density of a cos(2 pi U), U uniform: the exact one-coordinate pushforward.
inline double arcsine_reference(double a, double x) {
    if (!(a > 0.0)) throw precondition_error("arcsine_reference requires a > 0");
    if (!(std::abs(x) < a)) throw precondition_error("arcsine_reference requires |x| < a");
    return 1.0 / (std::numbers::pi * std::sqrt(a * a - x * x));
}

struct BiasDistribution {
    std::vector<double> grid;
    std::vector<double> density;
    double mass = 0.0;
    double mean = 0.0;
    double center = 0.0;
    double positive_probability = 0.0;
    double symmetry_defect = 0.0;
    std::string method;
    double support_lo = 0.0;
    double support_hi = 0.0;
    // inversion bookkeeping
    double fitted_constant = 0.0;
    double min_raw_density = 0.0;
    // sampling bookkeeping
    double sample_min = 0.0;
    double sample_max = 0.0;
    std::size_t n_samples = 0;
};

namespace detail {

inline double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        acc += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
    return acc;
}

inline double interp(const std::vector<double>& x, const std::vector<double>& y, double q) {
    if (q <= x.front() || q >= x.back()) return 0.0;
    const auto it = std::upper_bound(x.begin(), x.end(), q);
    const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
    const double t = (q - x[i]) / (x[i + 1] - x[i]);
    return y[i] + t * (y[i + 1] - y[i]);
}

inline void finish_summary(BiasDistribution& d) {
    d.mass = trapezoid(d.grid, d.density);
    std::vector<double> xp(d.grid.size());
    for (std::size_t i = 0; i < d.grid.size(); ++i) xp[i] = d.grid[i] * d.density[i];
    d.mean = trapezoid(d.grid, xp);
    // P(X > 0): trapezoid over the grid truncated at 0 with an interpolated node.
    double pos = 0.0;
    for (std::size_t i = 0; i + 1 < d.grid.size(); ++i) {
        const double a = d.grid[i], b = d.grid[i + 1];
        if (b <= 0.0) continue;
        if (a >= 0.0) {
            pos += 0.5 * (d.density[i] + d.density[i + 1]) * (b - a);
        } else {
            const double p0 = interp(d.grid, d.density, 0.0);
            pos += 0.5 * (p0 + d.density[i + 1]) * b;
        }
    }
    d.positive_probability = pos;
    double defect = 0.0;
    const double half = std::max(d.grid.back() - d.center, d.center - d.grid.front());
    for (int k = 0; k <= 512; ++k) {
        const double u = half * static_cast<double>(k) / 512.0;
        defect = std::max(defect, std::abs(interp(d.grid, d.density, d.center + u)
                                         - interp(d.grid, d.density, d.center - u)));
    }
    d.symmetry_defect = defect;
}

} // namespace detail

inline std::vector<double> default_density_grid(const AmplitudeSet& set, std::size_t points = 801) {
    const double half = set.amplitude_sum() * 1.05 + 0.05;
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = set.center - half + 2.0 * half * static_cast<double>(i) / static_cast<double>(points - 1);
    return grid;
}

inline BiasDistribution density_inversion(const AmplitudeSet& set, const std::vector<double>& grid,
                                          double tail_epsilon = 1e-8) {
    if (set.positive_count() < 3)
        throw precondition_error(
            "density_inversion needs at least 3 positive amplitudes; "
            "use arcsine_reference or sample_distribution instead");
    if (grid.size() < 8 || !std::is_sorted(grid.begin(), grid.end()))
        throw precondition_error("density grid must be an increasing sequence");
    const double b = set.center;
    const double A = set.amplitude_sum();
    if (grid.front() > b - A || grid.back() < b + A)
        throw precondition_error("density grid does not cover the support interval");

    std::vector<double> amps;
    for (const auto& a : set.amps)
        if (a.a > 0.0) amps.push_back(a.a);
    const double a_min = *std::min_element(amps.begin(), amps.end());

    const auto envelope = [&](double xi) {
        double e = 1.0;
        for (double a : amps) e *= std::min(1.0, std::sqrt(2.0 / (std::numbers::pi * a * xi)));
        return e;
    };
    double Xi = 1.0;
    while (envelope(Xi) >= tail_epsilon) Xi *= 1.25;

    // Panels between consecutive zeros of the slowest J0 factor, subdivided so
    // each subpanel spans at most one period of the fastest total oscillation.
    const double max_dx = std::max(std::abs(grid.front() - b), std::abs(grid.back() - b));
    const double rate = A + max_dx;
    static constexpr double kGL16x[8] = {
        0.09501250983763744, 0.28160355077925891, 0.45801677765722739, 0.61787624440264375,
        0.75540440835500303, 0.86563120238783174, 0.94457502307323258, 0.98940093499164993};
    static constexpr double kGL16w[8] = {
        0.18945061045506850, 0.18260341504492359, 0.16915651939500254, 0.14959598881657673,
        0.12462897125553387, 0.09515851168249278, 0.06225352393864789, 0.02715245941175409};

    std::vector<double> nodes, weights;
    double lo = 0.0;
    for (unsigned k = 1; lo < Xi; ++k) {
        const double hi = std::min(bessel_j0_zero(k) / a_min, Xi);
        // GL-16 resolves two full periods per subpanel at full precision
        const int nsub = std::max(1, static_cast<int>(std::ceil((hi - lo) * rate / (2.0 * kTwoPi))));
        for (int i = 0; i < nsub; ++i) {
            const double l2 = lo + (hi - lo) * i / nsub;
            const double h2 = lo + (hi - lo) * (i + 1) / nsub;
            const double mid = 0.5 * (l2 + h2), hw = 0.5 * (h2 - l2);
            for (int m = 0; m < 8; ++m) {
                nodes.push_back(mid - hw * kGL16x[m]);
                weights.push_back(hw * kGL16w[m]);
                nodes.push_back(mid + hw * kGL16x[m]);
                weights.push_back(hw * kGL16w[m]);
            }
        }
        lo = hi;
    }
    std::vector<double> phi(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double prod = 1.0;
        for (double a : amps) prod *= bessel_j0(a * nodes[i]);
        phi[i] = prod * weights[i];
    }

    BiasDistribution d;
    d.grid = grid;
    d.center = b;
    d.method = "inversion";
    d.support_lo = b - A;
    d.support_hi = b + A;
    d.density.resize(grid.size());
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const double dx = grid[gi] - b;
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += phi[i] * std::cos(nodes[i] * dx);
        d.density[gi] = acc;
    }
    const double raw_mass = detail::trapezoid(d.grid, d.density);
    if (!(raw_mass > 0.0)) throw numeric_guard_error("density inversion: nonpositive raw mass");
    d.fitted_constant = 1.0 / raw_mass;
    double min_raw = 0.0;
    for (auto& v : d.density) {
        v *= d.fitted_constant;
        min_raw = std::min(min_raw, v);
        if (v < 0.0) v = 0.0; // clip ringing, reported via min_raw_density
    }
    d.min_raw_density = min_raw;
    detail::finish_summary(d);
    return d;
}

} // namespace holobias
