#pragma once

// Quadrature engines. All integrands in this project are compactly supported
// after substitution, so tanh-sinh on a finite interval is the workhorse;
// fixed-order Gauss-Legendre panels handle the oscillatory inversion integral,
// and the periodic trapezoid rule handles circle Fourier coefficients.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "errors.hpp"

namespace holobias {

inline constexpr double kQuadTol = 1e-12;

template <typename F>
double integrate_ts(F&& f, double a, double b, double tol = kQuadTol) {
    thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
    return integrator.integrate(std::forward<F>(f), a, b, tol);
}

// Oscillatory integrands alias the early tanh-sinh levels and can trigger a
// spurious early termination; capping each panel at half a period of the
// given angular frequency removes the hazard.
template <typename F>
double integrate_ts_oscillatory(F&& f, double a, double b, double angular_freq,
                                double tol = kQuadTol) {
    const double phase = std::abs(angular_freq) * (b - a);
    const int panels = std::max(1, static_cast<int>(std::ceil(phase / std::numbers::pi)));
    if (panels == 1) return integrate_ts(std::forward<F>(f), a, b, tol);
    double acc = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
        acc += integrate_ts(f, a + p * h, a + (p + 1) * h, tol);
    return acc;
}

template <typename F>
std::complex<double> integrate_ts_complex(F&& f, double a, double b, double tol = kQuadTol) {
    const double re = integrate_ts([&](double t) { return f(t).real(); }, a, b, tol);
    const double im = integrate_ts([&](double t) { return f(t).imag(); }, a, b, tol);
    return {re, im};
}

template <typename F>
double gauss_panel(F&& f, double a, double b) {
    return boost::math::quadrature::gauss<double, 16>::integrate(std::forward<F>(f), a, b);
}

// Trapezoid rule on one period of a smooth periodic function converges
// geometrically; doubles the grid until two refinements agree.
template <typename F>
std::complex<double> periodic_fourier_integral(F&& f, double period, double tol = kQuadTol) {
    auto sample = [&](std::size_t n) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) acc += f(period * static_cast<double>(k) / static_cast<double>(n));
        return acc * (period / static_cast<double>(n));
    };
    std::complex<double> prev = sample(16);
    for (std::size_t n = 32; n <= (1u << 22); n *= 2) {
        const std::complex<double> cur = sample(n);
        if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    throw numeric_guard_error("periodic quadrature did not converge");
}

} // namespace holobias
