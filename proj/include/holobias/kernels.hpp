#pragma once

// The smoothing kernel psi and everything derived from it:
//
//   psi_eta(t)   = psi(t/eta)/eta, supported in [-eta, eta], integral 1
//   Psi(z)       = int_{-1}^{1} psi(t) e^{zt} dt      (entire, Psi(0) = 1)
//   c_{s,eta}    = Psi(eta(1+is)) / (1+is)
//   g_{y,eta}    = psi_eta * indicator[-y,y]
//   h_{y,eta}    = psi_eta * (indicator[-y,y] * sgn)
//
// plus the holonomy test function f given by its circle Fourier coefficients.
// Conventions: circle coefficients fhat(p) = (1/2pi) int f(theta) e^{-ip theta},
// line transforms are expressed through Psi so no sign/2pi convention can leak:
// psihat(xi) = Psi(-2pi i xi).

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "quadrature.hpp"

namespace holobias {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class SmoothingKernel {
public:
    static SmoothingKernel make(const std::string& kind = "bump") {
        if (kind != "bump") throw constraint_error("unknown kernel kind: " + kind);
        return SmoothingKernel(kind);
    }

    const std::string& kind() const { return kind_; }
    double normalization() const { return norm_; }

    // psi(t); zero outside (-1, 1), even, smooth, unit integral.
    double eval(double t) const {
        if (std::abs(t) >= 1.0) return 0.0;
        return norm_ * std::exp(-1.0 / (1.0 - t * t));
    }

    // int_{-1}^{v} psi, evaluated via the even symmetry so cdf(-v) = 1 - cdf(v)
    // holds to full precision.
    double cdf(double v) const {
        if (v <= -1.0) return 0.0;
        if (v >= 1.0) return 1.0;
        const double half = integrate_ts([this](double t) { return eval(t); }, 0.0, std::abs(v));
        return v >= 0.0 ? 0.5 + half : 0.5 - half;
    }

    // int_{-1}^{1} psi(t) cos(q t) dt; the real-valued Fourier transform of the
    // even kernel, psihat(xi) = fourier_cos(2 pi xi).
    double fourier_cos(double q) const {
        return 2.0 * integrate_ts_oscillatory(
            [this, q](double t) { return eval(t) * std::cos(q * t); }, 0.0, 1.0, q);
    }

private:
    explicit SmoothingKernel(std::string kind) : kind_(std::move(kind)) {
        const double raw = integrate_ts([](double t) {
            return std::abs(t) >= 1.0 ? 0.0 : std::exp(-1.0 / (1.0 - t * t));
        }, -1.0, 1.0);
        norm_ = 1.0 / raw;
    }

    std::string kind_;
    double norm_ = 1.0;
};

struct KernelScale {
    double eta;
    double eta0;

    KernelScale(double eta_, double eta0_) : eta(eta_), eta0(eta0_) {
        if (!(eta > 0.0) || !(eta <= eta0))
            throw constraint_error("kernel scale requires 0 < eta <= eta0");
    }
};

// psi_eta(t)
inline double kernel_eval(const SmoothingKernel& kernel, const KernelScale& scale, double t) {
    return kernel.eval(t / scale.eta) / scale.eta;
}

// Psi(z) = int psi(t) e^{zt} dt. |Re z| <= 700 guards exp overflow.
inline std::complex<double> laplace_psi(const SmoothingKernel& kernel, std::complex<double> z) {
    if (std::abs(z.real()) > 700.0)
        throw numeric_guard_error("laplace_psi: |Re z| exceeds overflow guard 700");
    const double re = integrate_ts_oscillatory([&](double t) {
        return kernel.eval(t) * std::exp(z.real() * t) * std::cos(z.imag() * t);
    }, -1.0, 1.0, z.imag());
    const double im = integrate_ts_oscillatory([&](double t) {
        return kernel.eval(t) * std::exp(z.real() * t) * std::sin(z.imag() * t);
    }, -1.0, 1.0, z.imag());
    return {re, im};
}

struct SmoothingConstant {
    double s;
    double eta;
    std::complex<double> value;
};

// c_{s,eta} via the Psi formula.
inline SmoothingConstant c_s_eta(const SmoothingKernel& kernel, const KernelScale& scale, double s) {
    const std::complex<double> one_is{1.0, s};
    const std::complex<double> psi = laplace_psi(kernel, scale.eta * one_is);
    return {s, scale.eta, psi / one_is};
}

// c_{s,eta} by direct quadrature of psi_eta(t) e^{t(1+is)} / (1+is) over
// [-eta, eta]; the independent route for agreement checks.
inline SmoothingConstant c_s_eta_quadrature(const SmoothingKernel& kernel, const KernelScale& scale,
                                            double s) {
    const std::complex<double> one_is{1.0, s};
    const double re = integrate_ts_oscillatory([&](double t) {
        return kernel_eval(kernel, scale, t) * std::exp(t) * std::cos(s * t);
    }, -scale.eta, scale.eta, s);
    const double im = integrate_ts_oscillatory([&](double t) {
        return kernel_eval(kernel, scale, t) * std::exp(t) * std::sin(s * t);
    }, -scale.eta, scale.eta, s);
    return {s, scale.eta, std::complex<double>{re, im} / one_is};
}

namespace detail {

// sin(u)/u with series fallback near the removable singularity.
inline double sinc(double u) {
    if (std::abs(u) < 1e-4) {
        const double u2 = u * u;
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    }
    return std::sin(u) / u;
}

// (1 - cos u)/u with series fallback.
inline double one_minus_cos_over(double u) {
    if (std::abs(u) < 1e-4) {
        const double u2 = u * u;
        return u * (0.5 - u2 / 24.0);
    }
    return (1.0 - std::cos(u)) / u;
}

} // namespace detail

enum class WindowKind { g, h };

// Fourier transforms of the smoothed windows at frequency s:
//   int g_{y,eta}(x) e^{isx} dx = Psi(i eta s) * 2 sin(sy)/s
//   int h_{y,eta}(x) e^{isx} dx = Psi(i eta s) * 2 (cos(sy)-1)/(is)
// The removable singularity at s = 0 is handled by an explicit series branch.
inline std::complex<double> window_transform(WindowKind kind, const SmoothingKernel& kernel,
                                             const KernelScale& scale, double y, double s) {
    if (!(y > scale.eta)) throw precondition_error("window_transform requires y > eta");
    const double psi_is = kernel.fourier_cos(scale.eta * s);
    const double u = s * y;
    if (kind == WindowKind::g) return {2.0 * psi_is * y * detail::sinc(u), 0.0};
    return {0.0, 2.0 * psi_is * y * detail::one_minus_cos_over(u)};
}

// Pointwise values of the smoothed windows, through the kernel CDF.
inline double window_g(const SmoothingKernel& kernel, const KernelScale& scale, double y, double x) {
    if (std::abs(x) >= y + scale.eta) return 0.0;
    if (std::abs(x) <= y - scale.eta) return 1.0;
    return kernel.cdf((x + y) / scale.eta) - kernel.cdf((x - y) / scale.eta);
}

inline double window_h(const SmoothingKernel& kernel, const KernelScale& scale, double y, double x) {
    if (std::abs(x) >= y + scale.eta) return 0.0;
    return 2.0 * kernel.cdf(x / scale.eta) - kernel.cdf((x - y) / scale.eta)
         - kernel.cdf((x + y) / scale.eta);
}

// Holonomy test function, held as its finite table of circle Fourier
// coefficients. Bias mode requires fhat(0) = 0.
class HolonomyTestFunction {
public:
    HolonomyTestFunction() = default;

    static HolonomyTestFunction cosine(int k) {
        HolonomyTestFunction f;
        f.coeffs_[k] = {0.5, 0.0};
        f.coeffs_[-k] = {0.5, 0.0};
        f.real_valued_ = true;
        return f;
    }

    static HolonomyTestFunction sine(int k) {
        HolonomyTestFunction f;
        f.coeffs_[k] = {0.0, -0.5};
        f.coeffs_[-k] = {0.0, 0.5};
        f.real_valued_ = true;
        return f;
    }

    static HolonomyTestFunction from_coeffs(std::map<int, std::complex<double>> coeffs) {
        HolonomyTestFunction f;
        f.coeffs_ = std::move(coeffs);
        f.real_valued_ = f.check_real();
        return f;
    }

    std::complex<double> coeff(int p) const {
        const auto it = coeffs_.find(p);
        return it == coeffs_.end() ? std::complex<double>{0.0, 0.0} : it->second;
    }

    const std::map<int, std::complex<double>>& coeffs() const { return coeffs_; }
    bool real_valued() const { return real_valued_; }

    double evaluate(double theta) const {
        std::complex<double> acc{0.0, 0.0};
        for (const auto& [p, c] : coeffs_)
            acc += c * std::exp(std::complex<double>{0.0, p * theta});
        return acc.real();
    }

    void require_bias_mode() const {
        if (std::abs(coeff(0)) != 0.0)
            throw precondition_error("bias mode requires fhat(0) = 0");
        if (!real_valued_)
            throw precondition_error("bias mode requires a real-valued test function");
    }

    HolonomyTestFunction negated() const {
        HolonomyTestFunction f = *this;
        for (auto& [p, c] : f.coeffs_) c = -c;
        return f;
    }

private:
    bool check_real() const {
        for (const auto& [p, c] : coeffs_) {
            if (std::abs(coeff(-p) - std::conj(c)) > 1e-14 * (1.0 + std::abs(c))) return false;
        }
        return true;
    }

    std::map<int, std::complex<double>> coeffs_;
    bool real_valued_ = true;
};

// fhat(p) for a closed-form circle function.
inline std::complex<double> fourier_coeff(const std::function<double(double)>& f, int p) {
    const auto val = periodic_fourier_integral([&](double theta) {
        return f(theta) * std::exp(std::complex<double>{0.0, -p * theta});
    }, kTwoPi);
    return val / kTwoPi;
}

inline std::complex<double> fourier_coeff(const HolonomyTestFunction& f, int p) {
    return f.coeff(p);
}

// "cos:k" or "sin:k" specs; coefficient tables arrive as JSON text through
// test_function_from_json below.
inline HolonomyTestFunction parse_test_function_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        const std::string head = spec.substr(0, colon);
        int k = 0;
        try {
            k = std::stoi(spec.substr(colon + 1));
        } catch (const std::exception&) {
            throw parse_error("bad test function spec: " + spec);
        }
        if (k < 1) throw parse_error("test function spec needs k >= 1: " + spec);
        if (head == "cos") return HolonomyTestFunction::cosine(k);
        if (head == "sin") return HolonomyTestFunction::sine(k);
    }
    throw parse_error("unknown test function spec (want cos:k, sin:k, or a .json table): " + spec);
}

} // namespace holobias
