#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "holobias/distribution.hpp"
#include "holobias/relations.hpp"
#include "holobias/sampling.hpp"
#include "oracles.hpp"

using namespace holobias;
using Catch::Matchers::WithinAbs;

namespace {
const SmoothingKernel& bump() {
    static const SmoothingKernel k = SmoothingKernel::make("bump");
    return k;
}
AmplitudeSet direct_set(std::vector<double> amps, double center) {
    AmplitudeSet s;
    for (std::size_t i = 0; i < amps.size(); ++i) s.amps.push_back({amps[i], 0.0, i, 1.0 + i, 1, 1});
    s.center = center;
    s.n_coords = amps.size();
    return s;
}
RelationLattice identity_lattice(std::size_t n) {
    RelationLattice lat;
    lat.n = n;
    lat.r = n;
    lat.subtorus_basis.assign(n, std::vector<BigInt>(n, 0));
    for (std::size_t i = 0; i < n; ++i) lat.subtorus_basis[i][i] = 1;
    return lat;
}
} // namespace

TEST_CASE("bessel J0") {
    CHECK(bessel_j0(0.0) == 1.0);
    CHECK_THAT(bessel_j0(1.0), WithinAbs(0.7651976865579666, 1e-12));
    CHECK_THAT(bessel_j0(1.0), WithinAbs(oracle::j0_series(1.0), 1e-12));
    CHECK_THAT(bessel_j0(20.0), WithinAbs(oracle::j0_series(20.0), 1e-11));
    for (double x = 0.0; x <= 20.0; x += 0.37)
        CHECK_THAT(bessel_j0(x), WithinAbs(oracle::j0_series(x), 1e-12));
    CHECK(bessel_j0(-7.3) == bessel_j0(7.3));
    CHECK_THROWS_AS(bessel_j0(2e8), numeric_guard_error);
}

TEST_CASE("characteristic function") {
    SECTION("normalization and first zero") {
        const auto set = direct_set({1.0}, 0.0);
        CHECK(char_fn(set, 0.0) == std::complex<double>{1.0, 0.0});
        const double j01 = 2.404825557695773; // first zero of J0
        CHECK_THAT(std::abs(oracle::j0_series(j01)), WithinAbs(0.0, 1e-10));
        CHECK_THAT(std::abs(char_fn(set, j01)), WithinAbs(0.0, 1e-10));
    }
    SECTION("translation by the center") {
        const auto centered = direct_set({0.7, 0.4}, 0.0);
        const auto shifted = direct_set({0.7, 0.4}, -1.9);
        for (double xi : {0.3, 1.7, 5.0}) {
            const auto expect = std::exp(std::complex<double>{0.0, -xi * -1.9}) * char_fn(centered, xi);
            CHECK_THAT(std::abs(char_fn(shifted, xi) - expect), WithinAbs(0.0, 1e-15));
        }
    }
    SECTION("modulus bound and conjugate symmetry") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> amp(0.0, 3.0), freq(-40.0, 40.0);
        for (int trial = 0; trial < 200; ++trial) {
            const auto set = direct_set({amp(rng), amp(rng), amp(rng)}, amp(rng) - 1.5);
            const double xi = freq(rng);
            CHECK(std::abs(char_fn(set, xi)) <= 1.0 + 1e-14);
            CHECK_THAT(std::abs(char_fn(set, -xi) - std::conj(char_fn(set, xi))),
                       WithinAbs(0.0, 1e-14));
        }
    }
}

TEST_CASE("arcsine reference law") {
    CHECK_THAT(arcsine_reference(1.0, 0.0), WithinAbs(1.0 / std::numbers::pi, 1e-15));
    CHECK_THROWS_AS(arcsine_reference(1.0, 1.0), precondition_error);
    CHECK_THROWS_AS(arcsine_reference(0.0, 0.0), precondition_error);

    // unit mass via the endpoint substitution x = a sin u
    const double a = 1.7;
    const double mass = oracle::gl5_composite(
        [&](double u) { return arcsine_reference(a, a * std::sin(u)) * a * std::cos(u); },
        -std::numbers::pi / 2.0, std::numbers::pi / 2.0, 64);
    CHECK_THAT(mass, WithinAbs(1.0, 1e-12));

    // characteristic function of the arcsine law is J0(a xi)
    for (double xi : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double cf = oracle::gl5_composite(
            [&](double u) { return std::cos(xi * a * std::sin(u)) / std::numbers::pi; },
            -std::numbers::pi / 2.0, std::numbers::pi / 2.0, 256);
        CHECK_THAT(cf, WithinAbs(bessel_j0(a * xi), 1e-10));
    }
}

TEST_CASE("amplitude sets from catalogs") {
    const KernelScale scale(0.1, 0.1);
    const auto f = HolonomyTestFunction::cosine(1);
    const auto cat = load_catalog_json(R"({"independence_declared": true,
        "lines": [{"s": 3.0, "p": 1, "mult": 2}, {"s": 1.0, "p": 1, "mult": 1},
                  {"s": 2.0, "p": 1, "mult": 1}],
        "zero_lines": [{"p": 1, "mult": 2}]})");
    const auto set = build_amplitude_set(cat, f, bump(), scale);
    REQUIRE(set.amps.size() == 3);
    // ordering by max(|s|, |p|)
    CHECK(set.amps[0].s == 1.0);
    CHECK(set.amps[1].s == 2.0);
    CHECK(set.amps[2].s == 3.0);
    // coordinates follow catalog line order (sorted by s on load)
    CHECK(set.amps[0].coord == 0);
    CHECK(set.amps[1].coord == 1);
    CHECK(set.amps[2].coord == 2);
    CHECK(set.n_coords == 3);
    for (const auto& a : set.amps) {
        const auto c = c_s_eta(bump(), scale, a.s).value;
        const auto w = f.coeff(-1) * c;
        CHECK_THAT(a.a, WithinAbs(2.0 * static_cast<double>(a.mult) * std::abs(w), 1e-15));
        CHECK_THAT(a.phase, WithinAbs(std::arg(w), 1e-15));
    }
    CHECK(set.center == bias_constant(cat, f, bump(), scale).value);
    CHECK(set.center == 0.0); // the no-bias zero line cancels the trivial term

    const auto dup = load_catalog_json(R"({"independence_declared": true,
        "lines": [{"s": 2.0, "p": 1, "mult": 1}, {"s": 2.0, "p": 2, "mult": 1}]})");
    const auto shared = build_amplitude_set(dup, HolonomyTestFunction::cosine(1), bump(), scale,
                                            CoordinateMode::share_equal_s);
    CHECK(shared.n_coords == 1);
    CHECK(shared.amps[0].coord == shared.amps[1].coord);
    const auto unshared = build_amplitude_set(dup, HolonomyTestFunction::cosine(1), bump(), scale);
    CHECK(unshared.n_coords == 2);
}

TEST_CASE("density inversion") {
    SECTION("three equal amplitudes") {
        // slowest admissible amplitude decay (xi^{-3/2}); the looser envelope
        // threshold keeps the cutoff frequency manageable
        const auto set = direct_set({1.0, 1.0, 1.0}, 0.0);
        const auto d = density_inversion(set, default_density_grid(set), 1e-6);
        CHECK_THAT(d.mass, WithinAbs(1.0, 1e-3));
        CHECK_THAT(d.mean, WithinAbs(0.0, 1e-3));
        CHECK(d.symmetry_defect < 1e-6);
        CHECK_THAT(d.positive_probability, WithinAbs(0.5, 1e-3));
        // raw ringing scales with the envelope threshold passed above
        CHECK(d.min_raw_density > -1e-5);
        for (double v : d.density) CHECK(v >= 0.0);
        // the unit-mass constant recovers the half-line transform normalization
        // up to the looser envelope truncation used here
        CHECK_THAT(d.fitted_constant * std::numbers::pi, WithinAbs(1.0, 1e-4));
    }
    SECTION("preconditions") {
        const auto two = direct_set({1.0, 0.5}, 0.0);
        CHECK_THROWS_AS(density_inversion(two, default_density_grid(two)), precondition_error);
        CHECK_THROWS_MATCHES(density_inversion(two, default_density_grid(two)), precondition_error,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("sample_distribution")));
        const auto set = direct_set({1.0, 1.0, 1.0}, 0.0);
        std::vector<double> narrow{-1.0, 0.0, 1.0};
        CHECK_THROWS_AS(density_inversion(set, narrow), precondition_error);
    }
    SECTION("inversion matches sampling, including an off-center case") {
        const auto set = direct_set({0.9, 0.7, 0.5, 0.35}, -1.25);
        const auto d = density_inversion(set, default_density_grid(set, 601));
        CHECK_THAT(d.mean, WithinAbs(-1.25, 1e-3));
        // at the default envelope threshold the fitted constant pins down the
        // half-line transform normalization sharply
        CHECK_THAT(d.fitted_constant * std::numbers::pi, WithinAbs(1.0, 1e-5));
        const auto samples = sample_values(set, identity_lattice(4), 400000, 99);
        double l1 = 0.0;
        const std::size_t bins = 100;
        const double lo = d.support_lo, w = (d.support_hi - d.support_lo) / bins;
        std::vector<double> hist(bins, 0.0);
        for (double v : samples) {
            auto bi = static_cast<std::size_t>((v - lo) / w);
            if (bi >= bins) bi = bins - 1;
            hist[bi] += 1.0;
        }
        for (std::size_t bi = 0; bi < bins; ++bi) {
            const double x = lo + (bi + 0.5) * w;
            double p = 0.0;
            for (std::size_t gi = 0; gi + 1 < d.grid.size(); ++gi)
                if (d.grid[gi] <= x && x < d.grid[gi + 1]) {
                    const double t = (x - d.grid[gi]) / (d.grid[gi + 1] - d.grid[gi]);
                    p = d.density[gi] + t * (d.density[gi + 1] - d.density[gi]);
                }
            l1 += std::abs(hist[bi] / (samples.size() * w) - p) * w;
        }
        CHECK(l1 < 0.03);
    }
}
