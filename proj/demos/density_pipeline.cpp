// Minimal end-to-end use of the library: amplitudes from a declared-independent
// catalog, limiting density by inversion, and a Monte Carlo cross-check.

#include <cstdio>

#include "holobias/holobias.hpp"

using namespace holobias;

int main() {
    const auto cat = load_catalog_json(R"({
        "independence_declared": true,
        "lines": [{"s": 1.0, "p": 1, "mult": 1},
                  {"s": 1.4142135623730951, "p": 1, "mult": 1},
                  {"s": 1.7320508075688772, "p": 1, "mult": 1},
                  {"s": 2.23606797749979, "p": 1, "mult": 1},
                  {"s": 2.6457513110645907, "p": 1, "mult": 1}]
    })");
    const auto kernel = SmoothingKernel::make("bump");
    const KernelScale scale(0.1, 0.1);
    const auto f = HolonomyTestFunction::cosine(1);

    const auto set = build_amplitude_set(cat, f, kernel, scale);
    std::printf("center b = %.6f, amplitudes:", set.center);
    for (const auto& a : set.amps) std::printf(" %.4f", a.a);
    std::printf("\n");

    const auto density = density_inversion(set, default_density_grid(set));
    std::printf("inversion: mass %.6f mean %.6f P(X>0) %.4f\n", density.mass, density.mean,
                density.positive_probability);

    const auto lat = relation_lattice(cat);
    const auto mc = sample_distribution(set, lat, 1000000, 42);
    std::printf("sampling:  mean %.6f P(X>0) %.4f support [%.4f, %.4f]\n", mc.mean,
                mc.positive_probability, mc.sample_min, mc.sample_max);
    return 0;
}
