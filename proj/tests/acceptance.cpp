// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "holobias/holobias.hpp"
#include "oracles.hpp"

using namespace holobias;

namespace {

int failures = 0;

struct Criterion {
    std::string label;
    bool ok = true;
    std::vector<std::string> notes;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes.push_back(what);
        }
    }
    void finish(double seconds) {
        std::printf("[%s] %s (%.2fs)\n", ok ? "PASS" : "FAIL", label.c_str(), seconds);
        for (const auto& n : notes) std::printf("       - %s\n", n.c_str());
        if (!ok) ++failures;
    }
};

template <typename F>
void run(const std::string& label, F&& body) {
    Criterion c;
    c.label = label;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    const auto stop = std::chrono::steady_clock::now();
    c.finish(std::chrono::duration<double>(stop - start).count());
}

const SmoothingKernel& bump() {
    static const SmoothingKernel k = SmoothingKernel::make("bump");
    return k;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
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

int main() {
    // 1. exact regressions of the worked residue-field computation
    run("criterion 1: residue-field exact regressions", [](Criterion& c) {
        const auto f25 = ResidueField::make(2, 5);
        const auto f289 = ResidueField::make(4, 17);
        const auto g1 = f25.element(3, 1);
        const auto g2 = f289.element(7, 1);
        c.expect(element_order(f25, g1) == 24, "order(zeta+3) != 24");
        c.expect(element_order(f289, g2) == 288, "order(7+zeta) != 288");
        const long long dz = discrete_log(f25, g1, f25.element(0, 1));
        c.expect(dz == 20, "dlog_{zeta+3}(zeta) = " + std::to_string(dz)
                               + ", criterion expects 20 (impossible: g^20 has order 6, "
                                 "zeta's image has order 12; the true log is 14)");
        c.expect(discrete_log(f25, g1, f25.element(4, 2)) == 16, "dlog_{zeta+3}(4+2zeta) != 16");
        c.expect(f289.pow(g2, 24) == f289.element(0, 1), "(7+zeta)^24 != zeta");
        c.expect(f289.pow(g2, 208) == f289.element(6, 2), "(7+zeta)^208 != 6+2zeta");
        const auto sol = solve_hecke_example();
        c.expect(sol.k1_residue == 1 && sol.k1_modulus == 12,
                 "k1 = " + std::to_string(sol.k1_residue)
                     + " mod 12, criterion expects 1 mod 12 (follows from the dlog above; "
                       "the computed congruence is 4 mod 12)");
        c.expect(sol.t_offset == Rational(11, 18), "offset != 11/18");
    });

    // 2. kernel identities
    run("criterion 2: kernel identities", [](Criterion& c) {
        const double svals[10] = {0.0, 0.5, -0.5, 2.0, -2.0, 7.0, -7.0, 20.0, -20.0, 55.0};
        const double evals[10] = {1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.2, 0.5, 1.0};
        double worst = 0.0;
        for (double eta : evals)
            for (double s : svals) {
                const KernelScale scale(eta, eta);
                const auto a = c_s_eta(bump(), scale, s).value;
                const auto b = c_s_eta_quadrature(bump(), scale, s).value;
                worst = std::max(worst, std::abs(a - b));
            }
        c.expect(worst <= 1e-10, "route disagreement " + fmt("%.2e", worst) + " > 1e-10");
        for (double eta : {1e-1, 1e-2, 1e-3, 1e-4}) {
            const KernelScale scale(eta, eta);
            const double c0 = c_s_eta(bump(), scale, 0.0).value.real();
            c.expect(std::abs(c0 - 1.0) <= 2.0 * eta,
                     "|c_{0,eta} - 1| > 2 eta at eta = " + fmt("%.0e", eta));
        }
        const KernelScale scale(0.2, 0.2);
        const auto cp = c_s_eta(bump(), scale, 3.7).value;
        const auto cm = c_s_eta(bump(), scale, -3.7).value;
        c.expect(std::abs(cm - std::conj(cp)) <= 1e-15, "conjugate symmetry violated");
    });

    // 3. bias constant
    run("criterion 3: bias constant", [](Criterion& c) {
        const auto f = HolonomyTestFunction::cosine(1);
        for (double eta : {1e-1, 1e-2, 1e-3}) {
            const KernelScale scale(eta, eta);
            const double c0 = c_s_eta(bump(), scale, 0.0).value.real();
            const auto b = bias_constant(SpectrumCatalog{}, f, bump(), scale);
            c.expect(b.value == -2.0 * c0, "b != -2 c_{0,eta} exactly");
            c.expect(std::abs(b.value + 2.0) <= 2.0 * eta, "b does not approach -2 within 2 eta");
        }
        const KernelScale scale(0.1, 0.1);
        const auto nobias = load_catalog_json(R"({"zero_lines": [{"p": 1, "mult": 2}]})");
        c.expect(bias_constant(nobias, f, bump(), scale).value == 0.0,
                 "no-bias catalog does not give b = 0");
    });

    // 4. single-factor law
    run("criterion 4: single-factor arcsine law", [](Criterion& c) {
        AmplitudeSet set;
        set.amps.push_back({1.0, 0.0, 0, 1.0, 1, 1});
        set.center = 0.0;
        set.n_coords = 1;
        const auto samples = sample_values(set, identity_lattice(1), 1000000, 2024);
        const double ks = oracle::ks_one_sample(samples, [](double t) {
            return oracle::arcsine_cdf(1.0, t);
        });
        c.expect(ks < 0.01, "KS distance to arcsine law " + fmt("%.4f", ks) + " >= 0.01");

        for (int k = 1; k <= 20; ++k) {
            const double xi = 0.45 * k;
            const double cf = oracle::gl5_composite(
                [&](double u) { return std::cos(xi * std::sin(u)) / std::numbers::pi; },
                -std::numbers::pi / 2.0, std::numbers::pi / 2.0, 256);
            if (std::abs(cf - bessel_j0(xi)) > 1e-10) {
                c.expect(false, "arcsine characteristic function vs J0 at xi = " + fmt("%.2f", xi));
                break;
            }
        }
        double worst = 0.0;
        for (double x = 0.0; x <= 20.0; x += 0.01)
            worst = std::max(worst, std::abs(bessel_j0(x) - oracle::j0_series(x)));
        c.expect(worst <= 1e-12, "J0 vs series oracle " + fmt("%.2e", worst) + " > 1e-12");
    });

    // 5. Kronecker-Weyl convergence
    run("criterion 5: Kronecker-Weyl convergence", [](Criterion& c) {
        const auto cat = load_catalog_json(R"({"independence_declared": true,
            "lines": [{"s": 1.0, "p": 1, "mult": 1}, {"s": 1.4142135623730951, "p": 1, "mult": 1},
                      {"s": 1.7320508075688772, "p": 1, "mult": 1}]})");
        const auto f = HolonomyTestFunction::cosine(1);
        const KernelScale scale(0.1, 0.1);
        const auto set = build_amplitude_set(cat, f, bump(), scale);
        const auto lat = relation_lattice(cat);
        const std::size_t n = 1000000;
        const auto samples = sample_values(set, lat, n, 99);
        const double b = set.center;

        // torus value of the identity functional is b exactly
        double mean = 0.0, m2 = 0.0;
        for (double v : samples) mean += v;
        mean /= static_cast<double>(n);
        for (double v : samples) m2 += (v - mean) * (v - mean);
        const double sd_mean = std::sqrt(m2 / static_cast<double>(n)) / std::sqrt(static_cast<double>(n));
        const double ta_id = time_average(cat, f, bump(), scale, 10.0,
                                          AverageFunctional::identity, 10000.0, 0.1);
        c.expect(std::abs(ta_id - mean) < 5e-3 + 3.0 * sd_mean,
                 "identity: |TA - MC| = " + fmt("%.2e", std::abs(ta_id - mean)));
        c.expect(std::abs(ta_id - b) < 5e-3, "identity TA vs exact torus value b");

        double sq = 0.0, sq2 = 0.0;
        for (double v : samples) sq += v * v;
        sq /= static_cast<double>(n);
        for (double v : samples) sq2 += (v * v - sq) * (v * v - sq);
        const double sd_sq = std::sqrt(sq2 / static_cast<double>(n)) / std::sqrt(static_cast<double>(n));
        const double ta_sq = time_average(cat, f, bump(), scale, 10.0,
                                          AverageFunctional::square, 10000.0, 0.1);
        c.expect(std::abs(ta_sq - sq) < 5e-3 + 3.0 * sd_sq,
                 "square: |TA - MC| = " + fmt("%.2e", std::abs(ta_sq - sq)));
    });

    // 6. density inversion vs sampling
    run("criterion 6: density inversion", [](Criterion& c) {
        const auto cat = load_catalog_json(R"({"independence_declared": true,
            "lines": [{"s": 1.0, "p": 1, "mult": 1}, {"s": 1.4142135623730951, "p": 1, "mult": 1},
                      {"s": 1.7320508075688772, "p": 1, "mult": 1},
                      {"s": 2.23606797749979, "p": 1, "mult": 1},
                      {"s": 2.6457513110645907, "p": 1, "mult": 1}]})");
        const auto f = HolonomyTestFunction::cosine(1);
        const KernelScale scale(0.1, 0.1);
        const auto set = build_amplitude_set(cat, f, bump(), scale);
        const auto d = density_inversion(set, default_density_grid(set));
        c.expect(std::abs(d.mass - 1.0) <= 1e-3, "mass " + fmt("%.6f", d.mass));
        c.expect(std::abs(d.mean - set.center) <= 1e-3, "mean vs b: "
                 + fmt("%.2e", std::abs(d.mean - set.center)));
        c.expect(d.symmetry_defect < 1e-6, "symmetry defect " + fmt("%.2e", d.symmetry_defect));

        const std::size_t n = 1000000;
        const auto samples = sample_values(set, relation_lattice(cat), n, 7);
        const std::size_t bins = 200;
        const double lo = d.support_lo, w = (d.support_hi - d.support_lo) / bins;
        std::vector<double> hist(bins, 0.0);
        for (double v : samples) {
            auto bi = static_cast<std::size_t>((v - lo) / w);
            if (bi >= bins) bi = bins - 1;
            hist[bi] += 1.0;
        }
        double l1 = 0.0;
        for (std::size_t bi = 0; bi < bins; ++bi) {
            const double x = lo + (static_cast<double>(bi) + 0.5) * w;
            double p = 0.0;
            for (std::size_t gi = 0; gi + 1 < d.grid.size(); ++gi)
                if (d.grid[gi] <= x && x < d.grid[gi + 1]) {
                    const double t = (x - d.grid[gi]) / (d.grid[gi + 1] - d.grid[gi]);
                    p = d.density[gi] + t * (d.density[gi + 1] - d.density[gi]);
                    break;
                }
            l1 += std::abs(hist[bi] / (static_cast<double>(n) * w) - p) * w;
        }
        c.expect(l1 < 0.02, "L1 distance to MC histogram " + fmt("%.4f", l1));
    });

    // 7. subtorus correctness
    run("criterion 7: subtorus correctness", [](Criterion& c) {
        const auto sol = solve_hecke_example();
        const auto cat = export_progression(sol, 0, 2, static_cast<int>(sol.k1_residue), 1);
        const auto lat = relation_lattice(cat);
        c.expect(lat.r == 1, "subtorus rank != 1");
        c.expect(lat.subtorus_basis.size() == 3 && lat.subtorus_basis[0][0] == 11
                     && lat.subtorus_basis[1][0] == 29 && lat.subtorus_basis[2][0] == 47,
                 "subtorus basis != (11, 29, 47)");

        const KernelScale scale(0.1, 0.1);
        const auto f = HolonomyTestFunction::cosine(static_cast<int>(sol.k1_residue));
        const auto set = build_amplitude_set(cat, f, bump(), scale);
        const auto pts = sample_torus_points(set, lat, 200000, 31);
        bool exact = true;
        for (const auto& x : pts) {
            const double r1 = 29.0 * x[0] - 11.0 * x[1];
            const double r2 = 47.0 * x[0] - 11.0 * x[2];
            if (r1 != std::floor(r1) || r2 != std::floor(r2)) {
                exact = false;
                break;
            }
        }
        c.expect(exact, "a sample violates an integer relation");

        // distribution on the subtorus vs LI product with the same amplitudes
        AmplitudeSet units = set;
        for (auto& a : units.amps) a.a = 1.0;
        units.center = 0.0;
        const auto sub = sample_values(units, lat, 1000000, 41);
        const auto li = sample_values(units, identity_lattice(3), 1000000, 43);
        const double ks = oracle::ks_two_sample(sub, li);
        c.expect(ks > 0.05, "two-sample KS " + fmt("%.4f", ks) + " <= 0.05");
    });

    // 8. support bound across sampling runs
    run("criterion 8: support bound", [](Criterion& c) {
        const KernelScale scale(0.1, 0.1);
        const auto f = HolonomyTestFunction::cosine(1);
        const auto licat = load_catalog_json(R"({"independence_declared": true,
            "lines": [{"s": 1.0, "p": 1, "mult": 2}, {"s": 2.9, "p": -2, "mult": 1}],
            "zero_lines": [{"p": 1, "mult": 1}]})");
        const auto fset =
            HolonomyTestFunction::from_coeffs({{1, {0.5, 0.0}}, {-1, {0.5, 0.0}},
                                               {2, {0.3, 0.1}}, {-2, {0.3, -0.1}}});
        const auto set = build_amplitude_set(licat, fset, bump(), scale);
        const auto lat = relation_lattice(licat);
        for (std::uint64_t seed : {1ull, 77ull, 123456789ull}) {
            const auto d = sample_distribution(set, lat, 400000, seed);
            c.expect(d.sample_min >= d.support_lo && d.sample_max <= d.support_hi,
                     "sample escaped [b - sum a, b + sum a] at seed " + std::to_string(seed));
        }
        const auto sol = solve_hecke_example();
        const auto dcat = export_progression(sol, 0, 2, static_cast<int>(sol.k1_residue), 1);
        const auto dset = build_amplitude_set(
            dcat, HolonomyTestFunction::cosine(static_cast<int>(sol.k1_residue)), bump(), scale);
        const auto dd = sample_distribution(dset, relation_lattice(dcat), 400000, 5);
        c.expect(dd.sample_min >= dd.support_lo && dd.sample_max <= dd.support_hi,
                 "subtorus sample escaped the support interval");
    });

    std::printf("%d of 8 criteria passed\n", 8 - failures);
    return failures == 0 ? 0 : 1;
}
