#pragma once

// Kronecker-Weyl sampling of the limiting distribution and long-run time
// averages of the truncated signal.
//
// The sampler is counter-based (Philox4x32-10) so any (sample, coordinate)
// pair is addressable without sequential state: results are reproducible for
// a fixed seed, independent of chunking and thread count. Uniform variates
// are 32-bit dyadic rationals, which keeps the subtorus congruences
// relation . (M t mod 1) exact in double arithmetic for the integer matrices
// this project produces.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <future>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "bias.hpp"
#include "distribution.hpp"
#include "errors.hpp"
#include "relations.hpp"

namespace holobias {

namespace detail {

struct Philox4x32 {
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::uint64_t key, std::uint64_t ctr_hi,
                                              std::uint64_t ctr_lo) {
        std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo);
        std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo >> 32);
        std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi);
        std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi >> 32);
        std::uint32_t k0 = static_cast<std::uint32_t>(key);
        std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c0;
            const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c2;
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            c0 = hi1 ^ c1 ^ k0;
            c1 = lo1;
            c2 = hi0 ^ c3 ^ k1;
            c3 = lo0;
            k0 += kW0;
            k1 += kW1;
        }
        return {c0, c1, c2, c3};
    }
};

// Uniform dyadic variate in [0,1) for (sample index, coordinate).
inline double philox_unit(std::uint64_t seed, std::uint64_t sample, std::uint32_t dim) {
    const auto blk = Philox4x32::block(seed, sample, dim >> 2);
    return static_cast<double>(blk[dim & 3u]) * 0x1p-32;
}

inline double frac(double v) { return v - std::floor(v); }

} // namespace detail

struct SampleOptions {
    std::size_t bins = 200;
    bool qmc = false;       // rank-1 lattice with a random dyadic shift
    unsigned threads = 0;   // 0: hardware concurrency; result is thread-count invariant
};

namespace detail {

// Shared per-run tables, precomputed once.
struct SamplerPlan {
    std::vector<double> a;
    std::vector<double> phase;
    std::vector<std::size_t> coord;
    std::vector<std::vector<double>> M; // n_coords rows, r columns
    std::size_t r = 0;
    double center = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    // rank-1 lattice data
    bool qmc = false;
    std::uint64_t n_total = 0;
    std::vector<std::uint64_t> z;
    std::vector<double> shift;

    SamplerPlan(const AmplitudeSet& set, const RelationLattice& lat, std::uint64_t n,
                std::uint64_t seed, bool use_qmc) {
        if (lat.n != set.n_coords)
            throw precondition_error("sample_distribution: lattice dimension does not match coordinates");
        r = lat.r;
        M.assign(lat.n, std::vector<double>(r, 0.0));
        for (std::size_t i = 0; i < lat.n; ++i)
            for (std::size_t c = 0; c < r; ++c) M[i][c] = to_double(lat.subtorus_basis[i][c]);
        for (const auto& amp : set.amps) {
            a.push_back(amp.a);
            phase.push_back(amp.phase);
            coord.push_back(amp.coord);
        }
        center = set.center;
        double asum = 0.0;
        for (double v : a) asum += v; // same fold order as the sample evaluation
        lo = center - asum;
        hi = center + asum;
        qmc = use_qmc;
        n_total = n;
        if (qmc) {
            // Korobov generating vector z = (1, g, g^2, ...) mod n with g taken
            // from the golden section and forced coprime to n.
            std::uint64_t g = static_cast<std::uint64_t>(0.6180339887498949 * static_cast<double>(n));
            if (g < 2) g = 1;
            while (n > 1 && std::gcd(g, n_total) != 1) ++g;
            z.assign(std::max<std::size_t>(r, 1), 1);
            for (std::size_t d = 1; d < z.size(); ++d)
                z[d] = static_cast<std::uint64_t>((static_cast<unsigned __int128>(z[d - 1]) * g) % n_total);
            for (std::size_t d = 0; d < z.size(); ++d)
                shift.push_back(philox_unit(seed, ~static_cast<std::uint64_t>(0) - d, 0));
        }
    }

    double torus_coordinate(const std::vector<double>& t, std::size_t c) const {
        double v = 0.0;
        for (std::size_t k = 0; k < r; ++k) v += M[c][k] * t[k];
        return frac(v);
    }

    void unit_point(std::uint64_t seed, std::uint64_t i, std::vector<double>& t) const {
        if (qmc) {
            for (std::size_t d = 0; d < r; ++d) {
                const std::uint64_t q = static_cast<std::uint64_t>(
                    (static_cast<unsigned __int128>(i) * z[d]) % n_total);
                t[d] = frac(static_cast<double>(q) / static_cast<double>(n_total) + shift[d]);
            }
        } else {
            // one Philox block covers four coordinates; same addressing as
            // philox_unit(seed, i, d)
            for (std::size_t base = 0; base < r; base += 4) {
                const auto blk = Philox4x32::block(seed, i, base >> 2);
                const std::size_t hi = std::min(r, base + 4);
                for (std::size_t d = base; d < hi; ++d)
                    t[d] = static_cast<double>(blk[d & 3u]) * 0x1p-32;
            }
        }
    }

    double evaluate(std::uint64_t seed, std::uint64_t i, std::vector<double>& t,
                    std::vector<double>& x) const {
        unit_point(seed, i, t);
        for (std::size_t c = 0; c < M.size(); ++c) x[c] = torus_coordinate(t, c);
        double acc = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j)
            acc += a[j] * std::cos(kTwoPi * x[coord[j]] + phase[j]);
        return center + acc;
    }
};

} // namespace detail

// Raw sample values; identical to what sample_distribution histograms.
inline std::vector<double> sample_values(const AmplitudeSet& set, const RelationLattice& lat,
                                         std::size_t n_samples, std::uint64_t seed,
                                         bool qmc = false) {
    detail::SamplerPlan plan(set, lat, n_samples, seed, qmc);
    std::vector<double> out(n_samples);
    std::vector<double> t(plan.r), x(plan.M.size());
    for (std::size_t i = 0; i < n_samples; ++i) out[i] = plan.evaluate(seed, i, t, x);
    return out;
}

// Torus points only (for exact relation checks).
inline std::vector<std::vector<double>> sample_torus_points(const AmplitudeSet& set,
                                                            const RelationLattice& lat,
                                                            std::size_t n_samples,
                                                            std::uint64_t seed) {
    detail::SamplerPlan plan(set, lat, n_samples, seed, false);
    std::vector<std::vector<double>> pts(n_samples, std::vector<double>(plan.M.size()));
    std::vector<double> t(plan.r);
    for (std::size_t i = 0; i < n_samples; ++i) {
        plan.unit_point(seed, i, t);
        for (std::size_t c = 0; c < plan.M.size(); ++c) pts[i][c] = plan.torus_coordinate(t, c);
    }
    return pts;
}

inline BiasDistribution sample_distribution(const AmplitudeSet& set, const RelationLattice& lat,
                                            std::size_t n_samples, std::uint64_t seed,
                                            const SampleOptions& opts = {}) {
    if (n_samples < 1) throw precondition_error("sample_distribution requires n_samples >= 1");
    detail::SamplerPlan plan(set, lat, n_samples, seed, opts.qmc);
    const std::size_t bins = std::max<std::size_t>(opts.bins, 8);
    const double width = (plan.hi - plan.lo) / static_cast<double>(bins);

    struct ChunkResult {
        std::vector<std::uint64_t> counts;
        double sum = 0.0;
        double comp = 0.0; // Kahan carry
        double min = 0.0;
        double max = 0.0;
        std::uint64_t positives = 0;
        std::uint64_t out_of_support = 0;
    };
    const std::size_t chunk = 1u << 16;
    const std::size_t n_chunks = (n_samples + chunk - 1) / chunk;
    auto run_chunk = [&](std::size_t ci) {
        ChunkResult res;
        res.counts.assign(bins, 0);
        res.min = plan.hi;
        res.max = plan.lo;
        std::vector<double> t(plan.r), x(plan.M.size());
        const std::size_t begin = ci * chunk;
        const std::size_t end = std::min(n_samples, begin + chunk);
        for (std::size_t i = begin; i < end; ++i) {
            const double w = plan.evaluate(seed, i, t, x);
            if (w < plan.lo || w > plan.hi) {
                ++res.out_of_support;
                continue;
            }
            auto bi = static_cast<std::size_t>((w - plan.lo) / width);
            if (bi >= bins) bi = bins - 1;
            ++res.counts[bi];
            const double y = w - res.comp;
            const double s = res.sum + y;
            res.comp = (s - res.sum) - y;
            res.sum = s;
            res.min = std::min(res.min, w);
            res.max = std::max(res.max, w);
            if (w > 0.0) ++res.positives;
        }
        return res;
    };

    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(n_chunks));
    std::vector<ChunkResult> results(n_chunks);
    if (threads <= 1) {
        for (std::size_t ci = 0; ci < n_chunks; ++ci) results[ci] = run_chunk(ci);
    } else {
        std::vector<std::future<void>> futs;
        std::atomic<std::size_t> next{0};
        for (unsigned w = 0; w < threads; ++w)
            futs.push_back(std::async(std::launch::async, [&]() {
                for (std::size_t ci = next.fetch_add(1); ci < n_chunks; ci = next.fetch_add(1))
                    results[ci] = run_chunk(ci);
            }));
        for (auto& f : futs) f.get();
    }

    // Ordered, order-exact merge: counts are integers, sums reduce in chunk order.
    std::vector<std::uint64_t> counts(bins, 0);
    double sum = 0.0;
    double mn = plan.hi, mx = plan.lo;
    std::uint64_t positives = 0, violations = 0;
    for (const auto& res : results) {
        for (std::size_t bi = 0; bi < bins; ++bi) counts[bi] += res.counts[bi];
        sum += res.sum;
        mn = std::min(mn, res.min);
        mx = std::max(mx, res.max);
        positives += res.positives;
        violations += res.out_of_support;
    }
    if (violations != 0)
        throw numeric_guard_error("sample_distribution: sample escaped the support interval");

    BiasDistribution d;
    d.method = "montecarlo";
    d.center = plan.center;
    d.support_lo = plan.lo;
    d.support_hi = plan.hi;
    d.n_samples = n_samples;
    d.grid.resize(bins);
    d.density.resize(bins);
    for (std::size_t bi = 0; bi < bins; ++bi) {
        d.grid[bi] = plan.lo + (static_cast<double>(bi) + 0.5) * width;
        d.density[bi] = static_cast<double>(counts[bi])
                      / (static_cast<double>(n_samples) * width);
    }
    d.mass = 1.0;
    d.mean = sum / static_cast<double>(n_samples);
    d.positive_probability = static_cast<double>(positives) / static_cast<double>(n_samples);
    d.sample_min = mn;
    d.sample_max = mx;
    double defect = 0.0;
    for (int k = 0; k <= 512; ++k) {
        const double u = (plan.hi - plan.center) * static_cast<double>(k) / 512.0;
        defect = std::max(defect, std::abs(detail::interp(d.grid, d.density, plan.center + u)
                                         - detail::interp(d.grid, d.density, plan.center - u)));
    }
    d.symmetry_defect = defect;
    return d;
}

// ----- long-run time averages ---------------------------------------------------

enum class AverageFunctional { identity, square, indicator_above, clipped_exp };

inline AverageFunctional parse_functional(const std::string& name) {
    if (name == "identity") return AverageFunctional::identity;
    if (name == "square") return AverageFunctional::square;
    if (name == "indicator") return AverageFunctional::indicator_above;
    if (name == "clipped-exp") return AverageFunctional::clipped_exp;
    throw parse_error("unknown time-average functional: " + name);
}

// (1/(Y - eta0)) int_{eta0}^{Y} h(E^(T)(y)) dy by composite Simpson. The grid
// must resolve the fastest oscillation: step <= pi / (4 max|s|).
inline double time_average(const SpectrumCatalog& cat, const HolonomyTestFunction& f,
                           const SmoothingKernel& kernel, const KernelScale& scale, double T,
                           AverageFunctional h, double Y, double grid_step,
                           double threshold = 0.0) {
    if (!(Y > scale.eta0)) throw precondition_error("time_average requires Y > eta0");
    if (!(grid_step > 0.0)) throw precondition_error("time_average requires grid_step > 0");
    const SignalEvaluator ev(cat, f, kernel, scale, T);
    const double max_s = ev.max_frequency();
    if (max_s > 0.0 && grid_step > std::numbers::pi / (4.0 * max_s))
        throw numeric_guard_error("time_average: grid step does not resolve the fastest oscillation");
    auto apply = [&](double x) {
        switch (h) {
            case AverageFunctional::identity: return x;
            case AverageFunctional::square: return x * x;
            case AverageFunctional::indicator_above: return x > threshold ? 1.0 : 0.0;
            case AverageFunctional::clipped_exp: return std::exp(std::min(x, 50.0));
        }
        return 0.0;
    };
    const double span = Y - scale.eta0;
    std::size_t n = static_cast<std::size_t>(std::ceil(span / grid_step));
    if (n < 2) n = 2;
    if (n % 2) ++n;
    const double step = span / static_cast<double>(n);
    double acc = apply(ev(scale.eta0)) + apply(ev(Y));
    for (std::size_t i = 1; i < n; ++i)
        acc += apply(ev(scale.eta0 + step * static_cast<double>(i))) * (i % 2 ? 4.0 : 2.0);
    return acc * step / 3.0 / span;
}

} // namespace holobias
