#pragma once

// Exact arithmetic for the dihedral construction: the ring Z[zeta_12] with
// zeta^4 = zeta^2 - 1, its residue fields at the Gaussian primes a + i
// (reduction zeta^3 = -a, hence zeta^2 = 1 - a zeta), generator search and
// discrete logarithms there, and the Hecke-character unit conditions whose
// solution is an arithmetic progression of spectral parameters.
//
// All finite-place character algebra runs on exact rational exponents of
// roots of unity (value = e^{2 pi i r}); only the archimedean phase is float.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "errors.hpp"
#include "exact.hpp"

namespace holobias {

// ----- Z[zeta_12] -----------------------------------------------------------

struct CyclotomicElement {
    std::array<long long, 4> c{0, 0, 0, 0}; // c0 + c1 z + c2 z^2 + c3 z^3

    static CyclotomicElement integer(long long n) { return {{n, 0, 0, 0}}; }
    static CyclotomicElement zeta() { return {{0, 1, 0, 0}}; }
    // sqrt(3) = 2 zeta - zeta^3
    static CyclotomicElement sqrt3() { return {{0, 2, 0, -1}}; }
    // 2 + sqrt(3), the fundamental unit
    static CyclotomicElement fundamental_unit() { return {{2, 2, 0, -1}}; }

    bool operator==(const CyclotomicElement&) const = default;
};

inline CyclotomicElement cyclo_add(const CyclotomicElement& x, const CyclotomicElement& y) {
    CyclotomicElement r;
    for (int i = 0; i < 4; ++i) r.c[i] = x.c[i] + y.c[i];
    return r;
}

inline CyclotomicElement cyclo_sub(const CyclotomicElement& x, const CyclotomicElement& y) {
    CyclotomicElement r;
    for (int i = 0; i < 4; ++i) r.c[i] = x.c[i] - y.c[i];
    return r;
}

inline CyclotomicElement cyclo_mul(const CyclotomicElement& x, const CyclotomicElement& y) {
    // Degree-6 product, then zeta^4 = zeta^2 - 1, zeta^5 = zeta^3 - zeta,
    // zeta^6 = -1, computed in 128-bit and range-checked on the way out.
    __int128 w[7] = {0, 0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            w[i + j] += static_cast<__int128>(x.c[i]) * y.c[j];
    w[0] += -w[4] - w[6];
    w[2] += w[4];
    w[1] += -w[5];
    w[3] += w[5];
    CyclotomicElement r;
    for (int i = 0; i < 4; ++i) {
        if (w[i] > INT64_MAX || w[i] < INT64_MIN)
            throw numeric_guard_error("cyclo_mul: coefficient overflow");
        r.c[i] = static_cast<long long>(w[i]);
    }
    return r;
}

// ----- residue fields O/(a + i) ----------------------------------------------

struct FieldElement {
    long long v0 = 0;
    long long v1 = 0; // v0 + v1 zeta
    bool operator==(const FieldElement&) const = default;
};

class ResidueField {
public:
    // prime element a + i of Z[i] with norm q = a^2 + 1; inertness in the
    // quadratic extension requires 3 to be a non-residue mod q.
    static ResidueField make(long long a, long long q) {
        if (a * a + 1 != q) throw constraint_error("residue field: q must equal a^2 + 1");
        if (!is_prime(q)) throw constraint_error("residue field: q must be prime");
        if (pow_mod(3 % q, (q - 1) / 2, q) != q - 1)
            throw constraint_error("residue field: 3 is a square mod q (prime not inert)");
        return ResidueField(a, q);
    }

    long long q() const { return q_; }
    long long a() const { return a_; }
    long long group_order() const { return q_ * q_ - 1; }
    // zeta^2 = c0 + c1 zeta with (c0, c1) = (1, -a mod q)
    FieldElement zeta_sq_rule() const { return {1, mod(-a_)}; }

    FieldElement reduce(const CyclotomicElement& x) const {
        // zeta^2 = 1 - a zeta, zeta^3 = -a
        return {mod(x.c[0] + x.c[2] - a_ * x.c[3]), mod(x.c[1] - a_ * x.c[2])};
    }

    FieldElement element(long long v0, long long v1) const { return {mod(v0), mod(v1)}; }
    FieldElement one() const { return {1, 0}; }
    bool is_zero(const FieldElement& x) const { return x.v0 == 0 && x.v1 == 0; }

    FieldElement mul(const FieldElement& x, const FieldElement& y) const {
        const long long zz = mod(x.v1 * y.v1);
        return {mod(x.v0 * y.v0 + zz), mod(x.v0 * y.v1 + x.v1 * y.v0 - a_ * zz)};
    }

    FieldElement pow(FieldElement x, long long e) const {
        FieldElement acc = one();
        while (e > 0) {
            if (e & 1) acc = mul(acc, x);
            x = mul(x, x);
            e >>= 1;
        }
        return acc;
    }

private:
    ResidueField(long long a, long long q) : a_(a), q_(q) {}

    long long mod(long long v) const {
        v %= q_;
        return v < 0 ? v + q_ : v;
    }

    static bool is_prime(long long n) {
        if (n < 2) return false;
        for (long long d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    static long long pow_mod(long long b, long long e, long long m) {
        long long acc = 1 % m;
        b %= m;
        while (e > 0) {
            if (e & 1) acc = acc * b % m;
            b = b * b % m;
            e >>= 1;
        }
        return acc;
    }

    long long a_;
    long long q_;
};

inline long long element_order(const ResidueField& field, const FieldElement& x) {
    if (field.is_zero(x)) throw precondition_error("element_order of zero");
    FieldElement acc = x;
    long long k = 1;
    while (!(acc == field.one())) {
        acc = field.mul(acc, x);
        ++k;
        if (k > field.group_order()) throw numeric_guard_error("element_order did not terminate");
    }
    return k;
}

inline bool is_generator(const ResidueField& field, const FieldElement& x) {
    return !field.is_zero(x) && element_order(field, x) == field.group_order();
}

// Brute force; group orders here are 24 and 288.
inline long long discrete_log(const ResidueField& field, const FieldElement& base,
                              const FieldElement& target) {
    if (field.is_zero(target)) throw precondition_error("discrete_log of zero");
    if (!is_generator(field, base)) throw precondition_error("discrete_log base is not a generator");
    FieldElement acc = field.one();
    for (long long k = 0; k < field.group_order(); ++k) {
        if (acc == target) return k;
        acc = field.mul(acc, base);
    }
    throw numeric_guard_error("discrete_log: target not reached");
}

// First generator in lexicographic (v0, v1) coefficient order.
inline FieldElement find_generator(const ResidueField& field) {
    for (long long v0 = 0; v0 < field.q(); ++v0)
        for (long long v1 = 0; v1 < field.q(); ++v1) {
            const FieldElement x{v0, v1};
            if (!field.is_zero(x) && is_generator(field, x)) return x;
        }
    throw numeric_guard_error("no generator found");
}

// ----- Hecke character conditions ----------------------------------------------

// A finite-place character: chi(generator) = e^{2 pi i root_exponent / root_order},
// trivial on the uniformizer and principal units.
struct LocalCharacter {
    ResidueField field;
    FieldElement generator;
    long long root_order;    // 24 or 288 in the worked example
    long long root_exponent; // numerator of the assigned root of unity

    // chi(x) as an exact rational exponent in [0, 1).
    Rational exponent_of(const CyclotomicElement& x) const {
        const long long d = discrete_log(field, generator, field.reduce(x));
        return frac_mod1(Rational(BigInt(root_exponent) * d, BigInt(root_order)));
    }
};

struct HeckePlace {
    std::string generator;  // "v0+v1*zeta" for the record
    long long root_order = 0;
    long long root_exponent = 0;
    long long dlog_zeta12 = 0;
    long long dlog_unit = 0;      // image of 2 + sqrt(3)
    long long dlog_minus_one = 0;
};

struct HeckeSolution {
    long long k1_residue = 0;   // weight congruence k1 = residue mod modulus
    int k1_modulus = 12;
    Rational t_offset;          // exact offset of the progression
    double t_scale = 0.0;       // 2 pi / log(2 + sqrt 3)
    Rational zeta_exponent_sum; // chi_{p1}(zeta) chi_{p2}(zeta) as an exponent
    Rational unit_exponent_sum; // same at 2 + sqrt(3)
    std::array<HeckePlace, 2> places;

    double spectral_parameter(long long n) const {
        return (static_cast<double>(n) + to_double(t_offset)) * t_scale;
    }
};

inline HeckeSolution solve_hecke(const LocalCharacter& chi1, const LocalCharacter& chi2) {
    const CyclotomicElement minus_one = CyclotomicElement::integer(-1);
    const CyclotomicElement zeta = CyclotomicElement::zeta();
    const CyclotomicElement unit = CyclotomicElement::fundamental_unit();

    for (const auto* chi : {&chi1, &chi2})
        if (chi->exponent_of(minus_one) != Rational(1, 2))
            throw precondition_error("local character must send -1 to -1 (supercuspidality)");

    HeckeSolution sol;
    sol.zeta_exponent_sum = frac_mod1(chi1.exponent_of(zeta) + chi2.exponent_of(zeta));
    sol.unit_exponent_sum = frac_mod1(chi1.exponent_of(unit) + chi2.exponent_of(unit));

    // Triviality on zeta_12: exponent_sum + k1/12 must be an integer.
    const Rational twelve_e = sol.zeta_exponent_sum * Rational(12);
    if (twelve_e.denominator() != 1)
        throw constraint_error("root-of-unity equation has no integer weight solution");
    long long k1 = -static_cast<long long>(twelve_e.numerator() % 12);
    if (k1 < 0) k1 += 12;
    sol.k1_residue = k1;
    sol.k1_modulus = 12;
    // Exact verification chi_{p1}(zeta) chi_{p2}(zeta) = zeta^{-k1}.
    if (frac_mod1(sol.zeta_exponent_sum + Rational(k1, 12)) != Rational(0))
        throw numeric_guard_error("weight congruence self-check failed");

    // Triviality on 2 + sqrt(3): |u|^{i t} must supply phase -exponent_sum.
    sol.t_offset = frac_mod1(-sol.unit_exponent_sum);
    sol.t_scale = 2.0 * std::numbers::pi / std::log(2.0 + std::sqrt(3.0));

    auto fill = [](const LocalCharacter& chi) {
        HeckePlace pl;
        pl.generator = std::to_string(chi.generator.v0) + "+" + std::to_string(chi.generator.v1) + "*zeta";
        pl.root_order = chi.root_order;
        pl.root_exponent = chi.root_exponent;
        pl.dlog_zeta12 = discrete_log(chi.field, chi.generator, chi.field.reduce(CyclotomicElement::zeta()));
        pl.dlog_unit = discrete_log(chi.field, chi.generator,
                                    chi.field.reduce(CyclotomicElement::fundamental_unit()));
        pl.dlog_minus_one = discrete_log(chi.field, chi.generator,
                                         chi.field.reduce(CyclotomicElement::integer(-1)));
        return pl;
    };
    sol.places = {fill(chi1), fill(chi2)};
    return sol;
}

// The worked example: p1 = 2 + i with chi(zeta+3) = zeta_24, p2 = 4 + i with
// chi(7+zeta) = zeta_288.
inline HeckeSolution solve_hecke_example() {
    const ResidueField f25 = ResidueField::make(2, 5);
    const ResidueField f289 = ResidueField::make(4, 17);
    const LocalCharacter chi1{f25, f25.element(3, 1), 24, 1};
    const LocalCharacter chi2{f289, f289.element(7, 1), 288, 1};
    return solve_hecke(chi1, chi2);
}

inline SpectrumCatalog export_progression(const HeckeSolution& sol, long long n_lo, long long n_hi,
                                          int p_weight, long long mult = 1) {
    long long rem = p_weight % sol.k1_modulus;
    if (rem < 0) rem += sol.k1_modulus;
    if (rem != sol.k1_residue)
        throw precondition_error("export_progression: weight violates the solved congruence");
    if (n_hi < n_lo) throw precondition_error("export_progression: empty n range");
    SpectrumCatalog cat;
    cat.basis.push_back({"beta", sol.t_scale});
    cat.independence_declared = false;
    std::vector<SpectralLine> raw;
    for (long long n = n_lo; n <= n_hi; ++n) {
        SpectralLine l;
        ExactFrequency ef;
        ef.coeffs["beta"] = Rational(n) + sol.t_offset;
        l.exact = ef;
        l.p = p_weight;
        l.mult = mult;
        raw.push_back(l);
    }
    return detail::canonicalize(std::move(cat), std::move(raw));
}

} // namespace holobias
