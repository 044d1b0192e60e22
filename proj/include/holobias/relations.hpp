#pragma once

// Exact rational-relation analysis of the spectral frequencies. The integer
// relation lattice { k : sum_j k_j s_j = 0 } is computed from declared exact
// frequencies by unimodular row reduction (Hermite-style echelon form with a
// transform-matrix tape); the kernel basis extracted this way generates the
// full lattice, so it is saturated by construction. The subtorus basis M is
// the (equally saturated) integer kernel of the relation matrix: Haar samples
// x = M t mod 1, t uniform on [0,1)^r, fill the connected closure subtorus.
// Floats are never subjected to relation detection.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "catalog.hpp"
#include "errors.hpp"
#include "exact.hpp"

namespace holobias {

using IntMatrix = std::vector<std::vector<BigInt>>; // row-major

struct RelationLattice {
    std::size_t n = 0;       // torus dimension = number of nonzero lines
    std::size_t r = 0;       // subtorus dimension
    IntMatrix relations;     // rows k with k . s = 0 exactly
    IntMatrix subtorus_basis; // n rows, r columns; relations * M = 0
};

namespace detail {

// Left kernel { k : k^T A = 0 } of an integer matrix, as lattice basis rows.
inline IntMatrix integer_left_kernel(const IntMatrix& A, std::size_t n, std::size_t m) {
    IntMatrix W = A;
    IntMatrix U(n, std::vector<BigInt>(n, 0));
    for (std::size_t i = 0; i < n; ++i) U[i][i] = 1;

    std::size_t row = 0;
    for (std::size_t col = 0; col < m && row < n; ++col) {
        std::size_t pivot = row;
        while (pivot < n && W[pivot][col] == 0) ++pivot;
        if (pivot == n) continue;
        std::swap(W[pivot], W[row]);
        std::swap(U[pivot], U[row]);
        for (std::size_t r2 = row + 1; r2 < n; ++r2) {
            // Euclidean elimination keeps every intermediate integral.
            while (W[r2][col] != 0) {
                const BigInt q = W[row][col] / W[r2][col];
                for (std::size_t c = col; c < m; ++c) W[row][c] -= q * W[r2][c];
                for (std::size_t c = 0; c < n; ++c) U[row][c] -= q * U[r2][c];
                std::swap(W[row], W[r2]);
                std::swap(U[row], U[r2]);
            }
        }
        ++row;
    }
    IntMatrix kernel;
    for (std::size_t r2 = row; r2 < n; ++r2) kernel.push_back(U[r2]);
    for (auto& k : kernel) {
        for (const auto& v : k)
            if (v != 0) {
                if (v < 0)
                    for (auto& x : k) x = -x;
                break;
            }
    }
    return kernel;
}

inline IntMatrix transpose(const IntMatrix& A, std::size_t rows, std::size_t cols) {
    IntMatrix T(cols, std::vector<BigInt>(rows, 0));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) T[j][i] = A[i][j];
    return T;
}

inline IntMatrix identity(std::size_t n) {
    IntMatrix I(n, std::vector<BigInt>(n, 0));
    for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

} // namespace detail

inline RelationLattice relation_lattice(const SpectrumCatalog& cat) {
    const std::size_t n = cat.lines.size();
    RelationLattice out;
    out.n = n;
    if (cat.independence_declared) {
        out.r = n;
        out.subtorus_basis = detail::identity(n);
        return out;
    }
    if (!cat.all_lines_exact())
        throw precondition_error(
            "relation analysis refused: frequencies are floats and independence is not declared");

    // Rational coefficient matrix over the declared basis, denominators
    // cleared column-wise (column scaling preserves the kernel).
    std::vector<std::string> names;
    for (const auto& b : cat.basis) names.push_back(b.name);
    const std::size_t m = names.size();
    std::vector<std::vector<Rational>> Q(n, std::vector<Rational>(m, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [name, q] : cat.lines[i].exact->coeffs) {
            std::size_t j = 0;
            while (j < m && names[j] != name) ++j;
            if (j == m) throw constraint_error("exact frequency references undeclared basis name: " + name);
            Q[i][j] = q;
        }
    IntMatrix A(n, std::vector<BigInt>(m, 0));
    for (std::size_t j = 0; j < m; ++j) {
        BigInt l = 1;
        for (std::size_t i = 0; i < n; ++i)
            l = boost::multiprecision::lcm(l, Q[i][j].denominator());
        for (std::size_t i = 0; i < n; ++i) A[i][j] = Q[i][j].numerator() * (l / Q[i][j].denominator());
    }

    out.relations = detail::integer_left_kernel(A, n, m);
    if (out.relations.empty()) {
        out.subtorus_basis = detail::identity(n);
    } else {
        const IntMatrix Bt = detail::transpose(out.relations, out.relations.size(), n);
        const IntMatrix cols = detail::integer_left_kernel(Bt, n, out.relations.size());
        out.subtorus_basis = detail::transpose(cols, cols.size(), n); // n rows, r columns
    }
    out.r = n - out.relations.size();

    for (const auto& k : out.relations)
        for (std::size_t c = 0; c < out.r; ++c) {
            BigInt dot = 0;
            for (std::size_t i = 0; i < n; ++i) dot += k[i] * out.subtorus_basis[i][c];
            if (dot != 0) throw numeric_guard_error("relation lattice self-check failed");
        }
    return out;
}

// Integer vector membership in the relation lattice: k is a relation iff it is
// orthogonal to every subtorus basis column (saturation makes this exact).
inline bool satisfies_relations(const RelationLattice& lat, const std::vector<BigInt>& k) {
    if (k.size() != lat.n) return false;
    for (std::size_t c = 0; c < lat.r; ++c) {
        BigInt dot = 0;
        for (std::size_t i = 0; i < lat.n; ++i) dot += k[i] * lat.subtorus_basis[i][c];
        if (dot != 0) return false;
    }
    return true;
}

} // namespace holobias
