// Reproduces the dihedral character computation and shows the rational
// dependence of the exported spectral parameters.

#include <cstdio>

#include "holobias/holobias.hpp"

using namespace holobias;

int main() {
    const auto sol = solve_hecke_example();
    std::printf("k1 = %lld mod %d, offset = %s, scale = %.12f\n", sol.k1_residue, sol.k1_modulus,
                format_rational(sol.t_offset).c_str(), sol.t_scale);
    for (const auto& pl : sol.places)
        std::printf("place gen %s: dlog(zeta12) = %lld, dlog(2+sqrt3) = %lld, dlog(-1) = %lld\n",
                    pl.generator.c_str(), pl.dlog_zeta12, pl.dlog_unit, pl.dlog_minus_one);

    const auto cat = export_progression(sol, 0, 2, static_cast<int>(sol.k1_residue), 1);
    const auto lat = relation_lattice(cat);
    std::printf("exported %zu lines, subtorus rank %zu, M column:", cat.lines.size(), lat.r);
    for (const auto& row : lat.subtorus_basis) std::printf(" %s", row[0].str().c_str());
    std::printf("\n");
    return 0;
}
