#pragma once

// Umbrella header.

#include "bessel.hpp"      // IWYU pragma: export
#include "bias.hpp"        // IWYU pragma: export
#include "catalog.hpp"     // IWYU pragma: export
#include "dihedral.hpp"    // IWYU pragma: export
#include "distribution.hpp" // IWYU pragma: export
#include "errors.hpp"      // IWYU pragma: export
#include "exact.hpp"       // IWYU pragma: export
#include "kernels.hpp"     // IWYU pragma: export
#include "output.hpp"      // IWYU pragma: export
#include "quadrature.hpp"  // IWYU pragma: export
#include "relations.hpp"   // IWYU pragma: export
#include "sampling.hpp"    // IWYU pragma: export
