#pragma once

// Umbrella header for the stiefac library: converging factors of divergent
// Stieltjes series as inverse-factorial expansions, plus the sequence
// transformations used to cross-check them.

#include "stiefac/precision.hpp"
#include "stiefac/combinatorics.hpp"
#include "stiefac/polynomials.hpp"
#include "stiefac/special.hpp"
#include "stiefac/facseries.hpp"
#include "stiefac/stieltjes.hpp"
#include "stiefac/transforms.hpp"
#include "stiefac/catalog.hpp"
