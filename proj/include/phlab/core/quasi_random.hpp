#pragma once

#include "phlab/core/types.hpp"

#include <cstdint>

namespace phlab {

/// Point i of the R_d low-discrepancy sequence in [0,1)^dim, shifted by a
/// seed-derived offset.
Vec quasi_random_point(int dim, std::uint64_t index, std::uint64_t seed);

}  // namespace phlab
