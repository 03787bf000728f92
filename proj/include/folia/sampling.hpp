#pragma once

#include <cstdint>
#include <vector>

#include "folia/types.hpp"

namespace folia {

// Radical-inverse (van der Corput) value of index i in the given base.
double radical_inverse(std::uint64_t i, std::uint32_t base);

// Point of the d-dimensional Halton sequence in the unit cube, index i >= 1.
Vec halton_point(std::uint64_t i, int d);

// Deterministic quasi-random unit direction in R^d. Indices with a
// near-degenerate cube point are skipped internally.
Vec halton_direction(std::uint64_t i, int d);

// n unit directions starting at sequence offset `seed + 1`.
std::vector<Vec> halton_directions(int n, int d, std::uint64_t seed = 0);

}  // namespace folia
