#pragma once

#include <cstdint>
#include <random>

#include "spd/types.hpp"

namespace spd {

using Rng = std::mt19937_64;

// Derives a reproducible per-section stream from one base seed (splitmix64 step).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

Complex random_phase(Rng& rng);

// Uniform on the open disc of the given radius, by rejection from the square.
Complex random_disc(Rng& rng, double radius = 1.0);

CMat ginibre(int rows, int cols, Rng& rng);

// QR of a Ginibre matrix with the R-diagonal phases absorbed, so the
// distribution is Haar on the unitary group.
CMat random_unitary(int dim, Rng& rng);

}  // namespace spd
