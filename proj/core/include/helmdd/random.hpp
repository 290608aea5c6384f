// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "helmdd/types.hpp"

namespace helmdd
{

// Real and imaginary parts i.i.d. uniform on [-1, 1), drawn from std::mt19937_64
// (bit-exact across platforms for a given seed; the mapping to [-1, 1) uses the
// top 53 bits of each draw, not std::uniform_real_distribution).
ComplexVector random_initial_guess(Index n, std::uint64_t seed);

}  // namespace helmdd
