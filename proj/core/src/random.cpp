// SPDX-License-Identifier: Apache-2.0

#include "helmdd/random.hpp"

#include <random>

namespace helmdd
{

ComplexVector random_initial_guess(Index n, std::uint64_t seed)
{
  if (n < 1)
  {
    throw ArgumentError("random_initial_guess: size must be positive");
  }
  std::mt19937_64 engine(seed);
  auto uniform = [&engine]() {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
  };
  ComplexVector x(n);
  for (Index i = 0; i < n; i++)
  {
    const double re = uniform();
    const double im = uniform();
    x[i] = Complex(re, im);
  }
  return x;
}

}  // namespace helmdd
