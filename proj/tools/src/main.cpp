// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "helmdd/cli.hpp"

int main(int argc, char **argv)
{
  return helmdd::cli_main(argc, argv, std::cout, std::cerr);
}
