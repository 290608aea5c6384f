// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace helmdd
{

// Exit codes: 0 done (non-converged runs included), 1 numerical failure,
// 2 usage, configuration or file errors.
int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace helmdd
