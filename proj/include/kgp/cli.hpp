// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace kgp {

// Runs the kgp command line and returns its exit code. 0 on success,
// 1 on operation errors, 2 on bad arguments.
int cli_dispatch(int argc, const char* const* argv);

}  // namespace kgp
