// SPDX-License-Identifier: Apache-2.0
#include "kgp/cli.hpp"

int main(int argc, char** argv) { return kgp::cli_dispatch(argc, argv); }
