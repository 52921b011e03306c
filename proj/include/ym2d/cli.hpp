#pragma once

#include <string>
#include <vector>

namespace ym2d::cli {

/**
 * Entry point used by the binary and by the tests. Commands:
 *   partition | check | sample | reduce | sectors
 * Flags: --config <file> (required), --seed N, --effort N, --out <report>.
 *
 * Exit codes: 0 pass, 1 numerical-comparison failure, 2 validation error,
 * 3 internal error.
 */
int run(const std::vector<std::string>& args);

} // namespace ym2d::cli
