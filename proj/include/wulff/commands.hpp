#pragma once

#include <cstdint>
#include <string>

#include "wulff/config.hpp"

namespace wulff {

// Pipeline entry points shared by the CLI and the integration tests.
// Return process exit codes: 0 ok, 2 config, 3 geometry violation,
// 4 solver failure, 5 diagnostics failure.
int cmd_geom(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed);
int cmd_solve(const RunConfig& cfg, const std::string& out_dir);
int cmd_verify(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed);

} // namespace wulff
