#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toi/strategies.hpp"

namespace toi {

/// Resolves a strategy string against the --seed flag. A seeded strategy
/// given without an inline seed takes --seed; when both are present they
/// must agree. Randomized strategies never fall back to a default seed.
ToiStrategy resolve_strategy(std::string_view text,
                             std::optional<std::uint64_t> seed);

/// Runs the `toi` command line. `args` excludes the program name.
/// Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace toi
