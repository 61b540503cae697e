#pragma once

#include <cstdint>

namespace wpcn {

/// Self-check suite covering the numerical core: Lambert W residuals, the
/// z-equation closed form, first-order optimality of emitted allocations,
/// agreement with the brute-force grid search on random small instances,
/// and midpoint concavity of the epoch objective. Prints one line per check
/// when verbose. Returns the number of failed checks.
int run_verification(std::uint64_t seed, int instances, bool verbose);

}  // namespace wpcn
