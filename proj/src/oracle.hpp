#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "channel.hpp"

namespace wpcn {

/// Grid resolution for the brute-force epoch search. Each refinement round
/// keeps the same point counts over a 10x narrower window.
struct GridSpec {
  int n_tau0 = 60;     ///< points along the harvest fraction
  int n_simplex = 60;  ///< points per uplink-share axis
  int n_e = 60;        ///< points along the energy fraction
};

/// What to do with grid points where some user's log argument drops to or
/// below 1 (its transmit power would be nonpositive): discard the whole
/// point, or score that user as zero rate and keep going.
enum class OffRegimeRule { exclude, zero_rate };

struct GridSearchOutcome {
  bool feasible = false;   ///< at least one admissible point was scored
  double objective = 0.0;  ///< best epoch dual value found
  double tau0 = 0.0;
  std::vector<double> tau;
  double e = 0.0;
  double e_fraction = 0.0;       ///< e / (P_max * tau0) at the best point
  double e_fraction_cell = 0.0;  ///< requested-grid cell along the energy fraction
};

/// Exhaustive maximization of the epoch dual objective
///   sum_k tau_k * ln(1 - c_k + a_k e / tau_k) / rbar_k - lambda * e
/// over tau0, the uplink shares, and e in [0, P_max * tau0], followed by two
/// 10x zoom rounds around the best cell. Deliberately ignorant of the
/// closed form it audits. Requires K <= 3.
GridSearchOutcome grid_search_epoch(const ChannelState& channel,
                                    const NetworkConfig& config, double lambda,
                                    std::span<const double> rbar,
                                    const GridSpec& grid,
                                    OffRegimeRule rule = OffRegimeRule::exclude);

struct ConcavityReport {
  int pairs = 0;
  int violations = 0;
  double worst_gap = 0.0;  ///< most negative concavity margin observed
};

/// Midpoint-concavity audit of the epoch objective over random pairs of
/// feasible transmit-regime points (every user's transmit power positive):
/// checks f((u+v)/2) >= (f(u) + f(v)) / 2 - 1e-12.
ConcavityReport verify_concavity_samples(const ChannelState& channel,
                                         const NetworkConfig& config, double lambda,
                                         std::span<const double> rbar, int pairs,
                                         std::uint64_t seed);

}  // namespace wpcn
