#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "allocator.hpp"
#include "channel.hpp"

namespace wpcn {

enum class Mode { pf, max_sum_rate };

const char* mode_name(Mode mode);          // "pf" / "maxsum"
Mode mode_from_name(const std::string&);   // throws std::invalid_argument

/// Online estimates carried across epochs: the dual price for the average
/// power budget, the per-user running average rates (the PF weights), and
/// the cumulative spent energy.
struct ProtocolState {
  double lambda_hat = 0.0;
  std::vector<double> rbar_hat;
  double energy_sum = 0.0;       ///< sum of e(n) over completed epochs
  std::int64_t epoch = 0;        ///< completed epochs
  double gamma0 = 0.01;
  Mode mode = Mode::max_sum_rate;
};

ProtocolState make_initial_state(const NetworkConfig& config, Mode mode,
                                 double gamma0);

/// One online epoch: allocate with the current estimates, accumulate the
/// spent energy, then update the dual price from the running energy average
/// and (PF only) fold the realized rates into the running averages. The
/// first PF epoch transmits unconditionally to seed the rate averages.
EpochAllocation step(ProtocolState& state, const ChannelState& channel,
                     const NetworkConfig& config);

/// Full run output. Trace vectors are epoch-major; tau and rate hold K
/// entries per epoch. Tracing can be disabled for sweep workloads.
struct SimulationResult {
  int num_users = 0;
  std::int64_t epochs = 0;
  Mode mode = Mode::max_sum_rate;
  std::uint64_t seed = 0;

  std::vector<double> p0;
  std::vector<double> tau0;
  std::vector<double> lambda_hat;  ///< value used in the epoch's decision
  std::vector<double> tau;
  std::vector<double> rate;

  double sum_rate = 0.0;           ///< (1/M) * sum over epochs and users
  std::vector<double> user_rate;   ///< per-user average rates
  double jain = 0.0;
  bool jain_degenerate = false;
  double avg_bs_power = 0.0;       ///< (1/M) * sum of e(i)
};

/// Online simulation over M epochs with channels drawn from (seed, i).
SimulationResult run(const NetworkConfig& config, std::int64_t epochs,
                     std::uint64_t seed, Mode mode, double gamma0 = 0.0,
                     bool record_trace = true);

/// Same loop over a pre-generated channel trace.
SimulationResult run_on_trace(const NetworkConfig& config,
                              std::span<const ChannelState> trace, Mode mode,
                              double gamma0 = 0.0, bool record_trace = true);

/// Fixed dual price and fixed weights, no online updates. Pass all-ones
/// weights for the max-sum-rate policy.
SimulationResult run_fixed_lambda(const NetworkConfig& config,
                                  std::span<const ChannelState> trace,
                                  double lambda, std::span<const double> rbar,
                                  bool record_trace = true);

/// Dual price that makes the trace-average spent energy meet the budget:
/// returns lambda with |avg spend - P_avg| <= 0.001 * P_avg, or 0 when even
/// a zero price underspends. The average spend is non-increasing in lambda,
/// so an expanding bracket plus interpolated bisection suffices; a trace
/// prefix supplies the starting bracket on long traces.
double calibrate_lambda_offline(const NetworkConfig& config,
                                std::span<const ChannelState> trace,
                                std::span<const double> rbar);

/// Proportional-fair weights and price for a fixed trace: alternates
/// budget calibration with weight updates (weights become the achieved
/// average rates, floored at 1e-6) for the given number of rounds. This is
/// the converged-protocol counterpart of the online loop, used by the
/// budget study where adaptation transients would mask the comparison.
struct PfCalibration {
  double lambda = 0.0;
  std::vector<double> rbar;
};

PfCalibration calibrate_pf_offline(const NetworkConfig& config,
                                   std::span<const ChannelState> trace,
                                   int weight_rounds = 2);

/// Jain fairness index (sum r)^2 / (K sum r^2); the flag marks the all-zero
/// degenerate case, reported as 0.
struct Metrics {
  double sum_rate = 0.0;
  double jain = 0.0;
  bool jain_degenerate = false;
};

Metrics compute_metrics(const SimulationResult& result);
Metrics compute_metrics(std::span<const double> user_rates);

/// Trace CSV: "epoch,p0,tau0,tau_1..tau_K,r_1..r_K,lambda_hat", 17
/// significant digits. Requires a recorded trace.
void write_trace_csv(const SimulationResult& result, const std::string& path);

/// Summary CSV schema "mode,K,p_c,P_avg,M,seed,sum_rate,jain,avg_bs_power".
std::string summary_csv_header();
std::string summary_csv_row(const NetworkConfig& config, const SimulationResult& result);

}  // namespace wpcn
