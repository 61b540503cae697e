#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "channel.hpp"

namespace wpcn {

/// Scratch produced alongside each allocation: the per-user circuit terms
/// c_k = p_c * x_k, the auxiliary variables z_k at the solved multiplier,
/// the epoch multiplier beta with its companion mu = beta * P_max, and the
/// threshold sum that decides between transmitting and staying silent.
struct AllocatorWorkspace {
  std::vector<double> c;
  std::vector<double> z;
  double beta = 0.0;
  double mu = 0.0;
  double condition_value = 0.0;  ///< threshold sum, compared against lambda
  bool transmit = false;
};

/// One epoch's decision. In transmit mode p0 = P_max and the fractions
/// tau0 + sum(tau) add to 1; in silent mode everything is zero.
struct EpochAllocation {
  double p0 = 0.0;                  ///< BS power, 0 or P_max
  double tau0 = 0.0;                ///< energy-harvest fraction
  std::vector<double> tau;          ///< per-user uplink fractions
  double e = 0.0;                   ///< p0 * tau0 (W)
  std::vector<double> harvested;    ///< E_k (J)
  std::vector<double> tx_power;     ///< P_k (W)
  std::vector<double> total_power;  ///< P_k + p_c while transmitting, else 0 (W)
  std::vector<double> rate;         ///< tau_k * log2(1 + P_k x_k)
};

/// Solves log(1 - c + z) - z / (1 - c + z) = b for the branch with z > c
/// (natural log). Closed form via the principal Lambert W branch,
///   z = -(1 - c) * (1 + 1 / W0(-(1 - c) * exp(-1 - b))),
/// switching to the analytic limit z = exp(1 + b) when |1 - c| < 1e-9.
/// Residual of the defining equation is at most 1e-9.
/// Requires c >= 0 and b >= 0.
double solve_z(double c, double b);

/// Per-epoch multiplier: the root beta > 0 of
///   g(beta) = sum_k a_k / (rbar_k * (1 - c_k + z_k(beta))) - lambda - beta
/// with z_k(beta) = solve_z(c_k, beta * peak_power * rbar_k). Returns
/// nullopt exactly when g(0) <= 0, i.e. the epoch stays silent. Users with
/// a_k = 0 contribute nothing. g is convex and strictly decreasing, so the
/// root comes from a geometric bracket expansion followed by
/// bracket-guarded Newton steps (the slope falls out of the same pass),
/// to a residual of 1e-10 times the threshold scale.
std::optional<double> solve_beta(std::span<const double> a, std::span<const double> c,
                                 std::span<const double> rbar, double lambda,
                                 double peak_power);

/// Left side of the per-epoch switching test (the weighted sum at a zero
/// multiplier): the epoch transmits exactly when this exceeds lambda.
/// Independent of lambda, so sweeps over prices can precompute it.
double transmit_threshold(const ChannelState& channel, const NetworkConfig& config,
                          std::span<const double> rbar);

/// Closed-form optimal allocation of one epoch given the dual price lambda
/// and the proportional-fairness weights 1/rbar_k. Bang-bang BS power: the
/// epoch either transmits at P_max or is skipped entirely.
std::pair<EpochAllocation, AllocatorWorkspace> allocate_epoch(
    const ChannelState& channel, const NetworkConfig& config, double lambda,
    std::span<const double> rbar);

/// allocate_epoch with every weight pinned to 1 (sum-rate maximization).
std::pair<EpochAllocation, AllocatorWorkspace> allocate_epoch_maxsum(
    const ChannelState& channel, const NetworkConfig& config, double lambda);

/// First-order optimality residuals of a transmit-mode allocation, all of
/// which vanish at the exact optimum:
///   stationarity_e    - derivative of the epoch objective in the energy variable
///   stationarity_tau  - max per-user derivative in the uplink fractions
///   stationarity_tau0 - beta * P_max - mu
///   z_equation        - max per-user residual of the z defining equation
struct KktReport {
  double stationarity_e = 0.0;
  double stationarity_tau = 0.0;
  double stationarity_tau0 = 0.0;
  double z_equation = 0.0;

  double max_abs() const;
};

KktReport verify_kkt(const EpochAllocation& alloc, const AllocatorWorkspace& ws,
                     const ChannelState& channel, const NetworkConfig& config,
                     double lambda, std::span<const double> rbar);

/// Epoch value of the dual objective,
///   sum_k tau_k * ln(1 - c_k + a_k e / tau_k) / rbar_k - lambda * e,
/// the quantity the closed form maximizes for the epoch. Zero-fraction
/// users contribute zero (their limit value).
double epoch_lagrangian(const EpochAllocation& alloc, const ChannelState& channel,
                        const NetworkConfig& config, double lambda,
                        std::span<const double> rbar);

}  // namespace wpcn
