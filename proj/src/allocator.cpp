#include "allocator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "special_functions.hpp"

namespace wpcn {

namespace {

constexpr double kUnitCircuitTermWindow = 1e-9;  // |1 - c| below this uses the limit form
constexpr double kBetaResidualTol = 1e-10;

double z_equation_residual(double c, double b, double z) {
  const double u = 1.0 - c + z;
  return std::log(u) - z / u - b;
}

// One guarded Newton polish of the defining equation. The closed form is
// already accurate; this mops up the cancellation-prone corners (c near 1,
// b near 0) down to the residual floor.
double polish_z(double c, double b, double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    return z;
  }
  const double u = 1.0 - c + z;
  const double res = z_equation_residual(c, b, z);
  const double slope = z / (u * u);
  if (slope <= 0.0 || !std::isfinite(slope)) {
    return z;
  }
  const double candidate = z - res / slope;
  if (!(candidate > 0.0) || !std::isfinite(candidate)) {
    return z;
  }
  if (std::fabs(z_equation_residual(c, b, candidate)) < std::fabs(res)) {
    return candidate;
  }
  return z;
}

void check_inputs(std::span<const double> a, std::span<const double> c,
                  std::span<const double> rbar, double lambda, double peak_power) {
  if (a.size() != c.size() || a.size() != rbar.size()) {
    throw std::invalid_argument("solve_beta: mismatched input lengths");
  }
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("solve_beta: lambda must be nonnegative");
  }
  if (!(peak_power > 0.0)) {
    throw std::invalid_argument("solve_beta: peak power must be positive");
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!(a[k] >= 0.0) || !(c[k] >= 0.0)) {
      throw std::invalid_argument("solve_beta: gains must be nonnegative");
    }
    if (!(rbar[k] > 0.0)) {
      throw std::invalid_argument("solve_beta: rate weights must be positive");
    }
  }
}

// sum_k a_k / (rbar_k * (1 - c_k + z_k(beta))), the decreasing part of g.
double weighted_inverse_sum(std::span<const double> a, std::span<const double> c,
                            std::span<const double> rbar, double beta,
                            double peak_power) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0.0) {
      continue;
    }
    const double z = solve_z(c[k], beta * peak_power * rbar[k]);
    const double u = 1.0 - c[k] + z;
    if (std::isfinite(u)) {
      sum += a[k] / (rbar[k] * u);
    }
  }
  return sum;
}

struct BetaOutcome {
  std::optional<double> beta;
  double threshold = 0.0;  // weighted sum at beta = 0
};

struct Slope {
  double value = 0.0;
  double slope = 0.0;
};

// g and g' in one pass; the z_k are shared between them. g is convex and
// strictly decreasing, so Newton from the underspending side converges
// monotonically and the bracket fallback rarely fires.
Slope g_with_slope(std::span<const double> a, std::span<const double> c,
                   std::span<const double> rbar, double lambda, double peak_power,
                   double beta) {
  Slope out;
  double demand = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0.0) {
      continue;
    }
    const double z = solve_z(c[k], beta * peak_power * rbar[k]);
    const double u = 1.0 - c[k] + z;
    if (std::isfinite(u)) {
      out.value += a[k] / (rbar[k] * u);
    }
    if (z > 0.0) {
      demand += a[k] * peak_power / z;  // zero when z overflowed
    }
  }
  out.value -= lambda + beta;
  out.slope = -demand - 1.0;
  return out;
}

BetaOutcome solve_beta_impl(std::span<const double> a, std::span<const double> c,
                            std::span<const double> rbar, double lambda,
                            double peak_power) {
  check_inputs(a, c, rbar, lambda, peak_power);
  BetaOutcome out;
  out.threshold = weighted_inverse_sum(a, c, rbar, 0.0, peak_power);
  if (!(out.threshold > lambda)) {
    return out;
  }

  double lo = 0.0;
  double hi = 1.0;
  Slope fx = g_with_slope(a, c, rbar, lambda, peak_power, hi);
  int doublings = 0;
  while (fx.value > 0.0) {
    if (++doublings > 200) {
      throw std::runtime_error("solve_beta: no sign change after 200 doublings");
    }
    lo = hi;
    hi *= 2.0;
    fx = g_with_slope(a, c, rbar, lambda, peak_power, hi);
  }

  // The root is bounded by the threshold sum, which also sets the noise
  // floor of evaluating g there; scale the residual target accordingly.
  const double tol = kBetaResidualTol * std::max(1.0, out.threshold);
  double x = hi;
  for (int it = 0; it < 200; ++it) {
    if (std::fabs(fx.value) <= tol) {
      out.beta = x;
      return out;
    }
    if (fx.value > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double candidate = x - fx.value / fx.slope;
    if (!std::isfinite(candidate) || !(candidate > lo && candidate < hi)) {
      candidate = 0.5 * (lo + hi);
    }
    if (candidate == x) {
      break;
    }
    x = candidate;
    fx = g_with_slope(a, c, rbar, lambda, peak_power, x);
  }
  throw std::runtime_error("solve_beta: residual tolerance not reached");
}

}  // namespace

double solve_z(double c, double b) {
  if (!(c >= 0.0) || !(b >= 0.0)) {
    throw std::invalid_argument("solve_z: requires c >= 0 and b >= 0");
  }
  if (c == 0.0 && b == 0.0) {
    return 0.0;
  }
  if (std::fabs(1.0 - c) < kUnitCircuitTermWindow) {
    return std::exp(1.0 + b);
  }

  const double arg = -(1.0 - c) * std::exp(-1.0 - b);
  if (arg == 0.0) {
    // exp underflow: z grows like exp(1 + b), far beyond double range
    return std::numeric_limits<double>::infinity();
  }
  const double w = lambert_w0(arg);
  if (w == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  double z = -(1.0 - c) * (1.0 + 1.0 / w);
  if (std::isfinite(z)) {
    z = polish_z(c, b, z);
    const double scale = std::max(1.0, std::fabs(b));
    if (std::fabs(z_equation_residual(c, b, z)) > 1e-9 * scale) {
      throw std::runtime_error("solve_z: residual target not reached");
    }
  }
  return z;
}

std::optional<double> solve_beta(std::span<const double> a, std::span<const double> c,
                                 std::span<const double> rbar, double lambda,
                                 double peak_power) {
  return solve_beta_impl(a, c, rbar, lambda, peak_power).beta;
}

double transmit_threshold(const ChannelState& channel, const NetworkConfig& config,
                          std::span<const double> rbar) {
  std::vector<double> c(config.num_users);
  for (int k = 0; k < config.num_users; ++k) {
    c[k] = config.circuit_power * channel.x[k];
  }
  return weighted_inverse_sum(channel.a, c, rbar, 0.0, config.peak_power);
}

std::pair<EpochAllocation, AllocatorWorkspace> allocate_epoch(
    const ChannelState& channel, const NetworkConfig& config, double lambda,
    std::span<const double> rbar) {
  const int n = config.num_users;
  if (channel.x.size() != static_cast<std::size_t>(n) ||
      channel.a.size() != static_cast<std::size_t>(n) ||
      rbar.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("allocate_epoch: channel/config size mismatch");
  }

  AllocatorWorkspace ws;
  ws.c.resize(n);
  ws.z.assign(n, 0.0);
  for (int k = 0; k < n; ++k) {
    ws.c[k] = config.circuit_power * channel.x[k];
  }

  EpochAllocation alloc;
  alloc.tau.assign(n, 0.0);
  alloc.harvested.assign(n, 0.0);
  alloc.tx_power.assign(n, 0.0);
  alloc.total_power.assign(n, 0.0);
  alloc.rate.assign(n, 0.0);

  // Threshold test: stay silent unless the weighted sum strictly exceeds
  // the dual price (ties map to silence).
  const BetaOutcome outcome =
      solve_beta_impl(channel.a, ws.c, rbar, lambda, config.peak_power);
  ws.condition_value = outcome.threshold;
  if (!outcome.beta.has_value()) {
    return {alloc, ws};
  }
  ws.beta = *outcome.beta;
  ws.mu = ws.beta * config.peak_power;
  ws.transmit = true;

  double demand = 0.0;  // sum_k a_k P_max / z_k
  for (int k = 0; k < n; ++k) {
    if (channel.a[k] == 0.0) {
      continue;
    }
    ws.z[k] = solve_z(ws.c[k], ws.beta * config.peak_power * rbar[k]);
    if (!(ws.z[k] > ws.c[k])) {
      throw std::logic_error("allocate_epoch: z <= c in transmit mode (solver bug)");
    }
    if (std::isfinite(ws.z[k])) {
      demand += channel.a[k] * config.peak_power / ws.z[k];
    }
  }

  alloc.p0 = config.peak_power;
  alloc.tau0 = 1.0 / (1.0 + demand);
  alloc.e = config.peak_power * alloc.tau0;
  for (int k = 0; k < n; ++k) {
    if (channel.a[k] == 0.0) {
      continue;  // no gain, no uplink slot this epoch
    }
    alloc.harvested[k] = config.eta[k] * config.noise_power * channel.x[k] * alloc.e *
                         config.epoch_duration;
    if (!std::isfinite(ws.z[k])) {
      continue;  // slot fraction limits to zero at this weight; harvest only
    }
    alloc.tau[k] = (channel.a[k] * config.peak_power / ws.z[k]) * alloc.tau0;
    alloc.tx_power[k] = (ws.z[k] - ws.c[k]) / channel.x[k];
    alloc.total_power[k] = alloc.tx_power[k] + config.circuit_power;
    alloc.rate[k] = alloc.tau[k] * std::log2(1.0 - ws.c[k] + ws.z[k]);
  }
  return {alloc, ws};
}

std::pair<EpochAllocation, AllocatorWorkspace> allocate_epoch_maxsum(
    const ChannelState& channel, const NetworkConfig& config, double lambda) {
  const std::vector<double> ones(config.num_users, 1.0);
  return allocate_epoch(channel, config, lambda, ones);
}

double KktReport::max_abs() const {
  return std::max(std::max(std::fabs(stationarity_e), std::fabs(stationarity_tau)),
                  std::max(std::fabs(stationarity_tau0), std::fabs(z_equation)));
}

KktReport verify_kkt(const EpochAllocation& alloc, const AllocatorWorkspace& ws,
                     const ChannelState& channel, const NetworkConfig& config,
                     double lambda, std::span<const double> rbar) {
  if (!ws.transmit) {
    throw std::invalid_argument("verify_kkt: allocation must be transmit-mode");
  }
  KktReport report;
  report.stationarity_tau0 = ws.beta * config.peak_power - ws.mu;

  double inverse_sum = 0.0;
  for (int k = 0; k < config.num_users; ++k) {
    if (channel.a[k] == 0.0 || alloc.tau[k] == 0.0) {
      continue;
    }
    // Recover z from the emitted fractions rather than trusting the workspace.
    const double z_alloc = channel.a[k] * config.peak_power * alloc.tau0 / alloc.tau[k];
    const double u = 1.0 - ws.c[k] + z_alloc;
    inverse_sum += channel.a[k] / (rbar[k] * u);

    const double tau_res = std::log(u) - z_alloc / u - rbar[k] * ws.mu;
    report.stationarity_tau =
        std::max(report.stationarity_tau, std::fabs(tau_res));

    const double z_res =
        z_equation_residual(ws.c[k], ws.beta * config.peak_power * rbar[k], ws.z[k]);
    report.z_equation = std::max(report.z_equation, std::fabs(z_res));
  }
  report.stationarity_e = inverse_sum - lambda - ws.beta;
  return report;
}

double epoch_lagrangian(const EpochAllocation& alloc, const ChannelState& channel,
                        const NetworkConfig& config, double lambda,
                        std::span<const double> rbar) {
  double value = -lambda * alloc.e;
  for (int k = 0; k < config.num_users; ++k) {
    if (alloc.tau[k] <= 0.0) {
      continue;
    }
    const double c = config.circuit_power * channel.x[k];
    const double arg = 1.0 - c + channel.a[k] * alloc.e / alloc.tau[k];
    value += alloc.tau[k] * std::log(arg) / rbar[k];
  }
  return value;
}

}  // namespace wpcn
