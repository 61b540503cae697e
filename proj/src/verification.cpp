#include "verification.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "allocator.hpp"
#include "channel.hpp"
#include "config_io.hpp"
#include "oracle.hpp"
#include "special_functions.hpp"

namespace wpcn {

namespace {

struct CheckSink {
  bool verbose = false;
  int failures = 0;

  void report(bool ok, const char* name, const char* detail_fmt, double value) {
    if (!ok) {
      ++failures;
    }
    if (verbose) {
      std::printf("[%s] %-24s ", ok ? "ok" : "FAIL", name);
      std::printf(detail_fmt, value);
      std::printf("\n");
    }
  }
};

double lambert_residual_sweep(std::uint64_t seed, int points) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    // Log-uniform magnitudes plus the near-branch region.
    double x;
    const double u = rng.next_double();
    if (u < 0.3) {
      x = -0.36787944117144233 + rng.next_double() * 0.36787944117144233;
    } else {
      x = std::pow(10.0, -6.0 + 12.0 * rng.next_double());
    }
    const double w = lambert_w0(x);
    const double res = std::fabs(w * std::exp(w) - x) / std::max(1.0, std::fabs(x));
    worst = std::max(worst, res);
  }
  return worst;
}

double z_residual_sweep(std::uint64_t seed, int points, double* worst_margin) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  *worst_margin = 1.0;
  for (int i = 0; i < points; ++i) {
    const double c = 5.0 * rng.next_double();
    const double b = 10.0 * rng.next_double();
    const double z = solve_z(c, b);
    const double u = 1.0 - c + z;
    const double res = std::fabs(std::log(u) - z / u - b);
    worst = std::max(worst, res);
    if (b > 0.0) {
      *worst_margin = std::min(*worst_margin, z - c);
    }
  }
  return worst;
}

double kkt_sweep(std::uint64_t seed, int epochs) {
  NetworkConfig config = default_config();
  config.circuit_power = 1e-5;
  SplitMix64 rng(seed);
  double worst = 0.0;
  int done = 0;
  for (std::int64_t i = 1; done < epochs; ++i) {
    const ChannelState channel = sample_epoch(seed, config, i);
    std::vector<double> rbar(config.num_users);
    for (auto& r : rbar) {
      r = 0.5 + 1.5 * rng.next_double();
    }
    const double lambda = 0.1 * rng.next_double();
    const auto [alloc, ws] = allocate_epoch(channel, config, lambda, rbar);
    if (!ws.transmit) {
      continue;
    }
    ++done;
    worst = std::max(worst,
                     verify_kkt(alloc, ws, channel, config, lambda, rbar).max_abs());
  }
  return worst;
}

struct OracleSweep {
  double worst_rel_gap = 0.0;    // closed form below the grid by this much
  double worst_boundary = 0.0;   // distance of best e fraction from {0,1}, in cells
  int instances = 0;
};

NetworkConfig random_small_config(SplitMix64& rng, int users) {
  NetworkConfig config = equal_distance_config(users, 10.0);
  static const double kCircuit[] = {0.0, 1e-5, 1e-4};
  config.circuit_power = kCircuit[rng.next() % 3];
  for (int k = 0; k < users; ++k) {
    config.distance[k] = 8.0 + 12.0 * rng.next_double();
  }
  return config;
}

OracleSweep oracle_sweep(std::uint64_t seed, int instances) {
  OracleSweep sweep;
  SplitMix64 rng(seed ^ 0x5eedULL);
  const GridSpec grid;
  for (int i = 0; i < instances; ++i) {
    const int users = 1 + static_cast<int>(rng.next() % 3);
    const NetworkConfig config = random_small_config(rng, users);
    const ChannelState channel = sample_epoch(rng.next(), config, 1);
    std::vector<double> rbar(users);
    for (auto& r : rbar) {
      r = 0.5 + 1.5 * rng.next_double();
    }
    double scale = 0.0;
    for (int k = 0; k < users; ++k) {
      scale += channel.a[k] / rbar[k];
    }
    // Price spanning roughly two decades around the threshold scale.
    const double lambda = scale * std::pow(10.0, -1.5 + 2.0 * rng.next_double());

    const auto [alloc, ws] = allocate_epoch(channel, config, lambda, rbar);
    const double closed = epoch_lagrangian(alloc, channel, config, lambda, rbar);
    const auto grid_best = grid_search_epoch(channel, config, lambda, rbar, grid,
                                             OffRegimeRule::zero_rate);
    ++sweep.instances;
    if (grid_best.feasible) {
      const double gap = grid_best.objective - closed;
      const double denom = std::max(1e-12, std::fabs(grid_best.objective));
      sweep.worst_rel_gap = std::max(sweep.worst_rel_gap, gap / denom);
      const double cells = std::min(grid_best.e_fraction, 1.0 - grid_best.e_fraction) /
                           grid_best.e_fraction_cell;
      sweep.worst_boundary = std::max(sweep.worst_boundary, cells);
    }
  }
  return sweep;
}

int concavity_sweep(std::uint64_t seed, int instances, int pairs) {
  SplitMix64 rng(seed ^ 0xc0caULL);
  int violations = 0;
  for (int i = 0; i < instances; ++i) {
    const int users = 1 + static_cast<int>(rng.next() % 3);
    const NetworkConfig config = random_small_config(rng, users);
    const ChannelState channel = sample_epoch(rng.next(), config, 1);
    const std::vector<double> rbar(users, 1.0);
    const auto report =
        verify_concavity_samples(channel, config, 0.05, rbar, pairs, rng.next());
    violations += report.violations;
  }
  return violations;
}

}  // namespace

int run_verification(std::uint64_t seed, int instances, bool verbose) {
  CheckSink sink;
  sink.verbose = verbose;

  const double w_res = lambert_residual_sweep(seed, 10000);
  sink.report(w_res <= 1e-12, "lambert_w_residual", "worst %.3g (limit 1e-12)", w_res);

  double z_margin = 0.0;
  const double z_res = z_residual_sweep(seed + 1, 10000, &z_margin);
  sink.report(z_res <= 1e-9, "z_equation_residual", "worst %.3g (limit 1e-9)", z_res);
  sink.report(z_margin > 0.0, "z_exceeds_circuit_term", "worst margin %.3g", z_margin);

  const double kkt = kkt_sweep(seed + 2, 200);
  sink.report(kkt <= 1e-8, "kkt_residual", "worst %.3g (limit 1e-8)", kkt);

  const OracleSweep sweep = oracle_sweep(seed + 3, instances);
  sink.report(sweep.worst_rel_gap <= 1e-4, "grid_search_agreement",
              "worst rel gap %.3g (limit 1e-4)", sweep.worst_rel_gap);
  sink.report(sweep.worst_boundary <= 1.0, "bang_bang_energy",
              "worst boundary distance %.3g cells", sweep.worst_boundary);

  const int violations = concavity_sweep(seed + 4, 5, 2000);
  sink.report(violations == 0, "midpoint_concavity", "%.0f violations",
              static_cast<double>(violations));

  return sink.failures;
}

}  // namespace wpcn
