#include "protocol.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace wpcn {

namespace {

constexpr double kRateFloor = 1e-6;  // keeps the PF weights finite

std::vector<double> ones(int n) { return std::vector<double>(n, 1.0); }

void record_epoch(SimulationResult& result, const EpochAllocation& alloc,
                  double lambda_used) {
  result.p0.push_back(alloc.p0);
  result.tau0.push_back(alloc.tau0);
  result.lambda_hat.push_back(lambda_used);
  result.tau.insert(result.tau.end(), alloc.tau.begin(), alloc.tau.end());
  result.rate.insert(result.rate.end(), alloc.rate.begin(), alloc.rate.end());
}

void finalize(SimulationResult& result, const std::vector<double>& rate_sum,
              double energy_sum) {
  const double m = static_cast<double>(result.epochs);
  result.user_rate.resize(result.num_users);
  for (int k = 0; k < result.num_users; ++k) {
    result.user_rate[k] = rate_sum[k] / m;
  }
  double total = 0.0;
  for (double r : result.user_rate) {
    total += r;
  }
  result.sum_rate = total;
  result.avg_bs_power = energy_sum / m;
  const Metrics metrics = compute_metrics(result.user_rate);
  result.jain = metrics.jain;
  result.jain_degenerate = metrics.jain_degenerate;
}

}  // namespace

const char* mode_name(Mode mode) {
  return mode == Mode::pf ? "pf" : "maxsum";
}

Mode mode_from_name(const std::string& name) {
  if (name == "pf") {
    return Mode::pf;
  }
  if (name == "maxsum") {
    return Mode::max_sum_rate;
  }
  throw std::invalid_argument("unknown mode '" + name + "' (expected pf or maxsum)");
}

ProtocolState make_initial_state(const NetworkConfig& config, Mode mode,
                                 double gamma0) {
  ProtocolState state;
  state.mode = mode;
  state.gamma0 = gamma0 > 0.0 ? gamma0 : config.step_size;
  state.rbar_hat = ones(config.num_users);
  return state;
}

EpochAllocation step(ProtocolState& state, const ChannelState& channel,
                     const NetworkConfig& config) {
  const std::int64_t i = state.epoch + 1;

  auto [alloc, ws] = allocate_epoch(channel, config, state.lambda_hat, state.rbar_hat);
  if (state.mode == Mode::pf && i == 1 && !ws.transmit) {
    // Bootstrap epoch: transmit regardless of the threshold so the rate
    // averages start from realized rates. Zero price always clears the
    // threshold unless every gain is zero.
    auto forced = allocate_epoch(channel, config, 0.0, state.rbar_hat);
    alloc = std::move(forced.first);
    ws = std::move(forced.second);
  }

  state.energy_sum += alloc.e;
  // Dual ascent on the average power budget; the gradient is normalized by
  // P_avg^2 so gamma0 stays dimensionless.
  const double running_avg = state.energy_sum / static_cast<double>(i);
  state.lambda_hat += state.gamma0 * (running_avg - config.avg_power) /
                      (config.avg_power * config.avg_power);
  state.lambda_hat = std::max(state.lambda_hat, 0.0);

  if (state.mode == Mode::pf) {
    if (i == 1) {
      for (int k = 0; k < config.num_users; ++k) {
        state.rbar_hat[k] = std::max(alloc.rate[k], kRateFloor);
      }
    } else {
      const double im1 = static_cast<double>(i - 1);
      for (int k = 0; k < config.num_users; ++k) {
        state.rbar_hat[k] =
            (im1 * state.rbar_hat[k] + alloc.rate[k]) / static_cast<double>(i);
      }
    }
  }

  state.epoch = i;
  return alloc;
}

namespace {

template <typename ChannelAt>
SimulationResult run_loop(const NetworkConfig& config, std::int64_t epochs,
                          std::uint64_t seed, Mode mode, double gamma0,
                          bool record_trace, ChannelAt&& channel_at) {
  if (epochs < 1) {
    throw std::invalid_argument("run: epoch count must be at least 1");
  }
  validate(config);

  SimulationResult result;
  result.num_users = config.num_users;
  result.epochs = epochs;
  result.mode = mode;
  result.seed = seed;
  if (record_trace) {
    result.p0.reserve(epochs);
    result.tau0.reserve(epochs);
    result.lambda_hat.reserve(epochs);
    result.tau.reserve(epochs * config.num_users);
    result.rate.reserve(epochs * config.num_users);
  }

  ProtocolState state = make_initial_state(config, mode, gamma0);
  std::vector<double> rate_sum(config.num_users, 0.0);
  for (std::int64_t i = 1; i <= epochs; ++i) {
    const double lambda_used = state.lambda_hat;
    const ChannelState channel = channel_at(i);
    const EpochAllocation alloc = step(state, channel, config);
    for (int k = 0; k < config.num_users; ++k) {
      rate_sum[k] += alloc.rate[k];
    }
    if (record_trace) {
      record_epoch(result, alloc, lambda_used);
    }
  }
  finalize(result, rate_sum, state.energy_sum);
  return result;
}

}  // namespace

SimulationResult run(const NetworkConfig& config, std::int64_t epochs,
                     std::uint64_t seed, Mode mode, double gamma0,
                     bool record_trace) {
  return run_loop(config, epochs, seed, mode, gamma0, record_trace,
                  [&](std::int64_t i) { return sample_epoch(seed, config, i); });
}

SimulationResult run_on_trace(const NetworkConfig& config,
                              std::span<const ChannelState> trace, Mode mode,
                              double gamma0, bool record_trace) {
  return run_loop(config, static_cast<std::int64_t>(trace.size()), 0, mode, gamma0,
                  record_trace,
                  [&](std::int64_t i) { return trace[static_cast<std::size_t>(i - 1)]; });
}

SimulationResult run_fixed_lambda(const NetworkConfig& config,
                                  std::span<const ChannelState> trace,
                                  double lambda, std::span<const double> rbar,
                                  bool record_trace) {
  if (trace.empty()) {
    throw std::invalid_argument("run_fixed_lambda: empty trace");
  }
  validate(config);

  SimulationResult result;
  result.num_users = config.num_users;
  result.epochs = static_cast<std::int64_t>(trace.size());
  result.mode = Mode::max_sum_rate;
  for (int k = 0; k < config.num_users; ++k) {
    if (rbar[k] != 1.0) {
      result.mode = Mode::pf;
      break;
    }
  }

  std::vector<double> rate_sum(config.num_users, 0.0);
  double energy_sum = 0.0;
  for (const ChannelState& channel : trace) {
    const auto [alloc, ws] = allocate_epoch(channel, config, lambda, rbar);
    energy_sum += alloc.e;
    for (int k = 0; k < config.num_users; ++k) {
      rate_sum[k] += alloc.rate[k];
    }
    if (record_trace) {
      record_epoch(result, alloc, lambda);
    }
  }
  finalize(result, rate_sum, energy_sum);
  return result;
}

namespace {

// Trace-average spent energy at a fixed price; non-increasing in lambda.
// Thresholds are precomputed per epoch, so silent epochs cost one compare.
double average_spend(const NetworkConfig& config, std::span<const ChannelState> trace,
                     std::span<const double> rbar, std::span<const double> thresholds,
                     double lambda) {
  double energy = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (!(thresholds[i] > lambda)) {
      continue;
    }
    const auto [alloc, ws] = allocate_epoch(trace[i], config, lambda, rbar);
    energy += alloc.e;
  }
  return energy / static_cast<double>(trace.size());
}

// Price matching the budget on the given trace within rel_tol, searched
// from the bracket [lo, hi] (spend(lo) > budget >= spend(hi)).
double solve_budget_price(const NetworkConfig& config,
                          std::span<const ChannelState> trace,
                          std::span<const double> rbar,
                          std::span<const double> thresholds, double lo,
                          double spend_lo, double hi, double spend_hi,
                          double rel_tol) {
  const double tol = rel_tol * config.avg_power;
  double best = hi;
  double best_err = std::fabs(spend_hi - config.avg_power);
  for (int it = 0; it < 200 && best_err > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    if (it % 2 == 0 && spend_lo > spend_hi) {
      const double s =
          lo + (hi - lo) * (spend_lo - config.avg_power) / (spend_lo - spend_hi);
      const double margin = 0.01 * (hi - lo);
      if (s > lo + margin && s < hi - margin) {
        mid = s;
      }
    }
    if (!(mid > lo && mid < hi)) {
      break;
    }
    const double spend_mid = average_spend(config, trace, rbar, thresholds, mid);
    const double err = std::fabs(spend_mid - config.avg_power);
    if (err < best_err) {
      best = mid;
      best_err = err;
    }
    if (spend_mid > config.avg_power) {
      lo = mid;
      spend_lo = spend_mid;
    } else {
      hi = mid;
      spend_hi = spend_mid;
    }
  }
  if (best_err > tol) {
    throw std::runtime_error("calibrate_lambda_offline: tolerance not reached");
  }
  return best;
}

}  // namespace

double calibrate_lambda_offline(const NetworkConfig& config,
                                std::span<const ChannelState> trace,
                                std::span<const double> rbar) {
  if (trace.empty()) {
    throw std::invalid_argument("calibrate_lambda_offline: empty trace");
  }
  validate(config);

  std::vector<double> thresholds(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    thresholds[i] = transmit_threshold(trace[i], config, rbar);
  }

  const double tol = 1e-3 * config.avg_power;
  double spend_zero = average_spend(config, trace, rbar, thresholds, 0.0);
  if (spend_zero <= config.avg_power + tol) {
    return 0.0;  // budget slack even at zero price
  }

  // Rough price from a trace prefix, then the exact search on the full
  // trace from a bracket around it. Saves most full-trace sweeps.
  double lo = 0.0;
  double spend_lo = spend_zero;
  constexpr std::size_t kPrefix = 20000;
  if (trace.size() > 2 * kPrefix) {
    const auto prefix = trace.subspan(0, kPrefix);
    const auto prefix_thresholds = std::span<const double>(thresholds).subspan(0, kPrefix);
    const double prefix_zero =
        average_spend(config, prefix, rbar, prefix_thresholds, 0.0);
    if (prefix_zero > config.avg_power * 1.02) {
      double phi = 1.0;
      double prefix_spend = average_spend(config, prefix, rbar, prefix_thresholds, phi);
      int doublings = 0;
      while (prefix_spend > config.avg_power && ++doublings <= 200) {
        phi *= 2.0;
        prefix_spend = average_spend(config, prefix, rbar, prefix_thresholds, phi);
      }
      const double rough = solve_budget_price(config, prefix, rbar, prefix_thresholds,
                                              0.0, prefix_zero, phi, prefix_spend, 2e-3);
      // Widen around the rough price until the full trace brackets it.
      double cand_lo = 0.85 * rough;
      double cand_spend = average_spend(config, trace, rbar, thresholds, cand_lo);
      while (cand_spend <= config.avg_power && cand_lo > 1e-12) {
        cand_lo *= 0.5;
        cand_spend = average_spend(config, trace, rbar, thresholds, cand_lo);
      }
      if (cand_spend > config.avg_power) {
        lo = cand_lo;
        spend_lo = cand_spend;
      }
      double cand_hi = 1.2 * rough;
      double cand_hi_spend = average_spend(config, trace, rbar, thresholds, cand_hi);
      int expand = 0;
      while (cand_hi_spend > config.avg_power && ++expand <= 200) {
        cand_hi *= 2.0;
        cand_hi_spend = average_spend(config, trace, rbar, thresholds, cand_hi);
      }
      return solve_budget_price(config, trace, rbar, thresholds, lo, spend_lo,
                                cand_hi, cand_hi_spend, 1e-3);
    }
  }

  double hi = 1.0;
  double spend_hi = average_spend(config, trace, rbar, thresholds, hi);
  int doublings = 0;
  while (spend_hi > config.avg_power) {
    lo = hi;
    spend_lo = spend_hi;
    hi *= 2.0;
    spend_hi = average_spend(config, trace, rbar, thresholds, hi);
    if (++doublings > 200) {
      throw std::runtime_error("calibrate_lambda_offline: no bracket found");
    }
  }
  return solve_budget_price(config, trace, rbar, thresholds, lo, spend_lo, hi,
                            spend_hi, 1e-3);
}

PfCalibration calibrate_pf_offline(const NetworkConfig& config,
                                   std::span<const ChannelState> trace,
                                   int weight_rounds) {
  PfCalibration out;
  out.rbar.assign(config.num_users, 1.0);
  for (int round = 0; round < weight_rounds; ++round) {
    const double lambda = calibrate_lambda_offline(config, trace, out.rbar);
    const SimulationResult result =
        run_fixed_lambda(config, trace, lambda, out.rbar, false);
    for (int k = 0; k < config.num_users; ++k) {
      out.rbar[k] = std::max(result.user_rate[k], kRateFloor);
    }
  }
  out.lambda = calibrate_lambda_offline(config, trace, out.rbar);
  return out;
}

Metrics compute_metrics(std::span<const double> user_rates) {
  Metrics metrics;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double r : user_rates) {
    sum += r;
    sum_sq += r * r;
  }
  metrics.sum_rate = sum;
  if (sum_sq <= 0.0) {
    metrics.jain = 0.0;
    metrics.jain_degenerate = true;
  } else {
    metrics.jain = (sum * sum) / (static_cast<double>(user_rates.size()) * sum_sq);
  }
  return metrics;
}

Metrics compute_metrics(const SimulationResult& result) {
  return compute_metrics(result.user_rate);
}

void write_trace_csv(const SimulationResult& result, const std::string& path) {
  if (result.p0.size() != static_cast<std::size_t>(result.epochs)) {
    throw std::invalid_argument("write_trace_csv: result has no recorded trace");
  }
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  std::fputs("epoch,p0,tau0", f);
  for (int k = 1; k <= result.num_users; ++k) {
    std::fprintf(f, ",tau_%d", k);
  }
  for (int k = 1; k <= result.num_users; ++k) {
    std::fprintf(f, ",r_%d", k);
  }
  std::fputs(",lambda_hat\n", f);
  for (std::int64_t i = 0; i < result.epochs; ++i) {
    std::fprintf(f, "%" PRId64 ",%.17g,%.17g", i + 1, result.p0[i], result.tau0[i]);
    const std::size_t base = static_cast<std::size_t>(i) * result.num_users;
    for (int k = 0; k < result.num_users; ++k) {
      std::fprintf(f, ",%.17g", result.tau[base + k]);
    }
    for (int k = 0; k < result.num_users; ++k) {
      std::fprintf(f, ",%.17g", result.rate[base + k]);
    }
    std::fprintf(f, ",%.17g\n", result.lambda_hat[i]);
  }
  std::fclose(f);
}

std::string summary_csv_header() {
  return "mode,K,p_c,P_avg,M,seed,sum_rate,jain,avg_bs_power";
}

std::string summary_csv_row(const NetworkConfig& config,
                            const SimulationResult& result) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%s,%d,%.17g,%.17g,%" PRId64 ",%" PRIu64 ",%.17g,%.17g,%.17g",
                mode_name(result.mode), config.num_users, config.circuit_power,
                config.avg_power, result.epochs, result.seed, result.sum_rate,
                result.jain, result.avg_bs_power);
  return buf;
}

}  // namespace wpcn
