#include "channel.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wpcn {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) {
    throw std::invalid_argument("config field '" + field + "': " + what);
  }
}

}  // namespace

void validate(const NetworkConfig& config) {
  require(config.num_users >= 1, "K", "must be at least 1");
  const auto k = static_cast<std::size_t>(config.num_users);
  require(config.eta.size() == k, "eta", "needs one entry per user");
  require(config.distance.size() == k, "distances", "needs one entry per user");
  for (double e : config.eta) {
    require(e > 0.0 && e <= 1.0, "eta", "entries must lie in (0, 1]");
  }
  for (double d : config.distance) {
    require(d > 0.0, "distances", "entries must be positive");
  }
  require(config.circuit_power >= 0.0, "p_c", "must be nonnegative");
  require(config.peak_power > 0.0, "P_max", "must be positive");
  require(config.avg_power > 0.0 && config.avg_power <= config.peak_power, "P_avg",
          "must satisfy 0 < P_avg <= P_max");
  require(config.noise_power > 0.0, "N_0", "must be positive");
  require(config.epoch_duration > 0.0, "T", "must be positive");
  require(config.path_loss_exp > 0.0, "alpha", "must be positive");
  require(config.ref_loss > 0.0, "ref_loss", "must be positive");
  require(config.step_size > 0.0, "gamma0", "must be positive");
}

double mean_gain(const NetworkConfig& config, int k) {
  return config.ref_loss * std::pow(config.distance.at(k), -config.path_loss_exp) /
         config.noise_power;
}

ChannelState sample_epoch(std::uint64_t seed, const NetworkConfig& config,
                          std::int64_t epoch) {
  SplitMix64 rng(seed ^ static_cast<std::uint64_t>(epoch));
  ChannelState state;
  state.epoch = epoch;
  state.x.resize(config.num_users);
  state.a.resize(config.num_users);
  for (int k = 0; k < config.num_users; ++k) {
    state.x[k] = rng.next_exponential(mean_gain(config, k));
    state.a[k] = config.eta[k] * config.noise_power * state.x[k] * state.x[k];
  }
  return state;
}

void write_channel_csv(const std::string& path, const NetworkConfig& config,
                       std::uint64_t seed, std::int64_t epochs) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  std::fputs("epoch", f);
  for (int k = 1; k <= config.num_users; ++k) {
    std::fprintf(f, ",x_%d", k);
  }
  std::fputc('\n', f);
  for (std::int64_t i = 1; i <= epochs; ++i) {
    const ChannelState state = sample_epoch(seed, config, i);
    std::fprintf(f, "%" PRId64, i);
    for (double x : state.x) {
      std::fprintf(f, ",%.17g", x);
    }
    std::fputc('\n', f);
  }
  std::fclose(f);
}

std::vector<ChannelState> read_channel_csv(const std::string& path,
                                           const NetworkConfig& config) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty channel trace: " + path);
  }
  std::vector<ChannelState> trace;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    ChannelState state;
    if (!std::getline(row, cell, ',')) {
      throw std::runtime_error("malformed channel trace row: " + line);
    }
    state.epoch = std::stoll(cell);
    while (std::getline(row, cell, ',')) {
      state.x.push_back(std::stod(cell));
    }
    if (state.x.size() != static_cast<std::size_t>(config.num_users)) {
      throw std::runtime_error("channel trace row has wrong gain count: " + line);
    }
    state.a.resize(state.x.size());
    for (std::size_t k = 0; k < state.x.size(); ++k) {
      state.a[k] = config.eta[k] * config.noise_power * state.x[k] * state.x[k];
    }
    trace.push_back(std::move(state));
  }
  return trace;
}

}  // namespace wpcn
