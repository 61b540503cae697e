#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace wpcn {

/// Static network parameters. Distances in meters, powers in watts,
/// the epoch duration in seconds.
struct NetworkConfig {
  int num_users = 0;             ///< K
  std::vector<double> eta;       ///< per-user RF-to-DC conversion efficiency, one entry per user
  double circuit_power = 0.0;    ///< p_c, fixed electronics draw while a user transmits (W)
  double peak_power = 0.0;       ///< P_max, BS peak transmit power (W)
  double avg_power = 0.0;        ///< P_avg, BS average power budget (W)
  double noise_power = 1e-12;    ///< N_0, AWGN power (W)
  double epoch_duration = 1.0;   ///< T (s)
  std::vector<double> distance;  ///< D_k (m)
  double path_loss_exp = 3.0;    ///< alpha
  double ref_loss = 1e-3;        ///< linear path loss at the 1 m reference distance
  double step_size = 0.001;      ///< gamma_0 for the online dual update (dimensionless)
};

/// One block-fading realization. x holds the noise-normalized power gains
/// (units 1/W), a[k] = eta[k] * N_0 * x[k]^2 the allocator coefficients.
struct ChannelState {
  std::int64_t epoch = 0;  ///< 1-based epoch index
  std::vector<double> x;
  std::vector<double> a;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const NetworkConfig& config);

/// Mean normalized gain of user k: ref_loss * D_k^(-alpha) / N_0.
double mean_gain(const NetworkConfig& config, int k);

/// Deterministic per-epoch fading draw. Gains are i.i.d. exponential with
/// mean mean_gain(config, k), the power-gain law of Rayleigh amplitude
/// fading. The per-epoch stream is splitmix64 seeded with (seed XOR epoch),
/// so epochs can be generated in any order and any concurrency.
ChannelState sample_epoch(std::uint64_t seed, const NetworkConfig& config,
                          std::int64_t epoch);

/// Trace export/import, header "epoch,x_1,...,x_K", 17 significant digits.
void write_channel_csv(const std::string& path, const NetworkConfig& config,
                       std::uint64_t seed, std::int64_t epochs);
std::vector<ChannelState> read_channel_csv(const std::string& path,
                                           const NetworkConfig& config);

/// splitmix64: the 64-bit seed-mixing generator behind sample_epoch.
/// Exposed because tests and the grid oracle reuse it.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in the open interval (0, 1).
  double next_double() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exponential with the given mean.
  double next_exponential(double mean) {
    return -mean * std::log(next_double());
  }
};

}  // namespace wpcn
