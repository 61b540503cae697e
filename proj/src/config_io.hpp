#pragma once

#include <string>

#include "channel.hpp"

namespace wpcn {

/// Reference five-user setup: distances 10, 12.5, 15, 17, 18.8 m, alpha 3,
/// 30 dB loss at 1 m, N_0 = 1e-12 W, eta = 0.5, P_avg = 1 W, P_max = 5 W.
NetworkConfig default_config();

/// Same radio parameters with all users at one distance.
NetworkConfig equal_distance_config(int num_users, double distance_m);

/// Flat "key = value" text, one pair per line, lists comma-separated,
/// '#' starts a comment. Keys: K, eta, p_c, P_max, P_avg, N_0, T,
/// distances, alpha, ref_loss, gamma0. "eta" accepts a scalar (applied to
/// every user) or a K-element list. Parsing does not validate ranges; call
/// validate() when the config is complete.
NetworkConfig parse_config(const std::string& text);
NetworkConfig load_config(const std::string& path);
std::string serialize_config(const NetworkConfig& config);

/// Apply a single key. Throws std::invalid_argument on unknown keys or
/// unparsable values.
void set_config_value(NetworkConfig& config, const std::string& key,
                      const std::string& value);
std::string get_config_value(const NetworkConfig& config, const std::string& key);

}  // namespace wpcn
