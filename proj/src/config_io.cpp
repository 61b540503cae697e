#include "config_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace wpcn {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (trim(value.substr(pos)).empty()) {
      return v;
    }
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("config field '" + key + "': cannot parse '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::istringstream in(value);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    out.push_back(parse_real(key, trim(cell)));
  }
  if (out.empty()) {
    throw std::invalid_argument("config field '" + key + "': empty list");
  }
  return out;
}

// Shortest decimal form that parses back to the same double.
std::string format_real(double v) {
  char buf[64];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) {
      break;
    }
  }
  return buf;
}

std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) {
      out += ", ";
    }
    out += format_real(v[i]);
  }
  return out;
}

}  // namespace

NetworkConfig default_config() {
  NetworkConfig config;
  config.num_users = 5;
  config.eta.assign(5, 0.5);
  config.circuit_power = 0.0;
  config.peak_power = 5.0;
  config.avg_power = 1.0;
  config.noise_power = 1e-12;
  config.epoch_duration = 1.0;
  config.distance = {10.0, 12.5, 15.0, 17.0, 18.8};
  config.path_loss_exp = 3.0;
  config.ref_loss = 1e-3;
  config.step_size = 0.001;
  return config;
}

NetworkConfig equal_distance_config(int num_users, double distance_m) {
  NetworkConfig config = default_config();
  config.num_users = num_users;
  config.eta.assign(num_users, 0.5);
  config.distance.assign(num_users, distance_m);
  return config;
}

void set_config_value(NetworkConfig& config, const std::string& key,
                      const std::string& value) {
  if (key == "K") {
    const double v = parse_real(key, value);
    const int k = static_cast<int>(v);
    if (k < 1 || static_cast<double>(k) != v) {
      throw std::invalid_argument("config field 'K': must be a positive integer");
    }
    config.num_users = k;
    config.eta.resize(k, config.eta.empty() ? 0.5 : config.eta.back());
    config.distance.resize(k, config.distance.empty() ? 10.0 : config.distance.back());
  } else if (key == "eta") {
    auto list = parse_list(key, value);
    if (list.size() == 1) {
      list.assign(config.num_users > 0 ? config.num_users : 1, list[0]);
    }
    config.eta = std::move(list);
  } else if (key == "p_c") {
    config.circuit_power = parse_real(key, value);
  } else if (key == "P_max") {
    config.peak_power = parse_real(key, value);
  } else if (key == "P_avg") {
    config.avg_power = parse_real(key, value);
  } else if (key == "N_0") {
    config.noise_power = parse_real(key, value);
  } else if (key == "T") {
    config.epoch_duration = parse_real(key, value);
  } else if (key == "distances") {
    config.distance = parse_list(key, value);
    if (config.num_users == 0) {
      config.num_users = static_cast<int>(config.distance.size());
      config.eta.resize(config.num_users, 0.5);
    }
  } else if (key == "alpha") {
    config.path_loss_exp = parse_real(key, value);
  } else if (key == "ref_loss") {
    config.ref_loss = parse_real(key, value);
  } else if (key == "gamma0") {
    config.step_size = parse_real(key, value);
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

std::string get_config_value(const NetworkConfig& config, const std::string& key) {
  if (key == "K") {
    return std::to_string(config.num_users);
  }
  if (key == "eta") {
    return format_list(config.eta);
  }
  if (key == "p_c") {
    return format_real(config.circuit_power);
  }
  if (key == "P_max") {
    return format_real(config.peak_power);
  }
  if (key == "P_avg") {
    return format_real(config.avg_power);
  }
  if (key == "N_0") {
    return format_real(config.noise_power);
  }
  if (key == "T") {
    return format_real(config.epoch_duration);
  }
  if (key == "distances") {
    return format_list(config.distance);
  }
  if (key == "alpha") {
    return format_real(config.path_loss_exp);
  }
  if (key == "ref_loss") {
    return format_real(config.ref_loss);
  }
  if (key == "gamma0") {
    return format_real(config.step_size);
  }
  throw std::invalid_argument("unknown config key '" + key + "'");
}

NetworkConfig parse_config(const std::string& text) {
  NetworkConfig config = default_config();
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    set_config_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

NetworkConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config: " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const NetworkConfig& config) {
  std::ostringstream out;
  out << "K = " << config.num_users << "\n";
  out << "eta = " << format_list(config.eta) << "\n";
  out << "p_c = " << format_real(config.circuit_power) << "\n";
  out << "P_max = " << format_real(config.peak_power) << "\n";
  out << "P_avg = " << format_real(config.avg_power) << "\n";
  out << "N_0 = " << format_real(config.noise_power) << "\n";
  out << "T = " << format_real(config.epoch_duration) << "\n";
  out << "distances = " << format_list(config.distance) << "\n";
  out << "alpha = " << format_real(config.path_loss_exp) << "\n";
  out << "ref_loss = " << format_real(config.ref_loss) << "\n";
  out << "gamma0 = " << format_real(config.step_size) << "\n";
  return out.str();
}

}  // namespace wpcn
