#include "wpcn.h"

#include <cstring>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#include "allocator.hpp"
#include "channel.hpp"
#include "config_io.hpp"
#include "protocol.hpp"
#include "special_functions.hpp"
#include "verification.hpp"

struct wpcn_config {
  wpcn::NetworkConfig cfg;
};

struct wpcn_result {
  wpcn::SimulationResult res;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what; }

int map_exception() {
  try {
    throw;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return WPCN_ERR_ARG;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return WPCN_ERR_DOMAIN;
  } catch (const std::runtime_error& e) {
    set_error(e.what());
    const std::string what = e.what();
    if (what.find("open") != std::string::npos) {
      return WPCN_ERR_IO;
    }
    return WPCN_ERR_CONVERGENCE;
  } catch (const std::exception& e) {
    set_error(e.what());
    return WPCN_ERR_INTERNAL;
  }
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return WPCN_OK;
  } catch (...) {
    return map_exception();
  }
}

std::vector<double> weights_or_ones(const wpcn_config* config, const double* rbar) {
  if (rbar == nullptr) {
    return std::vector<double>(config->cfg.num_users, 1.0);
  }
  return std::vector<double>(rbar, rbar + config->cfg.num_users);
}

}  // namespace

extern "C" {

const char* wpcn_version(void) { return "0.1.0"; }

const char* wpcn_status_str(int status) {
  switch (status) {
    case WPCN_OK:
      return "ok";
    case WPCN_ERR_ARG:
      return "invalid argument";
    case WPCN_ERR_DOMAIN:
      return "domain error";
    case WPCN_ERR_CONVERGENCE:
      return "convergence failure";
    case WPCN_ERR_IO:
      return "i/o error";
    default:
      return "internal error";
  }
}

const char* wpcn_last_error(void) { return g_last_error.c_str(); }

wpcn_config* wpcn_config_create(int num_users) {
  if (num_users < 1) {
    set_error("wpcn_config_create: num_users must be at least 1");
    return nullptr;
  }
  auto* handle = new (std::nothrow) wpcn_config;
  if (handle != nullptr) {
    handle->cfg = wpcn::equal_distance_config(num_users, 10.0);
  }
  return handle;
}

wpcn_config* wpcn_config_default(void) {
  auto* handle = new (std::nothrow) wpcn_config;
  if (handle != nullptr) {
    handle->cfg = wpcn::default_config();
  }
  return handle;
}

wpcn_config* wpcn_config_load(const char* path) {
  if (path == nullptr) {
    set_error("wpcn_config_load: null path");
    return nullptr;
  }
  try {
    wpcn::NetworkConfig cfg = wpcn::load_config(path);
    auto* handle = new wpcn_config;
    handle->cfg = std::move(cfg);
    return handle;
  } catch (...) {
    map_exception();
    return nullptr;
  }
}

wpcn_config* wpcn_config_clone(const wpcn_config* config) {
  if (config == nullptr) {
    return nullptr;
  }
  auto* handle = new (std::nothrow) wpcn_config;
  if (handle != nullptr) {
    handle->cfg = config->cfg;
  }
  return handle;
}

void wpcn_config_free(wpcn_config* config) { delete config; }

int wpcn_config_set(wpcn_config* config, const char* key, const char* value) {
  if (config == nullptr || key == nullptr || value == nullptr) {
    set_error("wpcn_config_set: null argument");
    return WPCN_ERR_ARG;
  }
  return guarded([&] { wpcn::set_config_value(config->cfg, key, value); });
}

int wpcn_config_get(const wpcn_config* config, const char* key, char* buffer,
                    size_t size) {
  if (config == nullptr || key == nullptr || buffer == nullptr || size == 0) {
    set_error("wpcn_config_get: null argument");
    return WPCN_ERR_ARG;
  }
  return guarded([&] {
    const std::string value = wpcn::get_config_value(config->cfg, key);
    if (value.size() + 1 > size) {
      throw std::invalid_argument("wpcn_config_get: buffer too small");
    }
    std::memcpy(buffer, value.c_str(), value.size() + 1);
  });
}

int wpcn_config_get_real(const wpcn_config* config, const char* key, double* value) {
  if (config == nullptr || key == nullptr || value == nullptr) {
    set_error("wpcn_config_get_real: null argument");
    return WPCN_ERR_ARG;
  }
  return guarded([&] {
    const std::string text = wpcn::get_config_value(config->cfg, key);
    std::size_t pos = 0;
    *value = std::stod(text, &pos);
    if (pos != text.size()) {
      throw std::invalid_argument("wpcn_config_get_real: key '" + std::string(key) +
                                  "' is not scalar");
    }
  });
}

int wpcn_config_users(const wpcn_config* config) {
  return config == nullptr ? 0 : config->cfg.num_users;
}

int wpcn_config_validate(const wpcn_config* config) {
  if (config == nullptr) {
    set_error("wpcn_config_validate: null config");
    return WPCN_ERR_ARG;
  }
  return guarded([&] { wpcn::validate(config->cfg); });
}

int wpcn_run(const wpcn_config* config, int mode, int64_t epochs, uint64_t seed,
             int record_trace, wpcn_result** result) {
  if (config == nullptr || result == nullptr) {
    set_error("wpcn_run: null argument");
    return WPCN_ERR_ARG;
  }
  if (mode != WPCN_MODE_PF && mode != WPCN_MODE_MAXSUM) {
    set_error("wpcn_run: unknown mode");
    return WPCN_ERR_ARG;
  }
  return guarded([&] {
    auto out = std::make_unique<wpcn_result>();
    out->res = wpcn::run(config->cfg, epochs, seed,
                         mode == WPCN_MODE_PF ? wpcn::Mode::pf
                                              : wpcn::Mode::max_sum_rate,
                         0.0, record_trace != 0);
    *result = out.release();
  });
}

int wpcn_run_fixed_lambda(const wpcn_config* config, int64_t epochs, uint64_t seed,
                          double lambda, const double* rbar, int record_trace,
                          wpcn_result** result) {
  if (config == nullptr || result == nullptr) {
    set_error("wpcn_run_fixed_lambda: null argument");
    return WPCN_ERR_ARG;
  }
  return guarded([&] {
    std::vector<wpcn::ChannelState> trace;
    trace.reserve(epochs);
    for (int64_t i = 1; i <= epochs; ++i) {
      trace.push_back(wpcn::sample_epoch(seed, config->cfg, i));
    }
    const auto weights = weights_or_ones(config, rbar);
    auto out = std::make_unique<wpcn_result>();
    out->res =
        wpcn::run_fixed_lambda(config->cfg, trace, lambda, weights, record_trace != 0);
    out->res.seed = seed;
    *result = out.release();
  });
}

int wpcn_calibrate_lambda(const wpcn_config* config, int64_t epochs, uint64_t seed,
                          const double* rbar, double* lambda) {
  if (config == nullptr || lambda == nullptr) {
    set_error("wpcn_calibrate_lambda: null argument");
    return WPCN_ERR_ARG;
  }
  return guarded([&] {
    std::vector<wpcn::ChannelState> trace;
    trace.reserve(epochs);
    for (int64_t i = 1; i <= epochs; ++i) {
      trace.push_back(wpcn::sample_epoch(seed, config->cfg, i));
    }
    const auto weights = weights_or_ones(config, rbar);
    *lambda = wpcn::calibrate_lambda_offline(config->cfg, trace, weights);
  });
}

int wpcn_calibrate_pf_lambda(const wpcn_config* config, int64_t epochs, uint64_t seed,
                             int weight_rounds, double* lambda, double* rbar) {
  if (config == nullptr || lambda == nullptr || weight_rounds < 1) {
    set_error("wpcn_calibrate_pf_lambda: null argument or bad round count");
    return WPCN_ERR_ARG;
  }
  return guarded([&] {
    std::vector<wpcn::ChannelState> trace;
    trace.reserve(epochs);
    for (int64_t i = 1; i <= epochs; ++i) {
      trace.push_back(wpcn::sample_epoch(seed, config->cfg, i));
    }
    const wpcn::PfCalibration cal =
        wpcn::calibrate_pf_offline(config->cfg, trace, weight_rounds);
    *lambda = cal.lambda;
    if (rbar != nullptr) {
      for (int k = 0; k < config->cfg.num_users; ++k) {
        rbar[k] = cal.rbar[k];
      }
    }
  });
}

void wpcn_result_free(wpcn_result* result) { delete result; }

int64_t wpcn_result_epochs(const wpcn_result* result) {
  return result == nullptr ? 0 : result->res.epochs;
}

int wpcn_result_mode(const wpcn_result* result) {
  if (result == nullptr) {
    return WPCN_MODE_MAXSUM;
  }
  return result->res.mode == wpcn::Mode::pf ? WPCN_MODE_PF : WPCN_MODE_MAXSUM;
}

double wpcn_result_sum_rate(const wpcn_result* result) {
  return result == nullptr ? 0.0 : result->res.sum_rate;
}

double wpcn_result_jain(const wpcn_result* result) {
  return result == nullptr ? 0.0 : result->res.jain;
}

int wpcn_result_jain_degenerate(const wpcn_result* result) {
  return result != nullptr && result->res.jain_degenerate ? 1 : 0;
}

double wpcn_result_avg_bs_power(const wpcn_result* result) {
  return result == nullptr ? 0.0 : result->res.avg_bs_power;
}

double wpcn_result_user_rate(const wpcn_result* result, int user) {
  if (result == nullptr || user < 0 || user >= result->res.num_users) {
    return 0.0;
  }
  return result->res.user_rate[user];
}

int wpcn_result_write_trace_csv(const wpcn_result* result, const char* path) {
  if (result == nullptr || path == nullptr) {
    set_error("wpcn_result_write_trace_csv: null argument");
    return WPCN_ERR_ARG;
  }
  return guarded([&] { wpcn::write_trace_csv(result->res, path); });
}

int wpcn_write_channel_csv(const wpcn_config* config, int64_t epochs, uint64_t seed,
                           const char* path) {
  if (config == nullptr || path == nullptr) {
    set_error("wpcn_write_channel_csv: null argument");
    return WPCN_ERR_ARG;
  }
  return guarded([&] { wpcn::write_channel_csv(path, config->cfg, seed, epochs); });
}

int wpcn_lambert_w0(double x, double* w) {
  if (w == nullptr) {
    set_error("wpcn_lambert_w0: null output");
    return WPCN_ERR_ARG;
  }
  return guarded([&] { *w = wpcn::lambert_w0(x); });
}

int wpcn_solve_z(double c, double b, double* z) {
  if (z == nullptr) {
    set_error("wpcn_solve_z: null output");
    return WPCN_ERR_ARG;
  }
  return guarded([&] { *z = wpcn::solve_z(c, b); });
}

int wpcn_verify(uint64_t seed, int instances, int verbose) {
  try {
    return wpcn::run_verification(seed, instances, verbose != 0);
  } catch (...) {
    map_exception();
    return -1;
  }
}

}  // extern "C"
