#include "experiments.hpp"

#include <cinttypes>
#include <cstdio>
#include <map>
#include <memory>
#include <stdexcept>

#include "svg_plot.hpp"
#include "wpcn.h"

namespace wpcn_tools {

namespace {

using ConfigPtr = std::unique_ptr<wpcn_config, decltype(&wpcn_config_free)>;
using ResultPtr = std::unique_ptr<wpcn_result, decltype(&wpcn_result_free)>;

[[noreturn]] void fail(const std::string& what) {
  std::string detail = wpcn_last_error();
  throw std::runtime_error(detail.empty() ? what : what + ": " + detail);
}

void check(int status, const std::string& what) {
  if (status != WPCN_OK) {
    fail(what);
  }
}

void set_value(wpcn_config* config, const char* key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  check(wpcn_config_set(config, key, buf), std::string("setting ") + key);
}

int mode_id(const std::string& mode) {
  if (mode == "pf") {
    return WPCN_MODE_PF;
  }
  if (mode == "maxsum") {
    return WPCN_MODE_MAXSUM;
  }
  throw std::invalid_argument("unknown mode '" + mode + "' (expected pf or maxsum)");
}

void validate_common(const ExperimentSpec& spec, const std::vector<double>& sweep,
                     const char* sweep_name) {
  if (spec.modes.empty()) {
    throw std::invalid_argument("experiment spec: modes list is empty");
  }
  for (const auto& mode : spec.modes) {
    mode_id(mode);
  }
  if (spec.seeds.empty()) {
    throw std::invalid_argument("experiment spec: seeds list is empty");
  }
  if (spec.epochs < 1) {
    throw std::invalid_argument("experiment spec: epochs must be at least 1");
  }
  if (sweep.empty()) {
    throw std::invalid_argument(std::string("experiment spec: ") + sweep_name +
                                " sweep is empty");
  }
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    if (!(sweep[i] > sweep[i - 1])) {
      throw std::invalid_argument(std::string("experiment spec: ") + sweep_name +
                                  " sweep must be strictly increasing");
    }
  }
}

struct SeedRun {
  unsigned long long seed = 0;
  double sum_rate = 0.0;
  double jain = 0.0;
  double avg_bs_power = 0.0;
};

SeedRun collect(wpcn_result* raw, unsigned long long seed) {
  ResultPtr result(raw, &wpcn_result_free);
  SeedRun out;
  out.seed = seed;
  out.sum_rate = wpcn_result_sum_rate(result.get());
  out.jain = wpcn_result_jain(result.get());
  out.avg_bs_power = wpcn_result_avg_bs_power(result.get());
  return out;
}

// One online protocol run; aggregates only, no trace.
SeedRun run_once(const wpcn_config* config, const std::string& mode, long epochs,
                 unsigned long long seed) {
  wpcn_result* raw = nullptr;
  check(wpcn_run(config, mode_id(mode), epochs, seed, 0, &raw), "simulation run");
  return collect(raw, seed);
}

// One run at the calibrated operating point: price from budget equality,
// and for pf the rate-fixed-point weights.
SeedRun run_calibrated_once(const wpcn_config* config, const std::string& mode,
                            long epochs, unsigned long long seed) {
  const int users = wpcn_config_users(config);
  double lambda = 0.0;
  std::vector<double> rbar(users, 1.0);
  if (mode_id(mode) == WPCN_MODE_PF) {
    check(wpcn_calibrate_pf_lambda(config, epochs, seed, 2, &lambda, rbar.data()),
          "pf calibration");
  } else {
    check(wpcn_calibrate_lambda(config, epochs, seed, nullptr, &lambda),
          "price calibration");
  }
  wpcn_result* raw = nullptr;
  check(wpcn_run_fixed_lambda(config, epochs, seed, lambda, rbar.data(), 0, &raw),
        "calibrated run");
  return collect(raw, seed);
}

class RunsCsv {
 public:
  RunsCsv(const std::string& path) : file_(std::fopen(path.c_str(), "w")) {
    if (file_ == nullptr) {
      throw std::runtime_error("cannot open for writing: " + path);
    }
    std::fputs("mode,K,p_c,P_avg,M,seed,sum_rate,jain,avg_bs_power\n", file_);
  }
  ~RunsCsv() {
    if (file_ != nullptr) {
      std::fclose(file_);
    }
  }
  RunsCsv(const RunsCsv&) = delete;
  RunsCsv& operator=(const RunsCsv&) = delete;

  void row(const std::string& mode, int users, double pc, double pavg, long epochs,
           const SeedRun& r) {
    std::fprintf(file_, "%s,%d,%.17g,%.17g,%ld,%llu,%.17g,%.17g,%.17g\n",
                 mode.c_str(), users, pc, pavg, epochs, r.seed, r.sum_rate, r.jain,
                 r.avg_bs_power);
  }

 private:
  std::FILE* file_;
};

ConfigPtr base_config(const ExperimentSpec& spec) {
  wpcn_config* raw = spec.base_config_path.empty()
                         ? wpcn_config_default()
                         : wpcn_config_load(spec.base_config_path.c_str());
  if (raw == nullptr) {
    fail("loading base config");
  }
  return ConfigPtr(raw, &wpcn_config_free);
}

std::string repeated_list(double value, int count) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  std::string out = buf;
  for (int i = 1; i < count; ++i) {
    out += ",";
    out += buf;
  }
  return out;
}

std::string curve_key(const SweepPoint& p, bool by_users) {
  char buf[64];
  if (by_users) {
    std::snprintf(buf, sizeof(buf), "K=%d %s", p.users, p.mode.c_str());
  } else {
    std::snprintf(buf, sizeof(buf), "p_c=%g %s", p.parameter, p.mode.c_str());
  }
  return buf;
}

std::vector<Curve> to_curves(const std::vector<SweepPoint>& table, bool by_users,
                             bool jain_axis) {
  std::map<std::string, Curve> grouped;
  for (const SweepPoint& p : table) {
    const std::string key = curve_key(p, by_users);
    Curve& curve = grouped[key];
    curve.label = key;
    curve.points.emplace_back(p.sweep_value, jain_axis ? p.jain : p.sum_rate);
  }
  std::vector<Curve> curves;
  for (auto& [key, curve] : grouped) {
    curves.push_back(std::move(curve));
  }
  return curves;
}

}  // namespace

std::vector<SweepPoint> run_fig1_experiment(const ExperimentSpec& spec) {
  validate_common(spec, spec.pc_sweep, "p_c");
  if (spec.user_counts.empty()) {
    throw std::invalid_argument("experiment spec: user counts list is empty");
  }

  std::vector<SweepPoint> table;
  RunsCsv runs(spec.out_dir + "/fig1_runs.csv");
  for (double pc : spec.pc_sweep) {
    for (int users : spec.user_counts) {
      ConfigPtr config = base_config(spec);
      set_value(config.get(), "K", users);
      set_value(config.get(), "P_avg", spec.avg_power);
      set_value(config.get(), "P_max", 5.0 * spec.avg_power);
      set_value(config.get(), "p_c", pc);
      check(wpcn_config_validate(config.get()), "config validation");
      for (const auto& mode : spec.modes) {
        SweepPoint point;
        point.sweep_value = pc;
        point.parameter = users;
        point.users = users;
        point.mode = mode;
        for (unsigned long long seed : spec.seeds) {
          const SeedRun r = run_once(config.get(), mode, spec.epochs, seed);
          runs.row(mode, users, pc, spec.avg_power, spec.epochs, r);
          point.sum_rate += r.sum_rate;
          point.jain += r.jain;
        }
        point.sum_rate /= static_cast<double>(spec.seeds.size());
        point.jain /= static_cast<double>(spec.seeds.size());
        table.push_back(point);
      }
    }
  }

  std::FILE* f = std::fopen((spec.out_dir + "/fig1.csv").c_str(), "w");
  if (f == nullptr) {
    throw std::runtime_error("cannot open for writing: " + spec.out_dir + "/fig1.csv");
  }
  std::fputs("p_c,K,mode,sum_rate,jain\n", f);
  for (const SweepPoint& p : table) {
    std::fprintf(f, "%.17g,%d,%s,%.17g,%.17g\n", p.sweep_value, p.users,
                 p.mode.c_str(), p.sum_rate, p.jain);
  }
  std::fclose(f);

  write_svg_plot(spec.out_dir + "/fig1_sum_rate.svg", "Sum rate vs circuit power",
                 "p_c (W)", "sum rate (bits/s/Hz)", to_curves(table, true, false));
  write_svg_plot(spec.out_dir + "/fig1_jain.svg", "Fairness vs circuit power",
                 "p_c (W)", "Jain index", to_curves(table, true, true));
  return table;
}

std::vector<SweepPoint> run_fig2_experiment(const ExperimentSpec& spec) {
  validate_common(spec, spec.pavg_sweep, "P_avg");
  if (spec.pc_values.empty()) {
    throw std::invalid_argument("experiment spec: p_c values list is empty");
  }
  if (spec.budget_users < 1) {
    throw std::invalid_argument("experiment spec: user count must be at least 1");
  }

  std::vector<SweepPoint> table;
  RunsCsv runs(spec.out_dir + "/fig2_runs.csv");
  for (double pavg : spec.pavg_sweep) {
    for (double pc : spec.pc_values) {
      ConfigPtr config = base_config(spec);
      set_value(config.get(), "K", spec.budget_users);
      check(wpcn_config_set(config.get(), "distances",
                            repeated_list(10.0, spec.budget_users).c_str()),
            "setting distances");
      set_value(config.get(), "P_avg", pavg);
      set_value(config.get(), "P_max", 5.0 * pavg);  // peak tied to the budget
      set_value(config.get(), "p_c", pc);
      check(wpcn_config_validate(config.get()), "config validation");
      for (const auto& mode : spec.modes) {
        SweepPoint point;
        point.sweep_value = pavg;
        point.parameter = pc;
        point.users = spec.budget_users;
        point.mode = mode;
        for (unsigned long long seed : spec.seeds) {
          // Budget study compares the calibrated operating points; online
          // adaptation transients would mask the equal-distance tradeoff.
          const SeedRun r = run_calibrated_once(config.get(), mode, spec.epochs, seed);
          runs.row(mode, spec.budget_users, pc, pavg, spec.epochs, r);
          point.sum_rate += r.sum_rate;
          point.jain += r.jain;
        }
        point.sum_rate /= static_cast<double>(spec.seeds.size());
        point.jain /= static_cast<double>(spec.seeds.size());
        table.push_back(point);
      }
    }
  }

  std::FILE* f = std::fopen((spec.out_dir + "/fig2.csv").c_str(), "w");
  if (f == nullptr) {
    throw std::runtime_error("cannot open for writing: " + spec.out_dir + "/fig2.csv");
  }
  std::fputs("P_avg,p_c,K,mode,sum_rate,jain\n", f);
  for (const SweepPoint& p : table) {
    std::fprintf(f, "%.17g,%.17g,%d,%s,%.17g,%.17g\n", p.sweep_value, p.parameter,
                 p.users, p.mode.c_str(), p.sum_rate, p.jain);
  }
  std::fclose(f);

  write_svg_plot(spec.out_dir + "/fig2_sum_rate.svg", "Sum rate vs power budget",
                 "P_avg (W)", "sum rate (bits/s/Hz)", to_curves(table, false, false));
  return table;
}

}  // namespace wpcn_tools
