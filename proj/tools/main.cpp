#include <cinttypes>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "experiments.hpp"
#include "wpcn.h"

namespace {

using ConfigPtr = std::unique_ptr<wpcn_config, decltype(&wpcn_config_free)>;
using ResultPtr = std::unique_ptr<wpcn_result, decltype(&wpcn_result_free)>;

[[noreturn]] void die(const std::string& what) {
  std::string detail = wpcn_last_error();
  std::fprintf(stderr, "error: %s%s%s\n", what.c_str(), detail.empty() ? "" : ": ",
               detail.c_str());
  std::exit(1);
}

void check(int status, const std::string& what) {
  if (status != WPCN_OK) {
    die(what);
  }
}

ConfigPtr make_config(const std::string& config_path) {
  wpcn_config* raw =
      config_path.empty() ? wpcn_config_default() : wpcn_config_load(config_path.c_str());
  if (raw == nullptr) {
    die("loading config");
  }
  return ConfigPtr(raw, &wpcn_config_free);
}

int run_simulate(const std::string& config_path, const std::string& mode,
                 long epochs, unsigned long long seed, const std::string& out_dir) {
  ConfigPtr config = make_config(config_path);
  check(wpcn_config_validate(config.get()), "config validation");

  const int mode_id = mode == "pf" ? WPCN_MODE_PF : WPCN_MODE_MAXSUM;
  wpcn_result* raw = nullptr;
  check(wpcn_run(config.get(), mode_id, epochs, seed, 1, &raw), "simulation run");
  ResultPtr result(raw, &wpcn_result_free);

  const std::string trace_path = out_dir + "/trace.csv";
  check(wpcn_result_write_trace_csv(result.get(), trace_path.c_str()),
        "writing " + trace_path);

  double pc = 0.0;
  double pavg = 0.0;
  check(wpcn_config_get_real(config.get(), "p_c", &pc), "reading p_c");
  check(wpcn_config_get_real(config.get(), "P_avg", &pavg), "reading P_avg");

  const std::string summary_path = out_dir + "/summary.csv";
  std::FILE* f = std::fopen(summary_path.c_str(), "w");
  if (f == nullptr) {
    die("writing " + summary_path);
  }
  std::fputs("mode,K,p_c,P_avg,M,seed,sum_rate,jain,avg_bs_power\n", f);
  std::fprintf(f, "%s,%d,%.17g,%.17g,%ld,%llu,%.17g,%.17g,%.17g\n", mode.c_str(),
               wpcn_config_users(config.get()), pc, pavg, epochs, seed,
               wpcn_result_sum_rate(result.get()), wpcn_result_jain(result.get()),
               wpcn_result_avg_bs_power(result.get()));
  std::fclose(f);

  std::printf("mode=%s K=%d M=%ld seed=%llu\n", mode.c_str(),
              wpcn_config_users(config.get()), epochs, seed);
  std::printf("sum_rate=%.6f bits/s/Hz  jain=%.4f  avg_bs_power=%.6f W\n",
              wpcn_result_sum_rate(result.get()), wpcn_result_jain(result.get()),
              wpcn_result_avg_bs_power(result.get()));
  std::printf("wrote %s and %s\n", trace_path.c_str(), summary_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harvest-then-transmit WPCN protocol simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string mode = "maxsum";
  long epochs = 100000;
  unsigned long long seed = 1;
  std::vector<unsigned long long> seeds = {1, 2, 3};
  std::vector<std::string> modes = {"maxsum", "pf"};

  auto* simulate = app.add_subcommand("simulate", "Run one protocol simulation");
  simulate->add_option("--config", config_path, "Flat key = value config file");
  simulate->add_option("--mode", mode, "Protocol: pf or maxsum")
      ->check(CLI::IsMember({"pf", "maxsum"}));
  simulate->add_option("--epochs", epochs, "Number of fading epochs");
  simulate->add_option("--seed", seed, "Channel seed")->envname("WPCN_SEED");
  simulate->add_option("--out", out_dir, "Output directory");

  wpcn_tools::ExperimentSpec spec;
  auto* fig1 = app.add_subcommand(
      "fig1", "Circuit-power sweep at a fixed budget (reference distance ring)");
  fig1->add_option("--config", config_path, "Base radio parameters (eta, N_0, gamma0)");
  fig1->add_option("--epochs", spec.epochs, "Epochs per run");
  fig1->add_option("--seed", seed, "Single seed (overrides --seeds)")->envname("WPCN_SEED");
  fig1->add_option("--seeds", seeds, "Seeds to average over");
  fig1->add_option("--pc-values", spec.pc_sweep, "Circuit power sweep values (W)");
  fig1->add_option("--users", spec.user_counts, "User counts, each a separate curve");
  fig1->add_option("--pavg", spec.avg_power, "Average power budget (W)");
  fig1->add_option("--modes", modes, "Protocols to run");
  fig1->add_option("--out", out_dir, "Output directory");

  auto* fig2 = app.add_subcommand(
      "fig2", "Budget sweep with equal 10 m distances and peak power 5x the budget");
  fig2->add_option("--config", config_path, "Base radio parameters (eta, N_0, gamma0)");
  fig2->add_option("--epochs", spec.epochs, "Epochs per run");
  fig2->add_option("--seed", seed, "Single seed (overrides --seeds)")->envname("WPCN_SEED");
  fig2->add_option("--seeds", seeds, "Seeds to average over");
  fig2->add_option("--pavg-values", spec.pavg_sweep, "Budget sweep values (W)");
  fig2->add_option("--pc-values", spec.pc_values, "Circuit power parameter values (W)");
  fig2->add_option("--users", spec.budget_users, "User count");
  fig2->add_option("--modes", modes, "Protocols to run");
  fig2->add_option("--out", out_dir, "Output directory");

  int instances = 40;
  auto* oracle = app.add_subcommand(
      "oracle", "Numerical verification suite (closed form vs brute force)");
  oracle->add_option("--seed", seed, "Sweep seed")->envname("WPCN_SEED");
  oracle->add_option("--instances", instances, "Random instances for the grid check");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      return run_simulate(config_path, mode, epochs, seed, out_dir);
    }
    if (fig1->parsed() || fig2->parsed()) {
      spec.out_dir = out_dir;
      spec.base_config_path = config_path;
      spec.modes = modes;
      if (fig1->count("--seed") > 0 || fig2->count("--seed") > 0) {
        spec.seeds = {seed};
      } else {
        spec.seeds = seeds;
      }
      const auto table = fig1->parsed() ? wpcn_tools::run_fig1_experiment(spec)
                                        : wpcn_tools::run_fig2_experiment(spec);
      std::printf("%zu sweep points written to %s\n", table.size(), out_dir.c_str());
      return 0;
    }
    if (oracle->parsed()) {
      const int failures = wpcn_verify(seed, instances, 1);
      if (failures < 0) {
        die("verification suite");
      }
      std::printf("%s (%d failing check%s)\n", failures == 0 ? "PASS" : "FAIL",
                  failures, failures == 1 ? "" : "s");
      return failures == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
