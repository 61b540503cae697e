#pragma once

#include <string>
#include <vector>

namespace wpcn_tools {

/// Sweep definition shared by the two study runners. Figure 1 sweeps the
/// circuit power at a fixed budget over the reference distance ring;
/// figure 2 sweeps the average power budget with every user at 10 m and
/// the peak power tied to 5x the budget.
struct ExperimentSpec {
  std::string out_dir = ".";
  std::string base_config_path;  ///< optional radio defaults (eta, N_0, gamma0, ...)
  long epochs = 100000;
  std::vector<unsigned long long> seeds = {1, 2, 3};
  std::vector<std::string> modes = {"maxsum", "pf"};

  // circuit-power study
  std::vector<double> pc_sweep = {0.0, 1e-5, 2e-5, 5e-5};
  std::vector<int> user_counts = {3, 5};
  double avg_power = 1.0;

  // budget study
  std::vector<double> pavg_sweep = {0.5, 1.0, 2.0, 4.0};
  std::vector<double> pc_values = {0.0, 1e-5, 5e-5};
  int budget_users = 5;
};

/// One averaged sweep point (means over the seed list).
struct SweepPoint {
  double sweep_value = 0.0;  ///< p_c or P_avg
  double parameter = 0.0;    ///< K (as real) or p_c
  int users = 0;
  std::string mode;
  double sum_rate = 0.0;
  double jain = 0.0;
};

/// Runs the circuit-power study and writes fig1.csv
/// ("p_c,K,mode,sum_rate,jain"), the per-seed fig1_runs.csv, and SVG charts
/// of both panels. Returns the table. Throws on invalid specs or failed runs.
std::vector<SweepPoint> run_fig1_experiment(const ExperimentSpec& spec);

/// Runs the budget study and writes fig2.csv
/// ("P_avg,p_c,K,mode,sum_rate,jain"), fig2_runs.csv, and an SVG chart.
std::vector<SweepPoint> run_fig2_experiment(const ExperimentSpec& spec);

}  // namespace wpcn_tools
