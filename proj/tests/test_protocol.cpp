#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "channel.hpp"
#include "config_io.hpp"
#include "protocol.hpp"

using namespace wpcn;

TEST_CASE("mode names round trip") {
  CHECK(mode_from_name("pf") == Mode::pf);
  CHECK(mode_from_name("maxsum") == Mode::max_sum_rate);
  CHECK(mode_name(Mode::pf) == std::string("pf"));
  CHECK_THROWS_AS(mode_from_name("other"), std::invalid_argument);
}

TEST_CASE("jain index closed points") {
  CHECK(compute_metrics(std::vector<double>{1.0, 1.0, 1.0}).jain == 1.0);
  CHECK(std::fabs(compute_metrics(std::vector<double>{0.0, 0.0, 0.0, 0.0, 2.5}).jain -
                  0.2) <= 1e-15);
  CHECK(std::fabs(compute_metrics(std::vector<double>{1.0, 3.0}).jain - 0.8) <= 1e-15);

  const Metrics degenerate = compute_metrics(std::vector<double>{0.0, 0.0});
  CHECK(degenerate.jain == 0.0);
  CHECK(degenerate.jain_degenerate);
}

TEST_CASE("dual estimate decreases on idle epochs and stays nonnegative") {
  const NetworkConfig config = default_config();
  ProtocolState state = make_initial_state(config, Mode::max_sum_rate, 0.01);
  state.lambda_hat = 50.0;  // far above any threshold: epochs stay silent
  state.epoch = 10;
  state.energy_sum = 0.0;

  const ChannelState channel = sample_epoch(3, config, 11);
  const EpochAllocation alloc = step(state, channel, config);
  CHECK(alloc.p0 == 0.0);
  CHECK(state.lambda_hat < 50.0);  // running average below budget pulls it down

  state.lambda_hat = 1e-9;
  for (int i = 0; i < 5; ++i) {
    step(state, sample_epoch(3, config, state.epoch + 1), config);
    CHECK(state.lambda_hat >= 0.0);
  }
}

TEST_CASE("max-sum-rate mode never touches the rate averages") {
  const NetworkConfig config = default_config();
  ProtocolState state = make_initial_state(config, Mode::max_sum_rate, 0.01);
  for (std::int64_t i = 1; i <= 50; ++i) {
    step(state, sample_epoch(9, config, i), config);
  }
  for (double r : state.rbar_hat) {
    CHECK(r == 1.0);
  }
}

TEST_CASE("first pf epoch seeds the rate averages with realized rates") {
  const NetworkConfig config = default_config();
  ProtocolState state = make_initial_state(config, Mode::pf, 0.01);
  const ChannelState channel = sample_epoch(5, config, 1);
  const EpochAllocation alloc = step(state, channel, config);
  CHECK(alloc.p0 == config.peak_power);  // bootstrap epoch transmits
  for (int k = 0; k < config.num_users; ++k) {
    CHECK(state.rbar_hat[k] == std::max(alloc.rate[k], 1e-6));
  }
}

TEST_CASE("running average update uses the growing window") {
  const NetworkConfig config = default_config();
  ProtocolState state = make_initial_state(config, Mode::pf, 0.01);
  step(state, sample_epoch(5, config, 1), config);
  const std::vector<double> after_first = state.rbar_hat;
  const ChannelState second = sample_epoch(5, config, 2);
  const EpochAllocation alloc = step(state, second, config);
  for (int k = 0; k < config.num_users; ++k) {
    CHECK(std::fabs(state.rbar_hat[k] -
                    (after_first[k] + alloc.rate[k]) / 2.0) <= 1e-15);
  }
}

TEST_CASE("single-epoch run equals one hand-stepped epoch") {
  const NetworkConfig config = default_config();
  const SimulationResult result = run(config, 1, 77, Mode::max_sum_rate, 0.01);

  ProtocolState state = make_initial_state(config, Mode::max_sum_rate, 0.01);
  const EpochAllocation alloc = step(state, sample_epoch(77, config, 1), config);

  REQUIRE(result.epochs == 1);
  CHECK(result.p0[0] == alloc.p0);
  CHECK(result.tau0[0] == alloc.tau0);
  CHECK(result.lambda_hat[0] == 0.0);
  double total = 0.0;
  for (int k = 0; k < config.num_users; ++k) {
    CHECK(result.rate[k] == alloc.rate[k]);
    total += alloc.rate[k];
  }
  CHECK(std::fabs(result.sum_rate - total) <= 1e-12);
  CHECK(result.avg_bs_power == alloc.e);
}

TEST_CASE("aggregates are consistent with the recorded trace") {
  const NetworkConfig config = default_config();
  const SimulationResult result = run(config, 2000, 13, Mode::pf, 0.01);

  std::vector<double> user_sum(config.num_users, 0.0);
  for (std::int64_t i = 0; i < result.epochs; ++i) {
    for (int k = 0; k < config.num_users; ++k) {
      user_sum[k] += result.rate[i * config.num_users + k];
    }
  }
  double total = 0.0;
  for (int k = 0; k < config.num_users; ++k) {
    const double avg = user_sum[k] / static_cast<double>(result.epochs);
    CHECK(std::fabs(avg - result.user_rate[k]) <= 1e-9);
    total += avg;
  }
  CHECK(std::fabs(total - result.sum_rate) <= 1e-9);
  CHECK(result.avg_bs_power <= config.peak_power);

  // Spent energy accounting is exact: the same products in the same order.
  double energy = 0.0;
  for (std::int64_t i = 0; i < result.epochs; ++i) {
    energy += result.p0[i] * result.tau0[i];
  }
  CHECK(energy / static_cast<double>(result.epochs) == result.avg_bs_power);

  const Metrics metrics = compute_metrics(result);
  CHECK(metrics.jain == result.jain);
  CHECK(std::fabs(metrics.sum_rate - result.sum_rate) <= 1e-12);
}

TEST_CASE("runs are reproducible and trace-optional") {
  const NetworkConfig config = default_config();
  const SimulationResult a = run(config, 500, 4, Mode::pf, 0.01);
  const SimulationResult b = run(config, 500, 4, Mode::pf, 0.01);
  CHECK(a.sum_rate == b.sum_rate);
  CHECK(a.jain == b.jain);
  CHECK(a.lambda_hat == b.lambda_hat);

  const SimulationResult lean = run(config, 500, 4, Mode::pf, 0.01, false);
  CHECK(lean.sum_rate == a.sum_rate);
  CHECK(lean.p0.empty());
  CHECK_THROWS_AS(write_trace_csv(lean, "nope.csv"), std::invalid_argument);
}

TEST_CASE("epoch duration does not change decisions or rates") {
  NetworkConfig config = default_config();
  config.circuit_power = 1e-5;
  NetworkConfig doubled = config;
  doubled.epoch_duration = 2.0;
  const SimulationResult r1 = run(config, 300, 6, Mode::pf, 0.01);
  const SimulationResult r2 = run(doubled, 300, 6, Mode::pf, 0.01);
  CHECK(r1.p0 == r2.p0);
  CHECK(r1.tau0 == r2.tau0);
  CHECK(r1.rate == r2.rate);
  CHECK(r1.lambda_hat == r2.lambda_hat);
}

TEST_CASE("trace csv carries the documented schema") {
  NetworkConfig config = equal_distance_config(2, 10.0);
  const SimulationResult result = run(config, 20, 8, Mode::max_sum_rate, 0.01);
  const char* path = "protocol_trace.csv";
  write_trace_csv(result, path);

  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "epoch,p0,tau0,tau_1,tau_2,r_1,r_2,lambda_hat");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) {
      ++rows;
    }
  }
  CHECK(rows == 20);
  in.close();
  std::remove(path);
}

TEST_CASE("summary csv row layout") {
  NetworkConfig config = equal_distance_config(2, 10.0);
  config.circuit_power = 1e-5;
  const SimulationResult result = run(config, 10, 2, Mode::pf, 0.01);
  CHECK(summary_csv_header() == "mode,K,p_c,P_avg,M,seed,sum_rate,jain,avg_bs_power");
  const std::string row = summary_csv_row(config, result);
  CHECK(row.substr(0, 3) == "pf,");
  CHECK(row.find(",2,") != std::string::npos);
  std::istringstream cells(row);
  std::string cell;
  int count = 0;
  while (std::getline(cells, cell, ',')) {
    ++count;
  }
  CHECK(count == 9);
}

TEST_CASE("online loop tracks the power budget") {
  NetworkConfig config = default_config();
  const SimulationResult result = run(config, 30000, 1, Mode::max_sum_rate);
  CHECK(std::fabs(result.avg_bs_power - config.avg_power) <=
        0.02 * config.avg_power);
}

TEST_CASE("offline calibration meets the budget to a tenth of a percent") {
  NetworkConfig config = default_config();
  std::vector<ChannelState> trace;
  for (std::int64_t i = 1; i <= 20000; ++i) {
    trace.push_back(sample_epoch(44, config, i));
  }
  const std::vector<double> ones(config.num_users, 1.0);
  const double lambda = calibrate_lambda_offline(config, trace, ones);
  CHECK(lambda > 0.0);
  const SimulationResult result = run_fixed_lambda(config, trace, lambda, ones, false);
  CHECK(std::fabs(result.avg_bs_power - config.avg_power) <= 1e-3 * config.avg_power);
}

TEST_CASE("slack budget calibrates to a zero price") {
  NetworkConfig config = default_config();
  config.avg_power = config.peak_power;  // cannot bind: spend is below peak
  std::vector<ChannelState> trace;
  for (std::int64_t i = 1; i <= 2000; ++i) {
    trace.push_back(sample_epoch(45, config, i));
  }
  const std::vector<double> ones(config.num_users, 1.0);
  CHECK(calibrate_lambda_offline(config, trace, ones) == 0.0);
}

TEST_CASE("huge price drives spending to zero") {
  NetworkConfig config = default_config();
  std::vector<ChannelState> trace;
  for (std::int64_t i = 1; i <= 200; ++i) {
    trace.push_back(sample_epoch(46, config, i));
  }
  const std::vector<double> ones(config.num_users, 1.0);
  const SimulationResult result = run_fixed_lambda(config, trace, 1e9, ones, false);
  CHECK(result.avg_bs_power == 0.0);
  CHECK(result.sum_rate == 0.0);
  CHECK(result.jain_degenerate);
}

TEST_CASE("protocol comparison on the reference network") {
  NetworkConfig config = default_config();
  config.circuit_power = 1e-5;
  const SimulationResult ms = run(config, 20000, 1, Mode::max_sum_rate, 0.0, false);
  const SimulationResult pf = run(config, 20000, 1, Mode::pf, 0.0, false);
  CHECK(ms.sum_rate >= pf.sum_rate);   // fairness costs throughput
  CHECK(pf.jain >= ms.jain);           // and buys equity
  CHECK(pf.jain > 0.45);
  CHECK(ms.jain < pf.jain);
}
