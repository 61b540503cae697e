#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "wpcn.h"

namespace {

struct ConfigGuard {
  wpcn_config* ptr;
  explicit ConfigGuard(wpcn_config* p) : ptr(p) {}
  ~ConfigGuard() { wpcn_config_free(ptr); }
  ConfigGuard(const ConfigGuard&) = delete;
  ConfigGuard& operator=(const ConfigGuard&) = delete;
};

struct ResultGuard {
  wpcn_result* ptr = nullptr;
  ~ResultGuard() { wpcn_result_free(ptr); }
};

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::strcmp(wpcn_version(), "0.1.0") == 0);
  CHECK(std::strcmp(wpcn_status_str(WPCN_OK), "ok") == 0);
  CHECK(std::strlen(wpcn_status_str(WPCN_ERR_ARG)) > 0);
}

TEST_CASE("config lifecycle through the c surface") {
  ConfigGuard config(wpcn_config_default());
  REQUIRE(config.ptr != nullptr);
  CHECK(wpcn_config_users(config.ptr) == 5);
  CHECK(wpcn_config_validate(config.ptr) == WPCN_OK);

  CHECK(wpcn_config_set(config.ptr, "p_c", "2e-5") == WPCN_OK);
  double pc = 0.0;
  CHECK(wpcn_config_get_real(config.ptr, "p_c", &pc) == WPCN_OK);
  CHECK(pc == 2e-5);

  char buf[256];
  CHECK(wpcn_config_get(config.ptr, "distances", buf, sizeof(buf)) == WPCN_OK);
  CHECK(std::string(buf).find("12.5") != std::string::npos);

  CHECK(wpcn_config_set(config.ptr, "bogus", "1") == WPCN_ERR_ARG);
  CHECK(std::string(wpcn_last_error()).find("bogus") != std::string::npos);

  CHECK(wpcn_config_set(config.ptr, "P_avg", "100") == WPCN_OK);
  CHECK(wpcn_config_validate(config.ptr) == WPCN_ERR_ARG);
  CHECK(std::string(wpcn_last_error()).find("P_avg") != std::string::npos);

  wpcn_config* clone = wpcn_config_clone(config.ptr);
  REQUIRE(clone != nullptr);
  CHECK(wpcn_config_users(clone) == 5);
  wpcn_config_free(clone);
}

TEST_CASE("config files load through the c surface") {
  const char* path = "capi_config.txt";
  {
    std::ofstream out(path);
    out << "K = 2\ndistances = 10, 14\neta = 0.6\np_c = 1e-5\n";
  }
  ConfigGuard config(wpcn_config_load(path));
  REQUIRE(config.ptr != nullptr);
  CHECK(wpcn_config_users(config.ptr) == 2);
  char buf[128];
  CHECK(wpcn_config_get(config.ptr, "eta", buf, sizeof(buf)) == WPCN_OK);
  CHECK(std::string(buf) == "0.6, 0.6");
  std::remove(path);

  CHECK(wpcn_config_load("does_not_exist.txt") == nullptr);
  CHECK(std::strlen(wpcn_last_error()) > 0);
}

TEST_CASE("simulation through the c surface") {
  ConfigGuard config(wpcn_config_default());
  ResultGuard result;
  REQUIRE(wpcn_run(config.ptr, WPCN_MODE_MAXSUM, 2000, 1, 1, &result.ptr) == WPCN_OK);
  CHECK(wpcn_result_epochs(result.ptr) == 2000);
  CHECK(wpcn_result_mode(result.ptr) == WPCN_MODE_MAXSUM);
  CHECK(wpcn_result_sum_rate(result.ptr) > 0.0);
  CHECK(wpcn_result_jain(result.ptr) > 0.0);
  CHECK(wpcn_result_jain(result.ptr) <= 1.0);
  CHECK(wpcn_result_jain_degenerate(result.ptr) == 0);
  CHECK(wpcn_result_avg_bs_power(result.ptr) > 0.0);

  double total = 0.0;
  for (int k = 0; k < 5; ++k) {
    total += wpcn_result_user_rate(result.ptr, k);
  }
  CHECK(std::fabs(total - wpcn_result_sum_rate(result.ptr)) <= 1e-9);
  CHECK(wpcn_result_user_rate(result.ptr, 99) == 0.0);

  const char* trace_path = "capi_trace.csv";
  CHECK(wpcn_result_write_trace_csv(result.ptr, trace_path) == WPCN_OK);
  std::ifstream in(trace_path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "epoch,p0,tau0,tau_1,tau_2,tau_3,tau_4,tau_5,r_1,r_2,r_3,r_4,r_5,lambda_hat");
  in.close();
  std::remove(trace_path);

  CHECK(wpcn_run(config.ptr, 17, 10, 1, 0, &result.ptr) == WPCN_ERR_ARG);
  CHECK(wpcn_run(config.ptr, WPCN_MODE_PF, 0, 1, 0, &result.ptr) == WPCN_ERR_ARG);
}

TEST_CASE("fixed-price runs and calibration through the c surface") {
  ConfigGuard config(wpcn_config_default());
  double lambda = -1.0;
  REQUIRE(wpcn_calibrate_lambda(config.ptr, 5000, 3, nullptr, &lambda) == WPCN_OK);
  CHECK(lambda > 0.0);

  ResultGuard fixed;
  REQUIRE(wpcn_run_fixed_lambda(config.ptr, 5000, 3, lambda, nullptr, 0, &fixed.ptr) ==
          WPCN_OK);
  double pavg = 0.0;
  REQUIRE(wpcn_config_get_real(config.ptr, "P_avg", &pavg) == WPCN_OK);
  CHECK(std::fabs(wpcn_result_avg_bs_power(fixed.ptr) - pavg) <= 2e-3 * pavg);
}

TEST_CASE("channel csv export through the c surface") {
  ConfigGuard config(wpcn_config_create(2));
  REQUIRE(config.ptr != nullptr);
  const char* path = "capi_channel.csv";
  CHECK(wpcn_write_channel_csv(config.ptr, 10, 7, path) == WPCN_OK);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "epoch,x_1,x_2");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) {
      ++rows;
    }
  }
  CHECK(rows == 10);
  in.close();
  std::remove(path);
}

TEST_CASE("scalar kernels through the c surface") {
  double w = 0.0;
  CHECK(wpcn_lambert_w0(1.0, &w) == WPCN_OK);
  CHECK(std::fabs(w - 0.56714329040978387) <= 1e-12);
  CHECK(wpcn_lambert_w0(-1.0, &w) == WPCN_ERR_DOMAIN);
  CHECK(std::strlen(wpcn_last_error()) > 0);

  double z = -1.0;
  CHECK(wpcn_solve_z(0.0, 1.0, &z) == WPCN_OK);
  CHECK(std::fabs(z - 5.3053952792716912) <= 1e-8);
  CHECK(wpcn_solve_z(-1.0, 0.0, &z) == WPCN_ERR_ARG);
}

TEST_CASE("null-argument hygiene") {
  CHECK(wpcn_config_create(0) == nullptr);
  CHECK(wpcn_config_set(nullptr, "K", "1") == WPCN_ERR_ARG);
  CHECK(wpcn_config_validate(nullptr) == WPCN_ERR_ARG);
  CHECK(wpcn_lambert_w0(1.0, nullptr) == WPCN_ERR_ARG);
  ConfigGuard config(wpcn_config_default());
  CHECK(wpcn_run(config.ptr, WPCN_MODE_PF, 10, 1, 0, nullptr) == WPCN_ERR_ARG);
  char small[2];
  CHECK(wpcn_config_get(config.ptr, "distances", small, sizeof(small)) == WPCN_ERR_ARG);
}

TEST_CASE("verification suite smoke run") {
  CHECK(wpcn_verify(7, 6, 0) == 0);
}
