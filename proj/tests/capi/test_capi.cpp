#include "catch_amalgamated.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ampload/ampload.h"

using Catch::Approx;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / (std::string("ampload_capi_") + name)).string();
}

ampload_request quartic_request(int k0) {
  static const char* roots[] = {"1/63", "20/63", "50/63", "60/63"};
  ampload_request req;
  REQUIRE(ampload_request_init(&req) == AMPLOAD_OK);
  req.n = 6;
  req.method = AMPLOAD_METHOD_DHWT_QSVT;
  req.k0 = k0;
  req.roots = roots;
  req.num_roots = 4;
  return req;
}

}  // namespace

TEST_CASE("version and status strings", "[capi]") {
  CHECK(std::string(ampload_version()).size() > 0);
  CHECK(std::string(ampload_status_string(AMPLOAD_OK)).size() > 0);
  CHECK(std::string(ampload_status_string(AMPLOAD_E_DEGENERATE)) != ampload_status_string(AMPLOAD_OK));
  ampload_method m;
  CHECK(ampload_method_parse("mps-lin-qsvt", &m));
  CHECK(m == AMPLOAD_METHOD_MPS_LIN_QSVT);
  CHECK_FALSE(ampload_method_parse("nope", &m));
}

TEST_CASE("run returns metrics and amplitudes", "[capi]") {
  const ampload_request req = quartic_request(4);
  ampload_result* r = nullptr;
  REQUIRE(ampload_run(&req, &r) == AMPLOAD_OK);
  ampload_metrics m;
  REQUIRE(ampload_result_metrics(r, &m) == AMPLOAD_OK);
  CHECK(m.n == 6);
  CHECK(m.k0_or_chi == 4);
  CHECK(m.fidelity == Approx(0.9144).margin(5e-4));
  CHECK(m.filling_ratio == Approx(0.6190).margin(5e-4));
  CHECK(m.ancillas == 9);
  CHECK(std::string(ampload_result_method(r)) == "dhwt-qsvt");

  const std::size_t len = ampload_result_size(r);
  REQUIRE(len == 64);
  std::vector<double> re(len), im(len), target(len);
  REQUIRE(ampload_result_amplitudes(r, re.data(), im.data(), len) == AMPLOAD_OK);
  REQUIRE(ampload_result_target(r, target.data(), len) == AMPLOAD_OK);
  double norm = 0.0, overlap = 0.0;
  for (std::size_t j = 0; j < len; ++j) {
    norm += re[j] * re[j] + im[j] * im[j];
    overlap += re[j] * target[j];
  }
  CHECK(norm == Approx(1.0).margin(1e-12));
  CHECK(overlap * overlap == Approx(m.fidelity).margin(1e-9));
  CHECK(ampload_result_amplitudes(r, re.data(), nullptr, len - 1) == AMPLOAD_E_INVALID_ARGUMENT);
  ampload_result_free(r);
}

TEST_CASE("error codes and last error", "[capi]") {
  ampload_result* r = nullptr;
  CHECK(ampload_run(nullptr, &r) == AMPLOAD_E_INVALID_ARGUMENT);

  ampload_request req = quartic_request(7);
  CHECK(ampload_run(&req, &r) != AMPLOAD_OK);
  CHECK(r == nullptr);
  CHECK(std::string(ampload_last_error()).size() > 0);

  const double zero[] = {0.0, 0.0};
  req = quartic_request(3);
  req.roots = nullptr;
  req.num_roots = 0;
  req.coeffs = zero;
  req.num_coeffs = 2;
  CHECK(ampload_run(&req, &r) == AMPLOAD_E_DEGENERATE);

  const double both[] = {1.0};
  req = quartic_request(3);
  req.coeffs = both;
  req.num_coeffs = 1;
  CHECK(ampload_run(&req, &r) != AMPLOAD_OK);

  ampload_noise* nm = nullptr;
  CHECK(ampload_noise_parse("pmeas = 2\n", &nm) == AMPLOAD_E_CONFIG);
  CHECK(ampload_noise_parse("bogus = 1\n", &nm) == AMPLOAD_E_CONFIG);
  CHECK(ampload_noise_load("/nonexistent/noise.ini", &nm) == AMPLOAD_E_IO);
  CHECK(nm == nullptr);
}

TEST_CASE("writers are repeatable", "[capi]") {
  const ampload_request req = quartic_request(3);
  ampload_result* r = nullptr;
  REQUIRE(ampload_run(&req, &r) == AMPLOAD_OK);
  const std::string state = temp_path("state.csv"), metrics = temp_path("metrics.csv"), svg = temp_path("p.svg");
  REQUIRE(ampload_result_write_state_csv(r, state.c_str()) == AMPLOAD_OK);
  REQUIRE(ampload_result_write_metrics_csv(r, nullptr, metrics.c_str()) == AMPLOAD_OK);
  REQUIRE(ampload_result_write_profile_svg(r, svg.c_str()) == AMPLOAD_OK);
  const std::string s1 = slurp(state), m1 = slurp(metrics);
  CHECK(s1.rfind("index,amplitude\n", 0) == 0);
  CHECK(m1.rfind("method,n,k0_or_chi,fidelity,l2,", 0) == 0);
  CHECK(slurp(svg).find("<svg") != std::string::npos);

  ampload_result* r2 = nullptr;
  REQUIRE(ampload_run(&req, &r2) == AMPLOAD_OK);
  REQUIRE(ampload_result_write_state_csv(r2, state.c_str()) == AMPLOAD_OK);
  REQUIRE(ampload_result_write_metrics_csv(r2, nullptr, metrics.c_str()) == AMPLOAD_OK);
  CHECK(slurp(state) == s1);
  CHECK(slurp(metrics) == m1);
  CHECK(ampload_result_write_state_csv(r, "/nonexistent/dir/state.csv") == AMPLOAD_E_IO);
  ampload_result_free(r);
  ampload_result_free(r2);
}

TEST_CASE("noisy ramp loading", "[capi]") {
  ampload_noise* cal = nullptr;
  ampload_noise* ideal = nullptr;
  REQUIRE(ampload_noise_calibrated(&cal) == AMPLOAD_OK);
  REQUIRE(ampload_noise_ideal(&ideal) == AMPLOAD_OK);
  CHECK_FALSE(ampload_noise_is_ideal(cal));
  CHECK(ampload_noise_is_ideal(ideal));

  ampload_noise_metrics noisy{}, clean{};
  REQUIRE(ampload_linear_noise(4, AMPLOAD_METHOD_DHWT_LINEAR, 3, cal, 0, 1, &noisy) == AMPLOAD_OK);
  REQUIRE(ampload_linear_noise(4, AMPLOAD_METHOD_DHWT_LINEAR, 3, ideal, 0, 1, &clean) == AMPLOAD_OK);
  CHECK(noisy.cx_count == 6);
  CHECK(noisy.noisy_fidelity < noisy.ideal_fidelity);
  CHECK(clean.noisy_fidelity == Approx(clean.ideal_fidelity).margin(1e-12));

  ampload_noise_metrics a{}, b{};
  REQUIRE(ampload_linear_noise(4, AMPLOAD_METHOD_MPS, 1, cal, 2000, 7, &a) == AMPLOAD_OK);
  REQUIRE(ampload_linear_noise(4, AMPLOAD_METHOD_MPS, 1, cal, 2000, 7, &b) == AMPLOAD_OK);
  CHECK(a.noisy_fidelity == b.noisy_fidelity);
  CHECK(ampload_linear_noise(4, AMPLOAD_METHOD_DHWT_QSVT, 3, cal, 0, 1, &a) == AMPLOAD_E_INVALID_ARGUMENT);
  ampload_noise_free(cal);
  ampload_noise_free(ideal);
}

TEST_CASE("bench suites", "[capi]") {
  ampload_bench* b = nullptr;
  REQUIRE(ampload_bench_run("table3", nullptr, &b) == AMPLOAD_OK);
  CHECK(ampload_bench_row_count(b) > 0);
  CHECK(ampload_bench_mismatch_count(b) == 0);
  CHECK(ampload_bench_soft_miss_count(b) >= 1);
  const std::string path = temp_path("table3.csv");
  REQUIRE(ampload_bench_write_csv(b, path.c_str()) == AMPLOAD_OK);
  CHECK(slurp(path).find("status") != std::string::npos);
  ampload_bench_free(b);
  CHECK(ampload_bench_run("table9", nullptr, &b) == AMPLOAD_E_INVALID_ARGUMENT);
}

TEST_CASE("analytic helpers", "[capi]") {
  double f = 0.0, k = 0.0;
  REQUIRE(ampload_linear_fidelity(6, 6, &f) == AMPLOAD_OK);
  CHECK(f == Approx(1.0).margin(1e-12));
  REQUIRE(ampload_linear_fidelity(6, 3, &f) == AMPLOAD_OK);
  REQUIRE(ampload_k0_for_infidelity(6, 1.0 - f, &k) == AMPLOAD_OK);
  CHECK(k == Approx(3.0).margin(1e-6));
  const double ramp[] = {0.0, 1.0};
  double fill = 0.0;
  REQUIRE(ampload_filling_ratio(ramp, 2, 6, &fill) == AMPLOAD_OK);
  CHECK(fill > 0.5);
  CHECK(fill < 0.6);
  double d = 0.0, c = 0.0;
  REQUIRE(ampload_delta_inf_bound(ramp, 2, 6, 3, &d, &c) == AMPLOAD_OK);
  CHECK(d > 0.0);
  CHECK(ampload_linear_fidelity(3, 5, &f) != AMPLOAD_OK);
}
