#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvedstrip/curvedstrip.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  cs_free_string(s);
  return out;
}

}  // namespace

TEST_CASE("version string") { CHECK(std::string(cs_version()).size() > 0); }

TEST_CASE("eigen handle") {
  cs_eigen* e = nullptr;
  REQUIRE(cs_lambda(0.0, "0", 1.0, 1e-10, &e) == CS_OK);
  CHECK(cs_eigen_lambda(e) == doctest::Approx(0.616850275068085).epsilon(1e-10));
  CHECK(std::abs(cs_eigen_lambda_fine(e) - cs_eigen_lambda(e)) < 1e-4);
  CHECK(cs_eigen_error_estimate(e) >= 0.0);
  CHECK(cs_eigen_residual(e) < 1e-8);
  const size_t n = cs_eigen_size(e);
  REQUIRE(n > 2);
  std::vector<double> t(n), psi(n + 5);
  CHECK(cs_eigen_nodes(e, t.data(), n) == n);
  CHECK(cs_eigen_values(e, psi.data(), psi.size()) == n);
  CHECK(t.front() == -1.0);
  CHECK(t.back() == 1.0);
  CHECK(psi[0] == 0.0);
  CHECK(cs_eigen_nodes(e, t.data(), 2) == 2);
  cs_eigen_free(e);

  REQUIRE(cs_lambda(0.0, "dirichlet", 1.0, 1e-10, &e) == CS_OK);
  CHECK(cs_eigen_lambda(e) == doctest::Approx(2.467401100272340).epsilon(1e-10));
  cs_eigen_free(e);

  REQUIRE(cs_lambda_transformed(0.4, "-0.5", 1.0, 1e-10, &e) == CS_OK);
  double b = 0.0;
  REQUIRE(cs_lambda_bessel(0.4, "-0.5", 1.0, &b) == CS_OK);
  CHECK(std::abs(cs_eigen_lambda(e) - b) < 1e-7);
  cs_eigen_free(e);

  REQUIRE(cs_disc_nu("dirichlet", 1.0, 1e-10, &e) == CS_OK);
  CHECK(cs_eigen_lambda(e) == doctest::Approx(1.4457964907).epsilon(1e-7));
  cs_eigen_free(e);
  cs_eigen_free(nullptr);
}

TEST_CASE("scalar functions") {
  double v = 0.0, err = 0.0;
  REQUIRE(cs_straight_lambda("dirichlet", 2.0, &v) == CS_OK);
  CHECK(v == doctest::Approx(2.467401100272340 / 4));
  REQUIRE(cs_dlambda_dkappa(0.3, "0", 1.0, 1e-9, &v, &err) == CS_OK);
  CHECK(v > 0.0);
  CHECK(cs_dlambda_dkappa(0.3, "0", 1.0, 1e-9, &v, nullptr) == CS_OK);
  int found = -1;
  REQUIRE(cs_zero_eigen_kappa(0.0, 1.0, &found, &v) == CS_OK);
  CHECK(found == 0);
  REQUIRE(cs_zero_eigen_kappa(-1.0, 1.0, &found, &v) == CS_OK);
  CHECK(found == 1);
  CHECK(v > 0.0);
  CHECK(v < 1.0);
}

TEST_CASE("errors: codes and last_error") {
  cs_eigen* e = nullptr;
  CHECK(cs_lambda(1.5, "0", 1.0, 1e-10, &e) == CS_ERR_VALIDATION);
  CHECK(e == nullptr);
  CHECK(std::string(cs_last_error()).find("kappa") != std::string::npos);
  CHECK(cs_lambda(0.0, "banana", 1.0, 1e-10, &e) == CS_ERR_VALIDATION);
  CHECK(cs_lambda(0.0, "0", 1.0, 1e-10, nullptr) == CS_ERR_VALIDATION);
  CHECK(cs_lambda(0.0, nullptr, 1.0, 1e-10, &e) == CS_ERR_VALIDATION);
  double v = 0.0;
  CHECK(cs_lambda_bessel(0.0, "0", 1.0, &v) == CS_ERR_VALIDATION);
  CHECK(cs_straight_lambda("0", -1.0, &v) == CS_ERR_VALIDATION);
  CHECK(cs_run("bogus", "{}", 1e-9, 0, 1, nullptr, nullptr) == CS_ERR_VALIDATION);
  char* report = nullptr;
  CHECK(cs_run("bound2d", "{", 1e-9, 0, 1, &report, nullptr) == CS_ERR_VALIDATION);
  CHECK(report == nullptr);
  CHECK(std::string(cs_last_error()).find("JSON") != std::string::npos);
  cs_free_string(nullptr);
}

TEST_CASE("JSON report and sweep") {
  char* json = nullptr;
  REQUIRE(cs_lambda_report(0.5, "-1", 1.0, 1e-10, &json) == CS_OK);
  const auto j = nlohmann::json::parse(take(json));
  for (const char* k : {"kappa", "alpha", "a", "fd", "fd_error", "transformed", "delta_transformed", "bessel",
                        "delta_oracle"}) {
    CHECK(j.contains(k));
  }
  REQUIRE(cs_lambda_report(0.0, "dirichlet", 1.0, 1e-10, &json) == CS_OK);
  CHECK(nlohmann::json::parse(take(json)).contains("closed_form"));

  char* csv = nullptr;
  REQUIRE(cs_sweep_csv(" -1, 0 ,dirichlet", -0.5, 0.5, 3, 1.0, 1e-9, 2, &csv) == CS_OK);
  const std::string text = take(csv);
  CHECK(text.rfind("kappa,alpha,lambda,solver,delta_oracle\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 10);
  CHECK(cs_sweep_csv("0,,1", -0.5, 0.5, 3, 1.0, 1e-9, 1, &csv) == CS_ERR_VALIDATION);
}

TEST_CASE("config run") {
  char *report = nullptr, *summary = nullptr;
  const char* cfg = R"({"a": 1, "s_min": -4, "s_max": 4,
      "kappa": {"type": "bump", "amplitude": -0.3, "center": 0, "halfwidth": 1},
      "alpha": {"type": "const", "value": 1}, "alpha0": 1, "ns": 32, "nt": 8})";
  REQUIRE(cs_run("bound2d", cfg, 1e-9, 0, 1, &report, &summary) == CS_OK);
  CHECK(nlohmann::json::parse(take(report))["status"] == "pass");
  CHECK_FALSE(take(summary).empty());
  // Hardy needs kappa >= 0.
  CHECK(cs_run("hardy", cfg, 1e-9, 0, 1, nullptr, nullptr) == CS_ERR_VALIDATION);
}

TEST_CASE("geometry handle") {
  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(2 * std::numbers::pi * i / 400);
  cs_geometry* g = nullptr;
  REQUIRE(cs_geometry_build(R"({"type": "const", "value": 1})", grid.data(), grid.size(), 0.5, 0.0, &g) == CS_OK);
  double xy[2];
  REQUIRE(cs_geometry_curve(g, 2 * std::numbers::pi, xy) == CS_OK);
  CHECK(std::hypot(xy[0], xy[1]) < 1e-9);
  REQUIRE(cs_geometry_strip_map(g, 1.0, 0.25, xy) == CS_OK);
  CHECK(std::hypot(xy[0], xy[1] - 1.0) == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(cs_geometry_strip_map(g, 1.0, 0.75, xy) == CS_ERR_VALIDATION);
  int sup = -1, inj = -1;
  double overlap[4];
  REQUIRE(cs_geometry_check(g, &sup, &inj, overlap) == CS_OK);
  CHECK(sup == 1);
  CHECK(cs_geometry_check(g, &sup, &inj, nullptr) == CS_OK);
  cs_geometry_free(g);
  CHECK(cs_geometry_build(R"({"type": "const"})", grid.data(), grid.size(), 0.5, 0.0, &g) == CS_ERR_VALIDATION);
  CHECK(cs_geometry_build(R"({"type": "const", "value": 0})", nullptr, 3, 0.5, 0.0, &g) == CS_ERR_VALIDATION);
}
