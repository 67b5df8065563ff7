#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "orthoroots/orthoroots.h"

using nlohmann::json;

namespace {
std::string take(char* s) {
  std::string out = s;
  ortho_string_free(s);
  return out;
}
}  // namespace

TEST_CASE("table lifecycle and evaluation") {
  ortho_table* t = nullptr;
  REQUIRE(ortho_table_create(R"({"kind":"jacobi","beta":0,"gamma":0})", 10, &t) == ORTHO_OK);
  CHECK(ortho_table_degree(t) == 10);
  std::vector<double> v(11), d(11);
  REQUIRE(ortho_eval_basis(t, 0.3, 10, v.data(), d.data()) == ORTHO_OK);
  CHECK(v[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  double A, B, C;
  REQUIRE(ortho_kernels(t, 0.3, 10, &A, &B, &C) == ORTHO_OK);
  CHECK(A == doctest::Approx(3.8336176396141354).epsilon(1e-12));
  char* js = nullptr;
  REQUIRE(ortho_table_to_json(t, &js) == ORTHO_OK);
  const auto tj = json::parse(take(js));
  CHECK(tj["N"] == 10);
  CHECK(tj["b"].size() == 10);
  double rho = 0.0;
  REQUIRE(ortho_intensity(t, 10, 0.3, &rho) == ORTHO_OK);
  CHECK(rho == doctest::Approx(1.9326602809407335).epsilon(1e-10));
  ortho_table_free(t);
}

TEST_CASE("error codes and messages") {
  ortho_table* t = nullptr;
  CHECK(ortho_table_create(R"({"kind":"jacobi","beta":-2})", 4, &t) == ORTHO_INVALID_ARGUMENT);
  CHECK(t == nullptr);
  CHECK(std::string(ortho_last_error()).find("-1") != std::string::npos);
  CHECK(ortho_table_create("{not json", 4, &t) == ORTHO_INVALID_ARGUMENT);
  CHECK(ortho_table_create(nullptr, 4, &t) == ORTHO_INVALID_ARGUMENT);
  double q = 0.0;
  CHECK(ortho_qualls_exact(0, &q) == ORTHO_INVALID_ARGUMENT);
  ortho_results* r = nullptr;
  CHECK(ortho_run_experiment("simulate", R"({"n":20,"trials":5,"grid":{"max_points":8}})", nullptr, &r) ==
        ORTHO_NOT_CONVERGED);
  CHECK(ortho_run_experiment("nonsense", "{}", nullptr, &r) == ORTHO_INVALID_ARGUMENT);
  CHECK(ortho_results_count(nullptr) == 0);
}

TEST_CASE("roots through the C API") {
  ortho_table* t = nullptr;
  REQUIRE(ortho_table_create(R"({"kind":"jacobi","beta":0,"gamma":0})", 5, &t) == ORTHO_OK);
  const double c[] = {0.3, -1.2, 0.5, 0.8, -0.4, 1.1};
  std::size_t count = 0;
  int conv = 0;
  REQUIRE(ortho_count_roots(t, c, 6, -2.0, 2.0, nullptr, &count, &conv) == ORTHO_OK);
  CHECK(count == 3);
  CHECK(conv == 1);
  char* js = nullptr;
  REQUIRE(ortho_comrade_roots(t, c, 6, &js) == ORTHO_OK);
  const auto roots = json::parse(take(js))["roots"];
  REQUIRE(roots.size() == 3);
  CHECK(roots[0].get<double>() == doctest::Approx(-0.9438670017495279).epsilon(1e-10));
  REQUIRE(ortho_locate_roots(t, c, 6, -2.0, 2.0, 0.0, &js) == ORTHO_OK);
  CHECK(json::parse(take(js))["roots"].size() == 3);
  ortho_table_free(t);
}

TEST_CASE("experiments, results and csv") {
  ortho_results* r = nullptr;
  REQUIRE(ortho_run_experiment("simulate", R"({"n":30,"trials":40,"seed":3,"intervals":[[-0.5,0.5]]})", nullptr,
                               &r) == ORTHO_OK);
  CHECK(ortho_results_count(r) == 2);
  double est = 0, se = 0;
  std::size_t trials = 0;
  REQUIRE(ortho_results_get(r, 1, &est, &se, &trials) == ORTHO_OK);
  CHECK(trials == 40);
  CHECK(est > 0.0);
  CHECK(ortho_results_get(r, 5, &est, &se, &trials) == ORTHO_INVALID_ARGUMENT);
  ortho_results_clear_timing(r);
  char* csv = nullptr;
  REQUIRE(ortho_results_to_csv(r, 1, &csv) == ORTHO_OK);
  const std::string text = take(csv);
  CHECK(text.rfind("experiment,weight,beta,gamma,dist,n,trials,", 0) == 0);
  CHECK(text.find(",0,1\n") != std::string::npos);
  ortho_results_free(r);

  REQUIRE(ortho_run_universality(R"({"n":30,"trials":40,"seed":3})",
                                 R"({"n":30,"trials":40,"seed":4,"dist":{"dist":"rademacher"}})", "global", 3.0,
                                 &r) == ORTHO_OK);
  char* js = nullptr;
  REQUIRE(ortho_results_to_json(r, &js) == ORTHO_OK);
  const auto j = json::parse(take(js));
  CHECK(j["records"].size() == 2);
  CHECK(j["summary"].contains("pass"));
  ortho_results_free(r);
}

TEST_CASE("sampling and moments") {
  std::vector<double> a(6), b(6);
  REQUIRE(ortho_sample_coeffs(R"({"dist":"rademacher"})", 5, 1, 2, a.data()) == ORTHO_OK);
  REQUIRE(ortho_sample_coeffs(R"({"dist":"rademacher"})", 5, 1, 2, b.data()) == ORTHO_OK);
  CHECK(a == b);
  char* js = nullptr;
  REQUIRE(ortho_moment_report(R"({"dist":"uniform"})", 20000, 1, &js) == ORTHO_OK);
  CHECK(json::parse(take(js))["var"].get<double>() == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("equilibrium and potential") {
  double m = 0;
  int clamped = 0;
  REQUIRE(ortho_equilibrium_mass(-0.9, 0.9, &m, &clamped) == ORTHO_OK);
  CHECK(1.0 - m == doctest::Approx(0.28712).epsilon(1e-4));
  CHECK(clamped == 0);
  double u = 0;
  REQUIRE(ortho_log_potential(0.5, &u) == ORTHO_OK);
  CHECK(u == doctest::Approx(std::log(2.0)));
}

TEST_CASE("weight check") {
  char* js = nullptr;
  REQUIRE(ortho_check_weight(R"({"kind":"jacobi","beta":0,"gamma":0})", nullptr, &js) == ORTHO_OK);
  const auto j = json::parse(take(js));
  CHECK(j["circle_finite"] == true);
  CHECK(j["lipschitz_bounded"] == true);
}
