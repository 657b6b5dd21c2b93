#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <thread>

#include "doctest.h"
#include "issv/issv.h"
#include "json.hpp"

using doctest::Approx;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  issv_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(issv_version()) == "0.1.0");
  CHECK(std::string(issv_status_name(ISSV_OK)) == "ok");
  CHECK(std::string(issv_status_name(ISSV_ERR_CONSTRAINT)) == "constraint");
  CHECK(std::string(issv_status_name(static_cast<issv_status>(99))) == "unknown");
}

TEST_CASE("null arguments") {
  issv_scenario* s = nullptr;
  CHECK(issv_scenario_parse(nullptr, &s) == ISSV_ERR_ARGUMENT);
  CHECK(std::string(issv_last_error()).find("json") != std::string::npos);
  CHECK(issv_scenario_preset("heat_robin", nullptr) == ISSV_ERR_ARGUMENT);
  CHECK(issv_verify(nullptr, nullptr) == ISSV_ERR_ARGUMENT);
  CHECK(issv_report_pass(nullptr) == 0);
  issv_scenario_free(nullptr);
  issv_report_free(nullptr);
  issv_string_free(nullptr);
}

TEST_CASE("errors map to status codes") {
  issv_scenario* s = nullptr;
  CHECK(issv_scenario_parse("{", &s) == ISSV_ERR_CONFIG);
  CHECK(s == nullptr);
  CHECK(std::strlen(issv_last_error()) > 0);
  CHECK(issv_scenario_preset("nope", &s) == ISSV_ERR_CONFIG);
  CHECK(issv_scenario_parse(R"J({"preset":"heat_robin","problem":{"a":"1+w"}})J", &s) == ISSV_ERR_PARSE);
  CHECK(issv_scenario_load("/nonexistent/x.json", &s) == ISSV_ERR_IO);

  REQUIRE(issv_scenario_parse(R"J({"preset":"heat_robin","problem":{"cbar":2},"solver":{"T":0.05}})J", &s) == ISSV_OK);
  issv_report* r = nullptr;
  CHECK(issv_verify(s, &r) == ISSV_ERR_CONSTRAINT);
  CHECK(r == nullptr);
  CHECK(std::string(issv_last_constraint()) == "A2-3");
  issv_scenario_free(s);

  // a later success clears the error state
  REQUIRE(issv_scenario_preset("heat_robin", &s) == ISSV_OK);
  CHECK(std::string(issv_last_error()).empty());
  CHECK(std::string(issv_last_constraint()).empty());
  issv_scenario_free(s);
}

TEST_CASE("last error is per thread") {
  issv_scenario* s = nullptr;
  CHECK(issv_scenario_parse("{", &s) == ISSV_ERR_CONFIG);
  std::string other = "unset";
  std::thread([&] { other = issv_last_error(); }).join();
  CHECK(other.empty());
  CHECK_FALSE(std::string(issv_last_error()).empty());
}

TEST_CASE("scenario round trip and verify") {
  issv_scenario* s = nullptr;
  REQUIRE(issv_scenario_parse(R"J({"preset":"heat_robin","solver":{"T":0.1,"n_x":51}})J", &s) == ISSV_OK);
  char* js = nullptr;
  REQUIRE(issv_scenario_json(s, &js) == ISSV_OK);
  const std::string json = take(js);
  char* h = nullptr;
  REQUIRE(issv_scenario_hash(s, &h) == ISSV_OK);
  const std::string hash = take(h);
  CHECK(hash.size() == 16);

  issv_scenario* s2 = nullptr;
  REQUIRE(issv_scenario_parse(json.c_str(), &s2) == ISSV_OK);
  REQUIRE(issv_scenario_hash(s2, &h) == ISSV_OK);
  CHECK(take(h) == hash);
  issv_scenario_free(s2);

  char* name = nullptr;
  REQUIRE(issv_scenario_name(s, &name) == ISSV_OK);
  CHECK(take(name) == "heat_robin");

  issv_report* r = nullptr;
  REQUIRE(issv_verify(s, &r) == ISSV_OK);
  CHECK(issv_report_pass(r) == 1);
  CHECK(issv_report_min_rel_margin(r) >= -0.02);
  char* csv = nullptr;
  REQUIRE(issv_report_csv(r, &csv) == ISSV_OK);
  const std::string c = take(csv);
  CHECK(c.rfind("t,lhs,rhs,margin,rel_margin\n", 0) == 0);
  char* rj = nullptr;
  REQUIRE(issv_report_json(r, &rj) == ISSV_OK);
  const auto parsed = nlohmann::json::parse(take(rj));
  CHECK(parsed.at("scenario_hash") == hash);
  CHECK(parsed.at("rows").size() == 11);

  CHECK(issv_report_write(r, "test_capi_report.csv", nullptr) == ISSV_OK);
  std::ifstream in("test_capi_report.csv");
  std::string first;
  std::getline(in, first);
  CHECK(first == "t,lhs,rhs,margin,rel_margin");
  std::remove("test_capi_report.csv");
  CHECK(issv_report_write(r, "/nonexistent/dir/x.csv", "") == ISSV_ERR_IO);
  issv_report_free(r);

  REQUIRE(issv_simulate(s, "test_capi_traj.csv") == ISSV_OK);
  std::ifstream tr("test_capi_traj.csv");
  std::string line;
  int rows = 0;
  std::getline(tr, line);
  CHECK(line == "t,x,w");
  while (std::getline(tr, line)) ++rows;
  CHECK(rows == 11 * 51);
  std::remove("test_capi_traj.csv");
  issv_scenario_free(s);
}

TEST_CASE("outputs from the scenario file") {
  issv_scenario* s = nullptr;
  REQUIRE(issv_scenario_parse(R"J({"preset":"burgers1d","outputs":{"csv":"a.csv"}})J", &s) == ISSV_OK);
  char* csv = nullptr;
  char* json = nullptr;
  REQUIRE(issv_scenario_outputs(s, &csv, &json) == ISSV_OK);
  CHECK(take(csv) == "a.csv");
  CHECK(take(json).empty());
  issv_scenario_free(s);
}

TEST_CASE("presets and property suites") {
  char* p = nullptr;
  REQUIRE(issv_presets_json(&p) == ISSV_OK);
  CHECK(nlohmann::json::parse(take(p)).size() == 5);

  int pass = -1;
  char* js = nullptr;
  REQUIRE(issv_property_suites(3, 100, &pass, &js) == ISSV_OK);
  const auto j = nlohmann::json::parse(take(js));
  CHECK(j.at("seed") == 3);
  CHECK(j.at("pass").get<bool>() == (pass == 1));
  CHECK(issv_property_suites(3, 0, &pass, nullptr) == ISSV_ERR_DOMAIN);
}

TEST_CASE("orlicz norm from CSV") {
  // u = 1 on [0, 1], power(2): modular 1/2, Luxemburg (1/2)^{1/2}
  {
    std::ofstream out("test_capi_u.csv");
    out << "x,u\n";
    for (int i = 0; i <= 10; ++i) out << i / 10.0 << ",1\n";
  }
  double lux = 0.0, mod = 0.0;
  REQUIRE(issv_orlicz_norm_csv("power:2", "test_capi_u.csv", &lux, &mod) == ISSV_OK);
  CHECK(mod == Approx(0.5).epsilon(1e-12));
  CHECK(lux == Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(issv_orlicz_norm_csv("cubic:2", "test_capi_u.csv", &lux, &mod) == ISSV_ERR_CONFIG);
  {
    std::ofstream out("test_capi_u.csv");
    out << "0,1\n0.1,1\n0.3,1\n";
  }
  CHECK(issv_orlicz_norm_csv("power:2", "test_capi_u.csv", &lux, &mod) == ISSV_ERR_SHAPE);
  std::remove("test_capi_u.csv");
  CHECK(issv_orlicz_norm_csv("power:2", "/nonexistent.csv", &lux, &mod) == ISSV_ERR_IO);
}
