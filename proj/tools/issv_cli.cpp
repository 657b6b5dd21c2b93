// issv: command-line front end over the C API.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "issv/issv.h"
#include "json.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kError = 1;
constexpr int kFail = 2;

std::string take(char* s) {
  std::string out = s ? s : "";
  issv_string_free(s);
  return out;
}

std::string describe_error(issv_status st) {
  std::string msg = std::string(issv_status_name(st)) + " error: " + issv_last_error();
  return msg;
}

// "preset:NAME" selects a built-in preset, anything else is a file path.
issv_status open_scenario(const std::string& arg, issv_scenario** out) {
  const std::string prefix = "preset:";
  if (arg.rfind(prefix, 0) == 0) return issv_scenario_preset(arg.substr(prefix.size()).c_str(), out);
  return issv_scenario_load(arg.c_str(), out);
}

struct Outcome {
  int code = kError;
  std::string line;
};

Outcome verify_one(const std::string& arg, const std::string& csv_override, const std::string& json_override) {
  Outcome o;
  issv_scenario* s = nullptr;
  issv_status st = open_scenario(arg, &s);
  if (st != ISSV_OK) {
    o.line = arg + ": " + describe_error(st);
    return o;
  }
  char* name_c = nullptr;
  char* hash_c = nullptr;
  char* csv_c = nullptr;
  char* json_c = nullptr;
  issv_scenario_name(s, &name_c);
  issv_scenario_hash(s, &hash_c);
  issv_scenario_outputs(s, &csv_c, &json_c);
  const std::string name = take(name_c);
  const std::string hash = take(hash_c);
  std::string csv = take(csv_c);
  std::string json = take(json_c);
  if (!csv_override.empty()) csv = csv_override;
  if (!json_override.empty()) json = json_override;

  issv_report* r = nullptr;
  st = issv_verify(s, &r);
  issv_scenario_free(s);
  if (st != ISSV_OK) {
    o.line = name + " [" + hash + "]: " + describe_error(st);
    return o;
  }
  if (!csv.empty() || !json.empty()) {
    st = issv_report_write(r, csv.c_str(), json.c_str());
    if (st != ISSV_OK) {
      issv_report_free(r);
      o.line = name + " [" + hash + "]: " + describe_error(st);
      return o;
    }
  }
  const bool pass = issv_report_pass(r) == 1;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", issv_report_min_rel_margin(r));
  o.line = name + " [" + hash + "]: " + (pass ? "PASS" : "FAIL") + " min_rel_margin=" + buf;
  o.code = pass ? kPass : kFail;
  issv_report_free(r);
  return o;
}

std::size_t worker_cap(std::size_t jobs) {
  std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ISS_VERIFY_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) cap = static_cast<std::size_t>(v);
  }
  return std::min(cap, jobs);
}

int cmd_verify(const std::vector<std::string>& scenarios, const std::string& csv, const std::string& json) {
  if (scenarios.size() > 1 && (!csv.empty() || !json.empty())) {
    std::cerr << "--csv/--json need a single scenario; use outputs{} in each file instead\n";
    return kError;
  }
  std::vector<Outcome> results(scenarios.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < scenarios.size();) results[i] = verify_one(scenarios[i], csv, json);
  };
  std::vector<std::thread> pool;
  const std::size_t n = worker_cap(scenarios.size());
  for (std::size_t k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = kPass;
  std::size_t passed = 0;
  for (const auto& r : results) {
    (r.code == kError ? std::cerr : std::cout) << r.line << "\n";
    if (r.code == kPass) ++passed;
    if (r.code == kError) code = kError;
    else if (r.code == kFail && code == kPass) code = kFail;
  }
  std::cout << "bound certified on " << passed << " of " << scenarios.size()
            << " scenario(s); this is not a proof of ISS\n";
  return code;
}

int cmd_simulate(const std::string& arg, std::string out) {
  issv_scenario* s = nullptr;
  issv_status st = open_scenario(arg, &s);
  if (st != ISSV_OK) {
    std::cerr << arg << ": " << describe_error(st) << "\n";
    return kError;
  }
  if (out.empty()) {
    char* name = nullptr;
    issv_scenario_name(s, &name);
    out = take(name) + "_trajectory.csv";
  }
  st = issv_simulate(s, out.c_str());
  issv_scenario_free(s);
  if (st != ISSV_OK) {
    std::cerr << describe_error(st) << "\n";
    return kError;
  }
  std::cout << "wrote " << out << "\n";
  return kPass;
}

int cmd_props(std::uint64_t seed, std::size_t samples, const std::string& json_path) {
  int pass = 0;
  char* js = nullptr;
  const issv_status st = issv_property_suites(seed, samples, &pass, &js);
  if (st != ISSV_OK) {
    std::cerr << describe_error(st) << "\n";
    return kError;
  }
  const std::string text = take(js);
  const auto j = nlohmann::json::parse(text);
  for (const auto& s : j.at("suites")) {
    std::cout << (s.at("pass").get<bool>() ? "PASS " : "FAIL ") << s.at("name").get<std::string>() << ": "
              << s.at("items") << " items, " << s.at("failed") << " failed, worst slack " << s.at("worst_slack") << "\n";
  }
  for (const auto& d : j.at("details"))
    for (const auto& it : d.at("items"))
      if (!it.at("pass").get<bool>())
        std::cout << "  failed: " << d.at("suite").get<std::string>() << " " << it.at("name").get<std::string>()
                  << " worst slack " << it.at("worst_slack") << "\n";
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!(out << text << "\n")) {
      std::cerr << "cannot write " << json_path << "\n";
      return kError;
    }
  }
  return pass ? kPass : kFail;
}

int cmd_orlicz(const std::string& spec, const std::string& csv) {
  double lux = 0.0;
  double mod = 0.0;
  const issv_status st = issv_orlicz_norm_csv(spec.c_str(), csv.c_str(), &lux, &mod);
  if (st != ISSV_OK) {
    std::cerr << describe_error(st) << "\n";
    return kError;
  }
  std::printf("luxemburg_norm=%.17g\nmodular=%.17g\n", lux, mod);
  return kPass;
}

int cmd_presets() {
  char* p = nullptr;
  const issv_status st = issv_presets_json(&p);
  if (st != ISSV_OK) {
    std::cerr << describe_error(st) << "\n";
    return kError;
  }
  std::cout << take(p) << "\n";
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of ISS / iISS estimates for 1-D parabolic PDEs"};
  app.set_version_flag("--version", std::string(issv_version()));
  app.require_subcommand(1);

  std::string sim_arg, sim_out;
  auto* sim = app.add_subcommand("simulate", "integrate a scenario and write the trajectory as t,x,w CSV");
  sim->add_option("scenario", sim_arg, "scenario JSON file or preset:NAME")->required();
  sim->add_option("-o,--out", sim_out, "output CSV (default <name>_trajectory.csv)");

  std::vector<std::string> ver_args;
  std::string ver_csv, ver_json;
  auto* ver = app.add_subcommand("verify", "simulate, check assumptions and the selected bound");
  ver->add_option("scenarios", ver_args, "scenario JSON files or preset:NAME")->required();
  ver->add_option("--csv", ver_csv, "margin CSV path (single scenario)");
  ver->add_option("--json", ver_json, "JSON summary path (single scenario)");

  std::uint64_t seed = 1;
  std::size_t samples = 1000;
  std::string props_json;
  auto* props = app.add_subcommand("props", "run the property suites");
  props->add_option("--seed", seed, "RNG seed");
  props->add_option("--samples", samples, "samples per family")->check(CLI::PositiveNumber);
  props->add_option("--json", props_json, "write the full report here");

  std::string y_spec, u_csv;
  auto* orl = app.add_subcommand("orlicz-norm", "Luxemburg norm and modular of x,u samples");
  orl->add_option("young", y_spec, "power:q | log_linear:c1,c2 | log_power:c1,c2,q")->required();
  orl->add_option("csv", u_csv, "CSV with x,u rows on a uniform grid")->required();

  auto* pre = app.add_subcommand("presets", "print the built-in scenarios as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kError;
  }

  if (*sim) return cmd_simulate(sim_arg, sim_out);
  if (*ver) return cmd_verify(ver_args, ver_csv, ver_json);
  if (*props) return cmd_props(seed, samples, props_json);
  if (*orl) return cmd_orlicz(y_spec, u_csv);
  if (*pre) return cmd_presets();
  return kError;
}
