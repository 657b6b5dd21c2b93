#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "issv/errors.hpp"
#include "issv/harness.hpp"
#include "json.hpp"

namespace issv {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

// JSON has no infinities; they travel as strings.
json num_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double num_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  fail(ErrorKind::Config, "report JSON: expected a number");
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot open " + path + " for writing");
  out << text;
  if (!out) fail(ErrorKind::Io, "write failed for " + path);
}

}  // namespace

const char* library_version() noexcept { return kVersion; }

std::string report_csv(const VerificationReport& r) {
  std::string out = "t,lhs,rhs,margin,rel_margin\n";
  for (const auto& row : r.rows) {
    out += fmt17(row.t) + "," + fmt17(row.lhs) + "," + fmt17(row.rhs) + "," + fmt17(row.margin) + "," +
           fmt17(row.rel_margin) + "\n";
  }
  return out;
}

std::string report_json(const VerificationReport& r) {
  json j;
  j["scenario"] = r.scenario_name;
  j["scenario_hash"] = r.scenario_hash;
  j["theorem"] = r.theorem;
  j["lhs_kind"] = r.lhs_kind;
  j["pass"] = r.pass;
  j["min_rel_margin"] = num_json(r.min_rel_margin);
  j["rel_margin_slack"] = num_json(r.rel_margin_slack);
  j["tau"] = num_json(r.tau);
  j["tau_slack"] = num_json(r.tau_slack);
  j["tau_audit_worst"] = num_json(r.tau_audit_worst);
  j["tau_audit_pass"] = r.tau_audit_pass;
  j["dt_used"] = num_json(r.dt_used);
  j["steps"] = r.steps;
  json st = json::array();
  for (const auto& c : r.structural)
    st.push_back({{"tag", c.tag},
                  {"description", c.description},
                  {"declared", num_json(c.declared)},
                  {"estimated", num_json(c.estimated)},
                  {"ok", c.ok}});
  j["structural"] = st;
  if (r.gain_params) {
    const auto& g = *r.gain_params;
    j["gain_params"] = {{"l", g.l},
                        {"k", g.k},
                        {"b_under", num_json(g.b_under)},
                        {"a_bar", g.a_bar},
                        {"a_under", g.a_under},
                        {"dd", g.dd},
                        {"psi0_under", g.psi0_under},
                        {"m_bar", g.m_bar},
                        {"route", g.route == GainRoute::M ? "m" : "psi0"},
                        {"dirichlet", g.dirichlet},
                        {"p0", g.p0},
                        {"p_max", g.p_max}};
  }
  if (r.gains) j["gains"] = {{"chat", r.gains->chat}, {"ckl", r.gains->ckl}};
  json c = json::object();
  for (const auto& [k, v] : r.constants) c[k] = num_json(v);
  j["constants"] = c;
  if (r.dissipation) {
    const auto& d = *r.dissipation;
    j["dissipation"] = {{"form", d.form},
                        {"intervals", d.intervals},
                        {"violations", d.violations},
                        {"worst_excess", num_json(d.worst_excess)},
                        {"worst_excess_over_slack", num_json(d.worst_excess_over_slack)},
                        {"B", num_json(d.B)},
                        {"pass", d.pass}};
  }
  j["notes"] = r.notes;
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({num_json(row.t), num_json(row.lhs), num_json(row.rhs), num_json(row.margin), num_json(row.rel_margin)});
  j["rows"] = rows;
  j["versions"] = {{"issv", kVersion},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  return j.dump(2);
}

VerificationReport parse_report_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, std::string("report JSON: ") + e.what());
  }
  try {
    VerificationReport r;
    r.scenario_name = j.at("scenario").get<std::string>();
    r.scenario_hash = j.at("scenario_hash").get<std::string>();
    r.theorem = j.at("theorem").get<std::string>();
    r.lhs_kind = j.at("lhs_kind").get<std::string>();
    r.pass = j.at("pass").get<bool>();
    r.min_rel_margin = num_from(j.at("min_rel_margin"));
    r.rel_margin_slack = num_from(j.at("rel_margin_slack"));
    r.tau = num_from(j.at("tau"));
    r.tau_slack = num_from(j.at("tau_slack"));
    r.tau_audit_worst = num_from(j.at("tau_audit_worst"));
    r.tau_audit_pass = j.at("tau_audit_pass").get<bool>();
    r.dt_used = num_from(j.at("dt_used"));
    r.steps = j.at("steps").get<std::size_t>();
    for (const auto& c : j.at("structural"))
      r.structural.push_back(StructuralCheck{c.at("tag").get<std::string>(), c.at("description").get<std::string>(),
                                             num_from(c.at("declared")), num_from(c.at("estimated")),
                                             c.at("ok").get<bool>()});
    if (j.contains("gain_params")) {
      const auto& g = j.at("gain_params");
      GainParams gp;
      gp.l = num_from(g.at("l"));
      gp.k = num_from(g.at("k"));
      gp.b_under = num_from(g.at("b_under"));
      gp.a_bar = num_from(g.at("a_bar"));
      gp.a_under = num_from(g.at("a_under"));
      gp.dd = num_from(g.at("dd"));
      gp.psi0_under = num_from(g.at("psi0_under"));
      gp.m_bar = num_from(g.at("m_bar"));
      gp.route = g.at("route").get<std::string>() == "m" ? GainRoute::M : GainRoute::Psi0;
      gp.dirichlet = g.at("dirichlet").get<bool>();
      gp.p0 = num_from(g.at("p0"));
      gp.p_max = num_from(g.at("p_max"));
      r.gain_params = gp;
    }
    if (j.contains("gains")) r.gains = Gains{num_from(j.at("gains").at("chat")), num_from(j.at("gains").at("ckl"))};
    for (auto& [k, v] : j.at("constants").items()) r.constants[k] = num_from(v);
    if (j.contains("dissipation")) {
      const auto& d = j.at("dissipation");
      DissipationReport dr;
      dr.form = d.at("form").get<std::string>();
      dr.intervals = d.at("intervals").get<std::size_t>();
      dr.violations = d.at("violations").get<std::size_t>();
      dr.worst_excess = num_from(d.at("worst_excess"));
      dr.worst_excess_over_slack = num_from(d.at("worst_excess_over_slack"));
      dr.B = num_from(d.at("B"));
      dr.pass = d.at("pass").get<bool>();
      r.dissipation = dr;
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
    for (const auto& row : j.at("rows")) {
      if (!row.is_array() || row.size() != 5) fail(ErrorKind::Config, "report JSON: rows must have 5 entries");
      r.rows.push_back(ReportRow{num_from(row[0]), num_from(row[1]), num_from(row[2]), num_from(row[3]), num_from(row[4])});
    }
    return r;
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, std::string("report JSON: ") + e.what());
  }
}

void emit_report(const VerificationReport& r, const std::string& csv_path, const std::string& json_path) {
  if (!csv_path.empty()) write_file(csv_path, report_csv(r));
  if (!json_path.empty()) write_file(json_path, report_json(r));
}

}  // namespace issv
