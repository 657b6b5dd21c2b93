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

struct TheoremInfo {
  Theorem id;
  const char* name;
  bool dirichlet;
  bool young;
};

constexpr TheoremInfo kTheorems[] = {
    {Theorem::Thm31i, "thm31i", false, false},  {Theorem::Thm31ii, "thm31ii", false, false},
    {Theorem::Thm32i, "thm32i", true, false},   {Theorem::Thm32ii, "thm32ii", true, false},
    {Theorem::Thm41, "thm41", false, true},     {Theorem::Thm42, "thm42", true, true},
    {Theorem::Thm43, "thm43", false, true},     {Theorem::Thm44, "thm44", true, true},
    {Theorem::Prop51, "prop51", false, false},  {Theorem::Robin52, "robin52", false, false},
};

const TheoremInfo& info(Theorem t) {
  for (const auto& i : kTheorems)
    if (i.id == t) return i;
  fail(ErrorKind::Config, "unknown theorem id");
}

VarSet slot_vars(const std::string& slot) {
  if (slot == "h") return slots::kReaction;
  if (slot == "g" || slot == "psi") return slots::kFlux;
  if (slot == "psi2") return slots::kPsi2;
  if (slot == "d_left" || slot == "d_right") return slots::kSignal;
  if (slot == "w0") return slots::kInitial;
  if (slot == "a" || slot == "b" || slot == "c" || slot == "mu" || slot == "m" || slot == "f" || slot == "g0" ||
      slot == "psi1")
    return slots::kField;
  fail(ErrorKind::Config, "unknown coefficient slot '" + slot + "'");
}

Expr compile_slot(const std::string& slot, const std::string& text) {
  try {
    return Expr::parse(text, slot_vars(slot));
  } catch (const ParseError& e) {
    throw ParseError(e.position(), "in '" + slot + "': " + e.message());
  }
}

json q_to_json(double q) { return std::isinf(q) ? json("inf") : json(q); }

double q_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    try {
      return std::stod(s);
    } catch (...) {
      fail(ErrorKind::Config, "q must be a number or \"inf\"");
    }
  }
  if (!j.is_number()) fail(ErrorKind::Config, "q must be a number or \"inf\"");
  return j.get<double>();
}

double number(const json& j, const char* what) {
  if (!j.is_number()) fail(ErrorKind::Config, std::string(what) + " must be a number");
  return j.get<double>();
}

json young_json(const YoungSpec& y) {
  json j;
  j["variant"] = y.variant;
  j["params"] = y.params;
  j["s_max"] = y.s_max;
  return j;
}

YoungSpec young_from_json(const json& j) {
  if (j.is_string()) return YoungSpec::parse(j.get<std::string>());
  if (!j.is_object()) fail(ErrorKind::Config, "young must be an object or a compact string");
  YoungSpec y;
  y.variant = j.value("variant", std::string("power"));
  if (j.contains("params")) {
    y.params.clear();
    for (auto& [k, v] : j.at("params").items()) y.params[k] = number(v, "young parameter");
  }
  if (j.contains("s_max")) y.s_max = number(j.at("s_max"), "young.s_max");
  y.build();  // validate early
  return y;
}

void apply_problem(ProblemText& p, const json& j) {
  if (!j.is_object()) fail(ErrorKind::Config, "problem must be an object");
  for (auto& [key, v] : j.items()) {
    if (key == "domain") {
      if (!v.is_array() || v.size() != 2) fail(ErrorKind::Config, "domain must be [x_lo, x_hi]");
      p.x_lo = number(v[0], "domain");
      p.x_hi = number(v[1], "domain");
    } else if (key == "boundary") {
      p.boundary = v.get<std::string>();
    } else if (key == "cbar") {
      p.cbar = number(v, "cbar");
    } else if (key == "psi0bar") {
      p.psi0bar = number(v, "psi0bar");
    } else if (key == "s0") {
      p.s0 = number(v, "s0");
    } else if (key == "coefficients") {
      apply_problem(p, v);
    } else {
      slot_vars(key);
      if (v.is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << v.get<double>();
        p.exprs[key] = os.str();
      } else if (v.is_string()) {
        p.exprs[key] = v.get<std::string>();
      } else {
        fail(ErrorKind::Config, "coefficient '" + key + "' must be a string or number");
      }
    }
  }
}

void apply_solver(SolverConfig& s, const json& j) {
  if (!j.is_object()) fail(ErrorKind::Config, "solver must be an object");
  for (auto& [key, v] : j.items()) {
    if (key == "n_x") {
      const double n = number(v, "n_x");
      if (!(n >= 3) || n != std::floor(n)) fail(ErrorKind::Config, "n_x must be an integer >= 3");
      s.n_x = static_cast<std::size_t>(n);
    } else if (key == "T") {
      s.T = number(v, "T");
    } else if (key == "cfl_safety") {
      s.cfl_safety = number(v, "cfl_safety");
    } else if (key == "checkpoint_dt") {
      s.checkpoint_dt = number(v, "checkpoint_dt");
    } else if (key == "advection") {
      const auto a = v.get<std::string>();
      if (a == "central") s.advection = Advection::Central;
      else if (a == "upwind") s.advection = Advection::Upwind;
      else fail(ErrorKind::Config, "advection must be central or upwind");
    } else {
      fail(ErrorKind::Config, "unknown solver field '" + key + "'");
    }
  }
}

struct PresetDef {
  const char* name;
  const char* description;
  Scenario (*make)();
};

ProblemText text(double lo, double hi, const char* boundary, std::map<std::string, std::string> exprs, double cbar,
                 double psi0bar, double s0 = 1.0) {
  ProblemText p;
  p.x_lo = lo;
  p.x_hi = hi;
  p.boundary = boundary;
  p.exprs = std::move(exprs);
  p.cbar = cbar;
  p.psi0bar = psi0bar;
  p.s0 = s0;
  return p;
}

Scenario base(const char* name, ProblemText p, Theorem th, std::size_t n_x, double T, double cp) {
  Scenario s;
  s.name = name;
  s.preset = name;
  s.problem = std::move(p);
  s.theorem = th;
  s.solver.n_x = n_x;
  s.solver.T = T;
  s.solver.checkpoint_dt = cp;
  return s;
}

Scenario make_heat_robin() {
  return base("heat_robin",
              text(0.0, 1.0, "robin", {{"a", "1"}, {"c", "1"}, {"psi", "w"}, {"w0", "sin(pi*x)"}}, 1.0, 1.0),
              Theorem::Thm31i, 201, 1.0, 0.01);
}

Scenario make_burgers() {
  return base("burgers1d",
              text(-1.0, 1.0, "robin",
                   {{"a", "1"},
                    {"c", "1"},
                    {"m", "1"},
                    {"g", "w^2/2"},
                    {"g0", "0.5"},
                    {"psi", "w + w^3"},
                    {"d_left", "0.1*sin(t)"},
                    {"d_right", "0.1*sin(t)"},
                    {"f", "0.1*exp(-t)"},
                    {"w0", "0.5*(1+cos(pi*x))"}},
                   1.0, 0.5, 1.0),
              Theorem::Thm31i, 101, 2.0, 0.02);
}

Scenario make_ginzburg_landau() {
  Scenario s = base("ginzburg_landau",
                    text(0.0, 1.0, "dirichlet",
                         {{"a", "1"},
                          {"c", "1"},
                          {"h", "w^3 + 0.5*w^5"},
                          {"psi1", "1"},
                          {"psi2", "s + s^3"},
                          {"d_left", "0.2*sin(t)"},
                          {"d_right", "0.2*sin(t)"},
                          {"f", "0.1*exp(-t)*sin(pi*x)"},
                          {"w0", "sin(pi*x)"}},
                         1.0, 0.0),
                    Theorem::Thm32i, 101, 2.0, 0.02);
  s.params["p0"] = 2.0;
  return s;
}

Scenario make_special63() {
  Scenario s = base("special63",
                    text(-1.0, 1.0, "robin",
                         {{"a", "1"},
                          {"b", "3*x"},
                          {"c", "3*x^2 + 5/2"},
                          {"h", "(x^2 - 3/ln(2)*abs(x)*ln(1+abs(x)))*w/(1+w^2)"},
                          {"mu", "-x^2 + 3*abs(x)"},
                          {"psi", "w"},
                          {"d_left", "0.05*sin(t)"},
                          {"d_right", "0.05*sin(t)"},
                          {"w0", "cos(pi*x/2)^2"}},
                         0.0, 1.0),
                    Theorem::Prop51, 101, 2.0, 0.02);
  s.params["cbar_chosen"] = 1.5;
  s.q_expr = "2-4*r^2";
  return s;
}

Scenario make_linear52() {
  // w_x(0) - K w(0) = d0 becomes -w_x + K w = -d0 in outward-normal form.
  Scenario s = base("linear52",
                    text(0.0, 1.0, "robin",
                         {{"a", "1"},
                          {"b", "1"},
                          {"c", "-0.2"},
                          {"psi", "1*w"},
                          {"d_left", "-0.05*sin(t)"},
                          {"d_right", "0.05*sin(t)"},
                          {"f", "0.05*sin(pi*x)*cos(t)"},
                          {"w0", "x^2*(1-x)^2"}},
                         0.0, 0.0),
                    Theorem::Robin52, 101, 2.0, 0.02);
  s.params["theta"] = 0.5;
  s.params["K"] = 1.0;
  return s;
}

const PresetDef kPresets[] = {
    {"heat_robin", "heat equation with linear reaction and homogeneous Robin data", make_heat_robin},
    {"burgers1d", "viscous Burgers equation with cubic Robin boundary, lambda = K = 1", make_burgers},
    {"ginzburg_landau", "Ginzburg-Landau reaction with Dirichlet data psi2(s) = s + s^3", make_ginzburg_landau},
    {"special63", "sign-changing c - b_x - mu with Robin data, radial transform Q = 2 - 4 r^2", make_special63},
    {"linear52", "linear advection-diffusion with Robin data and weight exp(-b x/2a) cos(theta x)", make_linear52},
};

}  // namespace

const char* theorem_name(Theorem t) noexcept {
  for (const auto& i : kTheorems)
    if (i.id == t) return i.name;
  return "?";
}

Theorem parse_theorem(std::string_view name) {
  for (const auto& i : kTheorems)
    if (name == i.name) return i.id;
  fail(ErrorKind::Config, "unknown theorem selector '" + std::string(name) + "'");
}

bool theorem_needs_dirichlet(Theorem t) noexcept { return info(t).dirichlet; }
bool theorem_needs_young(Theorem t) noexcept { return info(t).young; }

YoungFunction YoungSpec::build() const {
  auto get = [&](const char* key) {
    auto it = params.find(key);
    if (it == params.end()) fail(ErrorKind::Config, "young " + variant + " needs parameter '" + key + "'");
    return it->second;
  };
  if (variant == "power") return YoungFunction::power(get("q"), s_max);
  if (variant == "log_linear") return YoungFunction::log_linear(get("c1"), get("c2"), s_max);
  if (variant == "log_power") return YoungFunction::log_power(get("c1"), get("c2"), get("q"), s_max);
  fail(ErrorKind::Config, "unknown young variant '" + variant + "'");
}

std::string YoungSpec::to_json() const { return young_json(*this).dump(); }

YoungSpec YoungSpec::parse(std::string_view text) {
  const std::string s(text);
  const auto first = s.find_first_not_of(" \t\n");
  if (first != std::string::npos && s[first] == '{') {
    json j;
    try {
      j = json::parse(s);
    } catch (const json::exception& e) {
      fail(ErrorKind::Config, std::string("young spec: ") + e.what());
    }
    return young_from_json(j);
  }
  const auto colon = s.find(':');
  if (colon == std::string::npos) fail(ErrorKind::Config, "young spec must look like 'power:2'");
  YoungSpec y;
  y.variant = s.substr(0, colon);
  std::vector<double> vals;
  std::stringstream ss(s.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (...) {
      fail(ErrorKind::Config, "young spec: bad number '" + item + "'");
    }
  }
  std::vector<const char*> names;
  if (y.variant == "power") names = {"q"};
  else if (y.variant == "log_linear") names = {"c1", "c2"};
  else if (y.variant == "log_power") names = {"c1", "c2", "q"};
  else fail(ErrorKind::Config, "unknown young variant '" + y.variant + "'");
  if (vals.size() != names.size())
    fail(ErrorKind::Config, "young " + y.variant + " takes " + std::to_string(names.size()) + " parameters");
  y.params.clear();
  for (std::size_t i = 0; i < names.size(); ++i) y.params[names[i]] = vals[i];
  y.build();
  return y;
}

PdeProblem ProblemText::compile() const {
  PdeProblem p;
  if (!(x_lo < x_hi)) fail(ErrorKind::Config, "domain needs x_lo < x_hi");
  p.x_lo = x_lo;
  p.x_hi = x_hi;
  if (boundary == "robin" || boundary == "neumann") p.boundary = BoundaryKind::Robin;
  else if (boundary == "dirichlet") p.boundary = BoundaryKind::Dirichlet;
  else fail(ErrorKind::Config, "boundary must be robin or dirichlet");
  p.cbar = cbar;
  p.psi0bar = psi0bar;
  p.s0 = s0;
  for (const auto& [slot, src] : exprs) {
    Expr e = compile_slot(slot, src);
    if (slot == "a") p.a = e;
    else if (slot == "b") p.b = e;
    else if (slot == "c") p.c = e;
    else if (slot == "mu") p.mu = e;
    else if (slot == "m") p.m = e;
    else if (slot == "f") p.f = e;
    else if (slot == "h") p.h = e;
    else if (slot == "g") p.g = e;
    else if (slot == "g0") p.g0 = e;
    else if (slot == "psi") p.psi = e;
    else if (slot == "psi1") p.psi1 = e;
    else if (slot == "psi2") p.psi2 = e;
    else if (slot == "d_left") p.d_left = e;
    else if (slot == "d_right") p.d_right = e;
    else if (slot == "w0") p.w0 = e;
  }
  return p;
}

namespace {

json scenario_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  if (!s.preset.empty()) j["preset"] = s.preset;
  json p;
  p["domain"] = {s.problem.x_lo, s.problem.x_hi};
  p["boundary"] = s.problem.boundary;
  p["cbar"] = s.problem.cbar;
  p["psi0bar"] = s.problem.psi0bar;
  p["s0"] = s.problem.s0;
  for (const auto& [k, v] : s.problem.exprs) p[k] = v;
  j["problem"] = p;
  json sv;
  sv["n_x"] = s.solver.n_x;
  sv["T"] = s.solver.T;
  sv["cfl_safety"] = s.solver.cfl_safety;
  sv["advection"] = s.solver.advection == Advection::Upwind ? "upwind" : "central";
  sv["checkpoint_dt"] = s.solver.checkpoint_dt;
  j["solver"] = sv;
  j["theorem"] = theorem_name(s.theorem);
  j["q"] = q_to_json(s.q);
  if (s.young) j["young"] = young_json(*s.young);
  j["tau"] = s.tau ? json(*s.tau) : json("auto");
  j["tolerances"] = {{"rel_margin_slack", s.tol.rel_margin_slack},
                     {"dissipation_slack_scale", s.tol.dissipation_slack_scale}};
  j["params"] = s.params;
  j["Q"] = s.q_expr;
  j["waive_structural"] = s.waive_structural;
  json out = json::object();
  if (!s.csv_path.empty()) out["csv"] = s.csv_path;
  if (!s.json_path.empty()) out["json"] = s.json_path;
  j["outputs"] = out;
  return j;
}

}  // namespace

std::string Scenario::to_json() const { return scenario_json(*this).dump(2); }

std::string Scenario::hash() const {
  // Outputs do not change the run, so they stay out of the hash.
  json j = scenario_json(*this);
  j.erase("outputs");
  const std::string canon = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Scenario parse_scenario(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, std::string("scenario JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::Config, "scenario must be a JSON object");
  try {
    Scenario s;
    if (j.contains("preset")) s = preset_scenario(j.at("preset").get<std::string>());
    else if (!j.contains("problem")) fail(ErrorKind::Config, "scenario needs a preset or a problem");
    for (auto& [key, v] : j.items()) {
      if (key == "name") s.name = v.get<std::string>();
      else if (key == "preset") continue;
      else if (key == "problem") apply_problem(s.problem, v);
      else if (key == "solver") apply_solver(s.solver, v);
      else if (key == "theorem") s.theorem = parse_theorem(v.get<std::string>());
      else if (key == "q") s.q = q_from_json(v);
      else if (key == "young") s.young = young_from_json(v);
      else if (key == "tau") {
        if (v.is_string() && v.get<std::string>() == "auto") s.tau.reset();
        else s.tau = number(v, "tau");
      } else if (key == "tolerances") {
        for (auto& [tk, tv] : v.items()) {
          if (tk == "rel_margin_slack") s.tol.rel_margin_slack = number(tv, "rel_margin_slack");
          else if (tk == "dissipation_slack_scale") s.tol.dissipation_slack_scale = number(tv, "dissipation_slack_scale");
          else fail(ErrorKind::Config, "unknown tolerance '" + tk + "'");
        }
      } else if (key == "params") {
        for (auto& [pk, pv] : v.items()) s.params[pk] = number(pv, "params entry");
      } else if (key == "Q") s.q_expr = v.get<std::string>();
      else if (key == "waive_structural") s.waive_structural = v.get<bool>();
      else if (key == "outputs") {
        s.csv_path = v.value("csv", std::string());
        s.json_path = v.value("json", std::string());
      } else fail(ErrorKind::Config, "unknown scenario field '" + key + "'");
    }
    if (s.name.empty()) s.name = s.preset.empty() ? "custom" : s.preset;
    if (!(s.q >= 1.0)) fail(ErrorKind::Config, "q must lie in [1, inf]");
    if (s.tau && !(*s.tau > 0.0)) fail(ErrorKind::Config, "tau must be > 0");
    s.problem.compile();  // surface expression errors at load time
    Expr::parse(s.q_expr, slots::kRadial);
    return s;
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, std::string("scenario field type: ") + e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open scenario file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : kPresets) out.emplace_back(p.name);
  return out;
}

Scenario preset_scenario(const std::string& name) {
  for (const auto& p : kPresets)
    if (name == p.name) return p.make();
  fail(ErrorKind::Config, "unknown preset '" + name + "'");
}

std::string presets_json() {
  json arr = json::array();
  for (const auto& p : kPresets) {
    json j = scenario_json(p.make());
    j["description"] = p.description;
    arr.push_back(j);
  }
  return arr.dump(2);
}

}  // namespace issv
