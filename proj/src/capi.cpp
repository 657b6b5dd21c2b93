#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "issv/errors.hpp"
#include "issv/harness.hpp"
#include "issv/issv.h"
#include "issv/norms.hpp"

struct issv_scenario {
  issv::Scenario s;
};

struct issv_report {
  issv::VerificationReport r;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_constraint;

issv_status status_of(issv::ErrorKind k) {
  using issv::ErrorKind;
  switch (k) {
    case ErrorKind::Domain: return ISSV_ERR_DOMAIN;
    case ErrorKind::Shape: return ISSV_ERR_SHAPE;
    case ErrorKind::Overflow: return ISSV_ERR_OVERFLOW;
    case ErrorKind::Parse: return ISSV_ERR_PARSE;
    case ErrorKind::Evaluation: return ISSV_ERR_EVALUATION;
    case ErrorKind::BlowUp: return ISSV_ERR_BLOWUP;
    case ErrorKind::Solver: return ISSV_ERR_SOLVER;
    case ErrorKind::Constraint: return ISSV_ERR_CONSTRAINT;
    case ErrorKind::Config: return ISSV_ERR_CONFIG;
    case ErrorKind::Io: return ISSV_ERR_IO;
  }
  return ISSV_ERR_INTERNAL;
}

template <class F>
issv_status guarded(F&& f) {
  g_error.clear();
  g_constraint.clear();
  try {
    f();
    return ISSV_OK;
  } catch (const issv::ConstraintError& e) {
    g_error = e.what();
    g_constraint = e.constraint();
    return ISSV_ERR_CONSTRAINT;
  } catch (const issv::Error& e) {
    g_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return ISSV_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_error = e.what();
    return ISSV_ERR_INTERNAL;
  } catch (...) {
    g_error = "unknown error";
    return ISSV_ERR_INTERNAL;
  }
}

issv_status bad_arg(const char* what) {
  g_error = std::string("null argument: ") + what;
  g_constraint.clear();
  return ISSV_ERR_ARGUMENT;
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) issv::fail(issv::ErrorKind::Io, std::string("cannot open ") + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "x,u" rows on a uniform grid.
issv::GridFunction1D read_grid_csv(const char* path) {
  std::ifstream in(path);
  if (!in) issv::fail(issv::ErrorKind::Io, std::string("cannot open ") + path);
  const issv::TimeSeries ts = issv::TimeSeries::read_csv(in);
  const auto& x = ts.times();
  if (x.size() < 2) issv::fail(issv::ErrorKind::Shape, "grid csv needs at least two rows");
  const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  if (!(h > 0.0)) issv::fail(issv::ErrorKind::Shape, "grid csv: x must increase");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::abs(x[i] - (x.front() + h * static_cast<double>(i))) > 1e-9 * std::max(1.0, std::abs(x.back())))
      issv::fail(issv::ErrorKind::Shape, "grid csv: x is not uniform at row " + std::to_string(i + 1));
  return issv::GridFunction1D(x.front(), x.back(), ts.values());
}

}  // namespace

extern "C" {

const char* issv_version(void) { return issv::library_version(); }

const char* issv_status_name(issv_status status) {
  switch (status) {
    case ISSV_OK: return "ok";
    case ISSV_ERR_ARGUMENT: return "argument";
    case ISSV_ERR_DOMAIN: return "domain";
    case ISSV_ERR_SHAPE: return "shape";
    case ISSV_ERR_OVERFLOW: return "overflow";
    case ISSV_ERR_PARSE: return "parse";
    case ISSV_ERR_EVALUATION: return "evaluation";
    case ISSV_ERR_BLOWUP: return "blow-up";
    case ISSV_ERR_SOLVER: return "solver";
    case ISSV_ERR_CONSTRAINT: return "constraint";
    case ISSV_ERR_CONFIG: return "config";
    case ISSV_ERR_IO: return "io";
    case ISSV_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* issv_last_error(void) { return g_error.c_str(); }
const char* issv_last_constraint(void) { return g_constraint.c_str(); }
void issv_string_free(char* s) { std::free(s); }

issv_status issv_scenario_load(const char* path, issv_scenario** out) {
  if (!path) return bad_arg("path");
  if (!out) return bad_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new issv_scenario{issv::parse_scenario(read_file(path))}; });
}

issv_status issv_scenario_parse(const char* json, issv_scenario** out) {
  if (!json) return bad_arg("json");
  if (!out) return bad_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new issv_scenario{issv::parse_scenario(json)}; });
}

issv_status issv_scenario_preset(const char* name, issv_scenario** out) {
  if (!name) return bad_arg("name");
  if (!out) return bad_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new issv_scenario{issv::preset_scenario(name)}; });
}

void issv_scenario_free(issv_scenario* s) { delete s; }

issv_status issv_scenario_json(const issv_scenario* s, char** out) {
  if (!s) return bad_arg("scenario");
  if (!out) return bad_arg("out");
  return guarded([&] { *out = dup(s->s.to_json()); });
}

issv_status issv_scenario_hash(const issv_scenario* s, char** out) {
  if (!s) return bad_arg("scenario");
  if (!out) return bad_arg("out");
  return guarded([&] { *out = dup(s->s.hash()); });
}

issv_status issv_scenario_name(const issv_scenario* s, char** out) {
  if (!s) return bad_arg("scenario");
  if (!out) return bad_arg("out");
  return guarded([&] { *out = dup(s->s.name); });
}

issv_status issv_scenario_outputs(const issv_scenario* s, char** csv, char** json) {
  if (!s) return bad_arg("scenario");
  if (!csv || !json) return bad_arg("out");
  *csv = nullptr;
  *json = nullptr;
  return guarded([&] {
    *csv = dup(s->s.csv_path);
    try {
      *json = dup(s->s.json_path);
    } catch (...) {
      std::free(*csv);
      *csv = nullptr;
      throw;
    }
  });
}

issv_status issv_simulate(const issv_scenario* s, const char* csv_path) {
  if (!s) return bad_arg("scenario");
  if (!csv_path) return bad_arg("csv_path");
  return guarded([&] {
    const issv::Trajectory traj = issv::simulate(s->s);
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) issv::fail(issv::ErrorKind::Io, std::string("cannot open ") + csv_path + " for writing");
    out << "t,x,w\n";
    char buf[96];
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const auto& w = traj.states[k];
      for (std::size_t i = 0; i < w.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", traj.times[k], w.x(i), w[i]);
        out << buf;
      }
    }
    if (!out) issv::fail(issv::ErrorKind::Io, std::string("write failed for ") + csv_path);
  });
}

issv_status issv_verify(const issv_scenario* s, issv_report** out) {
  if (!s) return bad_arg("scenario");
  if (!out) return bad_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new issv_report{issv::run_scenario(s->s).report}; });
}

void issv_report_free(issv_report* r) { delete r; }

int issv_report_pass(const issv_report* r) { return r && r->r.pass ? 1 : 0; }

double issv_report_min_rel_margin(const issv_report* r) { return r ? r->r.min_rel_margin : std::nan(""); }

issv_status issv_report_csv(const issv_report* r, char** out) {
  if (!r) return bad_arg("report");
  if (!out) return bad_arg("out");
  return guarded([&] { *out = dup(issv::report_csv(r->r)); });
}

issv_status issv_report_json(const issv_report* r, char** out) {
  if (!r) return bad_arg("report");
  if (!out) return bad_arg("out");
  return guarded([&] { *out = dup(issv::report_json(r->r)); });
}

issv_status issv_report_write(const issv_report* r, const char* csv_path, const char* json_path) {
  if (!r) return bad_arg("report");
  return guarded([&] { issv::emit_report(r->r, csv_path ? csv_path : "", json_path ? json_path : ""); });
}

issv_status issv_presets_json(char** out) {
  if (!out) return bad_arg("out");
  return guarded([&] { *out = dup(issv::presets_json()); });
}

issv_status issv_property_suites(uint64_t seed, size_t samples, int* pass, char** json) {
  if (!pass) return bad_arg("pass");
  return guarded([&] {
    if (samples == 0) issv::fail(issv::ErrorKind::Domain, "samples must be positive");
    const issv::PropertyReport rep = issv::run_property_suites(seed, samples);
    *pass = rep.pass ? 1 : 0;
    if (json) *json = dup(rep.to_json());
  });
}

issv_status issv_orlicz_norm_csv(const char* young_spec, const char* csv_path, double* luxemburg, double* modular) {
  if (!young_spec) return bad_arg("young_spec");
  if (!csv_path) return bad_arg("csv_path");
  return guarded([&] {
    const issv::YoungFunction y = issv::YoungSpec::parse(young_spec).build();
    const issv::GridFunction1D u = read_grid_csv(csv_path);
    if (luxemburg) *luxemburg = issv::luxemburg_norm(y, u);
    if (modular) *modular = issv::orlicz_modular(y, u);
  });
}

}  // extern "C"
