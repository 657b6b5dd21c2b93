#pragma once

// Scenarios, presets and end-to-end verification runs:
// simulate -> space norms -> bound series -> margins.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "issv/bounds.hpp"
#include "issv/solver.hpp"
#include "issv/young.hpp"

namespace issv {

enum class Theorem { Thm31i, Thm31ii, Thm32i, Thm32ii, Thm41, Thm42, Thm43, Thm44, Prop51, Robin52 };

const char* theorem_name(Theorem t) noexcept;
Theorem parse_theorem(std::string_view name);
bool theorem_needs_dirichlet(Theorem t) noexcept;
bool theorem_needs_young(Theorem t) noexcept;

struct YoungSpec {
  std::string variant = "power";  // power | log_linear | log_power
  std::map<std::string, double> params{{"q", 2.0}};
  double s_max = YoungFunction::kDefaultSMax;

  YoungFunction build() const;
  std::string to_json() const;
  /// Accepts a JSON object or the compact forms "power:2", "log_linear:1,1", "log_power:2.718281828,1,2".
  static YoungSpec parse(std::string_view text);
};

struct Tolerances {
  double rel_margin_slack = 0.02;
  double dissipation_slack_scale = 10.0;
};

/// Every coefficient slot as source text, so scenarios round-trip exactly.
struct ProblemText {
  double x_lo = 0.0;
  double x_hi = 1.0;
  std::string boundary = "robin";  // robin | dirichlet
  std::map<std::string, std::string> exprs;  // a b c mu m f h g g0 psi psi1 psi2 d_left d_right w0
  double cbar = 0.0;
  double psi0bar = 0.0;
  double s0 = 1.0;

  PdeProblem compile() const;
};

struct Scenario {
  std::string name;
  std::string preset;  // empty for custom problems
  ProblemText problem;
  SolverConfig solver;
  Theorem theorem = Theorem::Thm31i;
  double q = 1.0;
  std::optional<YoungSpec> young;
  std::optional<double> tau;  // default 1e-3 (sup|w0| + 1)
  Tolerances tol;
  // Per-theorem parameters: eps, p0, cbar_chosen, Q, theta, K.
  std::map<std::string, double> params;
  std::string q_expr = "2-4*r^2";  // prop51 radial Q(r)
  bool waive_structural = false;
  std::string csv_path;
  std::string json_path;

  std::string to_json() const;
  /// Stable hash of the canonical JSON (FNV-1a, hex).
  std::string hash() const;
};

Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::string& path);

std::vector<std::string> preset_names();
/// Scenario for a named preset with its default theorem and solver settings.
Scenario preset_scenario(const std::string& name);
/// JSON array describing every preset.
std::string presets_json();

struct StructuralCheck {
  std::string tag;  // assumption tag, e.g. "A2-3"
  std::string description;
  double declared = 0.0;
  double estimated = 0.0;
  bool ok = false;
};

struct ReportRow {
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double rel_margin = 0.0;
};

struct DissipationReport {
  std::string form;  // "L1" or "weighted L1"
  std::size_t intervals = 0;
  std::size_t violations = 0;
  double worst_excess = 0.0;  // max over intervals of lhs - rhs (without slack)
  double worst_excess_over_slack = 0.0;
  double B = 0.0;
  bool pass = true;
};

struct VerificationReport {
  std::string scenario_name;
  std::string scenario_hash;
  std::string theorem;
  std::string lhs_kind;
  std::vector<ReportRow> rows;
  bool pass = true;
  double min_rel_margin = 0.0;
  double rel_margin_slack = 0.02;
  double tau = 0.0;
  double tau_slack = 0.0;       // 3 tau |Omega| / 8
  double tau_audit_worst = 0.0;  // max_k |V_tau(w(t_k)) - lhs_norm(w(t_k))|
  bool tau_audit_pass = true;
  std::vector<StructuralCheck> structural;
  std::optional<GainParams> gain_params;
  std::optional<Gains> gains;
  std::map<std::string, double> constants;
  std::optional<DissipationReport> dissipation;
  std::vector<std::string> notes;
  double dt_used = 0.0;
  std::size_t steps = 0;
};

struct RunResult {
  Trajectory trajectory;
  VerificationReport report;
};

/// Structural assumption checks for the selected theorem; throws ConstraintError on the
/// first failure unless the scenario waives them.
std::vector<StructuralCheck> structural_checks(const Scenario& s, const PdeProblem& p);

Trajectory simulate(const Scenario& s);
RunResult run_scenario(const Scenario& s);

/// Default tau = 1e-3 (sup|w0| + 1) over the initial grid.
double default_tau(const Trajectory& traj);

/// Discrete dissipation inequality between consecutive checkpoints, trapezoid in time:
/// (V1 - V0)/D <= -cbar (V0 + V1)/2 + (A(t0) + A(t1))/2 + B tau + scale (D + h^2).
/// With `p` the weighted Dirichlet form is used.
DissipationReport dissipation_check(const Trajectory& traj, const PdeProblem& p, double tau, double cbar,
                                    double slack_scale, const GridFunction1D* weight = nullptr);

struct SuiteSummary {
  std::string name;
  std::size_t items = 0;
  std::size_t failed = 0;
  double worst_slack = 0.0;
  bool pass = true;
};

struct PropertyReport {
  std::uint64_t seed = 0;
  std::vector<SuiteSummary> suites;
  std::vector<CheckReport> details;
  bool pass = true;
  std::string to_json() const;
};

/// All lemma / property suites over the Young catalog for one seed.
PropertyReport run_property_suites(std::uint64_t seed, std::size_t samples = 1000);

/// CSV "t,lhs,rhs,margin,rel_margin" and a JSON summary; empty paths are skipped.
void emit_report(const VerificationReport& r, const std::string& csv_path, const std::string& json_path);
std::string report_csv(const VerificationReport& r);
std::string report_json(const VerificationReport& r);
VerificationReport parse_report_json(std::string_view text);

const char* library_version() noexcept;

}  // namespace issv
