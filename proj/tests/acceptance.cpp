// Acceptance run: one PASS/FAIL line per criterion, exit status = number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "issv/bounds.hpp"
#include "issv/errors.hpp"
#include "issv/expr.hpp"
#include "issv/harness.hpp"
#include "issv/lyapunov.hpp"
#include "issv/norms.hpp"
#include "issv/solver.hpp"
#include "numeric.hpp"

using namespace issv;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Criterion = std::function<void(Verdict&)>;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

VerificationReport run(const std::string& preset, const std::function<void(Scenario&)>& edit = {}) {
  Scenario s = preset_scenario(preset);
  if (edit) edit(s);
  return run_scenario(s).report;
}

void c1_rho(Verdict& v) {
  detail::Rng rng(20240101);
  std::size_t pairs = 0;
  double worst = kInf;
  double seam = kInf;
  for (int i = 0; i < 100; ++i) {
    const double tau = rng.log_uniform(1e-6, 1e2);
    const CheckReport r = check_rho_properties(tau, 100, rng.next());
    pairs += 100;
    for (const auto& it : r.items) {
      if (it.name == "seam_c2") seam = std::min(seam, it.worst_slack);
      else worst = std::min(worst, it.worst_slack);
      v.require(it.pass(), "tau=" + fmt(tau) + " " + it.name + " slack " + fmt(it.worst_slack));
      v.require(it.tolerance <= 1e-12, it.name + " tolerance looser than 1e-12");
    }
  }
  v.detail << pairs << " (tau,s) pairs, worst relation slack " << fmt(worst) << ", seam slack " << fmt(seam);
}

void c2_young(Verdict& v) {
  const PropertyReport rep = run_property_suites(20240102, 1000);
  for (const auto& s : rep.suites) {
    if (s.name == "rho") continue;
    v.require(s.pass, s.name + " worst slack " + fmt(s.worst_slack));
  }
  double eq_worst = 0.0;
  for (const auto& d : rep.details) {
    if (d.suite.find(":power(") == std::string::npos) continue;
    for (const auto& it : d.items)
      if (it.equality_for_power) eq_worst = std::max(eq_worst, std::abs(it.worst_slack));
  }
  v.require(eq_worst <= 1e-10, "power equality slack " + fmt(eq_worst));
  for (const auto& d : rep.details)
    for (const auto& it : d.items)
      if (!it.pass()) v.detail << " " << d.suite << "/" << it.name << "=" << fmt(it.worst_slack);
  double corrected = kInf;
  for (const auto& d : rep.details)
    if (d.suite.rfind("young:", 0) == 0) corrected = std::min(corrected, d.item("young_eps_corrected").worst_slack);
  v.detail << "; power equality slack " << fmt(eq_worst) << "; eps-Young with corrected constant: worst slack "
           << fmt(corrected);
}

void c3_luxemburg(Verdict& v) {
  detail::Rng rng(20240103);
  double worst = 0.0;
  for (double q : {1.5, 2.0, 3.0}) {
    const YoungFunction y = YoungFunction::power(q);
    for (int i = 0; i < 100; ++i) {
      const double amp = rng.log_uniform(1e-3, 1e3);
      const double c1 = rng.uniform(-1, 1), c2 = rng.uniform(-1, 1), ph = rng.uniform(0, 6.283185307179586);
      const GridFunction1D u = GridFunction1D::sample(0.0, 1.0, 65, [&](double x) {
        return amp * (c1 * std::sin(3.141592653589793 * x + ph) + c2 * std::cos(7.0 * x));
      });
      const GridFunction1D uq = u.map([&](double, double w) { return std::pow(std::abs(w), q); });
      const double closed = std::pow(trapezoid_integral(uq) / q, 1.0 / q);
      const double rel = std::abs(luxemburg_norm(y, u) - closed) / closed;
      worst = std::max(worst, rel);
    }
  }
  v.require(worst <= 1e-8, "relative error " + fmt(worst));
  v.detail << "300 grid functions, worst relative error " << fmt(worst);
}

void c4_elliptic(Verdict& v) {
  const EllipticSolution sol = solve_elliptic_u(Expr::parse("2-4*r^2", VarSet{Var::r}), 401);
  double err = 0.0;
  for (std::size_t i = 0; i < sol.u.size(); ++i) {
    const double r = sol.u.x(i);
    err = std::max(err, std::abs(sol.u[i] - (r * r - 3.0)));
  }
  const double rel = std::abs(std::exp(sol.u_inf) - std::exp(3.0)) / std::exp(3.0);
  v.require(err <= 1e-6, "node error " + fmt(err));
  v.require(rel <= 1e-6, "e^|u|inf relative error " + fmt(rel));
  v.detail << "max node error " << fmt(err) << ", e^{|u|inf} = " << fmt(std::exp(sol.u_inf));
}

void c5_decay(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  const VerificationReport r = run("heat_robin", [](Scenario& s) {
    s.solver.n_x = 201;
    s.solver.T = 2.0;
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double w0 = r.rows.front().lhs;
  double worst = kInf;
  for (const auto& row : r.rows) {
    worst = std::min(worst, row.rel_margin);
    v.require(std::abs(row.rhs - std::exp(-row.t) * w0) <= 1e-12 * w0, "rhs is not e^{-t}|w0|_1 at t=" + fmt(row.t));
  }
  v.require(r.pass, "report fails");
  v.require(worst >= -0.02, "rel margin " + fmt(worst));
  v.require(secs < 10.0, "runtime " + fmt(secs) + " s");
  v.detail << r.rows.size() << " checkpoints, min rel margin " << fmt(worst) << ", |w(T)|_1 = " << fmt(r.rows.back().lhs)
           << " vs e^{-2}|w0|_1 = " << fmt(std::exp(-2.0) * w0);
}

void c6_burgers(Verdict& v) {
  for (double q : {1.0, 2.0, kInf}) {
    const VerificationReport r = run("burgers1d", [&](Scenario& s) { s.q = q; });
    v.require(r.pass && r.min_rel_margin >= -0.02, "q=" + fmt(q) + " min rel margin " + fmt(r.min_rel_margin));
    v.detail << "q=" << fmt(q) << ": " << fmt(r.min_rel_margin) << "; ";
  }
  const VerificationReport r = run("burgers1d", [](Scenario& s) {
    s.theorem = Theorem::Thm41;
    s.young = YoungSpec::parse("power:2");
  });
  const double C = r.constants.at("C");
  v.require(std::abs(C - 1.0) <= 1e-12, "C = " + fmt(C));
  v.require(r.pass && r.min_rel_margin >= -0.02, "L^Phi min rel margin " + fmt(r.min_rel_margin));
  v.detail << "L^Phi (power 2, C=" << fmt(C) << "): " << fmt(r.min_rel_margin);
}

void c7_ginzburg(Verdict& v) {
  for (double q : {1.0, kInf}) {
    const VerificationReport r = run("ginzburg_landau", [&](Scenario& s) { s.q = q; });
    v.require(r.pass && r.min_rel_margin >= -0.02, "q=" + fmt(q) + " min rel margin " + fmt(r.min_rel_margin));
    v.detail << "q=" << fmt(q) << ": " << fmt(r.min_rel_margin) << "; ";
  }
  const VerificationReport r = run("ginzburg_landau", [](Scenario& s) {
    s.theorem = Theorem::Thm44;
    s.young = YoungSpec::parse("power:2");
  });
  const double eps = r.constants.at("eps");
  const double want = 0.5 * r.constants.at("cbar") * (1.0 + r.constants.at("delta0"));
  v.require(std::abs(eps - want) <= 1e-12, "eps " + fmt(eps) + " expected " + fmt(want));
  v.require(r.pass && r.min_rel_margin >= -0.02, "modular min rel margin " + fmt(r.min_rel_margin));
  v.detail << "modular (power 2, eps=" << fmt(eps) << "): " << fmt(r.min_rel_margin);
}

void c8_special(Verdict& v) {
  const VerificationReport r = run("special63");
  const double pre = r.constants.at("prefactor");
  const double rate = r.constants.at("cbar_chosen");
  v.require(std::abs(pre - std::exp(3.0)) <= 1e-6 * std::exp(3.0), "prefactor " + fmt(pre));
  v.require(rate == 1.5, "rate " + fmt(rate));
  v.require(r.pass && r.min_rel_margin >= -0.02, "min rel margin " + fmt(r.min_rel_margin));
  v.detail << "prefactor " << fmt(pre) << ", rate " << fmt(rate) << ", min rel margin " << fmt(r.min_rel_margin);
}

void c9_linear52(Verdict& v) {
  const VerificationReport r = run("linear52");
  const double cb = r.constants.at("cbar_weighted"), k0 = r.constants.at("K0"), k1 = r.constants.at("K1");
  v.require(std::abs(cb - 0.3) <= 1e-12, "cbar " + fmt(cb));
  v.require(std::abs(k0 - 0.5) <= 1e-12, "K0 " + fmt(k0));
  v.require(std::abs(k1 - (1.5 + 0.5 * std::tan(0.5))) <= 1e-12, "K1 " + fmt(k1));
  v.require(std::abs(k1 - 1.7731) < 1e-4, "K1 " + fmt(k1) + " vs 1.7731");
  bool valid = true;
  for (const auto& c : r.structural)
    if (c.tag == "robin52") valid = valid && c.ok;
  v.require(valid, "validity report");
  v.require(r.pass && r.min_rel_margin >= -0.02, "min rel margin " + fmt(r.min_rel_margin));
  v.detail << "cbar " << fmt(cb) << ", K0 " << fmt(k0) << ", K1 " << fmt(k1) << ", min rel margin "
           << fmt(r.min_rel_margin);
}

void c10_dissipation(Verdict& v) {
  for (const char* name : {"heat_robin", "burgers1d"}) {
    const VerificationReport r = run(name);
    v.require(r.dissipation.has_value(), std::string(name) + " has no dissipation report");
    if (!r.dissipation) continue;
    const auto& d = *r.dissipation;
    v.require(d.pass && d.violations == 0, std::string(name) + " violations " + std::to_string(d.violations));
    v.detail << name << ": " << d.intervals << " intervals, worst excess/slack " << fmt(d.worst_excess_over_slack)
             << "; ";
  }
}

void c11_gains(Verdict& v) {
  GainParams gp;
  gp.l = 1.0;
  gp.k = 6.0;
  gp.b_under = 0.0;
  gp.a_under = 1.0;
  gp.a_bar = 1.0;
  gp.dd = 1.0;
  gp.psi0_under = 1.0;
  const Gains g = gains(gp);
  v.require(std::abs(g.chat - 0.0039628) <= 1e-6, "chat " + fmt(g.chat));
  v.require(std::abs(g.ckl - 1.369103) <= 1e-6, "C_kl " + fmt(g.ckl));
  gp.k = 5.0;
  bool rejected = false;
  try {
    gains(gp);
  } catch (const ConstraintError&) {
    rejected = true;
  }
  v.require(rejected, "k = 5 accepted");
  char buf[96];
  std::snprintf(buf, sizeof buf, "chat %.7f, C_kl %.6f, k=5 rejected", g.chat, g.ckl);
  v.detail << buf;
}

void c12_tau(Verdict& v) {
  double worst = -kInf;
  for (const auto& name : preset_names()) {
    const Trajectory traj = simulate(preset_scenario(name));
    const GridFunction1D& w = traj.states.back();
    const double l1 = l1_norm(w);
    for (double tau : {1e-1, 1e-2, 1e-3}) {
      const double gap = v_tau(w, tau) - l1;
      const double bound = 3.0 * tau * w.length() / 8.0;
      worst = std::max(worst, gap / bound);
      v.require(gap >= 0.0 && gap <= bound, name + " tau=" + fmt(tau) + " gap/bound " + fmt(gap / bound));
    }
  }
  v.detail << preset_names().size() << " scenarios x 3 taus, worst gap/(3 tau |Omega|/8) " << fmt(worst);
}

void c13_parser(Verdict& v) {
  const VarSet all{Var::x, Var::t, Var::w, Var::wx, Var::s, Var::r};
  auto ev = [&](const char* text, double x) {
    return Expr::parse(text, all).eval(
        Env().set(Var::x, x).set(Var::t, 0).set(Var::w, 0).set(Var::wx, 0).set(Var::s, 0).set(Var::r, 0));
  };
  struct Eval {
    const char* text;
    double x;
    double want;
  };
  const Eval evals[] = {{"1+2*3", 0, 7},
                        {"(1+2)*3", 0, 9},
                        {"2^3^2", 0, 512},
                        {"-2^2", 0, -4},
                        {"(-2)^2", 0, 4},
                        {"2^-1", 0, 0.5},
                        {"8/4/2", 0, 1},
                        {"10-4-3", 0, 3},
                        {"2*3^2", 0, 18},
                        {"--3", 0, 3},
                        {"-3*-2", 0, 6},
                        {"1.5e2 + 2E-1", 0, 150.2},
                        {"x^2", 3, 9},
                        {"min(1, exp(-t))", 0, 1},
                        {"max(2, pow(2, 3))", 0, 8},
                        {"abs(-x) + sqrt(4)", 2, 4},
                        {"sin(pi/2) + cos(0) + tan(0) + tanh(0)", 0, 2},
                        {"ln(e)", 0, 1},
                        {"2 - 4 * 0.5^2", 0, 1}};
  struct Pos {
    const char* text;
    std::size_t pos;
    VarSet allowed;
  };
  const Pos errs[] = {{"sin(", 4, all},   {"1 + ", 4, all},  {"foo(1)", 0, all},
                      {"2*y", 2, all},    {"a*(x+1", 0, all}, {"(x+1", 4, all},
                      {"min(1)", 0, all}, {"x + w", 4, VarSet{Var::x, Var::t}},
                      {"3 $ 4", 2, all},  {"", 0, all},       {"sin", 0, all}};
  int passed = 0;
  for (const auto& c : evals) {
    double got = std::numeric_limits<double>::quiet_NaN();
    try {
      got = ev(c.text, c.x);
    } catch (const Error&) {
    }
    const bool ok = std::abs(got - c.want) <= 1e-12 * std::max(1.0, std::abs(c.want));
    v.require(ok, std::string("'") + c.text + "' = " + fmt(got));
    passed += ok;
  }
  for (const auto& c : errs) {
    std::size_t got = static_cast<std::size_t>(-1);
    try {
      (void)Expr::parse(c.text, c.allowed);
    } catch (const ParseError& e) {
      got = e.position();
    }
    v.require(got == c.pos, std::string("'") + c.text + "' error at " + std::to_string(got));
    passed += got == c.pos;
  }
  // the sign-changing example's reaction factor and elliptic source, through parse -> render -> parse -> eval
  const VarSet xr{Var::x, Var::r};
  const char* texts[] = {"x^2 - 3/ln(2)*abs(x)*ln(1+abs(x))", "2-4*r^2"};
  for (const char* text : texts) {
    const Expr a = Expr::parse(text, xr);
    const Expr b = Expr::parse(a.to_string(), xr);
    for (double z : {-1.0, -0.5, 0.0, 0.25, 1.0}) {
      const Env env = Env().set(Var::x, z).set(Var::r, z);
      const double hand = text[0] == 'x' ? z * z - 3.0 / std::log(2.0) * std::abs(z) * std::log(1.0 + std::abs(z))
                                         : 2.0 - 4.0 * z * z;
      v.require(std::abs(a.eval(env) - hand) <= 1e-14 && a.eval(env) == b.eval(env),
                std::string(text) + " at " + fmt(z));
    }
  }
  v.detail << passed << "/30 precedence/associativity/error-position cases; coefficient round trips checked";
}

}  // namespace

int main() {
  struct Item {
    int id;
    const char* title;
    Criterion fn;
    double budget_s;
  };
  const Item items[] = {{1, "rho_tau property suite", c1_rho, 1.0},
                        {2, "Young-function lemma suite", c2_young, 30.0},
                        {3, "Luxemburg norm oracle", c3_luxemburg, kInf},
                        {4, "elliptic transform u = r^2 - 3", c4_elliptic, kInf},
                        {5, "heat_robin decay", c5_decay, 10.0},
                        {6, "Burgers verification", c6_burgers, kInf},
                        {7, "Ginzburg-Landau Dirichlet verification", c7_ginzburg, kInf},
                        {8, "sign-changing verification", c8_special, kInf},
                        {9, "weighted Robin complement", c9_linear52, kInf},
                        {10, "dissipation inequality", c10_dissipation, kInf},
                        {11, "gains arithmetic", c11_gains, kInf},
                        {12, "tau-approximation audit", c12_tau, kInf},
                        {13, "expression parser", c13_parser, kInf}};
  int failures = 0;
  for (const auto& it : items) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      it.fn(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= it.budget_s) v.require(false, "runtime " + fmt(secs) + " s over " + fmt(it.budget_s) + " s");
    failures += !v.pass;
    std::printf("%s criterion %2d  %s (%.2f s): %s\n", v.pass ? "PASS" : "FAIL", it.id, it.title, secs,
                v.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of 13 criteria passed\n", 13 - failures);
  return failures;
}
