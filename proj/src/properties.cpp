#include <algorithm>
#include <cmath>
#include <limits>

#include "issv/harness.hpp"
#include "issv/lyapunov.hpp"
#include "json.hpp"
#include "numeric.hpp"

namespace issv {

namespace {

struct CatalogEntry {
  const char* label;
  YoungFunction y;
};

std::vector<CatalogEntry> catalog() {
  return {{"power(1.5)", YoungFunction::power(1.5)},
          {"power(2)", YoungFunction::power(2.0)},
          {"power(3)", YoungFunction::power(3.0)},
          {"log_linear(1,1)", YoungFunction::log_linear(1.0, 1.0)},
          {"log_power(e,1,2)", YoungFunction::log_power(std::exp(1.0), 1.0, 2.0)}};
}

// Smooth random grid function: a few random Fourier modes of random amplitude.
GridFunction1D random_grid(detail::Rng& rng, std::size_t n) {
  const double amp = rng.log_uniform(1e-2, 1e2);
  double c[4], ph[4];
  for (int i = 0; i < 4; ++i) {
    c[i] = rng.uniform(-1.0, 1.0);
    ph[i] = rng.uniform(0.0, 6.283185307179586);
  }
  return GridFunction1D::sample(0.0, 1.0, n, [&](double x) {
    double v = 0.0;
    for (int i = 0; i < 4; ++i) v += c[i] * std::sin((i + 1) * 3.141592653589793 * x + ph[i]);
    return amp * v;
  });
}

// Luxemburg sandwich and Orlicz-Hoelder on random grid functions, relative slacks.
CheckReport orlicz_suite(const YoungFunction& y, std::size_t n_funcs, std::uint64_t seed) {
  CheckReport r;
  r.suite = "orlicz";
  r.items.reserve(3);
  r.items.push_back(CheckItem{"sandwich_lower", 0, std::numeric_limits<double>::infinity(), 1e-8, false});
  r.items.push_back(CheckItem{"sandwich_upper", 0, std::numeric_limits<double>::infinity(), 1e-8, false});
  r.items.push_back(CheckItem{"holder", 0, std::numeric_limits<double>::infinity(), 1e-8, false});
  detail::Rng rng(seed);
  for (std::size_t i = 0; i < n_funcs; ++i) {
    const GridFunction1D u = random_grid(rng, 33);
    const GridFunction1D v = random_grid(rng, 33);
    const auto [lo_slack, hi_slack] = luxemburg_sandwich_check(y, u);
    const auto [lower, upper] = luxemburg_sandwich(y, orlicz_modular(y, u));
    const double scale = std::max({upper, lower, 1e-300});
    for (int k = 0; k < 2; ++k) {
      auto& item = r.items[k];
      item.samples++;
      item.worst_slack = std::min(item.worst_slack, (k == 0 ? lo_slack : hi_slack) / scale);
    }
    const double hold = holder_orlicz_check(y, u, v);
    std::vector<double> uv(u.size());
    for (std::size_t j = 0; j < uv.size(); ++j) uv[j] = u[j] * v[j];
    const double integral = std::abs(trapezoid_integral(GridFunction1D(0.0, 1.0, uv)));
    auto& item = r.items[2];
    item.samples++;
    item.worst_slack = std::min(item.worst_slack, hold / std::max(hold + integral, 1e-300));
  }
  return r;
}

void merge(CheckReport& into, const CheckReport& from) {
  for (const auto& it : from.items) {
    auto found = std::find_if(into.items.begin(), into.items.end(), [&](const CheckItem& c) { return c.name == it.name; });
    if (found == into.items.end()) {
      into.items.push_back(it);
    } else {
      found->samples += it.samples;
      found->worst_slack = std::min(found->worst_slack, it.worst_slack);
    }
  }
}

SuiteSummary summarize(const std::string& name, const std::vector<const CheckReport*>& reports) {
  SuiteSummary s;
  s.name = name;
  s.worst_slack = std::numeric_limits<double>::infinity();
  for (const auto* r : reports)
    for (const auto& it : r->items) {
      s.items++;
      if (!it.pass()) s.failed++;
      s.worst_slack = std::min(s.worst_slack, it.worst_slack);
    }
  s.pass = s.failed == 0;
  return s;
}

}  // namespace

PropertyReport run_property_suites(std::uint64_t seed, std::size_t samples) {
  PropertyReport out;
  out.seed = seed;
  detail::Rng rng(seed);

  // samples/10 random taus with 100 points each: 1e4 (tau, s) pairs at the default
  CheckReport rho_all;
  rho_all.suite = "rho";
  const std::size_t n_tau = std::max<std::size_t>(1, samples / 10);
  for (std::size_t i = 0; i < n_tau; ++i) {
    const double tau = rng.log_uniform(1e-6, 1e2);
    merge(rho_all, check_rho_properties(tau, 100, rng.next()));
  }
  out.details.push_back(rho_all);
  out.suites.push_back(summarize("rho", {&out.details.back()}));

  const char* names[] = {"lemma_phi", "lemma_inv", "young", "orlicz"};
  std::vector<std::vector<CheckReport>> per(4);
  for (const auto& e : catalog()) {
    std::uint64_t s = rng.next();
    per[0].push_back(check_lemma_phi(e.y, samples, s));
    per[1].push_back(check_lemma_inv(e.y, samples, s + 1));
    per[2].push_back(check_young_inequalities(e.y, samples, s + 2));
    per[3].push_back(orlicz_suite(e.y, std::max<std::size_t>(1, samples / 50), s + 3));
    for (int k = 0; k < 4; ++k) per[k].back().suite = std::string(names[k]) + ":" + e.label;
  }
  for (const auto& group : per)
    for (const auto& r : group) out.details.push_back(r);
  std::size_t idx = 1;
  for (int k = 0; k < 4; ++k) {
    std::vector<const CheckReport*> ptrs;
    for (std::size_t j = 0; j < per[k].size(); ++j) ptrs.push_back(&out.details[idx++]);
    out.suites.push_back(summarize(names[k], ptrs));
  }
  out.pass = std::all_of(out.suites.begin(), out.suites.end(), [](const SuiteSummary& s) { return s.pass; });
  return out;
}

std::string PropertyReport::to_json() const {
  using nlohmann::json;
  auto num = [](double v) -> json {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return v;
  };
  json j;
  j["seed"] = seed;
  j["pass"] = pass;
  json su = json::array();
  for (const auto& s : suites)
    su.push_back({{"name", s.name}, {"items", s.items}, {"failed", s.failed}, {"worst_slack", num(s.worst_slack)}, {"pass", s.pass}});
  j["suites"] = su;
  json de = json::array();
  for (const auto& r : details) {
    json items = json::array();
    for (const auto& it : r.items)
      items.push_back({{"name", it.name},
                       {"samples", it.samples},
                       {"worst_slack", num(it.worst_slack)},
                       {"tolerance", it.tolerance},
                       {"pass", it.pass()}});
    de.push_back({{"suite", r.suite}, {"pass", r.pass()}, {"items", items}});
  }
  j["details"] = de;
  return j.dump(2);
}

}  // namespace issv
