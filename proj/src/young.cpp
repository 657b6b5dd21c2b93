#include "issv/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "issv/errors.hpp"
#include "check_util.hpp"
#include "numeric.hpp"

namespace issv {

namespace {

constexpr double kQuadTol = 1e-10;
constexpr int kQuadDepth = 30;
constexpr double kCheckTol = 1e-8;
constexpr double kCalibLo = 1e-6;
constexpr std::size_t kCalibPoints = 2000;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_nonneg(double s, const char* what) {
  if (!(s >= 0.0)) fail(ErrorKind::Domain, std::string(what) + ": argument must be >= 0");
}

void validate(const YoungVariant& v) {
  std::visit(overloaded{
                 [](const PowerYoung& p) {
                   if (!(p.q > 1.0) || !std::isfinite(p.q)) fail(ErrorKind::Domain, "power Young function needs q > 1");
                 },
                 [](const LogLinearYoung& p) {
                   if (!(p.c1 > 0.0) || !(p.c2 > 0.0)) fail(ErrorKind::Domain, "log-linear Young function needs c1, c2 > 0");
                 },
                 [](const LogPowerYoung& p) {
                   if (!(p.c1 >= std::exp(1.0)) || !(p.c2 > 0.0) || !(p.q > 1.0))
                     fail(ErrorKind::Domain, "log-power Young function needs c1 >= e, c2 > 0, q > 1");
                 },
             },
             v);
}

constexpr double kAnchorLo = 1e-8;
constexpr int kAnchorsPerDecade = 48;

}  // namespace

struct YoungFunction::Anchors {
  struct Table {
    std::vector<double> s;
    std::vector<double> value;  // integral from 0 to s[j]
    double log_lo = 0.0;
    double inv_dlog = 0.0;
  };
  std::once_flag once[2];
  Table table[2];  // [0] Phi, [1] Phi~
};

double YoungFunction::anchored_integral(bool tilde, double s) const {
  auto f = [this, tilde](double t) { return tilde ? base_phi_inv(t) : base_phi(t); };
  Anchors::Table& tab = anchors_->table[tilde ? 1 : 0];
  std::call_once(anchors_->once[tilde ? 1 : 0], [&] {
    const double lo = tilde ? base_phi(kAnchorLo) : kAnchorLo;
    const double hi = tilde ? base_phi(s_max_ * 1e3) : s_max_ * 1e3;
    const auto decades = std::max(1.0, std::ceil(std::log10(hi / lo)));
    const auto n = static_cast<std::size_t>(decades * kAnchorsPerDecade) + 1;
    tab.s = detail::logspace(lo, hi, n);
    tab.value.resize(n);
    double acc = detail::adaptive_simpson(f, 0.0, tab.s[0], 1e-12, kQuadDepth);
    tab.value[0] = acc;
    for (std::size_t j = 1; j < n; ++j) {
      acc += detail::adaptive_simpson(f, tab.s[j - 1], tab.s[j], 1e-12, kQuadDepth);
      tab.value[j] = acc;
    }
    tab.log_lo = std::log(lo);
    tab.inv_dlog = static_cast<double>(n - 1) / (std::log(hi) - std::log(lo));
  });
  if (s <= tab.s.front()) return detail::adaptive_simpson(f, 0.0, s, kQuadTol, kQuadDepth);
  auto j = static_cast<std::size_t>((std::log(s) - tab.log_lo) * tab.inv_dlog);
  j = std::min(j, tab.s.size() - 1);
  while (j > 0 && tab.s[j] > s) --j;
  while (j + 1 < tab.s.size() && tab.s[j + 1] <= s) ++j;
  if (s == tab.s[j]) return tab.value[j];
  // The remaining piece is at most one anchor spacing long, except past the table.
  const double piece = detail::adaptive_simpson(f, tab.s[j], s, 1e-12, kQuadDepth);
  return tab.value[j] + piece;
}

YoungFunction::YoungFunction(YoungVariant variant, double s_max)
    : variant_(variant), anchors_(std::make_shared<Anchors>()), s_max_(s_max) {
  validate(variant_);
  if (!(s_max > kCalibLo)) fail(ErrorKind::Domain, "s_max must exceed 1e-6");
  if (const auto* p = std::get_if<PowerYoung>(&variant_)) {
    delta0_ = delta1_ = p->q - 1.0;
    return;
  }
  const TolksdorfEstimate est = tolksdorf_bounds(*this, kCalibLo, s_max_, kCalibPoints);
  delta0_ = 0.99 * est.delta0;
  delta1_ = 1.01 * est.delta1;
}

std::string YoungFunction::name() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const PowerYoung& p) { os << "power(q=" << p.q << ")"; },
                 [&](const LogLinearYoung& p) { os << "log_linear(c1=" << p.c1 << ",c2=" << p.c2 << ")"; },
                 [&](const LogPowerYoung& p) { os << "log_power(c1=" << p.c1 << ",c2=" << p.c2 << ",q=" << p.q << ")"; },
             },
             variant_);
  return conjugate_ ? "conjugate " + os.str() : os.str();
}

double YoungFunction::base_phi(double s) const {
  return std::visit(overloaded{
                        [s](const PowerYoung& p) { return s == 0.0 ? 0.0 : std::pow(s, p.q - 1.0); },
                        [s](const LogLinearYoung& p) { return std::log1p(p.c1 * s) + p.c2 * s; },
                        [s](const LogPowerYoung& p) {
                          return s == 0.0 ? 0.0 : std::pow(std::log(s + p.c1), p.c2) * std::pow(s, p.q - 1.0);
                        },
                    },
                    variant_);
}

double YoungFunction::base_phi_prime(double s) const {
  return std::visit(overloaded{
                        [s](const PowerYoung& p) {
                          if (s == 0.0) return p.q > 2.0 ? 0.0 : (p.q == 2.0 ? 1.0 : std::numeric_limits<double>::infinity());
                          return (p.q - 1.0) * std::pow(s, p.q - 2.0);
                        },
                        [s](const LogLinearYoung& p) { return p.c1 / (1.0 + p.c1 * s) + p.c2; },
                        [s](const LogPowerYoung& p) {
                          const double l = std::log(s + p.c1);
                          if (s == 0.0) return p.q > 2.0 ? 0.0 : (p.q == 2.0 ? std::pow(l, p.c2) : std::numeric_limits<double>::infinity());
                          return std::pow(s, p.q - 2.0) * std::pow(l, p.c2 - 1.0) * (p.c2 * s / (s + p.c1) + (p.q - 1.0) * l);
                        },
                    },
                    variant_);
}

double YoungFunction::base_phi_inv(double y) const {
  if (y == 0.0) return 0.0;
  if (const auto* p = std::get_if<PowerYoung>(&variant_)) return std::pow(y, 1.0 / (p->q - 1.0));
  double lo = 0.0;
  double hi = 1.0;
  while (base_phi(hi) < y) {
    lo = hi;
    hi *= 4.0;
    if (hi > 1e300) fail(ErrorKind::Overflow, "phi_inv: bracket grew beyond 1e300");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (base_phi(mid) < y)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-16 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double YoungFunction::base_big_phi(double s) const {
  if (s == 0.0) return 0.0;
  if (const auto* p = std::get_if<PowerYoung>(&variant_)) return std::pow(s, p->q) / p->q;
  return anchored_integral(false, s);
}

double YoungFunction::base_big_phi_tilde(double s) const {
  if (s == 0.0) return 0.0;
  if (const auto* p = std::get_if<PowerYoung>(&variant_)) {
    const double qc = p->q / (p->q - 1.0);
    return std::pow(s, qc) / qc;
  }
  return anchored_integral(true, s);
}

double YoungFunction::phi(double s) const {
  require_nonneg(s, "phi");
  return conjugate_ ? base_phi_inv(s) : base_phi(s);
}

double YoungFunction::phi_prime(double s) const {
  require_nonneg(s, "phi_prime");
  if (!conjugate_) return base_phi_prime(s);
  return 1.0 / base_phi_prime(base_phi_inv(s));
}

double YoungFunction::phi_inv(double y) const {
  require_nonneg(y, "phi_inv");
  return conjugate_ ? base_phi(y) : base_phi_inv(y);
}

double YoungFunction::big_phi(double s) const {
  require_nonneg(s, "big_phi");
  return conjugate_ ? base_big_phi_tilde(s) : base_big_phi(s);
}

double YoungFunction::big_phi_tilde(double s) const {
  require_nonneg(s, "big_phi_tilde");
  return conjugate_ ? base_big_phi(s) : base_big_phi_tilde(s);
}

double YoungFunction::big_phi_quadrature(double s) const {
  require_nonneg(s, "big_phi_quadrature");
  if (s == 0.0) return 0.0;
  return detail::adaptive_simpson([this](double t) { return phi(t); }, 0.0, s, kQuadTol, kQuadDepth);
}

double YoungFunction::big_phi_tilde_quadrature(double s) const {
  require_nonneg(s, "big_phi_tilde_quadrature");
  if (s == 0.0) return 0.0;
  return detail::adaptive_simpson([this](double t) { return phi_inv(t); }, 0.0, s, kQuadTol, kQuadDepth);
}

YoungFunction YoungFunction::conjugate() const {
  YoungFunction c = *this;
  c.conjugate_ = !conjugate_;
  c.delta0_ = 1.0 / delta1_;
  c.delta1_ = 1.0 / delta0_;
  c.s_max_ = phi(s_max_);
  return c;
}

TolksdorfEstimate tolksdorf_bounds(const YoungFunction& y, double s_lo, double s_hi, std::size_t n) {
  if (!(s_lo > 0.0) || !(s_hi > s_lo) || n < 2) fail(ErrorKind::Domain, "tolksdorf_bounds: need 0 < s_lo < s_hi and n >= 2");
  TolksdorfEstimate est{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (double s : detail::logspace(s_lo, s_hi, n)) {
    const double r = s * y.phi_prime(s) / y.phi(s);
    est.delta0 = std::min(est.delta0, r);
    est.delta1 = std::max(est.delta1, r);
  }
  return est;
}

double young_eps_constant(double d0, double d1, double eps) {
  if (!(d0 > 0.0) || !(d1 >= d0)) fail(ErrorKind::Domain, "young_eps_constant: need 0 < delta0 <= delta1");
  const double eps_max = (1.0 + d1) / (1.0 + d0);
  if (!(eps > 0.0) || !(eps <= eps_max)) fail(ErrorKind::Domain, "young_eps_constant: eps outside (0, (1+delta1)/(1+delta0)]");
  const double pre = d1 * (1.0 + d0) / (d0 * (1.0 + d1));
  const double expo = -(1.0 + d0) / (d0 * (1.0 + d1));
  return pre * std::pow((1.0 + d0) / (1.0 + d1) * eps, expo);
}

double young_eps_constant_corrected(double d0, double d1, double eps) {
  young_eps_constant(d0, d1, eps);  // same domain checks
  const double pre = d1 * (1.0 + d0) / (d0 * (1.0 + d1));
  return pre * std::pow((1.0 + d0) / (1.0 + d1) * eps, -1.0 / d0);
}

bool CheckReport::pass() const {
  return std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.pass(); });
}

double CheckReport::worst_slack() const {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& i : items) w = std::min(w, i.worst_slack);
  return w;
}

CheckItem& CheckReport::item(const std::string& name) {
  for (auto& i : items)
    if (i.name == name) return i;
  fail(ErrorKind::Domain, "no check item named " + name);
}

const CheckItem& CheckReport::item(const std::string& name) const {
  for (const auto& i : items)
    if (i.name == name) return i;
  fail(ErrorKind::Domain, "no check item named " + name);
}

namespace {

// Draws (k, s) with k*s kept inside the calibrated range [1e-6, s_max]. The
// first draw is k = 1.
std::pair<double, double> draw_ks(detail::Rng& rng, double s_max, std::size_t i) {
  const double s = rng.log_uniform(1e-4, s_max);
  if (i == 0) return {1.0, s};
  const double k_lo = std::max(1e-3, kCalibLo / s);
  const double k_hi = std::min(1e3, s_max / s);
  return {rng.log_uniform(k_lo, k_hi), s};
}

double fd_derivative(const YoungFunction& y, double s) {
  // Five-point stencil; s - 2h stays positive.
  const double h = 1e-3 * s;
  return (-y.phi_inv(s + 2 * h) + 8 * y.phi_inv(s + h) - 8 * y.phi_inv(s - h) + y.phi_inv(s - 2 * h)) / (12 * h);
}

}  // namespace

CheckReport check_lemma_phi(const YoungFunction& y, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) fail(ErrorKind::Domain, "check_lemma_phi: n_samples must be >= 1");
  detail::Recorder r;
  r.report.suite = "lemma_phi";
  auto& i_lo = r.add("phi_scaling_lower", kCheckTol, true);
  auto& i_hi = r.add("phi_scaling_upper", kCheckTol, true);
  auto& iii_lo = r.add("Phi_vs_s_phi_lower", kCheckTol, true);
  auto& iii_hi = r.add("Phi_vs_s_phi_upper", kCheckTol, true);
  auto& iv_lo = r.add("Phi_scaling_lower", kCheckTol, true);
  auto& iv_hi = r.add("Phi_scaling_upper", kCheckTol, true);
  auto& mono = r.add("phi_increasing", 0.0, false);

  const double d0 = y.delta0();
  const double d1 = y.delta1();
  detail::Rng rng(seed);
  for (std::size_t n = 0; n < n_samples; ++n) {
    const auto [k, s] = draw_ks(rng, y.s_max(), n);
    const double ks = k * s;
    const double ps = y.phi(s);
    const double pks = y.phi(ks);
    const double Ps = y.big_phi(s);
    const double Pks = y.big_phi(ks);

    const double a0 = std::pow(k, d0);
    const double a1 = std::pow(k, d1);
    detail::Recorder::record(i_lo, std::min(a0, a1) * ps, pks);
    detail::Recorder::record(i_hi, pks, std::max(a0, a1) * ps);

    detail::Recorder::record(iii_lo, s * ps / (1.0 + d1), Ps);
    detail::Recorder::record(iii_hi, Ps, s * ps / (1.0 + d0));

    const double b0 = std::pow(k, 1.0 + d0);
    const double b1 = std::pow(k, 1.0 + d1);
    detail::Recorder::record(iv_lo, (1.0 + d0) / (1.0 + d1) * std::min(b0, b1) * Ps, Pks);
    detail::Recorder::record(iv_hi, Pks, (1.0 + d1) / (1.0 + d0) * std::max(b0, b1) * Ps);

    if (k != 1.0) {
      const double lo = std::min(s, ks);
      const double hi = std::max(s, ks);
      mono.samples++;
      mono.worst_slack = std::min(mono.worst_slack, y.phi(hi) > y.phi(lo) ? 0.0 : -1.0);
    }
  }
  return r.report;
}

CheckReport check_lemma_inv(const YoungFunction& y, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) fail(ErrorKind::Domain, "check_lemma_inv: n_samples must be >= 1");
  detail::Recorder r;
  r.report.suite = "lemma_inv";
  auto& st_lo = r.add("inv_ratio_lower", kCheckTol, true);
  auto& st_hi = r.add("inv_ratio_upper", kCheckTol, true);
  auto& i_lo = r.add("tilde_scaling_lower", kCheckTol, true);
  auto& i_hi = r.add("tilde_scaling_upper", kCheckTol, true);
  auto& legendre = r.add("tilde_of_phi_identity", kCheckTol, true);
  auto& iii = r.add("tilde_of_phi_bound", kCheckTol, false);

  const double d0 = y.delta0();
  const double d1 = y.delta1();
  const double y_max = y.phi(y.s_max());
  detail::Rng rng(seed);
  for (std::size_t n = 0; n < n_samples; ++n) {
    const auto [k, s] = draw_ks(rng, y.s_max(), n);

    // Structural ratio of phi^{-1} at a value inside phi's calibrated range.
    const double v = std::min(y.phi(s), y_max / 1.01);
    const double ratio = v * fd_derivative(y, v) / y.phi_inv(v);
    detail::Recorder::record(st_lo, 1.0 / d1, ratio);
    detail::Recorder::record(st_hi, ratio, 1.0 / d0);

    // Phi~ sandwich at t = phi(s), kt = phi(ks) so both stay inside phi's calibrated image.
    const double t = y.phi(s);
    const double kt = y.phi(k * s);
    const double kk = kt / t;
    const double T = y.big_phi_tilde(t);
    const double Tk = y.big_phi_tilde(kt);
    const double c0 = std::pow(kk, 1.0 + 1.0 / d0);
    const double c1 = std::pow(kk, 1.0 + 1.0 / d1);
    const double coef = d1 * (1.0 + d0) / (d0 * (1.0 + d1));
    detail::Recorder::record(i_lo, std::min(c0, c1) * T / coef, Tk);
    detail::Recorder::record(i_hi, Tk, coef * std::max(c0, c1) * T);

    const double Ps = y.big_phi(s);
    detail::Recorder::record_equal(legendre, T, s * t - Ps);
    detail::Recorder::record(iii, T, d1 * Ps);
  }
  return r.report;
}

CheckReport check_young_inequalities(const YoungFunction& y, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) fail(ErrorKind::Domain, "check_young_inequalities: n_samples must be >= 1");
  detail::Recorder r;
  r.report.suite = "young";
  auto& young = r.add("young", 1e-9, false);
  auto& young_eps = r.add("young_eps", 1e-9, false);
  auto& young_eps_fixed = r.add("young_eps_corrected", 1e-9, false);
  auto& convex = r.add("Phi_convexity", 1e-10, false);
  auto& roundtrip = r.add("phi_inv_roundtrip", 1e-9, true);
  CheckItem* closed = y.is_power() ? &r.add("closed_form_vs_quadrature", 1e-8, true) : nullptr;

  const double y_max = y.phi(y.s_max());
  detail::Rng rng(seed);
  for (std::size_t n = 0; n < n_samples; ++n) {
    const double a = rng.log_uniform(1e-3, y.s_max());
    const double b = rng.log_uniform(1e-3 * y.phi(1e-3), y_max);
    const double Pa = y.big_phi(a);
    const double Tb = y.big_phi_tilde(b);
    detail::Recorder::record(young, a * b, Pa + Tb);

    const double eps = rng.uniform(0.01, 1.0);
    detail::Recorder::record(young_eps, a * b, eps * Pa + young_eps_constant(y, eps) * Tb);
    detail::Recorder::record(young_eps_fixed, a * b, eps * Pa + young_eps_constant_corrected(y, eps) * Tb);

    const double s1 = rng.uniform(0.0, y.s_max());
    const double s2 = rng.uniform(0.0, y.s_max());
    const double th = rng.uniform();
    const double mix = th * y.big_phi(s1) + (1.0 - th) * y.big_phi(s2);
    // Absolute tolerance on the convexity gap, scaled to the chord value.
    convex.samples++;
    convex.worst_slack = std::min(convex.worst_slack, (mix - y.big_phi(th * s1 + (1.0 - th) * s2)) / std::max(1.0, mix));

    detail::Recorder::record_equal(roundtrip, y.phi_inv(y.phi(a)), a);

    if (closed) {
      detail::Recorder::record_equal(*closed, y.big_phi(a), y.big_phi_quadrature(a));
      detail::Recorder::record_equal(*closed, y.big_phi_tilde(b), y.big_phi_tilde_quadrature(b));
    }
  }
  return r.report;
}

}  // namespace issv
