#pragma once

// Young functions phi -> Phi -> Phi~ for the three catalog families that
// satisfy the Tolksdorf growth condition  delta0 <= s phi'(s)/phi(s) <= delta1.

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace issv {

struct PowerYoung {
  double q;  // phi(s) = s^(q-1), q > 1
};

struct LogLinearYoung {
  double c1;  // phi(s) = ln(1 + c1 s) + c2 s
  double c2;
};

struct LogPowerYoung {
  double c1;  // phi(s) = (ln(s + c1))^c2 s^(q-1), c1 >= e
  double c2;
  double q;
};

using YoungVariant = std::variant<PowerYoung, LogLinearYoung, LogPowerYoung>;

struct TolksdorfEstimate {
  double delta0;
  double delta1;
};

/// Immutable Young function. `conjugate()` swaps the roles of phi and its
/// inverse, so the complementary function Phi~ can be fed to every routine
/// that takes a YoungFunction (Luxemburg norm in L^Phi~, Hoelder checks).
class YoungFunction {
 public:
  static constexpr double kDefaultSMax = 1e4;

  /// Exponents for non-power families are estimated on a log grid over
  /// [1e-6, s_max] and widened by 1% on each side.
  explicit YoungFunction(YoungVariant variant, double s_max = kDefaultSMax);

  static YoungFunction power(double q, double s_max = kDefaultSMax) { return YoungFunction(PowerYoung{q}, s_max); }
  static YoungFunction log_linear(double c1, double c2, double s_max = kDefaultSMax) {
    return YoungFunction(LogLinearYoung{c1, c2}, s_max);
  }
  static YoungFunction log_power(double c1, double c2, double q, double s_max = kDefaultSMax) {
    return YoungFunction(LogPowerYoung{c1, c2, q}, s_max);
  }

  const YoungVariant& variant() const noexcept { return variant_; }
  bool is_power() const noexcept { return std::holds_alternative<PowerYoung>(variant_); }
  bool is_conjugate() const noexcept { return conjugate_; }
  double delta0() const noexcept { return delta0_; }
  double delta1() const noexcept { return delta1_; }
  double s_max() const noexcept { return s_max_; }
  std::string name() const;

  double phi(double s) const;
  double phi_prime(double s) const;
  double phi_inv(double y) const;
  double big_phi(double s) const;
  double big_phi_tilde(double s) const;

  // Quadrature paths, used even where a closed form exists.
  double big_phi_quadrature(double s) const;
  double big_phi_tilde_quadrature(double s) const;

  YoungFunction conjugate() const;

 private:
  YoungFunction() = default;

  // Base-family evaluations, ignoring conjugate_.
  double base_phi(double s) const;
  double base_phi_prime(double s) const;
  double base_phi_inv(double y) const;
  double base_big_phi(double s) const;
  double base_big_phi_tilde(double s) const;

  // Cumulative quadrature anchors for Phi and Phi~, built on first use and
  // shared by copies and conjugates.
  struct Anchors;
  double anchored_integral(bool tilde, double s) const;

  YoungVariant variant_{PowerYoung{2.0}};
  std::shared_ptr<Anchors> anchors_;
  double delta0_ = 1.0;
  double delta1_ = 1.0;
  double s_max_ = kDefaultSMax;
  bool conjugate_ = false;
};

/// min / max of s phi'(s)/phi(s) over n log-spaced points of [s_lo, s_hi].
TolksdorfEstimate tolksdorf_bounds(const YoungFunction& y, double s_lo, double s_hi, std::size_t n);

/// C(eps) of the weighted Young inequality  ab <= eps Phi(a) + C(eps) Phi~(b).
/// Valid for 0 < eps <= (1+delta1)/(1+delta0).
double young_eps_constant(double delta0, double delta1, double eps);
inline double young_eps_constant(const YoungFunction& y, double eps) {
  return young_eps_constant(y.delta0(), y.delta1(), eps);
}

/// Same inequality with the scaling Phi(k a) <= (1+delta1)/(1+delta0) k^(1+delta0) Phi(a), k < 1:
/// [delta1(1+delta0)/(delta0(1+delta1))] [((1+delta0)/(1+delta1)) eps]^(-1/delta0).
/// Agrees with young_eps_constant when delta0 == delta1 and is never smaller for eps < 1.
double young_eps_constant_corrected(double delta0, double delta1, double eps);
inline double young_eps_constant_corrected(const YoungFunction& y, double eps) {
  return young_eps_constant_corrected(y.delta0(), y.delta1(), eps);
}

/// One inequality family checked on samples. `worst_slack` is the minimum of
/// (rhs - lhs) / max(|lhs|, |rhs|, 1e-300) over all samples; negative means violated.
struct CheckItem {
  std::string name;
  std::size_t samples = 0;
  double worst_slack = 0.0;
  double tolerance = 0.0;
  bool equality_for_power = false;  // both sides coincide when delta0 == delta1
  bool pass() const { return worst_slack >= -tolerance; }
};

struct CheckReport {
  std::string suite;
  std::vector<CheckItem> items;
  bool pass() const;
  double worst_slack() const;
  CheckItem& item(const std::string& name);
  const CheckItem& item(const std::string& name) const;
};

CheckReport check_lemma_phi(const YoungFunction& y, std::size_t n_samples, std::uint64_t seed);
CheckReport check_lemma_inv(const YoungFunction& y, std::size_t n_samples, std::uint64_t seed);

/// Young, weighted-Young and convexity properties on random samples.
CheckReport check_young_inequalities(const YoungFunction& y, std::size_t n_samples, std::uint64_t seed);

}  // namespace issv
