#pragma once

// A small arithmetic expression language for coefficients and signals.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right-associative, binds tighter than unary minus
//   primary := number | name | name '(' args ')' | '(' expr ')'
//
// Variables: x t w wx s r. Constants: pi e. Functions: sin cos tan exp ln abs
// sqrt tanh (one argument), min max pow (two arguments).

#include <array>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace issv {

enum class Var : std::uint8_t { x, t, w, wx, s, r };
inline constexpr std::size_t kVarCount = 6;

/// Bit set of variables.
class VarSet {
 public:
  constexpr VarSet() = default;
  constexpr VarSet(std::initializer_list<Var> vars) {
    for (Var v : vars) bits_ |= bit(v);
  }
  constexpr bool contains(Var v) const { return (bits_ & bit(v)) != 0; }
  constexpr VarSet& add(Var v) {
    bits_ |= bit(v);
    return *this;
  }
  constexpr bool subset_of(VarSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }

 private:
  static constexpr std::uint8_t bit(Var v) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(v)); }
  std::uint8_t bits_ = 0;
};

const char* var_name(Var v) noexcept;

/// Variable bindings. Only variables marked bound may be read.
class Env {
 public:
  Env& set(Var v, double value) {
    values_[static_cast<std::size_t>(v)] = value;
    bound_.add(v);
    return *this;
  }
  double get(Var v) const { return values_[static_cast<std::size_t>(v)]; }
  VarSet bound() const { return bound_; }

  static Env xt(double x, double t) { return Env().set(Var::x, x).set(Var::t, t); }

 private:
  std::array<double, kVarCount> values_{};
  VarSet bound_;
};

struct ExprNode;

/// Parsed, immutable expression. Copies share the tree.
class Expr {
 public:
  Expr();  // the constant 0
  static Expr parse(std::string_view text, VarSet allowed);
  static Expr constant(double value);

  double eval(const Env& env) const;

  /// Fast paths for the common binding patterns; variables outside the
  /// pattern read as unbound.
  double eval_xt(double x, double t) const;
  double eval_xtw(double x, double t, double w) const;
  double eval_xtwp(double x, double t, double w, double wx) const;

  const std::string& text() const noexcept { return text_; }
  VarSet vars() const noexcept { return used_; }
  bool uses(Var v) const noexcept { return used_.contains(v); }
  bool is_constant() const noexcept { return used_.empty(); }
  /// True when the expression is the literal constant 0 after folding.
  bool is_zero() const noexcept { return is_constant() && constant_value_ == 0.0; }
  double constant_value() const noexcept { return constant_value_; }

  /// Fully parenthesized rendering of the tree.
  std::string to_string() const;

 private:
  enum class Op : std::uint8_t;
  struct Instr {
    Op op;
    std::uint8_t arg = 0;  // variable index or integer exponent
    double value = 0.0;
  };

  double run(const double* vars, VarSet bound) const;
  void compile(const ExprNode& n);

  std::shared_ptr<const ExprNode> root_;
  std::vector<Instr> code_;
  std::size_t max_stack_ = 1;
  std::string text_;
  VarSet used_;
  double constant_value_ = 0.0;
};

}  // namespace issv
