#include "issv/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "issv/errors.hpp"

namespace issv {

namespace {

enum class Fn : std::uint8_t { sin, cos, tan, exp, ln, abs, sqrt, tanh, min, max, pow };

struct FnInfo {
  const char* name;
  Fn fn;
  int arity;
};

constexpr FnInfo kFunctions[] = {
    {"sin", Fn::sin, 1},   {"cos", Fn::cos, 1},   {"tan", Fn::tan, 1}, {"exp", Fn::exp, 1},
    {"ln", Fn::ln, 1},     {"abs", Fn::abs, 1},   {"sqrt", Fn::sqrt, 1}, {"tanh", Fn::tanh, 1},
    {"min", Fn::min, 2},   {"max", Fn::max, 2},   {"pow", Fn::pow, 2},
};

constexpr const char* kVarNames[] = {"x", "t", "w", "wx", "s", "r"};

const FnInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions)
    if (name == f.name) return &f;
  return nullptr;
}

int find_var(std::string_view name) {
  for (std::size_t i = 0; i < kVarCount; ++i)
    if (name == kVarNames[i]) return static_cast<int>(i);
  return -1;
}

[[noreturn]] void eval_fail(const std::string& what) { throw Error(ErrorKind::Evaluation, what); }

double checked_pow(double a, double b) {
  const double r = std::pow(a, b);
  if (std::isnan(r) && !std::isnan(a) && !std::isnan(b))
    eval_fail("pow: negative base with non-integer exponent");
  return r;
}

double apply1(Fn fn, double a) {
  switch (fn) {
    case Fn::sin: return std::sin(a);
    case Fn::cos: return std::cos(a);
    case Fn::tan: return std::tan(a);
    case Fn::exp: return std::exp(a);
    case Fn::ln:
      if (!(a > 0.0)) eval_fail("ln of a nonpositive value");
      return std::log(a);
    case Fn::abs: return std::abs(a);
    case Fn::sqrt:
      if (a < 0.0) eval_fail("sqrt of a negative value");
      return std::sqrt(a);
    case Fn::tanh: return std::tanh(a);
    default: break;
  }
  eval_fail("bad unary function");
}

double apply2(Fn fn, double a, double b) {
  switch (fn) {
    case Fn::min: return std::min(a, b);
    case Fn::max: return std::max(a, b);
    case Fn::pow: return checked_pow(a, b);
    default: break;
  }
  eval_fail("bad binary function");
}

}  // namespace

const char* var_name(Var v) noexcept { return kVarNames[static_cast<std::size_t>(v)]; }

struct ExprNode {
  enum class Kind { Num, Var, Neg, Bin, Call } kind;
  double value = 0.0;
  std::size_t var = 0;
  char op = 0;
  Fn fn = Fn::sin;
  std::vector<std::unique_ptr<ExprNode>> kids;
  VarSet used;
};

namespace {

using NodePtr = std::unique_ptr<ExprNode>;

NodePtr make(ExprNode::Kind k) {
  auto n = std::make_unique<ExprNode>();
  n->kind = k;
  return n;
}

NodePtr number(double v) {
  auto n = make(ExprNode::Kind::Num);
  n->value = v;
  return n;
}

// Evaluates a variable-free subtree; callers catch evaluation errors.
double fold(const ExprNode& n) {
  switch (n.kind) {
    case ExprNode::Kind::Num: return n.value;
    case ExprNode::Kind::Neg: return -fold(*n.kids[0]);
    case ExprNode::Kind::Bin: {
      const double a = fold(*n.kids[0]);
      const double b = fold(*n.kids[1]);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        default: return checked_pow(a, b);
      }
    }
    case ExprNode::Kind::Call:
      return n.kids.size() == 1 ? apply1(n.fn, fold(*n.kids[0])) : apply2(n.fn, fold(*n.kids[0]), fold(*n.kids[1]));
    case ExprNode::Kind::Var: break;
  }
  eval_fail("variable in constant fold");
}

class Parser {
 public:
  Parser(std::string_view text, VarSet allowed) : s_(text), allowed_(allowed) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError(pos_, "empty expression");
    auto n = expr();
    skip_ws();
    if (pos_ < s_.size()) throw ParseError(pos_, std::string("unexpected '") + s_[pos_] + "'");
    return n;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError(pos_, std::string("expected '") + c + "' but reached end of input");
    if (s_[pos_] != c) throw ParseError(pos_, std::string("expected '") + c + "'");
    ++pos_;
  }

  static NodePtr binary(char op, NodePtr a, NodePtr b) {
    auto n = make(ExprNode::Kind::Bin);
    n->op = op;
    n->used = a->used;
    for (std::size_t i = 0; i < kVarCount; ++i)
      if (b->used.contains(static_cast<Var>(i))) n->used.add(static_cast<Var>(i));
    n->kids.push_back(std::move(a));
    n->kids.push_back(std::move(b));
    return n;
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = binary('+', std::move(lhs), term());
      else if (accept('-'))
        lhs = binary('-', std::move(lhs), term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = binary('*', std::move(lhs), unary());
      else if (accept('/'))
        lhs = binary('/', std::move(lhs), unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto inner = unary();
      auto n = make(ExprNode::Kind::Neg);
      n->used = inner->used;
      n->kids.push_back(std::move(inner));
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return binary('^', std::move(base), unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError(pos_, "expected an operand but reached end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number_literal();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (c == '(') {
      ++pos_;
      auto n = expr();
      expect(')');
      return n;
    }
    throw ParseError(pos_, std::string("unexpected '") + c + "'");
  }

  NodePtr number_literal() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    // Exponent part only when digits follow; a bare trailing 'e' is not consumed.
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        pos_ = p;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    const std::string lit(s_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(lit.c_str(), &end);
    if (end != lit.c_str() + lit.size() || lit == ".") throw ParseError(start, "malformed number '" + lit + "'");
    return number(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string_view name = s_.substr(start, pos_ - start);
    skip_ws();
    const bool call = pos_ < s_.size() && s_[pos_] == '(';
    if (call) {
      const FnInfo* f = find_function(name);
      if (!f) throw ParseError(start, "unknown function '" + std::string(name) + "'");
      ++pos_;
      auto n = make(ExprNode::Kind::Call);
      n->fn = f->fn;
      skip_ws();
      if (!(pos_ < s_.size() && s_[pos_] == ')')) {
        do {
          n->kids.push_back(expr());
        } while (accept(','));
      }
      expect(')');
      if (static_cast<int>(n->kids.size()) != f->arity)
        throw ParseError(start, std::string(f->name) + " takes " + std::to_string(f->arity) + " argument(s), got " +
                                    std::to_string(n->kids.size()));
      for (const auto& k : n->kids)
        for (std::size_t i = 0; i < kVarCount; ++i)
          if (k->used.contains(static_cast<Var>(i))) n->used.add(static_cast<Var>(i));
      return n;
    }
    if (name == "pi") return number(std::numbers::pi);
    if (name == "e") return number(std::numbers::e);
    const int v = find_var(name);
    if (v < 0) {
      if (find_function(name)) throw ParseError(start, "function '" + std::string(name) + "' needs arguments");
      throw ParseError(start, "unknown identifier '" + std::string(name) + "'");
    }
    if (!allowed_.contains(static_cast<Var>(v)))
      throw ParseError(start, "variable '" + std::string(name) + "' is not allowed here");
    auto n = make(ExprNode::Kind::Var);
    n->var = static_cast<std::size_t>(v);
    n->used.add(static_cast<Var>(v));
    return n;
  }

  std::string_view s_;
  VarSet allowed_;
  std::size_t pos_ = 0;
};

// Replaces variable-free subtrees by their value where that evaluates cleanly.
void fold_constants(NodePtr& n) {
  for (auto& k : n->kids) fold_constants(k);
  if (n->kind != ExprNode::Kind::Num && n->used.empty()) {
    try {
      n = number(fold(*n));
    } catch (const Error&) {
      // Left in place so the error surfaces at evaluation time.
    }
  }
}

void render(const ExprNode& n, std::ostringstream& os) {
  switch (n.kind) {
    case ExprNode::Kind::Num: os << n.value; return;
    case ExprNode::Kind::Var: os << kVarNames[n.var]; return;
    case ExprNode::Kind::Neg:
      os << "(-";
      render(*n.kids[0], os);
      os << ')';
      return;
    case ExprNode::Kind::Bin:
      os << '(';
      render(*n.kids[0], os);
      os << ' ' << n.op << ' ';
      render(*n.kids[1], os);
      os << ')';
      return;
    case ExprNode::Kind::Call:
      for (const auto& f : kFunctions)
        if (f.fn == n.fn) os << f.name;
      os << '(';
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        if (i) os << ", ";
        render(*n.kids[i], os);
      }
      os << ')';
      return;
  }
}

}  // namespace

enum class Expr::Op : std::uint8_t { Push, Load, Neg, Add, Sub, Mul, Div, Pow, IPow, Call1, Call2 };

Expr::Expr() : root_(number(0.0)), code_{Instr{Op::Push, 0, 0.0}}, text_("0") {}

Expr Expr::constant(double value) {
  Expr e;
  std::ostringstream os;
  os.precision(17);
  os << value;
  e.text_ = os.str();
  e.constant_value_ = value;
  e.code_[0].value = value;
  e.root_ = number(value);
  return e;
}

Expr Expr::parse(std::string_view text, VarSet allowed) {
  NodePtr root = Parser(text, allowed).parse();
  fold_constants(root);
  Expr e;
  e.code_.clear();
  e.text_ = std::string(text);
  e.used_ = root->used;
  e.compile(*root);
  e.constant_value_ = root->kind == ExprNode::Kind::Num ? root->value : std::nan("");
  e.root_ = std::shared_ptr<const ExprNode>(std::move(root));
  return e;
}

void Expr::compile(const ExprNode& n) {
  std::size_t depth = 0;
  std::size_t peak = 0;
  auto push = [&](Instr in, int delta) {
    code_.push_back(in);
    depth = static_cast<std::size_t>(static_cast<long>(depth) + delta);
    peak = std::max(peak, depth);
  };
  auto emit = [&](auto&& self, const ExprNode& node) -> void {
    switch (node.kind) {
      case ExprNode::Kind::Num: push({Op::Push, 0, node.value}, 1); return;
      case ExprNode::Kind::Var: push({Op::Load, static_cast<std::uint8_t>(node.var), 0.0}, 1); return;
      case ExprNode::Kind::Neg:
        self(self, *node.kids[0]);
        push({Op::Neg}, 0);
        return;
      case ExprNode::Kind::Bin: {
        const ExprNode& rhs = *node.kids[1];
        if (node.op == '^' && rhs.kind == ExprNode::Kind::Num && rhs.value >= 1 && rhs.value <= 64 &&
            rhs.value == std::floor(rhs.value)) {
          self(self, *node.kids[0]);
          push({Op::IPow, static_cast<std::uint8_t>(rhs.value), 0.0}, 0);
          return;
        }
        self(self, *node.kids[0]);
        self(self, rhs);
        const Op op = node.op == '+' ? Op::Add : node.op == '-' ? Op::Sub : node.op == '*' ? Op::Mul : node.op == '/' ? Op::Div : Op::Pow;
        push({op}, -1);
        return;
      }
      case ExprNode::Kind::Call:
        for (const auto& k : node.kids) self(self, *k);
        if (node.kids.size() == 1)
          push({Op::Call1, static_cast<std::uint8_t>(node.fn), 0.0}, 0);
        else
          push({Op::Call2, static_cast<std::uint8_t>(node.fn), 0.0}, -1);
        return;
    }
  };
  emit(emit, n);
  max_stack_ = std::max<std::size_t>(peak, 1);
}

double Expr::run(const double* vars, VarSet bound) const {
  if (!used_.subset_of(bound)) {
    for (std::size_t i = 0; i < kVarCount; ++i)
      if (used_.contains(static_cast<Var>(i)) && !bound.contains(static_cast<Var>(i)))
        eval_fail(std::string("unbound variable '") + kVarNames[i] + "' in " + text_);
  }
  constexpr std::size_t kInline = 32;
  double inline_stack[kInline] = {};
  std::vector<double> heap;
  double* st = inline_stack;
  if (max_stack_ > kInline) {
    heap.resize(max_stack_);
    st = heap.data();
  }
  std::size_t sp = 0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::Push: st[sp++] = in.value; break;
      case Op::Load: st[sp++] = vars[in.arg]; break;
      case Op::Neg: st[sp - 1] = -st[sp - 1]; break;
      case Op::Add: --sp; st[sp - 1] += st[sp]; break;
      case Op::Sub: --sp; st[sp - 1] -= st[sp]; break;
      case Op::Mul: --sp; st[sp - 1] *= st[sp]; break;
      case Op::Div: --sp; st[sp - 1] /= st[sp]; break;
      case Op::Pow: --sp; st[sp - 1] = checked_pow(st[sp - 1], st[sp]); break;
      case Op::IPow: {
        const double b = st[sp - 1];
        double r = b;
        for (unsigned k = 1; k < in.arg; ++k) r *= b;
        st[sp - 1] = r;
        break;
      }
      case Op::Call1: st[sp - 1] = apply1(static_cast<Fn>(in.arg), st[sp - 1]); break;
      case Op::Call2: --sp; st[sp - 1] = apply2(static_cast<Fn>(in.arg), st[sp - 1], st[sp]); break;
    }
  }
  return st[0];
}

double Expr::eval(const Env& env) const {
  double vars[kVarCount];
  for (std::size_t i = 0; i < kVarCount; ++i) vars[i] = env.get(static_cast<Var>(i));
  return run(vars, env.bound());
}

double Expr::eval_xt(double x, double t) const {
  const double vars[kVarCount] = {x, t, 0, 0, 0, 0};
  return run(vars, VarSet{Var::x, Var::t});
}

double Expr::eval_xtw(double x, double t, double w) const {
  const double vars[kVarCount] = {x, t, w, 0, 0, 0};
  return run(vars, VarSet{Var::x, Var::t, Var::w});
}

double Expr::eval_xtwp(double x, double t, double w, double wx) const {
  const double vars[kVarCount] = {x, t, w, wx, 0, 0};
  return run(vars, VarSet{Var::x, Var::t, Var::w, Var::wx});
}

std::string Expr::to_string() const {
  std::ostringstream os;
  os.precision(17);
  render(*root_, os);
  return os.str();
}

}  // namespace issv
