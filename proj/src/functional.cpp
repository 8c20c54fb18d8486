#include "uncert/functional.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

#include "uncert/dual.hpp"
#include "uncert/error.hpp"

namespace uncert {
namespace expr {

enum class Op { kConst, kVar, kNeg, kAdd, kSub, kMul, kDiv, kPow, kSqrt, kExp, kLn, kAbs };

// Constants keep the name they were written with (hbar, pi, e, or a parameter)
// so that printing reproduces the source.
struct Node {
  Op op = Op::kConst;
  double value = 0.0;
  int var = -1;
  std::string name;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

using NodePtr = std::shared_ptr<const Node>;

namespace {

constexpr int kX = 0;
constexpr int kY = 1;
constexpr int kW = 2;

NodePtr make_const(double v, std::string name = {}) {
  auto n = std::make_shared<Node>();
  n->op = Op::kConst;
  n->value = v;
  n->name = std::move(name);
  return n;
}

NodePtr make_var(int index) {
  auto n = std::make_shared<Node>();
  n->op = Op::kVar;
  n->var = index;
  return n;
}

NodePtr make_op(Op op, NodePtr a, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

bool is_abs_w(const Node& n) {
  return n.op == Op::kAbs && n.a->op == Op::kVar && n.a->var == kW;
}

const std::set<std::string, std::less<>>& reserved_names() {
  static const std::set<std::string, std::less<>> names = {
      "x", "y", "w", "z", "hbar", "pi", "e", "sqrt", "exp", "ln", "abs", "pow"};
  return names;
}

class Parser {
 public:
  Parser(std::string_view src, const ParamMap& params, double hbar)
      : src_(src), params_(params), hbar_(hbar) {}

  NodePtr parse_all() {
    NodePtr root = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return root;
  }

  bool saw_abs_w() const { return saw_abs_w_; }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make_op(Op::kAdd, lhs, parse_term());
      } else if (accept('-')) {
        lhs = make_op(Op::kSub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_op(Op::kMul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_op(Op::kDiv, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_op(Op::kNeg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return make_op(Op::kPow, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t count = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) fail("malformed number");
    // An exponent needs digits after it; otherwise "2e" is 2 followed by the constant e.
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        digits();
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    return make_const(std::stod(text));
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string name(src_.substr(start, pos_ - start));

    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '(') return parse_call(name, start);

    if (name == "x") return make_var(kX);
    if (name == "y") return make_var(kY);
    if (name == "w") return make_var(kW);
    if (name == "z") {
      // Var(r) for r = -p - q.
      return make_op(Op::kAdd, make_op(Op::kAdd, make_var(kX), make_var(kY)),
                     make_op(Op::kMul, make_const(2.0), make_var(kW)));
    }
    if (name == "hbar") return make_const(hbar_, name);
    if (name == "pi") return make_const(std::numbers::pi, name);
    if (name == "e") return make_const(std::numbers::e, name);
    if (reserved_names().contains(name))
      throw ParseError("function '" + name + "' requires an argument list", start);
    auto it = params_.find(name);
    if (it == params_.end())
      throw UnboundParameterError("unbound parameter '" + name + "'", start);
    return make_const(it->second, name);
  }

  NodePtr parse_call(const std::string& name, std::size_t start) {
    expect('(');
    std::vector<NodePtr> args;
    args.push_back(parse_expr());
    while (accept(',')) args.push_back(parse_expr());
    expect(')');

    auto arity = [&](std::size_t n) {
      if (args.size() != n)
        throw ParseError("function '" + name + "' takes " + std::to_string(n) + " argument(s)",
                         start);
    };
    if (name == "sqrt") {
      arity(1);
      return make_op(Op::kSqrt, args[0]);
    }
    if (name == "exp") {
      arity(1);
      return make_op(Op::kExp, args[0]);
    }
    if (name == "ln") {
      arity(1);
      return make_op(Op::kLn, args[0]);
    }
    if (name == "abs") {
      arity(1);
      NodePtr n = make_op(Op::kAbs, args[0]);
      if (is_abs_w(*n)) saw_abs_w_ = true;
      return n;
    }
    if (name == "pow") {
      arity(2);
      return make_op(Op::kPow, args[0], args[1]);
    }
    throw UnknownIdentifierError("unknown function '" + name + "'", start);
  }

  std::string_view src_;
  const ParamMap& params_;
  double hbar_;
  std::size_t pos_ = 0;
  bool saw_abs_w_ = false;
};

// ---------------------------------------------------------------------------
// Scalar kernels for double and Dual3.

bool has_derivative(const Dual3& v) { return !v.is_constant(); }

double k_sqrt(double a) {
  if (a < 0.0) throw DomainError("sqrt of negative value");
  return std::sqrt(a);
}

Dual3 k_sqrt(const Dual3& a) {
  const double s = k_sqrt(a.value);
  if (s == 0.0) {
    if (has_derivative(a)) throw NotDifferentiableError("sqrt is not differentiable at 0");
    return Dual3(0.0);
  }
  return a.chain(s, 0.5 / s);
}

double k_exp(double a) { return std::exp(a); }
Dual3 k_exp(const Dual3& a) {
  const double v = std::exp(a.value);
  return a.chain(v, v);
}

double k_ln(double a) {
  if (!(a > 0.0)) throw DomainError("ln of non-positive value");
  return std::log(a);
}
Dual3 k_ln(const Dual3& a) { return a.chain(k_ln(a.value), 1.0 / a.value); }

double k_abs(double a) { return std::abs(a); }
Dual3 k_abs(const Dual3& a) {
  if (a.value == 0.0) {
    if (has_derivative(a))
      throw NotDifferentiableError("abs is not differentiable at 0 (no branch pinned)");
    return Dual3(0.0);
  }
  return a.chain(std::abs(a.value), a.value > 0.0 ? 1.0 : -1.0);
}

double k_div(double a, double b) {
  if (b == 0.0) throw DomainError("division by zero");
  return a / b;
}
Dual3 k_div(const Dual3& a, const Dual3& b) {
  if (b.value == 0.0) throw DomainError("division by zero");
  return a / b;
}

bool is_integral(double v) { return std::abs(v) < 1e9 && v == std::nearbyint(v); }

double k_pow(double a, double b) {
  if (is_integral(b)) {
    if (a == 0.0 && b < 0.0) throw DomainError("zero raised to a negative power");
    return std::pow(a, b);
  }
  if (a < 0.0) throw DomainError("fractional power of negative value");
  if (a == 0.0 && b < 0.0) throw DomainError("zero raised to a negative power");
  return std::pow(a, b);
}

Dual3 k_pow(const Dual3& a, const Dual3& b) {
  const double v = k_pow(a.value, b.value);
  if (!has_derivative(b)) {
    const double n = b.value;
    if (!has_derivative(a) || n == 0.0) return Dual3(v);
    if (a.value == 0.0) {
      if (n < 1.0) throw NotDifferentiableError("power is not differentiable at 0");
      return a.chain(v, n == 1.0 ? 1.0 : 0.0);
    }
    return a.chain(v, n * k_pow(a.value, n - 1.0));
  }
  if (!(a.value > 0.0)) throw DomainError("variable exponent requires a positive base");
  const double la = std::log(a.value);
  Dual3 r(v);
  for (std::size_t i = 0; i < 3; ++i) r.d[i] = v * (b.d[i] * la + b.value * a.d[i] / a.value);
  return r;
}

template <class T>
T eval(const Node& n, const std::array<T, 3>& vars, AbsBranch branch) {
  switch (n.op) {
    case Op::kConst:
      return T(n.value);
    case Op::kVar:
      return vars[static_cast<std::size_t>(n.var)];
    case Op::kNeg:
      return -eval(*n.a, vars, branch);
    case Op::kAdd:
      return eval(*n.a, vars, branch) + eval(*n.b, vars, branch);
    case Op::kSub:
      return eval(*n.a, vars, branch) - eval(*n.b, vars, branch);
    case Op::kMul:
      return eval(*n.a, vars, branch) * eval(*n.b, vars, branch);
    case Op::kDiv:
      return k_div(eval(*n.a, vars, branch), eval(*n.b, vars, branch));
    case Op::kPow:
      return k_pow(eval(*n.a, vars, branch), eval(*n.b, vars, branch));
    case Op::kSqrt:
      return k_sqrt(eval(*n.a, vars, branch));
    case Op::kExp:
      return k_exp(eval(*n.a, vars, branch));
    case Op::kLn:
      return k_ln(eval(*n.a, vars, branch));
    case Op::kAbs:
      if (branch != AbsBranch::kNone && is_abs_w(n))
        return branch == AbsBranch::kPlus ? vars[kW] : -vars[kW];
      return k_abs(eval(*n.a, vars, branch));
  }
  return T(0.0);
}

void check_finite(double v) {
  if (!std::isfinite(v)) throw DomainError("functional value is not finite");
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (v < 0.0) return "(" + s + ")";
  return s;
}

void print(const Node& n, std::ostringstream& os) {
  auto binary = [&](const char* op) {
    os << '(';
    print(*n.a, os);
    os << op;
    print(*n.b, os);
    os << ')';
  };
  auto call = [&](const char* fn) {
    os << fn << '(';
    print(*n.a, os);
    os << ')';
  };
  switch (n.op) {
    case Op::kConst:
      if (!n.name.empty())
        os << n.name;
      else
        os << format_number(n.value);
      return;
    case Op::kVar:
      os << (n.var == kX ? 'x' : n.var == kY ? 'y' : 'w');
      return;
    case Op::kNeg:
      os << "(-";
      print(*n.a, os);
      os << ')';
      return;
    case Op::kAdd:
      return binary("+");
    case Op::kSub:
      return binary("-");
    case Op::kMul:
      return binary("*");
    case Op::kDiv:
      return binary("/");
    case Op::kPow:
      return binary("^");
    case Op::kSqrt:
      return call("sqrt");
    case Op::kExp:
      return call("exp");
    case Op::kLn:
      return call("ln");
    case Op::kAbs:
      return call("abs");
  }
}

}  // namespace
}  // namespace expr

Functional parse(std::string_view source, const ParamMap& params, double hbar) {
  for (const auto& [name, value] : params) {
    if (expr::reserved_names().contains(name))
      throw ParseError("parameter name '" + name + "' is reserved", 0);
    if (!std::isfinite(value)) throw ParseError("parameter '" + name + "' is not finite", 0);
  }
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ParseError("hbar must be positive", 0);

  expr::Parser parser(source, params, hbar);
  Functional f;
  f.root_ = parser.parse_all();
  f.source_ = std::string(source);
  f.params_ = params;
  f.hbar_ = hbar;
  f.uses_abs_w_ = parser.saw_abs_w();
  return f;
}

Functional Functional::with_abs_branch(AbsBranch branch) const {
  Functional copy = *this;
  copy.abs_branch_ = branch;
  return copy;
}

double Functional::evaluate(const Moments3& m) const {
  const std::array<double, 3> vars{m.x, m.y, m.w};
  const double v = expr::eval(*root_, vars, abs_branch_);
  expr::check_finite(v);
  return v;
}

std::pair<double, Grad3> Functional::value_and_gradient(const Moments3& m) const {
  const std::array<Dual3, 3> vars{Dual3::variable(m.x, 0), Dual3::variable(m.y, 1),
                                  Dual3::variable(m.w, 2)};
  const Dual3 r = expr::eval(*root_, vars, abs_branch_);
  expr::check_finite(r.value);
  for (double g : r.d) expr::check_finite(g);
  return {r.value, Grad3{r.d[0], r.d[1], r.d[2]}};
}

Grad3 Functional::gradient(const Moments3& m) const { return value_and_gradient(m).second; }

std::string Functional::to_string() const {
  std::ostringstream os;
  expr::print(*root_, os);
  return os.str();
}

}  // namespace uncert
