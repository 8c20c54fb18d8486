#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "uncert/moments.hpp"

namespace uncert {

using ParamMap = std::map<std::string, double>;

/// Partial derivatives of a functional with respect to (x, y, w).
struct Grad3 {
  double f_x = 0.0;
  double f_y = 0.0;
  double f_w = 0.0;
};

/// How `abs(w)` is treated. kPlus replaces it by +w, kMinus by -w; the caller
/// is then responsible for restricting to w >= 0 or w <= 0 respectively.
enum class AbsBranch { kNone, kPlus, kMinus };

namespace expr {
struct Node;
}

/// An immutable parsed function f(x, y, w) of the second moments.
///
/// The position-momentum-sum variance `z` is expanded to x + y + 2w while
/// parsing, so the tree only ever refers to x, y and w. Copies share the tree.
class Functional {
 public:
  const std::string& source() const { return source_; }
  const ParamMap& params() const { return params_; }
  double hbar() const { return hbar_; }
  bool uses_abs_w() const { return uses_abs_w_; }
  AbsBranch abs_branch() const { return abs_branch_; }

  /// Copy of this functional with every `abs(w)` pinned to the given branch.
  Functional with_abs_branch(AbsBranch branch) const;

  double evaluate(const Moments3& m) const;
  Grad3 gradient(const Moments3& m) const;
  std::pair<double, Grad3> value_and_gradient(const Moments3& m) const;

  /// Fully parenthesized source that parses back to an equivalent tree.
  std::string to_string() const;

 private:
  friend Functional parse(std::string_view, const ParamMap&, double);

  std::shared_ptr<const expr::Node> root_;
  std::string source_;
  ParamMap params_;
  double hbar_ = 1.0;
  bool uses_abs_w_ = false;
  AbsBranch abs_branch_ = AbsBranch::kNone;
};

/// Parses a functional over x, y, w, z with named parameters.
///
/// Grammar: expr := term (('+'|'-') term)*; term := unary (('*'|'/') unary)*;
/// unary := ('+'|'-') unary | power; power := primary ('^' unary)?;
/// primary := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'.
/// Functions: sqrt, exp, ln, abs, pow. Constants: hbar, pi, e.
///
/// Throws ParseError (syntax), UnknownIdentifierError (unsupported function)
/// or UnboundParameterError (a name missing from `params`).
Functional parse(std::string_view source, const ParamMap& params = {}, double hbar = 1.0);

inline double evaluate(const Functional& f, const Moments3& m) { return f.evaluate(m); }
inline Grad3 gradient(const Functional& f, const Moments3& m) { return f.gradient(m); }

}  // namespace uncert
