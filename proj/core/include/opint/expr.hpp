#pragma once

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "opint/scalar.hpp"

namespace opint {

/// Parse failure with the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, size_t offset)
      : Error(msg + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

/// Small expression AST: literals, the variable, parameter symbols, the
/// arithmetic operators and a fixed set of function calls.
struct Expr {
  enum class Kind { number, variable, parameter, add, sub, mul, div, pow, neg, call };

  Kind kind = Kind::number;
  Scalar number;           // Kind::number
  std::string name;        // parameter or call name; variable prints as stored
  std::vector<Expr> kids;

  static Expr num(const Scalar& v);
  static Expr var(const std::string& name = "x");
  static Expr param(const std::string& name);
  static Expr unary(Kind k, Expr a);
  static Expr binary(Kind k, Expr a, Expr b);
  static Expr call(const std::string& fn, Expr a);
};

/// Recognized call names: sin cos exp sinc log sqrt abs.
bool is_known_function(const std::string& name);

Expr parse_expression(const std::string& text);
std::string print_expression(const Expr& e);

/// Numeric evaluation with a parameter environment; the variable may be
/// any single symbol (by convention x or t).
std::complex<double> eval_expression(const Expr& e, std::complex<double> x,
                                     const std::map<std::string, Scalar>& params = {});

/// Mark every occurrence of `var` as the distinguished variable (the parser
/// reads all identifiers as parameter symbols).
Expr bind_variable(const Expr& e, const std::string& var);

/// Substitute parameter symbols by exact values (for --param k=v).
Expr substitute_params(const Expr& e, const std::map<std::string, Scalar>& params);

/// Free symbols other than the distinguished variable.
std::vector<std::string> parameter_names(const Expr& e, const std::string& var);

}  // namespace opint
