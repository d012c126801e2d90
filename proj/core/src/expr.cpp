#include "opint/expr.hpp"

#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace opint {

Expr Expr::num(const Scalar& v) {
  Expr e;
  e.kind = Kind::number;
  e.number = v;
  return e;
}

Expr Expr::var(const std::string& name) {
  Expr e;
  e.kind = Kind::variable;
  e.name = name;
  return e;
}

Expr Expr::param(const std::string& name) {
  Expr e;
  e.kind = Kind::parameter;
  e.name = name;
  return e;
}

Expr Expr::unary(Kind k, Expr a) {
  if (k != Kind::neg) throw DomainError("bad unary node");
  Expr e;
  e.kind = k;
  e.kids.push_back(std::move(a));
  return e;
}

Expr Expr::binary(Kind k, Expr a, Expr b) {
  switch (k) {
    case Kind::add:
    case Kind::sub:
    case Kind::mul:
    case Kind::div:
    case Kind::pow:
      break;
    default:
      throw DomainError("bad binary node");
  }
  Expr e;
  e.kind = k;
  e.kids.push_back(std::move(a));
  e.kids.push_back(std::move(b));
  return e;
}

Expr Expr::call(const std::string& fn, Expr a) {
  if (!is_known_function(fn)) throw DomainError("unknown function: " + fn);
  Expr e;
  e.kind = Kind::call;
  e.name = fn;
  e.kids.push_back(std::move(a));
  return e;
}

bool is_known_function(const std::string& name) {
  static const std::set<std::string> fns = {"sin", "cos", "exp", "sinc", "log", "sqrt", "abs"};
  return fns.count(name) > 0;
}

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool accept(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c))
      throw ParseError(std::string("expected '") + c + "'", pos);
  }

  Expr parse() {
    skip_ws();
    if (pos >= s.size()) throw ParseError("empty expression", 0);
    Expr e = sum();
    skip_ws();
    if (pos < s.size()) throw ParseError("unexpected trailing input", pos);
    return e;
  }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (accept('+')) {
        e = Expr::binary(Expr::Kind::add, std::move(e), product());
      } else if (accept('-')) {
        e = Expr::binary(Expr::Kind::sub, std::move(e), product());
      } else {
        return e;
      }
    }
  }

  Expr product() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = Expr::binary(Expr::Kind::mul, std::move(e), unary());
      } else if (accept('/')) {
        e = Expr::binary(Expr::Kind::div, std::move(e), unary());
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::unary(Expr::Kind::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (accept('^')) {
      // right-associative, binds tighter than unary minus on the left
      Expr expo = signed_power_operand();
      return Expr::binary(Expr::Kind::pow, std::move(base), std::move(expo));
    }
    return base;
  }

  Expr signed_power_operand() {
    if (accept('-'))
      return Expr::unary(Expr::Kind::neg, signed_power_operand());
    Expr base = atom();
    if (accept('^'))
      return Expr::binary(Expr::Kind::pow, std::move(base), signed_power_operand());
    return base;
  }

  Expr atom() {
    skip_ws();
    if (pos >= s.size()) throw ParseError("unexpected end of input", pos);
    char c = s[pos];
    if (c == '(') {
      ++pos;
      Expr e = sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(std::string("unexpected character '") + c + "'", pos);
  }

  Expr number() {
    size_t start = pos;
    while (pos < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.'))
      ++pos;
    std::string text = s.substr(start, pos - start);
    try {
      return Expr::num(Scalar::parse_exact(text));
    } catch (const Error&) {
      throw ParseError("bad numeric literal '" + text + "'", start);
    }
  }

  Expr identifier() {
    size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    std::string name = s.substr(start, pos - start);
    skip_ws();
    if (pos < s.size() && s[pos] == '(') {
      if (!is_known_function(name))
        throw ParseError("unknown function '" + name + "'", start);
      ++pos;
      Expr arg = sum();
      if (pos >= s.size() || s[pos] != ')')
        throw ParseError("syntax error: unterminated call", pos);
      ++pos;
      return Expr::call(name, std::move(arg));
    }
    if (name == "pi") return Expr::num(Scalar::real(3.14159265358979323846264338327950288));
    // Which symbol plays the variable is decided later by bind_variable.
    return Expr::param(name);
  }
};

int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::add:
    case Expr::Kind::sub:
      return 1;
    case Expr::Kind::mul:
    case Expr::Kind::div:
      return 2;
    case Expr::Kind::neg:
      return 3;
    case Expr::Kind::pow:
      return 4;
    default:
      return 5;
  }
}

void print_rec(const Expr& e, std::ostream& os, int parent_prec) {
  int prec = precedence(e.kind);
  bool need_parens = prec < parent_prec;
  if (need_parens) os << "(";
  switch (e.kind) {
    case Expr::Kind::number: {
      const Scalar& v = e.number;
      if (v.is_exact() && !v.is_real()) {
        os << "(" << v.str() << ")";
      } else {
        os << v.str();
      }
      break;
    }
    case Expr::Kind::variable:
    case Expr::Kind::parameter:
      os << e.name;
      break;
    case Expr::Kind::add:
      print_rec(e.kids[0], os, prec);
      os << "+";
      print_rec(e.kids[1], os, prec);
      break;
    case Expr::Kind::sub:
      print_rec(e.kids[0], os, prec);
      os << "-";
      print_rec(e.kids[1], os, prec + 1);
      break;
    case Expr::Kind::mul:
      print_rec(e.kids[0], os, prec);
      os << "*";
      print_rec(e.kids[1], os, prec);
      break;
    case Expr::Kind::div:
      print_rec(e.kids[0], os, prec);
      os << "/";
      print_rec(e.kids[1], os, prec + 1);
      break;
    case Expr::Kind::pow:
      print_rec(e.kids[0], os, prec + 1);
      os << "^";
      print_rec(e.kids[1], os, prec);
      break;
    case Expr::Kind::neg:
      os << "-";
      print_rec(e.kids[0], os, prec + 1);
      break;
    case Expr::Kind::call:
      os << e.name << "(";
      print_rec(e.kids[0], os, 0);
      os << ")";
      break;
  }
  if (need_parens) os << ")";
}

}  // namespace

Expr parse_expression(const std::string& text) {
  if (text.empty()) throw ParseError("empty expression", 0);
  Parser p(text);
  return p.parse();
}

std::string print_expression(const Expr& e) {
  std::ostringstream os;
  print_rec(e, os, 0);
  return os.str();
}

std::complex<double> eval_expression(const Expr& e, std::complex<double> x,
                                     const std::map<std::string, Scalar>& params) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::number:
      return e.number.to_complex();
    case K::variable:
      return x;
    case K::parameter: {
      auto it = params.find(e.name);
      if (it == params.end()) throw DomainError("unbound parameter: " + e.name);
      return it->second.to_complex();
    }
    case K::add:
      return eval_expression(e.kids[0], x, params) + eval_expression(e.kids[1], x, params);
    case K::sub:
      return eval_expression(e.kids[0], x, params) - eval_expression(e.kids[1], x, params);
    case K::mul:
      return eval_expression(e.kids[0], x, params) * eval_expression(e.kids[1], x, params);
    case K::div:
      return eval_expression(e.kids[0], x, params) / eval_expression(e.kids[1], x, params);
    case K::pow:
      return std::pow(eval_expression(e.kids[0], x, params),
                      eval_expression(e.kids[1], x, params));
    case K::neg:
      return -eval_expression(e.kids[0], x, params);
    case K::call: {
      auto v = eval_expression(e.kids[0], x, params);
      if (e.name == "sin") return std::sin(v);
      if (e.name == "cos") return std::cos(v);
      if (e.name == "exp") return std::exp(v);
      if (e.name == "sinc") return v == std::complex<double>(0.0, 0.0) ? 1.0 : std::sin(v) / v;
      if (e.name == "log") return std::log(v);
      if (e.name == "sqrt") return std::sqrt(v);
      if (e.name == "abs") return std::abs(v);
      throw DomainError("unknown function: " + e.name);
    }
  }
  throw DomainError("bad expression node");
}

Expr bind_variable(const Expr& e, const std::string& var) {
  if (e.kind == Expr::Kind::parameter && e.name == var) return Expr::var(var);
  Expr out = e;
  for (auto& k : out.kids) k = bind_variable(k, var);
  return out;
}

Expr substitute_params(const Expr& e, const std::map<std::string, Scalar>& params) {
  if (e.kind == Expr::Kind::parameter) {
    auto it = params.find(e.name);
    if (it != params.end()) return Expr::num(it->second);
    return e;
  }
  Expr out = e;
  for (auto& k : out.kids) k = substitute_params(k, params);
  return out;
}

void collect_params(const Expr& e, const std::string& var, std::vector<std::string>& out) {
  if (e.kind == Expr::Kind::parameter && e.name != var) {
    if (std::find(out.begin(), out.end(), e.name) == out.end()) out.push_back(e.name);
  }
  for (const auto& k : e.kids) collect_params(k, var, out);
}

std::vector<std::string> parameter_names(const Expr& e, const std::string& var) {
  std::vector<std::string> out;
  collect_params(e, var, out);
  return out;
}

}  // namespace opint
