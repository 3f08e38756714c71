#include "qaction/potential.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "qaction/errors.hpp"

namespace qaction {

// ---------------------------------------------------------------------------
// Expression evaluation / unparse
// ---------------------------------------------------------------------------

double ExpressionAst::eval(double x) const {
  switch (op) {
    case ExprOp::constant: return value;
    case ExprOp::variable: return x;
    case ExprOp::neg: return -args[0]->eval(x);
    case ExprOp::abs: return std::fabs(args[0]->eval(x));
    case ExprOp::exp: return std::exp(args[0]->eval(x));
    case ExprOp::ln: return std::log(args[0]->eval(x));
    case ExprOp::sqrt: return std::sqrt(args[0]->eval(x));
    case ExprOp::sin: return std::sin(args[0]->eval(x));
    case ExprOp::cos: return std::cos(args[0]->eval(x));
    case ExprOp::tanh: return std::tanh(args[0]->eval(x));
    case ExprOp::add: return args[0]->eval(x) + args[1]->eval(x);
    case ExprOp::sub: return args[0]->eval(x) - args[1]->eval(x);
    case ExprOp::mul: return args[0]->eval(x) * args[1]->eval(x);
    case ExprOp::div: return args[0]->eval(x) / args[1]->eval(x);
    case ExprOp::pow: return std::pow(args[0]->eval(x), args[1]->eval(x));
  }
  return 0;
}

namespace {

int precedence(ExprOp op) {
  switch (op) {
    case ExprOp::add:
    case ExprOp::sub: return 1;
    case ExprOp::mul:
    case ExprOp::div: return 2;
    case ExprOp::neg: return 3;
    case ExprOp::pow: return 4;
    default: return 5;
  }
}

const char* func_name(ExprOp op) {
  switch (op) {
    case ExprOp::abs: return "abs";
    case ExprOp::exp: return "exp";
    case ExprOp::ln: return "ln";
    case ExprOp::sqrt: return "sqrt";
    case ExprOp::sin: return "sin";
    case ExprOp::cos: return "cos";
    case ExprOp::tanh: return "tanh";
    default: return "";
  }
}

std::string format_constant(double v, const std::string& name) {
  if (!name.empty()) return name;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string unparse_rec(const ExpressionAst& e, int parent_prec) {
  std::string s;
  int prec = precedence(e.op);
  switch (e.op) {
    case ExprOp::constant: s = format_constant(e.value, e.name); break;
    case ExprOp::variable: s = "x"; break;
    case ExprOp::neg: s = "-" + unparse_rec(*e.args[0], prec); break;
    case ExprOp::abs:
    case ExprOp::exp:
    case ExprOp::ln:
    case ExprOp::sqrt:
    case ExprOp::sin:
    case ExprOp::cos:
    case ExprOp::tanh:
      return std::string(func_name(e.op)) + "(" + unparse_rec(*e.args[0], 0) + ")";
    case ExprOp::add:
      s = unparse_rec(*e.args[0], prec) + "+" + unparse_rec(*e.args[1], prec + 1);
      break;
    case ExprOp::sub:
      s = unparse_rec(*e.args[0], prec) + "-" + unparse_rec(*e.args[1], prec + 1);
      break;
    case ExprOp::mul:
      s = unparse_rec(*e.args[0], prec) + "*" + unparse_rec(*e.args[1], prec + 1);
      break;
    case ExprOp::div:
      s = unparse_rec(*e.args[0], prec) + "/" + unparse_rec(*e.args[1], prec + 1);
      break;
    case ExprOp::pow:
      // Right-associative: parenthesize a left child of equal precedence.
      s = unparse_rec(*e.args[0], prec + 1) + "^" + unparse_rec(*e.args[1], prec);
      break;
  }
  if (prec < parent_prec) s = "(" + s + ")";
  return s;
}

}  // namespace

std::string ExpressionAst::unparse() const { return unparse_rec(*this, 0); }

bool ExpressionAst::equals(const ExpressionAst& other) const {
  if (op != other.op || args.size() != other.args.size()) return false;
  if (op == ExprOp::constant) {
    // Bit-level comparison keeps round-trip checks honest.
    return value == other.value || (std::isnan(value) && std::isnan(other.value));
  }
  for (std::size_t i = 0; i < args.size(); ++i)
    if (!args[i]->equals(*other.args[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Parser {
  const std::string& src;
  const std::map<std::string, double>& params;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) { throw SyntaxError(msg, pos); }

  static ExprPtr make(ExprOp op, std::vector<ExprPtr> args = {}) {
    auto node = std::make_shared<ExpressionAst>();
    node->op = op;
    node->args = std::move(args);
    return node;
  }

  static ExprPtr make_const(double v, std::string name = "") {
    auto node = std::make_shared<ExpressionAst>();
    node->op = ExprOp::constant;
    node->value = v;
    node->name = std::move(name);
    return node;
  }

  ExprPtr parse() {
    ExprPtr e = expression();
    skip_ws();
    if (pos != src.size()) fail("unexpected trailing input");
    return e;
  }

  ExprPtr expression() {
    ExprPtr left = term();
    for (;;) {
      if (consume('+'))
        left = make(ExprOp::add, {left, term()});
      else if (consume('-'))
        left = make(ExprOp::sub, {left, term()});
      else
        return left;
    }
  }

  ExprPtr term() {
    ExprPtr left = unary();
    for (;;) {
      if (consume('*'))
        left = make(ExprOp::mul, {left, unary()});
      else if (consume('/'))
        left = make(ExprOp::div, {left, unary()});
      else
        return left;
    }
  }

  ExprPtr unary() {
    if (consume('-')) return make(ExprOp::neg, {unary()});
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (consume('^')) return make(ExprOp::pow, {base, unary()});
    return base;
  }

  ExprPtr primary() {
    char c = peek();
    if (c == '(') {
      ++pos;
      ExprPtr e = expression();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("expected a number, name, or '('");
  }

  ExprPtr number() {
    skip_ws();
    const char* start = src.c_str() + pos;
    char* end = nullptr;
    double v = std::strtod(start, &end);
    if (end == start) fail("malformed number");
    pos += static_cast<std::size_t>(end - start);
    return make_const(v);
  }

  ExprPtr identifier() {
    skip_ws();
    std::size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    std::string name = src.substr(start, pos - start);

    static const std::map<std::string, ExprOp> functions = {
        {"abs", ExprOp::abs}, {"exp", ExprOp::exp},   {"ln", ExprOp::ln},
        {"sqrt", ExprOp::sqrt}, {"sin", ExprOp::sin}, {"cos", ExprOp::cos},
        {"tanh", ExprOp::tanh}};
    auto fn = functions.find(name);
    if (fn != functions.end()) {
      if (!consume('(')) fail("expected '(' after function name '" + name + "'");
      ExprPtr arg = expression();
      if (!consume(')')) fail("expected ')'");
      return make(fn->second, {arg});
    }
    if (name == "x") return make(ExprOp::variable);
    if (name == "pi") return make_const(M_PI, "pi");
    auto p = params.find(name);
    if (p != params.end()) return make_const(p->second, name);
    throw UnknownIdentifier(name, start);
  }
};

}  // namespace

ExprPtr parse_potential(const std::string& source,
                        const std::map<std::string, double>& params) {
  if (source.empty()) throw SyntaxError("empty expression", 0);
  Parser p{source, params};
  return p.parse();
}

// ---------------------------------------------------------------------------
// Potential evaluation
// ---------------------------------------------------------------------------

namespace {

double param_or(const std::map<std::string, double>& params,
                const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

// -1/(1+exp(z)) without overflow for large z.
double woods_saxon_term(double z) {
  if (z > 36.0) return -std::exp(-z);
  return -1.0 / (1.0 + std::exp(z));
}

}  // namespace

double Potential::eval_base(double x) const {
  switch (kind) {
    case BuiltinTag::none:
      return expr->eval(x);
    case BuiltinTag::infinite_well: {
      double L = param_or(params, "L", 1.0);
      if (x < 0.0 || x > L)
        throw DomainError("infinite_well: x outside [0, L]");
      return 0.0;
    }
    case BuiltinTag::harmonic_1d:
      return 0.5 * x * x;
    case BuiltinTag::harmonic_radial:
      if (x < 0) throw DomainError("harmonic_radial: r < 0");
      return 0.5 * x * x;
    case BuiltinTag::coulomb_1d:
      if (x == 0) throw DomainError("coulomb_1d: x = 0");
      return -1.0 / std::fabs(x);
    case BuiltinTag::coulomb_radial:
      if (x <= 0) throw DomainError("coulomb_radial: r <= 0");
      return -1.0 / x;
    case BuiltinTag::woods_saxon: {
      if (x < 0) throw DomainError("woods_saxon: r < 0");
      double r0 = param_or(params, "r0", 30.0);
      return woods_saxon_term(2.0 * (x - r0));
    }
    case BuiltinTag::double_oscillator: {
      double c = param_or(params, "c", 10.0);
      double a = param_or(params, "a", 3.0);
      double u = std::fabs(x) - a;
      return c * u * u;
    }
  }
  return 0;
}

double Potential::eval(double x) const {
  double v = eval_base(x);
  double numer = 0;
  if (centrifugal_override) {
    numer = *centrifugal_override;
  } else if (angular_momentum_l && *angular_momentum_l > 0) {
    double l = *angular_momentum_l;
    numer = l * (l + 1);
  }
  if (numer != 0) {
    if (x <= 0) throw DomainError("centrifugal term needs x > 0");
    v += numer * hbar * hbar / (2.0 * mass * x * x);
  }
  return v;
}

double Potential::kappa_sq(double x, double energy) const {
  return 2.0 * mass * (energy - eval(x)) / (hbar * hbar);
}

// ---------------------------------------------------------------------------
// Builtin catalog
// ---------------------------------------------------------------------------

Potential builtin(const std::string& name,
                  const std::map<std::string, double>& params,
                  std::optional<int> l, double mass, double hbar) {
  if (mass <= 0) throw InvalidParam("mass must be positive");
  if (hbar <= 0) throw InvalidParam("hbar must be positive");
  if (l && *l < 0) throw InvalidParam("l must be nonnegative");

  Potential p;
  p.params = params;
  p.angular_momentum_l = l;
  p.mass = mass;
  p.hbar = hbar;
  p.name = name;

  const double inf = std::numeric_limits<double>::infinity();

  if (name == "infinite_well") {
    double L = param_or(params, "L", 1.0);
    if (L <= 0) throw InvalidParam("infinite_well: L must be positive");
    p.kind = BuiltinTag::infinite_well;
    p.domain_kind = DomainKind::half_line_with_wall;
    p.wall_left = 0.0;
    p.wall_right = L;
    p.dissociation_limit = inf;
  } else if (name == "harmonic_1d") {
    p.kind = BuiltinTag::harmonic_1d;
    p.domain_kind = DomainKind::full_line;
    p.symmetric = true;
    p.dissociation_limit = inf;
  } else if (name == "harmonic_radial") {
    p.kind = BuiltinTag::harmonic_radial;
    p.dissociation_limit = inf;
    if (!l || *l == 0) {
      p.domain_kind = DomainKind::half_line_with_wall;
      p.wall_left = 0.0;
    } else {
      p.domain_kind = DomainKind::half_line_radial;
    }
  } else if (name == "coulomb_1d") {
    p.kind = BuiltinTag::coulomb_1d;
    p.domain_kind = DomainKind::half_line_with_wall;
    p.wall_left = 0.0;
    p.singular_origin = true;
    p.dissociation_limit = 0.0;
    p.paper_n_offset = 1;  // this spectrum is conventionally counted from n=1
  } else if (name == "coulomb_radial") {
    p.kind = BuiltinTag::coulomb_radial;
    p.dissociation_limit = 0.0;
    if (!l || *l == 0) {
      p.domain_kind = DomainKind::half_line_with_wall;
      p.wall_left = 0.0;
      p.singular_origin = true;
    } else {
      p.domain_kind = DomainKind::half_line_radial;
    }
  } else if (name == "woods_saxon") {
    p.kind = BuiltinTag::woods_saxon;
    p.dissociation_limit = 0.0;
    if (!l || *l == 0) {
      p.domain_kind = DomainKind::half_line_with_wall;
      p.wall_left = 0.0;
    } else {
      p.domain_kind = DomainKind::half_line_radial;
    }
  } else if (name == "double_oscillator") {
    double c = param_or(params, "c", 10.0);
    if (c <= 0) throw InvalidParam("double_oscillator: c must be positive");
    p.kind = BuiltinTag::double_oscillator;
    p.domain_kind = DomainKind::full_line;
    p.symmetric = true;
    p.breakpoints = {0.0};
    p.dissociation_limit = inf;
  } else {
    throw UnknownBuiltin(name);
  }
  return p;
}

Potential from_expression(const std::string& source,
                          const std::map<std::string, double>& params,
                          std::optional<int> l, double mass, double hbar) {
  if (mass <= 0) throw InvalidParam("mass must be positive");
  if (hbar <= 0) throw InvalidParam("hbar must be positive");
  Potential p;
  p.kind = BuiltinTag::none;
  p.expr = parse_potential(source, params);
  p.params = params;
  p.angular_momentum_l = l;
  p.mass = mass;
  p.hbar = hbar;
  p.name = "expr:" + source;
  if (l && *l > 0) {
    p.domain_kind = DomainKind::half_line_radial;
  } else {
    p.domain_kind = DomainKind::full_line;
  }
  // Probe the far field for a dissociation limit. A contracting sequence of
  // differences means a finite asymptote; otherwise treat as confining.
  double v1 = 0, v2 = 0, v3 = 0;
  bool ok = true;
  try {
    v1 = p.eval(1e2);
    v2 = p.eval(1e4);
    v3 = p.eval(1e6);
  } catch (const Error&) {
    ok = false;
  }
  if (ok && std::isfinite(v1) && std::isfinite(v2) && std::isfinite(v3) &&
      std::fabs(v3 - v2) <= 0.5 * std::fabs(v2 - v1) + 1e-12) {
    p.dissociation_limit = v3;
  } else {
    p.dissociation_limit = std::numeric_limits<double>::infinity();
  }
  return p;
}

}  // namespace qaction
