#include "defgeo/expr.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "defgeo/errors.hpp"
#include "expr_node.hpp"

namespace defgeo {

std::string_view func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Cot: return "cot";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
    case Func::Abs: return "abs";
  }
  return "?";
}

NodePtr make_number(double v) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Kind::Number;
  n->value = v;
  return n;
}

NodePtr make_variable(int index) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Kind::Variable;
  n->variable = index;
  return n;
}

NodePtr make_negate(NodePtr a) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Kind::Negate;
  n->a = std::move(a);
  return n;
}

NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Kind::Binary;
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_absorbing_product(NodePtr a, NodePtr b) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Kind::Binary;
  n->op = BinaryOp::Mul;
  n->zero_absorbs = true;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_call(Func f, NodePtr a) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Kind::Call;
  n->func = f;
  n->a = std::move(a);
  return n;
}

namespace {

bool is_num(const NodePtr& n) { return n->kind == Expr::Kind::Number; }
bool is_num(const NodePtr& n, double v) { return is_num(n) && n->value == v; }

}  // namespace

NodePtr fold_add(NodePtr a, NodePtr b) {
  if (is_num(a) && is_num(b)) return make_number(a->value + b->value);
  if (is_num(a, 0.0)) return b;
  if (is_num(b, 0.0)) return a;
  return make_binary(BinaryOp::Add, std::move(a), std::move(b));
}

NodePtr fold_sub(NodePtr a, NodePtr b) {
  if (is_num(a) && is_num(b)) return make_number(a->value - b->value);
  if (is_num(b, 0.0)) return a;
  if (is_num(a, 0.0)) return fold_negate(std::move(b));
  return make_binary(BinaryOp::Sub, std::move(a), std::move(b));
}

NodePtr fold_mul(NodePtr a, NodePtr b) {
  if (is_num(a) && is_num(b)) return make_number(a->value * b->value);
  if (is_num(a, 0.0) || is_num(b, 0.0)) return make_number(0.0);
  if (is_num(a, 1.0)) return b;
  if (is_num(b, 1.0)) return a;
  if (is_num(a, -1.0)) return fold_negate(std::move(b));
  if (is_num(b, -1.0)) return fold_negate(std::move(a));
  return make_binary(BinaryOp::Mul, std::move(a), std::move(b));
}

NodePtr fold_div(NodePtr a, NodePtr b) {
  if (is_num(a) && is_num(b) && b->value != 0.0) return make_number(a->value / b->value);
  if (is_num(a, 0.0)) return make_number(0.0);
  if (is_num(b, 1.0)) return a;
  return make_binary(BinaryOp::Div, std::move(a), std::move(b));
}

NodePtr fold_pow(NodePtr a, NodePtr b) {
  if (is_num(b, 1.0)) return a;
  if (is_num(b, 0.0)) return make_number(1.0);
  return make_binary(BinaryOp::Pow, std::move(a), std::move(b));
}

NodePtr fold_negate(NodePtr a) {
  if (is_num(a)) return make_number(-a->value);
  if (a->kind == Expr::Kind::Negate) return a->a;
  return make_negate(std::move(a));
}

NodePtr fold_call(Func f, NodePtr a) { return make_call(f, std::move(a)); }

// ---------------------------------------------------------------------------
// Expr accessors

Expr Expr::number(double value, std::shared_ptr<const Names> names) {
  return Expr(make_number(value), std::move(names));
}

Expr Expr::variable(int index, std::shared_ptr<const Names> names) {
  if (index < 0 || index >= static_cast<int>(names->size()))
    throw std::out_of_range("variable index out of range");
  return Expr(make_variable(index), std::move(names));
}

Expr::Kind Expr::kind() const { return node_->kind; }

double Expr::number_value() const {
  if (node_->kind != Kind::Number) throw std::logic_error("not a number node");
  return node_->value;
}

int Expr::variable_index() const {
  if (node_->kind != Kind::Variable) throw std::logic_error("not a variable node");
  return node_->variable;
}

BinaryOp Expr::binary_op() const {
  if (node_->kind != Kind::Binary) throw std::logic_error("not a binary node");
  return node_->op;
}

Func Expr::func() const {
  if (node_->kind != Kind::Call) throw std::logic_error("not a call node");
  return node_->func;
}

Expr Expr::lhs() const {
  if (node_->kind != Kind::Binary) throw std::logic_error("not a binary node");
  return Expr(node_->a, names_);
}

Expr Expr::rhs() const {
  if (node_->kind != Kind::Binary) throw std::logic_error("not a binary node");
  return Expr(node_->b, names_);
}

Expr Expr::operand() const {
  if (node_->kind != Kind::Negate && node_->kind != Kind::Call)
    throw std::logic_error("node has no single operand");
  return Expr(node_->a, names_);
}

bool Expr::is_number(double value) const {
  return node_->kind == Kind::Number && node_->value == value;
}

namespace {

bool depends(const Expr::Node& n, int v) {
  switch (n.kind) {
    case Expr::Kind::Number: return false;
    case Expr::Kind::Variable: return n.variable == v;
    case Expr::Kind::Negate:
    case Expr::Kind::Call: return depends(*n.a, v);
    case Expr::Kind::Binary: return depends(*n.a, v) || depends(*n.b, v);
  }
  return false;
}

std::size_t count(const Expr::Node& n) {
  switch (n.kind) {
    case Expr::Kind::Number:
    case Expr::Kind::Variable: return 1;
    case Expr::Kind::Negate:
    case Expr::Kind::Call: return 1 + count(*n.a);
    case Expr::Kind::Binary: return 1 + count(*n.a) + count(*n.b);
  }
  return 0;
}

bool same(const Expr::Node& x, const Expr::Node& y) {
  if (&x == &y) return true;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Expr::Kind::Number: return x.value == y.value;
    case Expr::Kind::Variable: return x.variable == y.variable;
    case Expr::Kind::Negate: return same(*x.a, *y.a);
    case Expr::Kind::Call: return x.func == y.func && same(*x.a, *y.a);
    case Expr::Kind::Binary: return x.op == y.op && same(*x.a, *y.a) && same(*x.b, *y.b);
  }
  return false;
}

}  // namespace

bool Expr::depends_on(int variable) const { return depends(*node_, variable); }
std::size_t Expr::node_count() const { return count(*node_); }

bool operator==(const Expr& a, const Expr& b) {
  return a.coordinate_names() == b.coordinate_names() && same(*a.node_, *b.node_);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

std::string format_point(std::span<const double> p) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ')';
  return os.str();
}

// Distance from u to the nearest multiple of `period`, scaled by max(1,|u|).
bool near_multiple(double u, double period, double offset) {
  const double k = std::round((u - offset) / period);
  const double r = u - offset - k * period;
  return std::abs(r) <= 1e-14 * std::max(1.0, std::abs(u));
}

class Evaluator {
 public:
  Evaluator(std::span<const double> p, const Expr::Names& names) : p_(p), names_(names) {}

  double eval(const Expr::Node& n) const {
    switch (n.kind) {
      case Expr::Kind::Number: return n.value;
      case Expr::Kind::Variable: return p_[static_cast<std::size_t>(n.variable)];
      case Expr::Kind::Negate: return -eval(*n.a);
      case Expr::Kind::Binary: return binary(n);
      case Expr::Kind::Call: return call(n);
    }
    return 0.0;
  }

 private:
  [[noreturn]] void fail(const std::string& what, const Expr::Node& n) const {
    throw DomainError(what, render(n, names_), format_point(p_));
  }

  double checked(double v, const Expr::Node& n) const {
    if (!std::isfinite(v)) fail("non-finite result", n);
    return v;
  }

  double binary(const Expr::Node& n) const {
    const double a = eval(*n.a);
    if (n.zero_absorbs && a == 0.0) return 0.0;
    const double b = eval(*n.b);
    switch (n.op) {
      case BinaryOp::Add: return checked(a + b, n);
      case BinaryOp::Sub: return checked(a - b, n);
      case BinaryOp::Mul: return checked(a * b, n);
      case BinaryOp::Div:
        if (b == 0.0) fail("division by zero", n);
        return checked(a / b, n);
      case BinaryOp::Pow:
        if (a == 0.0 && b < 0.0) fail("zero raised to a negative power", n);
        if (a < 0.0 && b != std::trunc(b)) fail("negative base with non-integer exponent", n);
        return checked(std::pow(a, b), n);
    }
    return 0.0;
  }

  double call(const Expr::Node& n) const {
    const double u = eval(*n.a);
    switch (n.func) {
      case Func::Sin: return std::sin(u);
      case Func::Cos: return std::cos(u);
      case Func::Tan:
        if (near_multiple(u, std::numbers::pi, std::numbers::pi / 2)) fail("tan at a pole", n);
        return checked(std::tan(u), n);
      case Func::Cot:
        if (near_multiple(u, std::numbers::pi, 0.0)) fail("cot at a pole", n);
        return checked(std::cos(u) / std::sin(u), n);
      case Func::Exp: return checked(std::exp(u), n);
      case Func::Log:
        if (u <= 0.0) fail("log of a non-positive value", n);
        return std::log(u);
      case Func::Sqrt:
        if (u < 0.0) fail("sqrt of a negative value", n);
        return std::sqrt(u);
      case Func::Sinh: return checked(std::sinh(u), n);
      case Func::Cosh: return checked(std::cosh(u), n);
      case Func::Abs: return std::abs(u);
    }
    return 0.0;
  }

  std::span<const double> p_;
  const Expr::Names& names_;
};

}  // namespace

double Expr::eval(std::span<const double> point) const {
  if (point.size() != names_->size())
    throw std::invalid_argument("point has " + std::to_string(point.size()) +
                                " coordinates, expression expects " +
                                std::to_string(names_->size()));
  return Evaluator(point, *names_).eval(*node_);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

constexpr int kPrecAdd = 1;
constexpr int kPrecMul = 2;
constexpr int kPrecUnary = 3;
constexpr int kPrecPow = 4;
constexpr int kPrecAtom = 5;

int precedence(const Expr::Node& n) {
  switch (n.kind) {
    case Expr::Kind::Number: return n.value < 0.0 || std::signbit(n.value) ? kPrecUnary : kPrecAtom;
    case Expr::Kind::Variable:
    case Expr::Kind::Call: return kPrecAtom;
    case Expr::Kind::Negate: return kPrecUnary;
    case Expr::Kind::Binary:
      switch (n.op) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return kPrecAdd;
        case BinaryOp::Mul:
        case BinaryOp::Div: return kPrecMul;
        case BinaryOp::Pow: return kPrecPow;
      }
  }
  return kPrecAtom;
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void emit(const Expr::Node& n, const Expr::Names& names, std::string& out);

void emit_wrapped(const Expr::Node& n, bool parens, const Expr::Names& names, std::string& out) {
  if (parens) out += '(';
  emit(n, names, out);
  if (parens) out += ')';
}

void emit(const Expr::Node& n, const Expr::Names& names, std::string& out) {
  switch (n.kind) {
    case Expr::Kind::Number: out += format_number(n.value); return;
    case Expr::Kind::Variable: out += names[static_cast<std::size_t>(n.variable)]; return;
    case Expr::Kind::Negate:
      out += '-';
      emit_wrapped(*n.a, precedence(*n.a) < kPrecUnary, names, out);
      return;
    case Expr::Kind::Call:
      out += func_name(n.func);
      out += '(';
      emit(*n.a, names, out);
      out += ')';
      return;
    case Expr::Kind::Binary: {
      const int p = precedence(n);
      if (n.op == BinaryOp::Pow) {
        emit_wrapped(*n.a, precedence(*n.a) <= kPrecPow, names, out);
        out += '^';
        emit_wrapped(*n.b, precedence(*n.b) < kPrecUnary, names, out);
        return;
      }
      emit_wrapped(*n.a, precedence(*n.a) < p, names, out);
      switch (n.op) {
        case BinaryOp::Add: out += " + "; break;
        case BinaryOp::Sub: out += " - "; break;
        case BinaryOp::Mul: out += '*'; break;
        case BinaryOp::Div: out += '/'; break;
        case BinaryOp::Pow: break;
      }
      emit_wrapped(*n.b, precedence(*n.b) <= p, names, out);
      return;
    }
  }
}

}  // namespace

std::string render(const Expr::Node& n, const Expr::Names& names) {
  std::string out;
  emit(n, names, out);
  return out;
}

std::string Expr::to_string() const { return render(*node_, *names_); }

// ---------------------------------------------------------------------------
// Builders

namespace {

const std::shared_ptr<const Expr::Names>& common_names(const Expr& a, const Expr& b) {
  if (a.shared_names() != b.shared_names() && a.coordinate_names() != b.coordinate_names())
    throw std::invalid_argument("combining expressions over different coordinates");
  return a.shared_names();
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  return make_expr(make_binary(BinaryOp::Add, a.node_, b.node_), common_names(a, b));
}
Expr operator-(const Expr& a, const Expr& b) {
  return make_expr(make_binary(BinaryOp::Sub, a.node_, b.node_), common_names(a, b));
}
Expr operator*(const Expr& a, const Expr& b) {
  return make_expr(make_binary(BinaryOp::Mul, a.node_, b.node_), common_names(a, b));
}
Expr operator/(const Expr& a, const Expr& b) {
  return make_expr(make_binary(BinaryOp::Div, a.node_, b.node_), common_names(a, b));
}
Expr operator-(const Expr& a) { return make_expr(make_negate(a.node_), a.names_); }
Expr pow(const Expr& base, const Expr& exponent) {
  return make_expr(make_binary(BinaryOp::Pow, base.node_, exponent.node_), common_names(base, exponent));
}
Expr apply(Func f, const Expr& argument) { return make_expr(make_call(f, argument.node_), argument.names_); }

Expr constant(double value, const Expr& like) { return Expr::number(value, like.shared_names()); }

}  // namespace defgeo
