#include <stdexcept>

#include "defgeo/expr.hpp"
#include "expr_node.hpp"

namespace defgeo {

namespace {

bool depends(const NodePtr& n, int v) {
  switch (n->kind) {
    case Expr::Kind::Number: return false;
    case Expr::Kind::Variable: return n->variable == v;
    case Expr::Kind::Negate:
    case Expr::Kind::Call: return depends(n->a, v);
    case Expr::Kind::Binary: return depends(n->a, v) || depends(n->b, v);
  }
  return false;
}

NodePtr num(double v) { return make_number(v); }

NodePtr diff(const NodePtr& n, int v) {
  if (!depends(n, v)) return num(0.0);
  switch (n->kind) {
    case Expr::Kind::Number: return num(0.0);
    case Expr::Kind::Variable: return num(1.0);
    case Expr::Kind::Negate: return fold_negate(diff(n->a, v));
    case Expr::Kind::Binary: {
      const NodePtr& u = n->a;
      const NodePtr& w = n->b;
      switch (n->op) {
        case BinaryOp::Add: return fold_add(diff(u, v), diff(w, v));
        case BinaryOp::Sub: return fold_sub(diff(u, v), diff(w, v));
        case BinaryOp::Mul:
          return fold_add(fold_mul(diff(u, v), w), fold_mul(u, diff(w, v)));
        case BinaryOp::Div:
          // (u'w - uw') / w^2
          return fold_div(fold_sub(fold_mul(diff(u, v), w), fold_mul(u, diff(w, v))),
                          fold_pow(w, num(2.0)));
        case BinaryOp::Pow:
          if (!depends(w, v)) {
            // w * u^(w-1) * u'
            return fold_mul(fold_mul(w, fold_pow(u, fold_sub(w, num(1.0)))), diff(u, v));
          }
          // u^w log(u) w' + w u^(w-1) u'; the first product vanishes with u^w
          return fold_add(fold_mul(make_absorbing_product(n, fold_call(Func::Log, u)), diff(w, v)),
                          fold_mul(fold_mul(w, fold_pow(u, fold_sub(w, num(1.0)))), diff(u, v)));
      }
      break;
    }
    case Expr::Kind::Call: {
      const NodePtr& u = n->a;
      NodePtr du = diff(u, v);
      switch (n->func) {
        case Func::Sin: return fold_mul(fold_call(Func::Cos, u), du);
        case Func::Cos: return fold_negate(fold_mul(fold_call(Func::Sin, u), du));
        case Func::Tan: return fold_div(du, fold_pow(fold_call(Func::Cos, u), num(2.0)));
        case Func::Cot: return fold_negate(fold_div(du, fold_pow(fold_call(Func::Sin, u), num(2.0))));
        case Func::Exp: return fold_mul(n, du);
        case Func::Log: return fold_div(du, u);
        case Func::Sqrt: return fold_div(du, fold_mul(num(2.0), n));
        case Func::Sinh: return fold_mul(fold_call(Func::Cosh, u), du);
        case Func::Cosh: return fold_mul(fold_call(Func::Sinh, u), du);
        case Func::Abs: return fold_mul(fold_div(u, n), du);
      }
      break;
    }
  }
  throw std::logic_error("unhandled node in symbolic_partial");
}

}  // namespace

Expr symbolic_partial(const Expr& e, int variable) {
  if (variable < 0 || variable >= static_cast<int>(e.dimension()))
    throw std::out_of_range("differentiation variable out of range");
  return make_expr(diff(node_ptr(e), variable),
                   e.shared_names());
}

Expr symbolic_partial(const Expr& e, std::string_view variable) {
  const auto& names = e.coordinate_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == variable) return symbolic_partial(e, static_cast<int>(i));
  throw std::invalid_argument("unknown differentiation variable '" + std::string(variable) + "'");
}

}  // namespace defgeo
