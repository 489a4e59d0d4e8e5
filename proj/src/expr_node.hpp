#pragma once

#include "defgeo/expr.hpp"

namespace defgeo {

struct Expr::Node {
  Kind kind;
  double value = 0.0;
  int variable = -1;
  BinaryOp op = BinaryOp::Add;
  Func func = Func::Sin;
  // Product whose value is 0 whenever the left factor is exactly 0 (u^w log u).
  bool zero_absorbs = false;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

using NodePtr = std::shared_ptr<const Expr::Node>;

inline Expr make_expr(NodePtr node, std::shared_ptr<const Expr::Names> names) {
  return Expr(std::move(node), std::move(names));
}

inline const NodePtr& node_ptr(const Expr& e) { return e.node_; }

NodePtr make_number(double v);
NodePtr make_variable(int index);
NodePtr make_negate(NodePtr a);
NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b);
NodePtr make_call(Func f, NodePtr a);
NodePtr make_absorbing_product(NodePtr a, NodePtr b);

// Builders that fold trivial constants (0 + u, 1 * u, u ^ 1, ...). Used by the
// differentiator to keep trees small; never used by the parser.
NodePtr fold_add(NodePtr a, NodePtr b);
NodePtr fold_sub(NodePtr a, NodePtr b);
NodePtr fold_mul(NodePtr a, NodePtr b);
NodePtr fold_div(NodePtr a, NodePtr b);
NodePtr fold_pow(NodePtr a, NodePtr b);
NodePtr fold_negate(NodePtr a);
NodePtr fold_call(Func f, NodePtr a);

std::string render(const Expr::Node& n, const Expr::Names& names);

}  // namespace defgeo
