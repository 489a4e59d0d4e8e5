#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace defgeo {

enum class Func { Sin, Cos, Tan, Cot, Exp, Log, Sqrt, Sinh, Cosh, Abs };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

std::string_view func_name(Func f);

/// Immutable expression tree over the coordinates of a chart.
///
/// Grammar, loosest to tightest: `+ -`, then `* /`, then unary minus, then
/// `^` (right associative). So `-x^2` is `-(x^2)` and `2^3^2` is `2^(3^2)`.
/// Functions: sin cos tan cot exp log sqrt sinh cosh abs. The identifier `pi`
/// is a literal unless a coordinate claims the name.
///
/// Nodes are shared between trees and never mutated, so copies are cheap and
/// evaluation is safe from any number of threads.
class Expr {
 public:
  enum class Kind { Number, Variable, Negate, Binary, Call };
  using Names = std::vector<std::string>;

  static Expr number(double value, std::shared_ptr<const Names> names);
  static Expr variable(int index, std::shared_ptr<const Names> names);

  Kind kind() const;
  double number_value() const;
  int variable_index() const;
  BinaryOp binary_op() const;
  Func func() const;
  /// Children. `lhs`/`rhs` for Binary; `operand` for Negate and Call.
  Expr lhs() const;
  Expr rhs() const;
  Expr operand() const;

  const Names& coordinate_names() const { return *names_; }
  const std::shared_ptr<const Names>& shared_names() const { return names_; }
  std::size_t dimension() const { return names_->size(); }

  /// Evaluates at a point given in chart coordinates. Throws DomainError for
  /// log/sqrt of negatives, division by zero, poles of tan/cot and any other
  /// non-finite result.
  double eval(std::span<const double> point) const;

  bool depends_on(int variable) const;
  std::size_t node_count() const;
  bool is_number(double value) const;

  /// Source text that parses back to a structurally identical tree.
  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& base, const Expr& exponent);
  friend Expr apply(Func f, const Expr& argument);

  struct Node;

 private:
  Expr(std::shared_ptr<const Node> node, std::shared_ptr<const Names> names)
      : node_(std::move(node)), names_(std::move(names)) {}

  std::shared_ptr<const Node> node_;
  std::shared_ptr<const Names> names_;

  friend Expr make_expr(std::shared_ptr<const Node>, std::shared_ptr<const Names>);
  friend const std::shared_ptr<const Node>& node_ptr(const Expr&);
};

Expr constant(double value, const Expr& like);

/// Parses `source` against the given coordinate names. Throws ParseError
/// (with byte offset) or UnknownIdentifierError.
Expr parse(std::string_view source, const std::vector<std::string>& coordinate_names);
Expr parse(std::string_view source, std::shared_ptr<const Expr::Names> coordinate_names);

/// Exact partial derivative. Differentiation is total on the grammar; the
/// result may be undefined where the input is (e.g. d|u| at u = 0).
Expr symbolic_partial(const Expr& e, int variable);
Expr symbolic_partial(const Expr& e, std::string_view variable);

/// Checks that names are distinct identifiers and do not shadow functions.
void validate_coordinate_names(const std::vector<std::string>& names);

}  // namespace defgeo
