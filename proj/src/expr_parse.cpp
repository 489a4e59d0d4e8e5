#include <cctype>
#include <charconv>
#include <numbers>
#include <optional>
#include <set>

#include "defgeo/errors.hpp"
#include "defgeo/expr.hpp"
#include "expr_node.hpp"

namespace defgeo {

namespace {

constexpr Func kAllFuncs[] = {Func::Sin,  Func::Cos,  Func::Tan,  Func::Cot,  Func::Exp,
                              Func::Log,  Func::Sqrt, Func::Sinh, Func::Cosh, Func::Abs};

std::optional<Func> lookup_func(std::string_view name) {
  for (Func f : kAllFuncs)
    if (func_name(f) == name) return f;
  return std::nullopt;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// expr   := term (('+' | '-') term)*
// term   := unary (('*' | '/') unary)*
// unary  := '-' unary | power
// power  := atom ('^' unary)?
// atom   := number | identifier | identifier '(' expr ')' | '(' expr ')'
class Parser {
 public:
  Parser(std::string_view src, const Expr::Names& names) : src_(src), names_(names) {}

  NodePtr parse() {
    skip_ws();
    if (at_end()) throw ParseError("empty expression", pos_);
    NodePtr e = expr();
    skip_ws();
    if (!at_end()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    return e;
  }

 private:
  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return at_end() ? '\0' : src_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (at_end()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make_binary(BinaryOp::Add, lhs, term());
      else if (accept('-'))
        lhs = make_binary(BinaryOp::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make_binary(BinaryOp::Mul, lhs, unary());
      else if (accept('/'))
        lhs = make_binary(BinaryOp::Div, lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_negate(unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make_binary(BinaryOp::Pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (at_end()) throw ParseError("unexpected end of input", pos_);
    const char c = peek();
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (ident_start(c)) return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t mantissa = digits();
    if (peek() == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("malformed number", start);
    if (peek() == 'e' || peek() == 'E') {
      const std::size_t save = pos_;
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (digits() == 0) pos_ = save;  // not an exponent; leave 'e' for the caller
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || ptr != src_.data() + pos_) throw ParseError("malformed number", start);
    return make_number(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (!at_end() && ident_char(src_[pos_])) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);

    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return make_variable(static_cast<int>(i));

    if (auto f = lookup_func(name)) {
      skip_ws();
      if (peek() != '(') throw ParseError("expected '(' after function " + std::string(name), pos_);
      ++pos_;
      NodePtr arg = expr();
      expect(')');
      return make_call(*f, arg);
    }
    if (name == "pi") return make_number(std::numbers::pi);
    throw UnknownIdentifierError(std::string(name), start);
  }

  std::string_view src_;
  const Expr::Names& names_;
  std::size_t pos_ = 0;
};

}  // namespace

void validate_coordinate_names(const std::vector<std::string>& names) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty() || !ident_start(n[0]))
      throw std::invalid_argument("invalid coordinate name '" + n + "'");
    for (char c : n)
      if (!ident_char(c)) throw std::invalid_argument("invalid coordinate name '" + n + "'");
    if (lookup_func(n)) throw std::invalid_argument("coordinate name '" + n + "' shadows a function");
    if (!seen.insert(n).second) throw std::invalid_argument("duplicate coordinate name '" + n + "'");
  }
}

Expr parse(std::string_view source, std::shared_ptr<const Expr::Names> coordinate_names) {
  validate_coordinate_names(*coordinate_names);
  NodePtr root = Parser(source, *coordinate_names).parse();
  return make_expr(std::move(root), std::move(coordinate_names));
}

Expr parse(std::string_view source, const std::vector<std::string>& coordinate_names) {
  return parse(source, std::make_shared<const Expr::Names>(coordinate_names));
}

}  // namespace defgeo
