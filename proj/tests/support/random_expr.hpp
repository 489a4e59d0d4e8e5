#pragma once

// Random expression trees and an independent finite-difference oracle for
// property tests. Trees are built through the public Expr builders so the
// generator never goes through the parser it is used to check.

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "defgeo/errors.hpp"
#include "defgeo/expr.hpp"

namespace defgeo::testing {

class RandomExprGenerator {
 public:
  RandomExprGenerator(std::shared_ptr<const Expr::Names> names, std::uint64_t seed)
      : names_(std::move(names)), rng_(seed) {}

  Expr generate(int max_depth) { return node(max_depth); }

  std::vector<double> point(double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> p(names_->size());
    for (double& c : p) c = u(rng_);
    return p;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  Expr leaf() {
    std::uniform_int_distribution<int> pick(0, 3);
    if (pick(rng_) == 0) {
      std::uniform_int_distribution<int> hundredths(10, 300);
      return Expr::number(hundredths(rng_) / 100.0, names_);
    }
    std::uniform_int_distribution<int> var(0, static_cast<int>(names_->size()) - 1);
    return Expr::variable(var(rng_), names_);
  }

  Expr node(int depth) {
    if (depth <= 0) return leaf();
    std::uniform_int_distribution<int> pick(0, 11);
    switch (pick(rng_)) {
      case 0: return leaf();
      case 1: return node(depth - 1) + node(depth - 1);
      case 2: return node(depth - 1) - node(depth - 1);
      case 3:
      case 4: return node(depth - 1) * node(depth - 1);
      case 5: return node(depth - 1) / node(depth - 1);
      case 6: {
        std::uniform_int_distribution<int> e(2, 3);
        return pow(node(depth - 1), Expr::number(e(rng_), names_));
      }
      case 7: return -node(depth - 1);
      case 8: return pow(node(depth - 1), node(depth - 1));
      default: {
        static constexpr Func funcs[] = {Func::Sin,  Func::Cos,  Func::Tan,  Func::Cot,  Func::Exp,
                                         Func::Log,  Func::Sqrt, Func::Sinh, Func::Cosh, Func::Abs};
        std::uniform_int_distribution<int> f(0, 9);
        return apply(funcs[f(rng_)], node(depth - 1));
      }
    }
  }

  std::shared_ptr<const Expr::Names> names_;
  std::mt19937_64 rng_;
};

inline double eval_shifted(const Expr& e, std::vector<double> p, int var, double delta) {
  p[static_cast<std::size_t>(var)] += delta;
  return e.eval(p);
}

/// (f(p + h e_v) - f(p - h e_v)) / 2h.
inline double central_difference(const Expr& e, const std::vector<double>& p, int var, double h) {
  return (eval_shifted(e, p, var, h) - eval_shifted(e, p, var, -h)) / (2.0 * h);
}

/// Fourth-order five-point stencil.
inline double five_point(const Expr& e, const std::vector<double>& p, int var, double h) {
  return (-eval_shifted(e, p, var, 2 * h) + 8 * eval_shifted(e, p, var, h) - 8 * eval_shifted(e, p, var, -h) +
          eval_shifted(e, p, var, -2 * h)) /
         (12.0 * h);
}

/// Finite-difference estimate of de/dvar at p if the expression is defined
/// and smooth enough there for a step-1e-5 central difference to be
/// meaningful; nullopt otherwise. Decided from function values only.
inline std::optional<double> well_conditioned_fd(const Expr& e, const std::vector<double>& p, int var) {
  try {
    for (double d : {-2e-3, -1e-3, 0.0, 1e-3, 2e-3})
      if (std::abs(eval_shifted(e, p, var, d)) > 1e4) return std::nullopt;
    const double fd = central_difference(e, p, var, 1e-5);
    const double ref = five_point(e, p, var, 1e-3);
    if (!std::isfinite(fd) || std::abs(fd) > 1e4) return std::nullopt;
    if (std::abs(fd - ref) > 1e-7 * (1.0 + std::abs(fd))) return std::nullopt;
    return fd;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace defgeo::testing
