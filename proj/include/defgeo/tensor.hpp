#pragma once

#include <Eigen/Dense>

#include <cassert>
#include <cmath>
#include <vector>

namespace defgeo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense n x n x n array. Index order is [a][b][c], row-major, everywhere in
/// the library. For connection coefficients Gamma^rho_{mu nu} that means
/// (rho, mu, nu).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}

  int dim() const noexcept { return n_; }

  double& operator()(int a, int b, int c) { return data_[index(a, b, c)]; }
  double operator()(int a, int b, int c) const { return data_[index(a, b, c)]; }

  const std::vector<double>& data() const noexcept { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  Tensor3& operator+=(const Tensor3& o) {
    assert(o.n_ == n_);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Tensor3& operator-=(const Tensor3& o) {
    assert(o.n_ == n_);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Tensor3& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
  friend Tensor3 operator*(double s, Tensor3 a) { return a *= s; }
  friend Tensor3 operator*(Tensor3 a, double s) { return a *= s; }

 private:
  std::size_t index(int a, int b, int c) const {
    assert(a >= 0 && a < n_ && b >= 0 && b < n_ && c >= 0 && c < n_);
    return (static_cast<std::size_t>(a) * n_ + b) * n_ + c;
  }

  int n_ = 0;
  std::vector<double> data_;
};

/// Dense n^4 array, row-major over [a][b][c][d].
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

  int dim() const noexcept { return n_; }

  double& operator()(int a, int b, int c, int d) { return data_[index(a, b, c, d)]; }
  double operator()(int a, int b, int c, int d) const { return data_[index(a, b, c, d)]; }

  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t index(int a, int b, int c, int d) const {
    assert(a >= 0 && a < n_ && b >= 0 && b < n_ && c >= 0 && c < n_ && d >= 0 && d < n_);
    return ((static_cast<std::size_t>(a) * n_ + b) * n_ + c) * n_ + d;
  }

  int n_ = 0;
  std::vector<double> data_;
};

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace defgeo
