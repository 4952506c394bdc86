#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "ckgeo/errors.hpp"

namespace ckgeo {

// Truncated multivariate Taylor value: function value plus first, second
// and third partial derivatives in d variables.  The third-order block is
// stored fully symmetric as one matrix per leading index.
class Jet {
 public:
  explicit Jet(int dim, double value = 0.0)
      : d_(dim),
        v_(value),
        g_(Eigen::VectorXd::Zero(dim)),
        h_(Eigen::MatrixXd::Zero(dim, dim)),
        t_(dim, Eigen::MatrixXd::Zero(dim, dim)) {}

  static Jet constant(int dim, double value) { return Jet(dim, value); }
  static Jet variable(int dim, int index, double value) {
    Jet j(dim, value);
    j.g_[index] = 1.0;
    return j;
  }

  int dim() const { return d_; }
  double value() const { return v_; }
  const Eigen::VectorXd& grad() const { return g_; }
  const Eigen::MatrixXd& hess() const { return h_; }
  // d3(k)(i,j) = third partial wrt x_k, x_i, x_j.
  const Eigen::MatrixXd& d3(int k) const { return t_[k]; }

  Jet operator-() const {
    Jet r(*this);
    r.v_ = -r.v_;
    r.g_ = -r.g_;
    r.h_ = -r.h_;
    for (auto& m : r.t_) m = -m;
    return r;
  }

  Jet& operator+=(const Jet& o) {
    v_ += o.v_;
    g_ += o.g_;
    h_ += o.h_;
    for (int k = 0; k < d_; ++k) t_[k] += o.t_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v_ -= o.v_;
    g_ -= o.g_;
    h_ -= o.h_;
    for (int k = 0; k < d_; ++k) t_[k] -= o.t_[k];
    return *this;
  }
  Jet& operator*=(double c) {
    v_ *= c;
    g_ *= c;
    h_ *= c;
    for (auto& m : t_) m *= c;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double c) { return a *= c; }
  friend Jet operator*(double c, Jet a) { return a *= c; }
  friend Jet operator+(Jet a, double c) {
    a.v_ += c;
    return a;
  }
  friend Jet operator+(double c, Jet a) {
    a.v_ += c;
    return a;
  }
  friend Jet operator-(Jet a, double c) {
    a.v_ -= c;
    return a;
  }
  friend Jet operator-(double c, const Jet& a) { return (-a) + c; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.d_);
    r.v_ = a.v_ * b.v_;
    r.g_ = a.v_ * b.g_ + b.v_ * a.g_;
    r.h_ = a.v_ * b.h_ + b.v_ * a.h_ + a.g_ * b.g_.transpose() +
           b.g_ * a.g_.transpose();
    for (int k = 0; k < a.d_; ++k) {
      r.t_[k] = a.v_ * b.t_[k] + b.v_ * a.t_[k];
      // Leibniz cross terms, all (2,1) splits of (k,i,j).
      r.t_[k] += a.g_[k] * b.h_ + b.g_[k] * a.h_;
      r.t_[k] += a.h_.col(k) * b.g_.transpose() + b.h_.col(k) * a.g_.transpose();
      r.t_[k] += a.g_ * b.h_.row(k) + b.g_ * a.h_.row(k);
    }
    return r;
  }

  // Chain rule for a univariate map with derivatives u0..u3 at value().
  Jet composed_with(double u0, double u1, double u2, double u3) const {
    Jet r(d_);
    r.v_ = u0;
    r.g_ = u1 * g_;
    r.h_ = u1 * h_ + u2 * (g_ * g_.transpose());
    for (int k = 0; k < d_; ++k) {
      r.t_[k] = u1 * t_[k] + u3 * g_[k] * (g_ * g_.transpose());
      r.t_[k] += u2 * (g_[k] * h_ + h_.col(k) * g_.transpose() +
                       g_ * h_.row(k));
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    const double x = b.value();
    if (x == 0.0) throw error(errc::bad_params, "jet division by zero");
    const double i1 = 1.0 / x;
    const Jet inv = b.composed_with(i1, -i1 * i1, 2.0 * i1 * i1 * i1,
                                    -6.0 * i1 * i1 * i1 * i1);
    return a * inv;
  }
  friend Jet operator/(double c, const Jet& b) {
    return Jet::constant(b.d_, c) / b;
  }
  friend Jet operator/(Jet a, double c) { return a *= (1.0 / c); }

 private:
  int d_;
  double v_;
  Eigen::VectorXd g_;
  Eigen::MatrixXd h_;
  std::vector<Eigen::MatrixXd> t_;
};

inline Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return a.composed_with(e, e, e, e);
}
inline Jet log(const Jet& a) {
  const double x = a.value();
  if (x <= 0.0) throw error(errc::bad_params, "jet log of non-positive value");
  return a.composed_with(std::log(x), 1.0 / x, -1.0 / (x * x),
                         2.0 / (x * x * x));
}
inline Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.composed_with(s, c, -s, -c);
}
inline Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.composed_with(c, -s, -c, s);
}
inline Jet sinh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return a.composed_with(s, c, s, c);
}
inline Jet cosh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return a.composed_with(c, s, c, s);
}
inline Jet pow(const Jet& a, double e) {
  const double x = a.value();
  // Integer exponents extend through zero and negative bases.
  if (e == std::round(e) && std::abs(e) < 64) {
    int k = static_cast<int>(std::round(e));
    if (k == 0) return Jet::constant(a.dim(), 1.0);
    const bool neg = k < 0;
    k = std::abs(k);
    Jet r = a;
    for (int i = 1; i < k; ++i) r = r * a;
    return neg ? 1.0 / r : r;
  }
  if (x <= 0.0)
    throw error(errc::bad_params,
                "jet pow with non-integer exponent needs positive base");
  const double p0 = std::pow(x, e);
  return a.composed_with(p0, e * p0 / x, e * (e - 1.0) * p0 / (x * x),
                         e * (e - 1.0) * (e - 2.0) * p0 / (x * x * x));
}
inline Jet sqrt(const Jet& a) { return pow(a, 0.5); }

}  // namespace ckgeo
