#pragma once

#include <Eigen/Dense>

namespace umt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// x -> linear * x + offset on R^n.
class AffineMap {
 public:
  AffineMap() = default;
  AffineMap(Matrix linear, Vector offset);

  static AffineMap identity(Eigen::Index dim);

  Eigen::Index dim() const { return linear_.rows(); }
  const Matrix& linear() const { return linear_; }
  const Vector& offset() const { return offset_; }

  Vector operator()(const Vector& x) const { return linear_ * x + offset_; }
  // Applies the map to every column.
  Matrix apply_columns(const Matrix& xs) const;

  // Throws ConditioningError when the linear part is numerically singular.
  AffineMap inverse() const;

  double operator_norm() const;
  double min_singular_value() const;

 private:
  Matrix linear_;
  Vector offset_;
};

// (outer o inner)(x) = outer(inner(x)).
AffineMap compose(const AffineMap& outer, const AffineMap& inner);

// Largest absolute entry difference over linear part and offset.
double max_abs_difference(const AffineMap& a, const AffineMap& b);

}  // namespace umt
