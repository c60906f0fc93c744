#include "umt/affine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "umt/errors.hpp"

namespace umt {

AffineMap::AffineMap(Matrix linear, Vector offset) : linear_(std::move(linear)), offset_(std::move(offset)) {
  if (linear_.rows() != linear_.cols() || linear_.rows() != offset_.size()) {
    throw ArgumentError("affine map: linear part must be square and match the offset (" +
                        std::to_string(linear_.rows()) + "x" + std::to_string(linear_.cols()) + " vs " +
                        std::to_string(offset_.size()) + ")");
  }
}

AffineMap AffineMap::identity(Eigen::Index dim) { return {Matrix::Identity(dim, dim), Vector::Zero(dim)}; }

Matrix AffineMap::apply_columns(const Matrix& xs) const {
  return (linear_ * xs).colwise() + offset_;
}

AffineMap AffineMap::inverse() const {
  Eigen::JacobiSVD<Matrix> svd(linear_);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || !std::isfinite(s(0)) || !(s(s.size() - 1) > s(0) * 1e-15)) {
    throw ConditioningError("affine map is not invertible");
  }
  Matrix inv = linear_.partialPivLu().inverse();
  Vector off = -(inv * offset_);
  return {std::move(inv), std::move(off)};
}

double AffineMap::operator_norm() const {
  if (linear_.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(linear_);
  return svd.singularValues()(0);
}

double AffineMap::min_singular_value() const {
  if (linear_.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(linear_);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

AffineMap compose(const AffineMap& outer, const AffineMap& inner) {
  if (outer.dim() != inner.dim()) throw ArgumentError("compose: dimension mismatch");
  return {outer.linear() * inner.linear(), outer.linear() * inner.offset() + outer.offset()};
}

double max_abs_difference(const AffineMap& a, const AffineMap& b) {
  if (a.dim() != b.dim()) throw ArgumentError("max_abs_difference: dimension mismatch");
  return std::max((a.linear() - b.linear()).cwiseAbs().maxCoeff(), (a.offset() - b.offset()).cwiseAbs().maxCoeff());
}

}  // namespace umt
