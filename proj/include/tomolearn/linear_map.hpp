#pragma once

#include "tomolearn/random.hpp"
#include "tomolearn/types.hpp"

namespace tomolearn {

/// Matrix-free linear operator between flat vectors.
class LinearMap {
 public:
  virtual ~LinearMap() = default;
  virtual Eigen::Index rows() const = 0;
  virtual Eigen::Index cols() const = 0;
  virtual Vector apply(const Vector& x) const = 0;
  virtual Vector apply_adjoint(const Vector& y) const = 0;
};

/// Dense matrix wrapped as a LinearMap; handy for toy operators and oracles.
class DenseMap final : public LinearMap {
 public:
  explicit DenseMap(Matrix m) : m_(std::move(m)) {}
  Eigen::Index rows() const override { return m_.rows(); }
  Eigen::Index cols() const override { return m_.cols(); }
  Vector apply(const Vector& x) const override {
    if (x.size() != m_.cols()) throw DimensionError("DenseMap::apply: length mismatch");
    return m_ * x;
  }
  Vector apply_adjoint(const Vector& y) const override {
    if (y.size() != m_.rows()) throw DimensionError("DenseMap::apply_adjoint: length mismatch");
    return m_.transpose() * y;
  }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

/// Power-iteration estimate of the largest singular value, relative
/// accuracy ~1e-4 or better, deterministic given the seed.
double estimate_op_norm(const LinearMap& op, RngSeed seed = RngSeed{0x9e0fb7a351ull, 7},
                        double tol = 1e-7, int max_iters = 5000);

/// Column-by-column densification. Throws CapabilityError when the result
/// would exceed max_entries.
Matrix materialize(const LinearMap& op, Eigen::Index max_entries = Eigen::Index(1) << 26);

}  // namespace tomolearn
