#pragma once

#include <Eigen/Core>

#include "tomolearn/types.hpp"

namespace tomolearn {

enum class TransformKind { identity, haar2d };

/// Orthonormal analysis operator W mapping images to coefficient vectors.
/// haar2d is the full-depth 2D Haar transform (Mallat layout, square side
/// must be a power of two); identity keeps the pixel basis. Both are
/// orthogonal, so synthesis is simultaneously the adjoint and the inverse.
class AnalysisTransform {
 public:
  static AnalysisTransform identity(int side);
  static AnalysisTransform haar2d(int side);

  TransformKind kind() const { return kind_; }
  int side() const { return side_; }
  Eigen::Index size() const { return Eigen::Index(side_) * side_; }

  Vector analysis(const Vector& img) const;
  Vector synthesis(const Vector& coef) const;

  /// Dyadic level of each coefficient in analysis() output order. Detail
  /// bands of block size 2^m get level m, the approximation entry level 0;
  /// identity transforms are all level 0.
  const Eigen::VectorXi& levels() const { return levels_; }
  /// Number of distinct levels: log2(side) for haar2d, 1 for identity.
  int n_levels() const { return n_levels_; }

 private:
  AnalysisTransform(TransformKind kind, int side);
  TransformKind kind_;
  int side_;
  int n_levels_;
  Eigen::VectorXi levels_;
};

Image synthesize_image(const AnalysisTransform& w, const Vector& coef);

}  // namespace tomolearn
