#pragma once

#include <mutex>
#include <vector>

#include "tomolearn/linear_map.hpp"
#include "tomolearn/types.hpp"

namespace tomolearn {

/// Discrete Radon transform on a side x side pixel grid with unit pixels
/// centered on the origin. Angle k is theta_k = pi*k/n_theta, detector bins
/// are unit-width strips through the origin-centered detector array, and the
/// weight of pixel i in bin j is the exact area of the pixel covered by the
/// strip divided by the strip width (a trapezoid CDF in the offset). The
/// adjoint is the exact transpose of those weights.
class RadonOperator final : public LinearMap {
 public:
  /// n_dtc == 0 picks ceil(side*sqrt(2)) + 1, which covers every pixel
  /// footprint at every angle with margin.
  explicit RadonOperator(int side, int n_theta, int n_dtc = 0);

  int side() const { return side_; }
  int n_theta() const { return n_theta_; }
  int n_dtc() const { return n_dtc_; }

  Eigen::Index rows() const override { return Eigen::Index(n_theta_) * n_dtc_; }
  Eigen::Index cols() const override { return Eigen::Index(side_) * side_; }
  Vector apply(const Vector& x) const override;
  Vector apply_adjoint(const Vector& y) const override;

  /// Accumulates the projection of img at angle k into row[0..n_dtc).
  void project_angle(const Vector& img, int k, double* row) const;
  /// Accumulates the backprojection of row[0..n_dtc) at angle k into img.
  void backproject_angle(const double* row, int k, Vector& img) const;

  /// Largest singular value of the full operator (power iteration, cached).
  double norm_estimate() const;
  /// max_k of the single-angle operator norms (cached).
  double per_angle_norm_bound() const;

 private:
  struct AngleWeights {
    std::vector<int> offsets;  // per-pixel entry ranges, size side^2 + 1
    std::vector<int> bins;
    std::vector<double> w;
  };
  void build_weights();

  int side_, n_theta_, n_dtc_;
  std::vector<double> cos_, sin_;
  std::vector<AngleWeights> weights_;
  mutable std::once_flag norm_once_, angle_once_;
  mutable double norm_cache_ = 0.0, angle_cache_ = 0.0;
};

/// Restriction of a RadonOperator to a subset of its angles; rows keep the
/// order of the AngleSet. Holds a reference, so the base operator must
/// outlive it.
class SubsampledRadon final : public LinearMap {
 public:
  SubsampledRadon(const RadonOperator& base, AngleSet angles);

  const RadonOperator& base() const { return *base_; }
  const AngleSet& angles() const { return angles_; }
  int n_angles() const { return static_cast<int>(angles_.indices().size()); }

  Eigen::Index rows() const override { return Eigen::Index(n_angles()) * base_->n_dtc(); }
  Eigen::Index cols() const override { return base_->cols(); }
  Vector apply(const Vector& x) const override;
  Vector apply_adjoint(const Vector& y) const override;

 private:
  const RadonOperator* base_;
  AngleSet angles_;
};

SinogramBlock radon_apply(const RadonOperator& op, const Image& f);
Image radon_adjoint(const RadonOperator& op, const SinogramBlock& g);
SinogramBlock radon_apply(const SubsampledRadon& op, const Image& f);
Image radon_adjoint(const SubsampledRadon& op, const SinogramBlock& g);
SubsampledRadon subsample(const RadonOperator& op, const AngleSet& angles);

}  // namespace tomolearn
