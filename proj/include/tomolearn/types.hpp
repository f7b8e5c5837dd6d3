#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace tomolearn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Shape or length mismatch between operands.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Iterative method failed to reach its tolerance within budget.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Objective blew up during an iteration (bad step length or data).
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested computation exceeds a configured size cap.
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Square image stored as a flat row-major vector, pixel width 1.
class Image {
 public:
  Image() = default;
  Image(Vector data, int side) : data_(std::move(data)), side_(side) {
    if (side_ <= 0 || data_.size() != static_cast<Eigen::Index>(side_) * side_)
      throw DimensionError("Image: data length must equal side^2");
    if (!data_.allFinite()) throw std::invalid_argument("Image: non-finite entry");
  }
  static Image zero(int side) { return Image(Vector::Zero(static_cast<Eigen::Index>(side) * side), side); }

  const Vector& data() const { return data_; }
  int side() const { return side_; }
  Eigen::Index size() const { return data_.size(); }

  double operator()(int row, int col) const { return data_[static_cast<Eigen::Index>(row) * side_ + col]; }
  double& at(int row, int col) { return data_[static_cast<Eigen::Index>(row) * side_ + col]; }

 private:
  Vector data_;
  int side_ = 0;
};

/// Per-angle detector readings stacked over an angle set, row-major
/// (angle index major, detector cell minor).
class SinogramBlock {
 public:
  SinogramBlock() = default;
  SinogramBlock(Vector data, int n_angles, int n_dtc)
      : data_(std::move(data)), n_angles_(n_angles), n_dtc_(n_dtc) {
    if (n_angles_ <= 0 || n_dtc_ <= 0 ||
        data_.size() != static_cast<Eigen::Index>(n_angles_) * n_dtc_)
      throw DimensionError("SinogramBlock: data length must equal n_angles * n_dtc");
    if (!data_.allFinite()) throw std::invalid_argument("SinogramBlock: non-finite entry");
  }
  static SinogramBlock zero(int n_angles, int n_dtc) {
    return SinogramBlock(Vector::Zero(static_cast<Eigen::Index>(n_angles) * n_dtc), n_angles, n_dtc);
  }

  const Vector& data() const { return data_; }
  int n_angles() const { return n_angles_; }
  int n_dtc() const { return n_dtc_; }
  Eigen::Index size() const { return data_.size(); }

  auto row(int angle) const { return data_.segment(static_cast<Eigen::Index>(angle) * n_dtc_, n_dtc_); }

 private:
  Vector data_;
  int n_angles_ = 0;
  int n_dtc_ = 0;
};

/// Distinct angle indices into a fine grid of n_theta angles. Order is
/// preserved as given; samplers return them sorted ascending.
class AngleSet {
 public:
  AngleSet() = default;
  AngleSet(std::vector<int> indices, int n_theta);

  const std::vector<int>& indices() const { return indices_; }
  int n_theta() const { return n_theta_; }
  int count() const { return static_cast<int>(indices_.size()); }

  static AngleSet full(int n_theta);

 private:
  std::vector<int> indices_;
  int n_theta_ = 0;
};

/// Euclidean inner product with an explicit length check.
double dot(const Vector& a, const Vector& b);

/// Squared norm in the design-averaged inner product: (1/n_angles) times
/// the sum over angles of the per-angle squared detector residual.
double weighted_residual_norm_sq(const SinogramBlock& r);

}  // namespace tomolearn
