#include "tomolearn/wavelet.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

namespace tomolearn {
namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// One orthonormal Haar split of buf[0..len) into averages | details.
void split(double* buf, int len, std::vector<double>& tmp) {
  const int h = len / 2;
  for (int i = 0; i < h; ++i) {
    tmp[i] = (buf[2 * i] + buf[2 * i + 1]) * kInvSqrt2;
    tmp[h + i] = (buf[2 * i] - buf[2 * i + 1]) * kInvSqrt2;
  }
  std::copy(tmp.begin(), tmp.begin() + len, buf);
}

void merge(double* buf, int len, std::vector<double>& tmp) {
  const int h = len / 2;
  for (int i = 0; i < h; ++i) {
    tmp[2 * i] = (buf[i] + buf[h + i]) * kInvSqrt2;
    tmp[2 * i + 1] = (buf[i] - buf[h + i]) * kInvSqrt2;
  }
  std::copy(tmp.begin(), tmp.begin() + len, buf);
}

}  // namespace

AnalysisTransform::AnalysisTransform(TransformKind kind, int side) : kind_(kind), side_(side) {
  if (side <= 0) throw DimensionError("AnalysisTransform: side must be positive");
  if (kind == TransformKind::haar2d && !is_pow2(side))
    throw DimensionError("AnalysisTransform: haar2d needs a power-of-two side");
  levels_.resize(size());
  if (kind == TransformKind::identity) {
    n_levels_ = 1;
    levels_.setZero();
    return;
  }
  n_levels_ = std::countr_zero(static_cast<unsigned>(side));
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      const int m = std::max(r, c);
      levels_[Eigen::Index(r) * side + c] =
          m == 0 ? 0 : std::bit_width(static_cast<unsigned>(m)) - 1;
    }
}

AnalysisTransform AnalysisTransform::identity(int side) {
  return AnalysisTransform(TransformKind::identity, side);
}

AnalysisTransform AnalysisTransform::haar2d(int side) {
  return AnalysisTransform(TransformKind::haar2d, side);
}

Vector AnalysisTransform::analysis(const Vector& img) const {
  if (img.size() != size()) throw DimensionError("analysis: length mismatch");
  if (kind_ == TransformKind::identity) return img;
  Vector out = img;
  std::vector<double> tmp(side_), col(side_);
  for (int len = side_; len > 1; len /= 2) {
    for (int r = 0; r < len; ++r) split(out.data() + Eigen::Index(r) * side_, len, tmp);
    for (int c = 0; c < len; ++c) {
      for (int r = 0; r < len; ++r) col[r] = out[Eigen::Index(r) * side_ + c];
      split(col.data(), len, tmp);
      for (int r = 0; r < len; ++r) out[Eigen::Index(r) * side_ + c] = col[r];
    }
  }
  return out;
}

Vector AnalysisTransform::synthesis(const Vector& coef) const {
  if (coef.size() != size()) throw DimensionError("synthesis: length mismatch");
  if (kind_ == TransformKind::identity) return coef;
  Vector out = coef;
  std::vector<double> tmp(side_), col(side_);
  for (int len = 2; len <= side_; len *= 2) {
    for (int c = 0; c < len; ++c) {
      for (int r = 0; r < len; ++r) col[r] = out[Eigen::Index(r) * side_ + c];
      merge(col.data(), len, tmp);
      for (int r = 0; r < len; ++r) out[Eigen::Index(r) * side_ + c] = col[r];
    }
    for (int r = 0; r < len; ++r) merge(out.data() + Eigen::Index(r) * side_, len, tmp);
  }
  return out;
}

Image synthesize_image(const AnalysisTransform& w, const Vector& coef) {
  return Image(w.synthesis(coef), w.side());
}

}  // namespace tomolearn
