#include "tomolearn/radon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tomolearn {
namespace {

// CDF of the pixel footprint profile at signed offset s from the pixel
// center along the detector axis: the profile is the convolution of two
// boxes of widths a = |cos| and b = |sin| (a trapezoid), normalized to
// total mass 1.
inline double footprint_cdf(double s, double a, double b) {
  const double lo = std::min(a, b), hi = std::max(a, b);
  if (lo < 1e-12) return std::clamp(s / hi + 0.5, 0.0, 1.0);
  const double c1 = 0.5 * (a + b), c2 = 0.5 * (hi - lo);
  auto r2 = [](double x) { return x > 0.0 ? 0.5 * x * x : 0.0; };
  return (r2(s + c1) - r2(s + c2) - r2(s - c2) + r2(s - c1)) / (a * b);
}

class SingleAngleMap final : public LinearMap {
 public:
  SingleAngleMap(const RadonOperator& op, int k) : op_(op), k_(k) {}
  Eigen::Index rows() const override { return op_.n_dtc(); }
  Eigen::Index cols() const override { return op_.cols(); }
  Vector apply(const Vector& x) const override {
    Vector out = Vector::Zero(op_.n_dtc());
    op_.project_angle(x, k_, out.data());
    return out;
  }
  Vector apply_adjoint(const Vector& y) const override {
    Vector out = Vector::Zero(op_.cols());
    op_.backproject_angle(y.data(), k_, out);
    return out;
  }

 private:
  const RadonOperator& op_;
  int k_;
};

}  // namespace

RadonOperator::RadonOperator(int side, int n_theta, int n_dtc)
    : side_(side), n_theta_(n_theta), n_dtc_(n_dtc) {
  if (side <= 0) throw DimensionError("RadonOperator: side must be positive");
  if (n_theta <= 0) throw DimensionError("RadonOperator: n_theta must be positive");
  if (n_dtc_ == 0) n_dtc_ = static_cast<int>(std::ceil(side * std::numbers::sqrt2)) + 1;
  if (n_dtc_ <= 0) throw DimensionError("RadonOperator: n_dtc must be positive");
  cos_.resize(n_theta_);
  sin_.resize(n_theta_);
  for (int k = 0; k < n_theta_; ++k) {
    const double th = std::numbers::pi * k / n_theta_;
    cos_[k] = std::cos(th);
    sin_[k] = std::sin(th);
  }
  build_weights();
}

// Footprint weights depend only on the geometry, so they are tabulated once
// per angle as a compressed sparse row over pixels. Memory is about
// side^2 * n_theta * 3 entries (roughly 26 MB for side 64 at 180 angles).
void RadonOperator::build_weights() {
  const Eigen::Index n_px = cols();
  weights_.resize(static_cast<size_t>(n_theta_));
  for (int k = 0; k < n_theta_; ++k) {
    AngleWeights& aw = weights_[static_cast<size_t>(k)];
    const double a = std::abs(cos_[k]), b = std::abs(sin_[k]);
    const double half = 0.5 * (a + b) + 1e-12;
    const double ctr = 0.5 * (side_ - 1);
    const double s0 = -0.5 * (n_dtc_ - 1);  // center of bin 0
    aw.offsets.assign(static_cast<size_t>(n_px) + 1, 0);
    aw.bins.reserve(static_cast<size_t>(n_px) * 3);
    aw.w.reserve(static_cast<size_t>(n_px) * 3);
    Eigen::Index px = 0;
    for (int iy = 0; iy < side_; ++iy) {
      const double y = iy - ctr;
      for (int ix = 0; ix < side_; ++ix, ++px) {
        const double t = (ix - ctr) * cos_[k] + y * sin_[k];
        int jlo = static_cast<int>(std::floor(t - half - s0 + 0.5));
        int jhi = static_cast<int>(std::ceil(t + half - s0 - 0.5));
        jlo = std::max(jlo, 0);
        jhi = std::min(jhi, n_dtc_ - 1);
        double cdf_lo = footprint_cdf(s0 + jlo - 0.5 - t, a, b);
        for (int j = jlo; j <= jhi; ++j) {
          const double cdf_hi = footprint_cdf(s0 + j + 0.5 - t, a, b);
          aw.bins.push_back(j);
          aw.w.push_back(cdf_hi - cdf_lo);
          cdf_lo = cdf_hi;
        }
        aw.offsets[static_cast<size_t>(px) + 1] = static_cast<int>(aw.bins.size());
      }
    }
  }
}

void RadonOperator::project_angle(const Vector& img, int k, double* row) const {
  const AngleWeights& aw = weights_[static_cast<size_t>(k)];
  const int* bins = aw.bins.data();
  const double* w = aw.w.data();
  const Eigen::Index n_px = cols();
  for (Eigen::Index px = 0; px < n_px; ++px) {
    const double v = img[px];
    if (v == 0.0) continue;
    const int end = aw.offsets[static_cast<size_t>(px) + 1];
    for (int e = aw.offsets[static_cast<size_t>(px)]; e < end; ++e) row[bins[e]] += v * w[e];
  }
}

void RadonOperator::backproject_angle(const double* row, int k, Vector& img) const {
  const AngleWeights& aw = weights_[static_cast<size_t>(k)];
  const int* bins = aw.bins.data();
  const double* w = aw.w.data();
  const Eigen::Index n_px = cols();
  for (Eigen::Index px = 0; px < n_px; ++px) {
    const int end = aw.offsets[static_cast<size_t>(px) + 1];
    double acc = 0.0;
    for (int e = aw.offsets[static_cast<size_t>(px)]; e < end; ++e) acc += row[bins[e]] * w[e];
    img[px] += acc;
  }
}

Vector RadonOperator::apply(const Vector& x) const {
  if (x.size() != cols()) throw DimensionError("RadonOperator::apply: length mismatch");
  Vector out = Vector::Zero(rows());
  for (int k = 0; k < n_theta_; ++k) project_angle(x, k, out.data() + Eigen::Index(k) * n_dtc_);
  return out;
}

Vector RadonOperator::apply_adjoint(const Vector& y) const {
  if (y.size() != rows()) throw DimensionError("RadonOperator::apply_adjoint: length mismatch");
  Vector out = Vector::Zero(cols());
  for (int k = 0; k < n_theta_; ++k) backproject_angle(y.data() + Eigen::Index(k) * n_dtc_, k, out);
  return out;
}

double RadonOperator::norm_estimate() const {
  std::call_once(norm_once_, [this] { norm_cache_ = estimate_op_norm(*this); });
  return norm_cache_;
}

double RadonOperator::per_angle_norm_bound() const {
  std::call_once(angle_once_, [this] {
    double best = 0.0;
    for (int k = 0; k < n_theta_; ++k)
      best = std::max(best, estimate_op_norm(SingleAngleMap(*this, k)));
    angle_cache_ = best;
  });
  return angle_cache_;
}

SubsampledRadon::SubsampledRadon(const RadonOperator& base, AngleSet angles)
    : base_(&base), angles_(std::move(angles)) {
  if (angles_.n_theta() != base.n_theta())
    throw DimensionError("SubsampledRadon: angle set drawn from a different grid");
}

Vector SubsampledRadon::apply(const Vector& x) const {
  if (x.size() != cols()) throw DimensionError("SubsampledRadon::apply: length mismatch");
  const int d = base_->n_dtc();
  Vector out = Vector::Zero(rows());
  const auto& idx = angles_.indices();
  for (size_t r = 0; r < idx.size(); ++r)
    base_->project_angle(x, idx[r], out.data() + Eigen::Index(r) * d);
  return out;
}

Vector SubsampledRadon::apply_adjoint(const Vector& y) const {
  if (y.size() != rows()) throw DimensionError("SubsampledRadon::apply_adjoint: length mismatch");
  const int d = base_->n_dtc();
  Vector out = Vector::Zero(cols());
  const auto& idx = angles_.indices();
  for (size_t r = 0; r < idx.size(); ++r)
    base_->backproject_angle(y.data() + Eigen::Index(r) * d, idx[r], out);
  return out;
}

SinogramBlock radon_apply(const RadonOperator& op, const Image& f) {
  if (f.side() != op.side()) throw DimensionError("radon_apply: image side mismatch");
  return SinogramBlock(op.apply(f.data()), op.n_theta(), op.n_dtc());
}

Image radon_adjoint(const RadonOperator& op, const SinogramBlock& g) {
  if (g.n_angles() != op.n_theta() || g.n_dtc() != op.n_dtc())
    throw DimensionError("radon_adjoint: sinogram shape mismatch");
  return Image(op.apply_adjoint(g.data()), op.side());
}

SinogramBlock radon_apply(const SubsampledRadon& op, const Image& f) {
  if (f.side() != op.base().side()) throw DimensionError("radon_apply: image side mismatch");
  return SinogramBlock(op.apply(f.data()), op.n_angles(), op.base().n_dtc());
}

Image radon_adjoint(const SubsampledRadon& op, const SinogramBlock& g) {
  if (g.n_angles() != op.n_angles() || g.n_dtc() != op.base().n_dtc())
    throw DimensionError("radon_adjoint: sinogram shape mismatch");
  return Image(op.apply_adjoint(g.data()), op.base().side());
}

SubsampledRadon subsample(const RadonOperator& op, const AngleSet& angles) {
  return SubsampledRadon(op, angles);
}

}  // namespace tomolearn
