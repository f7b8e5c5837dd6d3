#pragma once

#include "tomolearn/types.hpp"
#include "tomolearn/wavelet.hpp"

namespace tomolearn {

/// R(f) = (1/p) sum_i w_i |(Wf)_i|^p with p in (1,2] and strictly positive
/// per-coefficient weights (all ones by default).
class Penalty {
 public:
  Penalty(double p, AnalysisTransform transform, Vector weights = Vector());

  double p() const { return p_; }
  double q() const { return p_ / (p_ - 1.0); }
  const AnalysisTransform& transform() const { return transform_; }
  const Vector& weights() const { return weights_; }

 private:
  double p_;
  AnalysisTransform transform_;
  Vector weights_;
};

/// Unique element of the subdifferential of R at an image, in image space.
struct Subgradient {
  Vector data;
};

double signed_power(double x, double n);
Vector signed_power(const Vector& x, double n);

double eval_R(const Penalty& pen, const Vector& f_flat);
double eval_R(const Penalty& pen, const Image& f);

/// Convex conjugate R*(g) = (1/q) sum_i w_i^{1-q} |(Wg)_i|^q.
double eval_R_star(const Penalty& pen, const Vector& g_flat);

Vector subgradient(const Penalty& pen, const Vector& f_flat);
Subgradient subgradient(const Penalty& pen, const Image& f);

/// Symmetric Bregman distance <r_f - r_g, f - g>; nonnegative, zero iff the
/// arguments coincide.
double bregman(const Penalty& pen, const Vector& f_flat, const Vector& g_flat);
double bregman(const Penalty& pen, const Image& f, const Image& g);

/// Scalar prox of z -> (s/p)|z|^p: the signed root of z + s z^{p-1} = |x|.
double prox_scalar(double x, double s, double p);

/// Componentwise prox with per-component effective scale = scale * w_i.
Vector prox(const Penalty& pen, const Vector& x, double scale);

/// Weights 2^{|lambda| d (p(s/d + 1/2) - 1)} from per-coefficient levels.
Vector besov_weights(double p, double s, int d, const Eigen::VectorXi& levels);

}  // namespace tomolearn
