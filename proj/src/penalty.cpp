#include "tomolearn/penalty.hpp"

#include <cmath>
#include <stdexcept>

namespace tomolearn {

Penalty::Penalty(double p, AnalysisTransform transform, Vector weights)
    : p_(p), transform_(std::move(transform)), weights_(std::move(weights)) {
  if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("Penalty: p must lie in (1, 2]");
  if (weights_.size() == 0) weights_ = Vector::Ones(transform_.size());
  if (weights_.size() != transform_.size())
    throw DimensionError("Penalty: weights length does not match transform size");
  if (!weights_.allFinite() || (weights_.array() <= 0.0).any())
    throw std::invalid_argument("Penalty: weights must be positive and finite");
}

double signed_power(double x, double n) {
  if (x == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(x), n), x);
}

Vector signed_power(const Vector& x, double n) {
  if (!(n > 0.0)) throw std::invalid_argument("signed_power: exponent must be positive");
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = signed_power(x[i], n);
  return out;
}

double eval_R(const Penalty& pen, const Vector& f_flat) {
  if (f_flat.size() != pen.transform().size()) throw DimensionError("eval_R: length mismatch");
  const Vector c = pen.transform().analysis(f_flat);
  return (pen.weights().array() * c.array().abs().pow(pen.p())).sum() / pen.p();
}

double eval_R(const Penalty& pen, const Image& f) { return eval_R(pen, f.data()); }

double eval_R_star(const Penalty& pen, const Vector& g_flat) {
  if (g_flat.size() != pen.transform().size())
    throw DimensionError("eval_R_star: length mismatch");
  const Vector c = pen.transform().analysis(g_flat);
  const double q = pen.q();
  return (pen.weights().array().pow(1.0 - q) * c.array().abs().pow(q)).sum() / q;
}

Vector subgradient(const Penalty& pen, const Vector& f_flat) {
  if (f_flat.size() != pen.transform().size())
    throw DimensionError("subgradient: length mismatch");
  Vector c = pen.transform().analysis(f_flat);
  for (Eigen::Index i = 0; i < c.size(); ++i)
    c[i] = pen.weights()[i] * signed_power(c[i], pen.p() - 1.0);
  return pen.transform().synthesis(c);
}

Subgradient subgradient(const Penalty& pen, const Image& f) {
  return Subgradient{subgradient(pen, f.data())};
}

double bregman(const Penalty& pen, const Vector& f_flat, const Vector& g_flat) {
  if (f_flat.size() != g_flat.size()) throw DimensionError("bregman: length mismatch");
  const Vector rf = subgradient(pen, f_flat);
  const Vector rg = subgradient(pen, g_flat);
  const double v = (rf - rg).dot(f_flat - g_flat);
  return v > 0.0 ? v : 0.0;  // mathematically nonnegative; clip rounding noise
}

double bregman(const Penalty& pen, const Image& f, const Image& g) {
  return bregman(pen, f.data(), g.data());
}

namespace {

// Positive root of z + s z^{p-1} = ax for general p in (1,2): Newton from
// z0 = ax. phi is increasing and concave there, so the iterates decrease
// monotonically onto the root; bisection is a defensive fallback only.
double prox_root_newton(double ax, double s, double p) {
  const double pm1 = p - 1.0;
  double z = ax;
  for (int it = 0; it < 100; ++it) {
    const double zp = std::pow(z, pm1);
    const double phi = z + s * zp - ax;
    if (std::abs(phi) <= 1e-15 * std::max(1.0, ax)) return z;
    const double dphi = 1.0 + s * pm1 * (zp / z);
    const double zn = z - phi / dphi;
    if (!(zn > 0.0) || !std::isfinite(zn)) break;
    if (zn == z) return z;
    z = zn;
  }
  double lo = 0.0, hi = ax;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid + s * std::pow(mid, pm1) < ax)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double prox_scalar(double x, double s, double p) {
  if (!(s > 0.0)) throw std::invalid_argument("prox: scale must be positive");
  const double ax = std::abs(x);
  if (ax <= 1e-300) return 0.0;
  double z;
  if (p == 2.0) {
    z = ax / (1.0 + s);
  } else if (p == 1.5) {
    // quadratic in y = sqrt(z); the stable form of (sqrt(s^2+4ax) - s)/2
    const double y = 2.0 * ax / (std::sqrt(s * s + 4.0 * ax) + s);
    z = y * y;
  } else if (p == 4.0 / 3.0) {
    // depressed cubic y^3 + s y = ax in y = z^{1/3}; Cardano gives
    // y = D - s/(3D), which cancels badly when s^3 dominates ax, so use
    // y = ax / (D^2 + s/3 + (s/(3D))^2) with all terms positive
    const double disc = std::sqrt(0.25 * ax * ax + s * s * s / 27.0);
    const double big = std::cbrt(0.5 * ax + disc);
    const double small = s / (3.0 * big);
    const double y = ax / (big * big + s / 3.0 + small * small);
    z = y * y * y;
  } else {
    z = prox_root_newton(ax, s, p);
  }
  if (z < 0.0) z = 0.0;
  return std::copysign(z, x);
}

Vector prox(const Penalty& pen, const Vector& x, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("prox: scale must be positive");
  if (x.size() != pen.weights().size()) throw DimensionError("prox: length mismatch");
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    out[i] = prox_scalar(x[i], scale * pen.weights()[i], pen.p());
  return out;
}

Vector besov_weights(double p, double s, int d, const Eigen::VectorXi& levels) {
  if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("besov_weights: p must lie in (1, 2]");
  if (d < 1) throw std::invalid_argument("besov_weights: d must be at least 1");
  const double expo = d * (p * (s / d + 0.5) - 1.0);
  Vector out(levels.size());
  for (Eigen::Index i = 0; i < levels.size(); ++i) out[i] = std::exp2(levels[i] * expo);
  return out;
}

}  // namespace tomolearn
