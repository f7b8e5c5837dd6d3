#include "tomolearn/linear_map.hpp"

#include <cmath>

namespace tomolearn {

double estimate_op_norm(const LinearMap& op, RngSeed seed, double tol, int max_iters) {
  const Eigen::Index n = op.cols();
  if (n <= 0 || op.rows() <= 0) throw DimensionError("estimate_op_norm: empty operator");
  Vector v = gaussian_noise(n, seed);
  double nv = v.norm();
  if (nv == 0.0) {
    v.setOnes();
    nv = v.norm();
  }
  v /= nv;
  double sigma = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector w = op.apply_adjoint(op.apply(v));
    double lambda = w.norm();  // v is unit, so this is the Rayleigh quotient bound
    if (lambda == 0.0) return 0.0;
    v = w / lambda;
    double s = std::sqrt(lambda);
    if (it > 0 && std::abs(s - sigma) <= tol * std::max(s, 1e-300)) return s;
    sigma = s;
  }
  return sigma;
}

Matrix materialize(const LinearMap& op, Eigen::Index max_entries) {
  const Eigen::Index r = op.rows(), c = op.cols();
  if (r * c > max_entries)
    throw CapabilityError("materialize: operator too large for dense storage");
  Matrix m(r, c);
  Vector e = Vector::Zero(c);
  for (Eigen::Index j = 0; j < c; ++j) {
    e[j] = 1.0;
    m.col(j) = op.apply(e);
    e[j] = 0.0;
  }
  return m;
}

}  // namespace tomolearn
