#include "tomolearn/source_condition.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tomolearn {

Vector cgls_ridge(const LinearMap& a, const Vector& b, double lambda, double tol,
                  int max_iters) {
  if (!(lambda > 0.0)) throw std::invalid_argument("cgls_ridge: lambda must be positive");
  if (b.size() != a.cols()) throw DimensionError("cgls_ridge: rhs length mismatch");
  const Vector rhs = a.apply(b);
  const double rhs_norm = rhs.norm();
  Vector x = Vector::Zero(a.rows());
  if (rhs_norm == 0.0) return x;
  Vector r = rhs;
  Vector p = r;
  double rs = r.squaredNorm();
  for (int it = 0; it < max_iters; ++it) {
    const Vector mp = a.apply(a.apply_adjoint(p)) + 2.0 * lambda * p;
    const double gamma = rs / p.dot(mp);
    x += gamma * p;
    r -= gamma * mp;
    const double rs_next = r.squaredNorm();
    if (std::sqrt(rs_next) <= tol * rhs_norm) return x;
    p = r + (rs_next / rs) * p;
    rs = rs_next;
  }
  std::ostringstream msg;
  msg << "cgls_ridge: no convergence in " << max_iters
      << " iterations, relative residual " << std::sqrt(rs) / rhs_norm;
  throw ConvergenceError(msg.str());
}

double default_lambda_sc(const RadonOperator& op) {
  const double sigma = op.norm_estimate();
  return 1e-3 * sigma * sigma;
}

SourceConditionResult project_to_source_condition(const Image& f0, const RadonOperator& op,
                                                  const Penalty& pen, double lambda_sc,
                                                  double cg_tol, int cg_max_iters) {
  if (!(lambda_sc > 0.0))
    throw std::invalid_argument("project_to_source_condition: lambda_sc must be positive");
  if (f0.side() != op.side())
    throw DimensionError("project_to_source_condition: image side mismatch");
  const AnalysisTransform& w = pen.transform();
  const double p = pen.p();

  const Vector b = w.synthesis(signed_power(w.analysis(f0.data()), p - 1.0));
  const Vector w_vec = cgls_ridge(op, b, lambda_sc, cg_tol, cg_max_iters);
  const Vector at_w = op.apply_adjoint(w_vec);
  const Vector f_dag = w.synthesis(signed_power(w.analysis(at_w), 1.0 / (p - 1.0)));

  const Vector recon_sub = w.synthesis(signed_power(w.analysis(f_dag), p - 1.0));
  const double sc_residual = (recon_sub - at_w).norm();
  const double f0_norm = f0.data().norm();
  const double rel_change =
      f0_norm > 0.0 ? (f_dag - f0.data()).norm() / f0_norm : f_dag.norm();

  return SourceConditionResult{Image(f_dag, f0.side()),
                               SinogramBlock(w_vec, op.n_theta(), op.n_dtc()), sc_residual,
                               rel_change};
}

namespace {

struct Ellipse {
  double cx, cy, rx, ry, rot, value;
};

}  // namespace

Image make_phantom(int side) {
  if (side <= 0) throw DimensionError("make_phantom: side must be positive");
  // coordinates in [-1, 1]; everything stays inside radius ~0.8
  const Ellipse shapes[] = {
      {0.00, 0.00, 0.62, 0.52, 0.40, 0.60},
      {0.18, -0.10, 0.26, 0.17, -0.50, 0.35},
      {-0.22, 0.16, 0.12, 0.17, 0.90, -0.28},
      {0.05, 0.30, 0.07, 0.07, 0.00, 0.30},
      {-0.05, -0.28, 0.20, 0.09, 1.20, -0.15},
  };
  Vector data(Eigen::Index(side) * side);
  const double ctr = 0.5 * (side - 1);
  for (int iy = 0; iy < side; ++iy) {
    for (int ix = 0; ix < side; ++ix) {
      const double x = (ix - ctr) * 2.0 / side;
      const double y = (iy - ctr) * 2.0 / side;
      double v = 0.0;
      for (const auto& e : shapes) {
        const double dx = x - e.cx, dy = y - e.cy;
        const double c = std::cos(e.rot), s = std::sin(e.rot);
        const double u = (c * dx + s * dy) / e.rx;
        const double t = (-s * dx + c * dy) / e.ry;
        if (u * u + t * t <= 1.0) v += e.value;
      }
      const double gx = x + 0.10, gy = y - 0.05;
      v += 0.12 * std::exp(-(gx * gx + gy * gy) / (2.0 * 0.22 * 0.22));
      data[Eigen::Index(iy) * side + ix] = std::clamp(v, 0.0, 1.0);
    }
  }
  return Image(std::move(data), side);
}

}  // namespace tomolearn
