#include "tomolearn/solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace tomolearn {
namespace {

void check_config(const SolverConfig& cfg) {
  if (cfg.max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  if (!(cfg.rel_tol > 0.0) || !(cfg.obj_tol > 0.0))
    throw std::invalid_argument("SolverConfig: tolerances must be positive");
  if (!(cfg.tau_min > 0.0) || !(cfg.tau_min <= cfg.tau_init) ||
      !(cfg.tau_init <= cfg.tau_max) || !std::isfinite(cfg.tau_max))
    throw std::invalid_argument("SolverConfig: need 0 < tau_min <= tau_init <= tau_max < inf");
}

// R evaluated straight from coefficients, avoiding a redundant analysis pass.
double penalty_of_coef(const Penalty& pen, const Vector& coef) {
  return (pen.weights().array() * coef.array().abs().pow(pen.p())).sum() / pen.p();
}

}  // namespace

SolverConfig default_solver_config(const SubsampledRadon& op) {
  SolverConfig cfg;
  const double sigma = estimate_op_norm(op, RngSeed{0x9e0fb7a351ull, 7}, 1e-4, 1000);
  cfg.tau_init = op.n_angles() / (sigma * sigma);
  cfg.tau_min = 1e-8 * cfg.tau_init;
  cfg.tau_max = 1e8 * cfg.tau_init;
  return cfg;
}

double objective(const SubsampledRadon& op, const SinogramBlock& g, const Penalty& pen,
                 double alpha, const Image& f) {
  if (!(alpha > 0.0)) throw std::invalid_argument("objective: alpha must be positive");
  if (g.data().size() != op.rows()) throw DimensionError("objective: sinogram shape mismatch");
  const Vector r = op.apply(f.data()) - g.data();
  return 0.5 * r.squaredNorm() / op.n_angles() + alpha * eval_R(pen, f.data());
}

double bb_step(const Vector& s, const Vector& y, BBVariant variant, double tau_init,
               double tau_min, double tau_max) {
  if (s.size() != y.size()) throw DimensionError("bb_step: length mismatch");
  const double sy = s.dot(y);
  if (!(sy > 0.0)) return tau_init;
  const double tau =
      variant == BBVariant::bb1 ? s.squaredNorm() / sy : sy / y.squaredNorm();
  return std::clamp(tau, tau_min, tau_max);
}

SolveResult pgd_solve(const SubsampledRadon& op, const SinogramBlock& g, const Penalty& pen,
                      double alpha, const SolverConfig& cfg, const Image& f0) {
  check_config(cfg);
  if (!(alpha > 0.0)) throw std::invalid_argument("pgd_solve: alpha must be positive");
  if (g.data().size() != op.rows()) throw DimensionError("pgd_solve: sinogram shape mismatch");
  if (f0.data().size() != op.cols()) throw DimensionError("pgd_solve: start image shape mismatch");
  const AnalysisTransform& w = pen.transform();
  const double inv_n = 1.0 / op.n_angles();

  Vector f = f0.data();
  Vector grad = op.apply_adjoint(op.apply(f) - g.data()) * inv_n;
  double obj = objective(op, g, pen, alpha, f0);
  const double obj0 = obj;

  std::vector<double> trace{obj};
  std::vector<double> steps{0.0};
  Vector s, y;
  double tau = cfg.tau_init;
  int stall = 0;
  int it = 0;
  bool converged = false;

  while (it < cfg.max_iters) {
    ++it;
    if (it > 1) tau = bb_step(s, y, cfg.bb_variant, cfg.tau_init, cfg.tau_min, cfg.tau_max);
    const Vector coef = prox(pen, w.analysis(f - tau * grad), tau * alpha);
    Vector f_next = w.synthesis(coef);
    const Vector r_next = op.apply(f_next) - g.data();
    const Vector grad_next = op.apply_adjoint(r_next) * inv_n;
    const double obj_next =
        0.5 * r_next.squaredNorm() * inv_n + alpha * penalty_of_coef(pen, coef);
    trace.push_back(obj_next);
    steps.push_back(tau);
    if (!std::isfinite(obj_next) || obj_next > 1e6 * std::max(obj0, 1e-300)) {
      std::ostringstream msg;
      msg << "pgd_solve: objective diverged at iteration " << it << " with step " << tau;
      throw DivergenceError(msg.str());
    }

    s = f_next - f;
    y = grad_next - grad;
    const double step_rel = s.norm() / std::max(f_next.norm(), 1e-300);
    if (std::abs(obj_next - obj) <= cfg.obj_tol * std::max(std::abs(obj), 1e-300))
      ++stall;
    else
      stall = 0;
    f.swap(f_next);
    grad = grad_next;
    obj = obj_next;

    if (step_rel < cfg.rel_tol || stall >= 5) {
      // accept only if the fixed-point residual at the final step holds
      const Vector fp = w.synthesis(prox(pen, w.analysis(f - tau * grad), tau * alpha));
      if ((f - fp).norm() <= 10.0 * cfg.rel_tol * std::max(f.norm(), 1e-300)) {
        converged = true;
        break;
      }
      stall = 0;
    }
  }

  SolveResult res{Image(f, f0.side()), it, Eigen::Map<Vector>(trace.data(), trace.size()),
                  Eigen::Map<Vector>(steps.data(), steps.size()), converged, tau};
  return res;
}

SolveResult pgd_solve(const SubsampledRadon& op, const SinogramBlock& g, const Penalty& pen,
                      double alpha, const SolverConfig& cfg) {
  return pgd_solve(op, g, pen, alpha, cfg, Image::zero(op.base().side()));
}

bool apriori_check(const SolveResult& result, const Penalty& pen, const Image& f_dagger,
                   double delta, double alpha, const SinogramBlock& eps) {
  const double lhs = eval_R(pen, result.reconstruction);
  const double rhs = eval_R(pen, f_dagger) +
                     delta * delta / (2.0 * alpha) * weighted_residual_norm_sq(eps);
  return lhs <= 1.01 * rhs + 1e-12;
}

}  // namespace tomolearn
