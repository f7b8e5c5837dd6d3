#pragma once

#include "tomolearn/penalty.hpp"
#include "tomolearn/radon.hpp"
#include "tomolearn/types.hpp"

namespace tomolearn {

enum class BBVariant { bb1, bb2 };

struct SolverConfig {
  int max_iters = 2000;
  double rel_tol = 1e-7;   // relative iterate change
  double obj_tol = 1e-12;  // relative objective change, 5 consecutive hits
  double tau_init = 1.0;
  double tau_min = 1e-8;
  double tau_max = 1e8;
  BBVariant bb_variant = BBVariant::bb1;
};

struct SolveResult {
  Image reconstruction;
  int iterations = 0;
  Vector objective_trace;  // length iterations + 1, entry 0 at the start
  Vector step_trace;       // same length; entry 0 is zero
  bool converged = false;
  double final_step = 0.0;
};

/// tau_init = N / sigma(A_theta)^2 (inverse gradient Lipschitz constant),
/// safeguards 1e-8 and 1e8 times that; other fields at struct defaults.
SolverConfig default_solver_config(const SubsampledRadon& op);

/// (1/(2N)) ||A_theta f - g||^2 + alpha R(f), N the number of sampled angles.
double objective(const SubsampledRadon& op, const SinogramBlock& g, const Penalty& pen,
                 double alpha, const Image& f);

/// Barzilai-Borwein step from iterate difference s and gradient difference y,
/// clamped to [tau_min, tau_max]; tau_init when <s,y> <= 0.
double bb_step(const Vector& s, const Vector& y, BBVariant variant, double tau_init,
               double tau_min, double tau_max);

SolveResult pgd_solve(const SubsampledRadon& op, const SinogramBlock& g, const Penalty& pen,
                      double alpha, const SolverConfig& cfg, const Image& f0);
SolveResult pgd_solve(const SubsampledRadon& op, const SinogramBlock& g, const Penalty& pen,
                      double alpha, const SolverConfig& cfg);

/// True iff R(reconstruction) <= R(f_dagger) + (delta^2/(2 alpha)) |eps|^2_{V_N}
/// with 1% slack.
bool apriori_check(const SolveResult& result, const Penalty& pen, const Image& f_dagger,
                   double delta, double alpha, const SinogramBlock& eps);

}  // namespace tomolearn
