#pragma once

#include "tomolearn/linear_map.hpp"
#include "tomolearn/penalty.hpp"
#include "tomolearn/radon.hpp"
#include "tomolearn/types.hpp"

namespace tomolearn {

struct SourceConditionResult {
  Image f_dagger;
  SinogramBlock w;     // full fine-grid angles
  double sc_residual;  // || W^T (W f_dagger)^{[p-1]} - A^T w ||_2
  double rel_change;   // || f_dagger - f0 ||_2 / || f0 ||_2
};

/// Conjugate gradients on (A A^T + 2 lambda I) w = A b, the normal equations
/// of min_w 0.5 ||A^T w - b||^2 + lambda ||w||^2. Returns w with relative
/// residual <= tol; throws ConvergenceError when max_iters is hit first.
Vector cgls_ridge(const LinearMap& a, const Vector& b, double lambda, double tol = 1e-10,
                  int max_iters = 2000);

/// 1e-3 * sigma(A)^2, the documented default ridge weight.
double default_lambda_sc(const RadonOperator& op);

/// Replace f0 by the nearest-in-spirit ground truth satisfying the discrete
/// range condition: solve the ridge problem above with
/// b = W^T (W f0)^{[p-1]}, then rebuild f_dagger = W^T (W A^T w)^{[1/(p-1)]},
/// which satisfies W^T (W f_dagger)^{[p-1]} = A^T w up to rounding.
SourceConditionResult project_to_source_condition(const Image& f0, const RadonOperator& op,
                                                  const Penalty& pen, double lambda_sc,
                                                  double cg_tol = 1e-10,
                                                  int cg_max_iters = 4000);

/// Deterministic piecewise-smooth test image: overlapping ellipses and a
/// smooth bump, supported well inside the reconstruction disk, values in
/// [0, 1].
Image make_phantom(int side);

}  // namespace tomolearn
