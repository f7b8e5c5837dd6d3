#pragma once

#include <string>
#include <vector>

#include "tomolearn/linear_map.hpp"
#include "tomolearn/penalty.hpp"
#include "tomolearn/radon.hpp"
#include "tomolearn/solver.hpp"
#include "tomolearn/source_condition.hpp"

namespace tomolearn {

enum class RegimeKind { fixed, decreasing };

std::string regime_name(RegimeKind kind);

struct NoiseRegime {
  RegimeKind kind = RegimeKind::fixed;
  double c_delta_factor = 0.01;  // multiplies ||A f_dagger||_inf; decreasing
                                 // regimes fold the N0 factor in here
  double delta(double sino_sup, int n) const;
};

struct AlphaSchedule {
  double c_alpha = 0.0;
  double exponent = 0.0;  // -1/3 fixed regime, -1 decreasing
  double alpha(int n) const;
};

struct ExperimentPlan {
  double p = 1.5;
  NoiseRegime regime;
  AlphaSchedule schedule;
  std::vector<int> n_values;
  int realizations = 10;
  SourceConditionResult phantom;
  RngSeed base_seed{0, 0};
  int n_theta = 180;
  SolverConfig solver;  // per-realization tau fields are recomputed
  double sino_sup = 0.0;
};

struct RateFitResult {
  double c = 0.0;
  double beta = 0.0;
  Vector per_n_means;
  Vector per_n_stddevs;
  double r_squared = 0.0;
};

struct RealizationRecord {
  double p = 0.0;
  RegimeKind regime = RegimeKind::fixed;
  int n = 0;
  int realization = 0;
  std::uint64_t seed = 0;
  double delta = 0.0;
  double alpha = 0.0;
  double bregman = 0.0;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  bool apriori_ok = true;  // diagnostic, not part of the CSV schema
  bool failed = false;
  std::string error;
};

struct SweepResult {
  RateFitResult fit;
  std::vector<RealizationRecord> records;  // ordered by (n index, realization)
  std::vector<int> n_values;
};

/// Thrown when the failure policy trips; carries the partial records so
/// callers can still persist a flagged raw table.
struct SweepAbort : ConvergenceError {
  SweepAbort(const std::string& msg, std::vector<RealizationRecord> recs)
      : ConvergenceError(msg), records(std::move(recs)) {}
  std::vector<RealizationRecord> records;
};

/// Everything build_plan needs; zeros mean "use the documented default".
struct PlanParams {
  double p = 1.5;
  RegimeKind regime = RegimeKind::fixed;
  double c_alpha = 0.0;   // 0: constant tuned for (p, regime)
  double c_delta = 0.0;   // 0: 0.01 fixed / 0.02 decreasing (before N0 scaling)
  int side = 64;
  int n_theta = 180;
  std::vector<int> n_values;  // empty: desk-scale ladder
  int realizations = 10;
  std::uint64_t seed = 0x746f6d6f31ull;
  double lambda_sc = 0.0;  // 0: default_lambda_sc
  SolverConfig solver;
};

/// Tuned step constant for the alpha schedule; throws when p is not one of
/// 3/2, 4/3, 2 (pass an explicit c_alpha for other p).
double default_c_alpha(double p, RegimeKind regime);

std::vector<int> desk_n_values();
std::vector<int> full_n_values();

/// Generates the phantom, projects it onto the source condition, caches
/// ||A f_dagger||_inf, and fills in schedule defaults.
ExperimentPlan build_plan(const PlanParams& params);

/// One Monte-Carlo draw: angles and noise from streams derived from
/// (base_seed, n, realization_idx), then a PGD solve; returns the record
/// with the symmetric Bregman distance to the phantom.
RealizationRecord run_realization(const ExperimentPlan& plan, int n, int realization_idx);

/// Same draw, keeping the reconstruction and the sampled problem data.
struct RealizationOutput {
  RealizationRecord record;
  SolveResult solve;
  AngleSet angles;
  SinogramBlock data;   // noisy right-hand side
  SinogramBlock noise;  // the unit-variance draw before delta scaling
};
RealizationOutput run_realization_full(const ExperimentPlan& plan, int n, int realization_idx);

/// Full sweep over plan.n_values x realizations on a worker pool. Output is
/// deterministic for a fixed plan regardless of worker count. Throws
/// ConvergenceError when >= 5% of realizations fail.
SweepResult run_sweep(const ExperimentPlan& plan, int workers = 1);

/// OLS fit of log(mean) against log(n): means = c * n^beta.
RateFitResult fit_monomial(const std::vector<int>& n_values, const Vector& means);

/// sum_i sigma_i^2 / (sigma_i^2 + alpha) over singular values of op, dense.
double effective_dimension(const LinearMap& op, double alpha,
                           Eigen::Index max_entries = Eigen::Index(1) << 26);
/// Radon overload: singular values of A / sqrt(n_theta).
double effective_dimension(const RadonOperator& op, double alpha,
                           Eigen::Index max_entries = Eigen::Index(1) << 26);

/// Closed-form quadratic-case approximation error
/// (beta/2) <f, (A^T A / n_design + beta I)^{-1} f>, solved matrix-free by
/// conjugate gradients. Requires p = 2 with an identity transform.
double script_R_quadratic(const LinearMap& op, const Penalty& pen, const Vector& f_dagger,
                          double beta, int n_design);
double script_R_quadratic(const SubsampledRadon& op, const Penalty& pen, const Image& f_dagger,
                          double beta);

struct BesovSumResult {
  double total = 0.0;
  Vector level_subtotals;
};

/// Partial sum of conjugate-weighted q-th powers of per-basis-function
/// sup norms: sum over the first `truncation` wavelet basis functions
/// (coarse levels first) of c_{lambda,q,-s,d} * max_angle ||A psi||_2^q.
/// s must be the smoothness the penalty weights were built with.
BesovSumResult besov_assumption_sum(const RadonOperator& op, const Penalty& pen, double s,
                                    int truncation);

}  // namespace tomolearn
