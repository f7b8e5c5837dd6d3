#include "tomolearn/experiments.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace tomolearn {

std::string regime_name(RegimeKind kind) {
  return kind == RegimeKind::fixed ? "fixed" : "decreasing";
}

double NoiseRegime::delta(double sino_sup, int n) const {
  const double base = c_delta_factor * sino_sup;
  return kind == RegimeKind::fixed ? base : base / n;
}

double AlphaSchedule::alpha(int n) const { return c_alpha * std::pow(double(n), exponent); }

// Tuned on the default side-64 / 180-angle discretization so the fitted
// Bregman slope lands mid-window for each regime; other grids may need a
// different constant via --c-alpha.
double default_c_alpha(double p, RegimeKind regime) {
  const bool fixed = regime == RegimeKind::fixed;
  if (std::abs(p - 1.5) < 1e-9) return fixed ? 7.0 : 0.3;
  if (std::abs(p - 4.0 / 3.0) < 1e-9) return fixed ? 5.0 : 0.3;
  if (std::abs(p - 2.0) < 1e-9) return fixed ? 30.0 : 0.5;
  throw std::invalid_argument("default_c_alpha: no tuned constant for this p; pass c_alpha");
}

std::vector<int> desk_n_values() { return {18, 25, 32, 40, 50, 64, 81}; }

std::vector<int> full_n_values() {
  std::vector<int> out;
  for (int n = 36; n <= 162; n += 14) out.push_back(n);
  return out;
}

ExperimentPlan build_plan(const PlanParams& params) {
  if (params.realizations < 1)
    throw std::invalid_argument("build_plan: realizations must be >= 1");
  ExperimentPlan plan;
  plan.p = params.p;
  plan.n_values = params.n_values.empty() ? desk_n_values() : params.n_values;
  if (!std::is_sorted(plan.n_values.begin(), plan.n_values.end()) ||
      std::adjacent_find(plan.n_values.begin(), plan.n_values.end()) != plan.n_values.end())
    throw std::invalid_argument("build_plan: n_values must be strictly increasing");
  if (plan.n_values.front() < 1 || plan.n_values.back() > params.n_theta)
    throw std::invalid_argument("build_plan: n_values must lie in [1, n_theta]");
  plan.realizations = params.realizations;
  plan.n_theta = params.n_theta;
  plan.base_seed = RngSeed{params.seed, 0};
  plan.solver = params.solver;

  plan.regime.kind = params.regime;
  const double raw_c_delta =
      params.c_delta > 0.0 ? params.c_delta : (params.regime == RegimeKind::fixed ? 0.01 : 0.02);
  plan.regime.c_delta_factor = params.regime == RegimeKind::fixed
                                   ? raw_c_delta
                                   : raw_c_delta * plan.n_values.front();

  plan.schedule.exponent = params.regime == RegimeKind::fixed ? -1.0 / 3.0 : -1.0;
  plan.schedule.c_alpha =
      params.c_alpha > 0.0 ? params.c_alpha : default_c_alpha(params.p, params.regime);

  RadonOperator op(params.side, params.n_theta);
  Penalty pen(params.p, AnalysisTransform::haar2d(params.side));
  const double lambda_sc = params.lambda_sc > 0.0 ? params.lambda_sc : default_lambda_sc(op);
  plan.phantom = project_to_source_condition(make_phantom(params.side), op, pen, lambda_sc);
  plan.sino_sup = op.apply(plan.phantom.f_dagger.data()).cwiseAbs().maxCoeff();
  return plan;
}

namespace {

RealizationOutput realize(const ExperimentPlan& plan, const RadonOperator& op,
                          const Penalty& pen, int n, int idx) {
  const RngSeed rs = plan.base_seed.derive(std::uint64_t(n), std::uint64_t(idx));
  RealizationRecord rec;
  rec.p = plan.p;
  rec.regime = plan.regime.kind;
  rec.n = n;
  rec.realization = idx;
  rec.seed = rs.seed;
  rec.delta = plan.regime.delta(plan.sino_sup, n);
  rec.alpha = plan.schedule.alpha(n);

  AngleSet angles = sample_angles(n, plan.n_theta, rs.derive(1));
  const SubsampledRadon sub(op, angles);
  const Vector g_clean = sub.apply(plan.phantom.f_dagger.data());
  const Vector eps = gaussian_noise(g_clean.size(), rs.derive(2));
  SinogramBlock g(g_clean + rec.delta * eps, n, op.n_dtc());
  SinogramBlock eps_block(eps, n, op.n_dtc());

  SolverConfig cfg = plan.solver;
  const double sigma = estimate_op_norm(sub, RngSeed{0x9e0fb7a351ull, 7}, 1e-4, 1000);
  cfg.tau_init = n / (sigma * sigma);
  cfg.tau_min = 1e-8 * cfg.tau_init;
  cfg.tau_max = 1e8 * cfg.tau_init;

  try {
    SolveResult sol = pgd_solve(sub, g, pen, rec.alpha, cfg);
    rec.bregman = bregman(pen, sol.reconstruction.data(), plan.phantom.f_dagger.data());
    rec.objective = sol.objective_trace[sol.objective_trace.size() - 1];
    rec.iterations = sol.iterations;
    rec.converged = sol.converged;
    rec.apriori_ok =
        apriori_check(sol, pen, plan.phantom.f_dagger, rec.delta, rec.alpha, eps_block);
    return RealizationOutput{rec, std::move(sol), std::move(angles), std::move(g),
                             std::move(eps_block)};
  } catch (const DivergenceError& e) {
    std::ostringstream msg;
    msg << e.what() << " (seed=" << rs.seed << ", N=" << n << ", realization=" << idx << ")";
    throw DivergenceError(msg.str());
  }
}

Penalty plan_penalty(const ExperimentPlan& plan) {
  return Penalty(plan.p, AnalysisTransform::haar2d(plan.phantom.f_dagger.side()));
}

}  // namespace

RealizationRecord run_realization(const ExperimentPlan& plan, int n, int realization_idx) {
  return run_realization_full(plan, n, realization_idx).record;
}

RealizationOutput run_realization_full(const ExperimentPlan& plan, int n, int realization_idx) {
  if (std::find(plan.n_values.begin(), plan.n_values.end(), n) == plan.n_values.end())
    throw std::invalid_argument("run_realization: n not in plan");
  if (realization_idx < 0 || realization_idx >= plan.realizations)
    throw std::invalid_argument("run_realization: realization index out of range");
  const RadonOperator op(plan.phantom.f_dagger.side(), plan.n_theta);
  return realize(plan, op, plan_penalty(plan), n, realization_idx);
}

SweepResult run_sweep(const ExperimentPlan& plan, int workers) {
  const RadonOperator op(plan.phantom.f_dagger.side(), plan.n_theta);
  const Penalty pen = plan_penalty(plan);
  const size_t n_count = plan.n_values.size();
  const size_t tasks = n_count * size_t(plan.realizations);

  SweepResult out;
  out.n_values = plan.n_values;
  out.records.resize(tasks);

  auto do_task = [&](size_t t) {
    const int n = plan.n_values[t / plan.realizations];
    const int idx = int(t % plan.realizations);
    try {
      out.records[t] = realize(plan, op, pen, n, idx).record;
    } catch (const std::exception& e) {
      RealizationRecord rec;
      rec.p = plan.p;
      rec.regime = plan.regime.kind;
      rec.n = n;
      rec.realization = idx;
      rec.seed = plan.base_seed.derive(std::uint64_t(n), std::uint64_t(idx)).seed;
      rec.delta = plan.regime.delta(plan.sino_sup, n);
      rec.alpha = plan.schedule.alpha(n);
      rec.bregman = std::numeric_limits<double>::quiet_NaN();
      rec.objective = std::numeric_limits<double>::quiet_NaN();
      rec.failed = true;
      rec.error = e.what();
      out.records[t] = rec;
    }
  };

  const int w = int(std::min<size_t>(std::max(workers, 1), tasks));
  if (w <= 1) {
    for (size_t t = 0; t < tasks; ++t) do_task(t);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (int i = 0; i < w; ++i)
      pool.emplace_back([&] {
        for (size_t t = next.fetch_add(1); t < tasks; t = next.fetch_add(1)) do_task(t);
      });
    for (auto& th : pool) th.join();
  }

  size_t failures = 0;
  for (const auto& rec : out.records) failures += rec.failed ? 1 : 0;
  if (failures > 0 && double(failures) >= 0.05 * double(tasks)) {
    std::ostringstream msg;
    msg << "run_sweep: " << failures << " of " << tasks << " realizations failed";
    throw SweepAbort(msg.str(), std::move(out.records));
  }

  Vector means(n_count), stddevs(n_count);
  for (size_t i = 0; i < n_count; ++i) {
    double sum = 0.0, count = 0.0;
    for (int r = 0; r < plan.realizations; ++r) {
      const auto& rec = out.records[i * plan.realizations + r];
      if (!rec.failed) {
        sum += rec.bregman;
        count += 1.0;
      }
    }
    const double mean = sum / count;
    double ss = 0.0;
    for (int r = 0; r < plan.realizations; ++r) {
      const auto& rec = out.records[i * plan.realizations + r];
      if (!rec.failed) ss += (rec.bregman - mean) * (rec.bregman - mean);
    }
    means[i] = mean;
    stddevs[i] = count > 1.0 ? std::sqrt(ss / (count - 1.0)) : 0.0;
  }

  out.fit = fit_monomial(plan.n_values, means);
  out.fit.per_n_stddevs = stddevs;
  return out;
}

RateFitResult fit_monomial(const std::vector<int>& n_values, const Vector& means) {
  const Eigen::Index m = Eigen::Index(n_values.size());
  if (m != means.size()) throw DimensionError("fit_monomial: length mismatch");
  if (m < 2) throw std::invalid_argument("fit_monomial: need at least 2 points");
  if ((means.array() <= 0.0).any())
    throw std::invalid_argument("fit_monomial: means must be positive for a log fit");

  Vector x(m), y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    x[i] = std::log(double(n_values[i]));
    y[i] = std::log(means[i]);
  }
  const double xbar = x.mean(), ybar = y.mean();
  const double sxx = (x.array() - xbar).square().sum();
  const double sxy = ((x.array() - xbar) * (y.array() - ybar)).sum();
  const double slope = sxy / sxx;
  const double intercept = ybar - slope * xbar;

  const Vector resid = y - (intercept + slope * x.array()).matrix();
  const double ss_res = resid.squaredNorm();
  const double ss_tot = (y.array() - ybar).square().sum();
  const double r2 = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;

  RateFitResult fit;
  fit.c = std::exp(intercept);
  fit.beta = slope;
  fit.per_n_means = means;
  fit.per_n_stddevs = Vector::Zero(m);
  fit.r_squared = r2;
  return fit;
}

namespace {

double spectrum_sum(const Matrix& a, double alpha) {
  const Matrix gram = a.rows() >= a.cols()
                          ? Matrix(a.transpose() * a)
                          : Matrix(a * a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  double total = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double lam = std::max(eig.eigenvalues()[i], 0.0);
    total += lam / (lam + alpha);
  }
  return total;
}

}  // namespace

double effective_dimension(const LinearMap& op, double alpha, Eigen::Index max_entries) {
  if (!(alpha > 0.0)) throw std::invalid_argument("effective_dimension: alpha must be positive");
  if (op.rows() * op.cols() > max_entries)
    throw CapabilityError(
        "effective_dimension: operator too large for a dense spectrum; use a smaller "
        "side/angle grid");
  return spectrum_sum(materialize(op, max_entries), alpha);
}

double effective_dimension(const RadonOperator& op, double alpha, Eigen::Index max_entries) {
  if (!(alpha > 0.0)) throw std::invalid_argument("effective_dimension: alpha must be positive");
  if (op.rows() * op.cols() > max_entries)
    throw CapabilityError(
        "effective_dimension: operator too large for a dense spectrum; use a smaller "
        "side/angle grid");
  const Matrix a = materialize(op, max_entries) / std::sqrt(double(op.n_theta()));
  return spectrum_sum(a, alpha);
}

double script_R_quadratic(const LinearMap& op, const Penalty& pen, const Vector& f_dagger,
                          double beta, int n_design) {
  if (pen.p() != 2.0 || pen.transform().kind() != TransformKind::identity)
    throw CapabilityError("script_R_quadratic: closed form needs p = 2 and identity transform");
  if (!(beta > 0.0)) throw std::invalid_argument("script_R_quadratic: beta must be positive");
  if (n_design < 1) throw std::invalid_argument("script_R_quadratic: n_design must be >= 1");
  if (f_dagger.size() != op.cols())
    throw DimensionError("script_R_quadratic: image length mismatch");

  const double inv_n = 1.0 / n_design;
  auto apply_m = [&](const Vector& v) -> Vector {
    return op.apply_adjoint(op.apply(v)) * inv_n + beta * v;
  };
  // CG on the SPD system (B + beta I) x = f_dagger
  Vector x = Vector::Zero(f_dagger.size());
  Vector r = f_dagger;
  Vector p = r;
  const double rhs_norm = r.norm();
  if (rhs_norm == 0.0) return 0.0;
  double rs = r.squaredNorm();
  const int max_iters = 5000;
  for (int it = 0; it < max_iters; ++it) {
    const Vector mp = apply_m(p);
    const double gamma = rs / p.dot(mp);
    x += gamma * p;
    r -= gamma * mp;
    const double rs_next = r.squaredNorm();
    if (std::sqrt(rs_next) <= 1e-13 * rhs_norm) break;
    if (it + 1 == max_iters)
      throw ConvergenceError("script_R_quadratic: conjugate gradients stalled");
    p = r + (rs_next / rs) * p;
    rs = rs_next;
  }
  return 0.5 * beta * f_dagger.dot(x);
}

double script_R_quadratic(const SubsampledRadon& op, const Penalty& pen, const Image& f_dagger,
                          double beta) {
  return script_R_quadratic(op, pen, f_dagger.data(), beta, op.n_angles());
}

BesovSumResult besov_assumption_sum(const RadonOperator& op, const Penalty& pen, double s,
                                    int truncation) {
  const AnalysisTransform& tr = pen.transform();
  if (tr.side() != op.side())
    throw DimensionError("besov_assumption_sum: transform/operator side mismatch");
  if (truncation < 0 || truncation > tr.size())
    throw std::invalid_argument("besov_assumption_sum: truncation out of range");

  const double q = pen.q();
  const int d = 2;
  const double conj_expo = d * (q * (-s / d + 0.5) - 1.0);

  std::vector<int> order(tr.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return tr.levels()[a] < tr.levels()[b]; });

  BesovSumResult out;
  out.level_subtotals = Vector::Zero(tr.n_levels());
  Vector basis = Vector::Zero(tr.size());
  for (int i = 0; i < truncation; ++i) {
    const int ci = order[i];
    basis[ci] = 1.0;
    const Vector sino = op.apply(tr.synthesis(basis));
    basis[ci] = 0.0;
    double sup = 0.0;
    for (int k = 0; k < op.n_theta(); ++k)
      sup = std::max(sup, sino.segment(Eigen::Index(k) * op.n_dtc(), op.n_dtc()).norm());
    const int lvl = tr.levels()[ci];
    out.level_subtotals[lvl] += std::exp2(lvl * conj_expo) * std::pow(sup, q);
  }
  out.total = out.level_subtotals.sum();
  return out;
}

}  // namespace tomolearn
