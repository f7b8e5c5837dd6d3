#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "tomolearn/experiments.hpp"
#include "tomolearn/linear_map.hpp"
#include "tomolearn/random.hpp"

using namespace tomolearn;

namespace {

PlanParams small_params() {
  PlanParams pp;
  pp.p = 1.5;
  pp.side = 16;
  pp.n_theta = 24;
  pp.n_values = {6, 9, 12};
  pp.realizations = 2;
  pp.solver.max_iters = 600;
  return pp;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("monomial fit recovers exact power laws") {
  const std::vector<int> ns{18, 25, 32, 40, 50};
  Vector means(5);
  for (int i = 0; i < 5; ++i) means[i] = 3.7 * std::pow(double(ns[size_t(i)]), -0.41);
  const RateFitResult fit = fit_monomial(ns, means);
  CHECK(fit.beta == doctest::Approx(-0.41).epsilon(1e-10));
  CHECK(fit.c == doctest::Approx(3.7).epsilon(1e-10));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("monomial fit on frozen two-point instance") {
  Vector means(2);
  means << 4.0, 2.0;
  const RateFitResult fit = fit_monomial({1, 2}, means);
  CHECK(fit.beta == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(fit.c == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("equal means fit a flat rate") {
  const RateFitResult fit = fit_monomial({10, 20, 40}, Vector::Constant(3, 0.7));
  CHECK(fit.beta == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fit.c == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("noisy rate estimate lands near the truth") {
  Rng rng(RngSeed{130, 0});
  std::vector<int> ns;
  Vector means(12);
  for (int i = 0; i < 12; ++i) {
    ns.push_back(20 + 15 * i);
    means[i] = 2.0 * std::pow(double(ns.back()), -1.0 / 3.0) *
               std::exp(0.01 * rng.normal());
  }
  const RateFitResult fit = fit_monomial(ns, means);
  CHECK(fit.beta == doctest::Approx(-1.0 / 3.0).epsilon(0.06));
  CHECK(fit.r_squared > 0.99);
}

TEST_CASE("monomial fit input validation") {
  CHECK_THROWS_AS((void)fit_monomial({5}, Vector::Constant(1, 1.0)), std::invalid_argument);
  Vector bad(2);
  bad << 1.0, -2.0;
  CHECK_THROWS_AS((void)fit_monomial({1, 2}, bad), std::invalid_argument);
}

TEST_CASE("effective dimension on diagonal instances") {
  Matrix id = Matrix::Identity(6, 6);
  CHECK(effective_dimension(DenseMap(id), 1.0) == doctest::Approx(3.0).epsilon(1e-12));
  Matrix d(2, 2);
  d << 2.0, 0.0, 0.0, 1.0;
  CHECK(effective_dimension(DenseMap(d), 1.0) == doctest::Approx(1.3).epsilon(1e-12));
  // monotone decreasing in alpha
  const RadonOperator op(8, 10);
  double prev = 1e300;
  for (double alpha : {1e-3, 1e-2, 1e-1, 1.0}) {
    const double dim = effective_dimension(op, alpha);
    CHECK(dim < prev);
    CHECK(dim > 0.0);
    prev = dim;
  }
}

TEST_CASE("quadratic approximation functional on frozen instances") {
  const Penalty pen(2.0, AnalysisTransform::identity(1));
  Vector f(1);
  f << 1.0;
  const DenseMap id(Matrix::Identity(1, 1));
  for (double beta : {0.1, 1.0, 10.0}) {
    CHECK(script_R_quadratic(id, pen, f, beta, 1) ==
          doctest::Approx(beta / (2.0 * (1.0 + beta))).epsilon(1e-10));
  }
}

TEST_CASE("quadratic approximation functional matches the ridge infimum") {
  // value of inf_w 1/2 |A^T w / sqrt(n) - f|^2 + (beta/2)|w|^2 via dense algebra
  Rng rng(RngSeed{131, 0});
  for (int inst = 0; inst < 20; ++inst) {
    const int rows = 2 + int(rng.uniform_below(7));
    const int cols = 2 + int(rng.uniform_below(7));
    Matrix a(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = rng.normal();
    Vector f(cols);
    for (Eigen::Index j = 0; j < cols; ++j) f[j] = rng.normal();
    const double beta = std::exp(rng.normal());
    const int n_design = 1 + int(rng.uniform_below(5));

    const Matrix m = a.transpose() / std::sqrt(double(n_design));
    const Matrix lhs = m.transpose() * m + beta * Matrix::Identity(rows, rows);
    const Vector w = lhs.ldlt().solve(m.transpose() * f);
    const double direct =
        0.5 * (m * w - f).squaredNorm() + 0.5 * beta * w.squaredNorm();

    const Penalty pen(2.0, AnalysisTransform::identity(1));
    const double val = script_R_quadratic(DenseMap(a), pen, f, beta, n_design);
    CHECK(val == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("quadratic approximation functional saturates at the truth norm") {
  Rng rng(RngSeed{132, 0});
  Matrix a(4, 4);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) a(i, j) = rng.normal();
  Vector f(4);
  for (Eigen::Index j = 0; j < 4; ++j) f[j] = rng.normal();
  const Penalty pen(2.0, AnalysisTransform::identity(2));
  const double big = script_R_quadratic(DenseMap(a), pen, f, 1e9, 1);
  CHECK(big == doctest::Approx(0.5 * f.squaredNorm()).epsilon(1e-4));
}

TEST_CASE("quadratic approximation functional guards its domain") {
  const DenseMap id(Matrix::Identity(4, 4));
  Vector f = Vector::Ones(4);
  const Penalty p32(1.5, AnalysisTransform::identity(2));
  CHECK_THROWS_AS((void)script_R_quadratic(id, p32, f, 1.0, 1), CapabilityError);
  const Penalty haar(2.0, AnalysisTransform::haar2d(2));
  CHECK_THROWS_AS((void)script_R_quadratic(id, haar, f, 1.0, 1), CapabilityError);
  const Penalty ok(2.0, AnalysisTransform::identity(2));
  CHECK_THROWS_AS((void)script_R_quadratic(id, ok, f, -1.0, 1), std::invalid_argument);
}

TEST_CASE("besov assumption sum accumulates nonnegative level masses") {
  const RadonOperator op(8, 12);
  const Penalty pen(1.5, AnalysisTransform::haar2d(8));
  const double s = 2.0 * (1.0 / 1.5 - 0.5);
  const BesovSumResult zero = besov_assumption_sum(op, pen, s, 0);
  CHECK(zero.total == 0.0);
  const BesovSumResult t16 = besov_assumption_sum(op, pen, s, 16);
  const BesovSumResult t64 = besov_assumption_sum(op, pen, s, 64);
  CHECK(t16.total > 0.0);
  CHECK(t64.total >= t16.total);
  CHECK(t64.level_subtotals.minCoeff() >= 0.0);
  CHECK(t64.level_subtotals.sum() == doctest::Approx(t64.total).epsilon(1e-12));
  CHECK_THROWS_AS((void)besov_assumption_sum(op, pen, s, 100), std::invalid_argument);
}

TEST_CASE("default alpha constants cover the tabulated grid") {
  CHECK(default_c_alpha(1.5, RegimeKind::fixed) == doctest::Approx(7.0));
  CHECK(default_c_alpha(4.0 / 3.0, RegimeKind::fixed) == doctest::Approx(5.0));
  CHECK(default_c_alpha(2.0, RegimeKind::fixed) == doctest::Approx(30.0));
  CHECK(default_c_alpha(1.5, RegimeKind::decreasing) == doctest::Approx(0.3));
  CHECK(default_c_alpha(4.0 / 3.0, RegimeKind::decreasing) == doctest::Approx(0.3));
  CHECK(default_c_alpha(2.0, RegimeKind::decreasing) == doctest::Approx(0.5));
  CHECK_THROWS_AS((void)default_c_alpha(1.9, RegimeKind::fixed), std::invalid_argument);
}

TEST_CASE("regimes scale noise and alpha as scheduled") {
  PlanParams pp = small_params();
  const ExperimentPlan fixed = build_plan(pp);
  CHECK(fixed.regime.delta(2.0, 6) == doctest::Approx(fixed.regime.delta(2.0, 12)));
  CHECK(fixed.schedule.alpha(8) ==
        doctest::Approx(fixed.schedule.c_alpha * std::pow(8.0, -1.0 / 3.0)));

  pp.regime = RegimeKind::decreasing;
  const ExperimentPlan dec = build_plan(pp);
  CHECK(dec.regime.delta(2.0, 12) == doctest::Approx(dec.regime.delta(2.0, 6) / 2.0));
  CHECK(dec.schedule.alpha(8) == doctest::Approx(dec.schedule.c_alpha / 8.0));
  // decreasing-regime delta folds in the smallest swept N
  CHECK(dec.regime.delta(1.0, pp.n_values.front()) == doctest::Approx(0.02));
}

TEST_CASE("plan validation") {
  PlanParams pp = small_params();
  pp.n_values = {6, 6};
  CHECK_THROWS_AS((void)build_plan(pp), std::invalid_argument);
  pp = small_params();
  pp.n_values = {0, 5};
  CHECK_THROWS_AS((void)build_plan(pp), std::invalid_argument);
  pp = small_params();
  pp.n_values = {6, 30};
  CHECK_THROWS_AS((void)build_plan(pp), std::invalid_argument);
  pp = small_params();
  pp.realizations = 0;
  CHECK_THROWS_AS((void)build_plan(pp), std::invalid_argument);
  pp = small_params();
  pp.side = 12;
  CHECK_THROWS_AS((void)build_plan(pp), std::exception);
}

TEST_CASE("realizations are reproducible and seed-separated") {
  const ExperimentPlan plan = build_plan(small_params());
  const RealizationRecord a = run_realization(plan, 9, 1);
  const RealizationRecord b = run_realization(plan, 9, 1);
  CHECK(a.seed == b.seed);
  CHECK(a.bregman == b.bregman);
  CHECK(a.objective == b.objective);
  CHECK(a.iterations == b.iterations);
  const RealizationRecord c = run_realization(plan, 9, 0);
  CHECK(c.seed != a.seed);
  CHECK(c.bregman != a.bregman);
  const RealizationRecord d = run_realization(plan, 12, 1);
  CHECK(d.seed != a.seed);
}

TEST_CASE("sweep aggregates records in deterministic order") {
  const ExperimentPlan plan = build_plan(small_params());
  const SweepResult one = run_sweep(plan, 1);
  const SweepResult four = run_sweep(plan, 4);
  REQUIRE(one.records.size() == 6);
  REQUIRE(four.records.size() == 6);
  for (size_t i = 0; i < one.records.size(); ++i) {
    CHECK(one.records[i].n == four.records[i].n);
    CHECK(one.records[i].realization == four.records[i].realization);
    CHECK(one.records[i].bregman == four.records[i].bregman);
    CHECK(one.records[i].seed == four.records[i].seed);
  }
  CHECK(one.records[0].n == 6);
  CHECK(one.records[5].n == 12);
  CHECK(one.fit.beta == four.fit.beta);
  CHECK(one.fit.per_n_means.size() == 3);
}

TEST_CASE("noiseless full-angle reconstruction is consistent") {
  // with exact data and every angle the operator determines the image, so a
  // light alpha must recover the projected truth; a subsampled angle set
  // would leave an approximation floor instead
  PlanParams pp = small_params();
  pp.n_values = {24};
  pp.realizations = 1;
  pp.c_delta = 1e-300;  // effectively exact data
  pp.c_alpha = 1e-4;
  pp.solver.max_iters = 8000;
  pp.solver.rel_tol = 1e-11;
  const ExperimentPlan plan = build_plan(pp);
  const RealizationOutput out = run_realization_full(plan, 24, 0);
  CHECK(out.record.converged);
  CHECK(out.record.bregman < 1e-3);
}

TEST_CASE("run_realization_full exposes the solve behind the record") {
  const ExperimentPlan plan = build_plan(small_params());
  const RealizationOutput out = run_realization_full(plan, 9, 1);
  const RealizationRecord rec = run_realization(plan, 9, 1);
  CHECK(out.record.bregman == rec.bregman);
  CHECK(out.angles.count() == 9);
  CHECK(out.data.n_angles() == 9);
  CHECK(out.solve.reconstruction.side() == 16);
  CHECK(out.noise.size() == out.data.data().size());
  const Penalty pen(plan.p, AnalysisTransform::haar2d(16));
  CHECK(bregman(pen, out.solve.reconstruction, plan.phantom.f_dagger) ==
        doctest::Approx(rec.bregman).epsilon(1e-12));
}

}  // TEST_SUITE
