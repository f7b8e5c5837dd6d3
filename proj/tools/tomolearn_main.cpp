#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tomolearn/experiments.hpp"
#include "tomolearn/io.hpp"
#include "tomolearn/solver.hpp"
#include "tomolearn/source_condition.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace tomolearn;

namespace {

constexpr const char* kVersion = "0.1.0";

fs::path resolve_output_dir(const std::string& cli_value) {
  if (!cli_value.empty()) return cli_value;
  if (const char* env = std::getenv("TOMOLEARN_OUTPUT_DIR"); env && *env) return env;
  return "tomolearn_out";
}

std::string p_tag(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "p%.4g", p);
  std::string tag = buf;
  for (auto& c : tag)
    if (c == '.') c = '_';
  return tag;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
}

json version_block() {
  return json{{"tomolearn", kVersion},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                            std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)}};
}

Image load_input_image(const std::string& name, int side) {
  if (name == "blobs") return make_phantom(side);
  const fs::path path = name;
  if (!fs::exists(path))
    throw std::runtime_error("input image not found: " + name +
                             " (expected a CSV/PGM path or the builtin name 'blobs')");
  if (path.extension() == ".pgm") return read_image_pgm(path);
  return read_image_csv(path);
}

Penalty make_penalty(double p, int side) {
  try {
    return Penalty(p, AnalysisTransform::haar2d(side));
  } catch (const DimensionError&) {
    throw std::invalid_argument("wavelet penalty needs a power-of-two image side, got " +
                                std::to_string(side) +
                                "; resample the input or pick a power-of-two --side");
  }
}

struct CommonOpts {
  double p = 1.5;
  std::string regime = "fixed";
  double c_alpha = 0.0;
  double c_delta = 0.0;
  int side = 64;
  int n_theta = 180;
  std::vector<int> n_values;
  int realizations = 10;
  std::uint64_t seed = 0x746f6d6f31ull;
  int workers = 1;
  bool full_scale = false;
  bool dry_run = false;
  std::string output_dir;
  double lambda_sc = 0.0;
  int max_iters = 2000;
  double rel_tol = 1e-7;
};

RegimeKind parse_regime(const std::string& name) {
  if (name == "fixed") return RegimeKind::fixed;
  if (name == "decreasing") return RegimeKind::decreasing;
  throw std::invalid_argument("unknown regime '" + name + "' (fixed | decreasing)");
}

PlanParams to_plan_params(const CommonOpts& o) {
  PlanParams pp;
  pp.p = o.p;
  pp.regime = parse_regime(o.regime);
  pp.c_alpha = o.c_alpha;
  pp.c_delta = o.c_delta;
  pp.side = o.side;
  pp.n_theta = o.n_theta;
  pp.n_values = o.n_values;
  pp.realizations = o.realizations;
  pp.seed = o.seed;
  pp.lambda_sc = o.lambda_sc;
  pp.solver.max_iters = o.max_iters;
  pp.solver.rel_tol = o.rel_tol;
  return pp;
}

json opts_to_json(const CommonOpts& o) {
  return json{{"p", o.p},
              {"regime", o.regime},
              {"c_alpha", o.c_alpha},
              {"c_delta", o.c_delta},
              {"side", o.side},
              {"n_theta", o.n_theta},
              {"n_values", o.n_values},
              {"realizations", o.realizations},
              {"seed", o.seed},
              {"workers", o.workers},
              {"full_scale", o.full_scale},
              {"dry_run", o.dry_run},
              {"lambda_sc", o.lambda_sc},
              {"max_iters", o.max_iters},
              {"rel_tol", o.rel_tol}};
}

// Shared experiment-shaped flag block; returns pointers needed for
// full-scale default resolution.
struct ExperimentFlags {
  CLI::Option* side_opt;
  CLI::Option* n_theta_opt;
  CLI::Option* n_values_opt;
  CLI::Option* realizations_opt;
};

ExperimentFlags add_common_options(CLI::App* cmd, CommonOpts& o, bool with_sweep_flags) {
  cmd->add_option("--p", o.p, "Penalty exponent in (1,2]")->capture_default_str();
  cmd->add_option("--regime", o.regime, "Noise regime: fixed | decreasing")
      ->check(CLI::IsMember({"fixed", "decreasing"}))
      ->capture_default_str();
  cmd->add_option("--c-alpha", o.c_alpha,
                  "Constant in the alpha schedule (0: tuned default for p/regime)");
  cmd->add_option("--c-delta", o.c_delta,
                  "Noise level constant (0: 0.01 fixed / 0.02 decreasing)");
  ExperimentFlags fl{};
  fl.side_opt = cmd->add_option("--side", o.side, "Image side in pixels")->capture_default_str();
  fl.n_theta_opt =
      cmd->add_option("--n-theta", o.n_theta, "Fine angle grid size")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Base seed")->capture_default_str();
  cmd->add_option("--lambda-sc", o.lambda_sc,
                  "Source-condition ridge weight (0: 1e-3 sigma^2)");
  cmd->add_option("--max-iters", o.max_iters, "Solver iteration cap")->capture_default_str();
  cmd->add_option("--rel-tol", o.rel_tol, "Solver relative-change tolerance")
      ->capture_default_str();
  cmd->add_option("--output-dir", o.output_dir,
                  "Output directory (default: $TOMOLEARN_OUTPUT_DIR or ./tomolearn_out)");
  if (with_sweep_flags) {
    fl.n_values_opt = cmd->add_option("--n-values", o.n_values,
                                      "Angle counts N to sweep (default: desk ladder)")
                          ->delimiter(',');
    fl.realizations_opt = cmd->add_option("--realizations", o.realizations,
                                          "Monte-Carlo realizations per N")
                              ->capture_default_str();
    cmd->add_option("--workers", o.workers, "Worker threads")->capture_default_str();
    cmd->add_flag("--full-scale", o.full_scale,
                  "Full-scale defaults: side 128, n-theta 360, N 36..162, 30 realizations");
    cmd->add_flag("--dry-run", o.dry_run, "Write the manifest only, no solves");
  }
  return fl;
}

void apply_full_scale(CommonOpts& o, const ExperimentFlags& fl) {
  if (!o.full_scale) return;
  if (!fl.side_opt->count()) o.side = 128;
  if (!fl.n_theta_opt->count()) o.n_theta = 360;
  if (fl.n_values_opt && !fl.n_values_opt->count()) o.n_values = full_n_values();
  if (fl.realizations_opt && !fl.realizations_opt->count()) o.realizations = 30;
}

int cmd_phantom(const CommonOpts& o, const std::string& input) {
  const fs::path dir = resolve_output_dir(o.output_dir);
  const Image f0 = load_input_image(input, o.side);
  const Penalty pen = make_penalty(o.p, f0.side());
  const RadonOperator op(f0.side(), o.n_theta);
  const double lambda = o.lambda_sc > 0.0 ? o.lambda_sc : default_lambda_sc(op);
  const SourceConditionResult res = project_to_source_condition(f0, op, pen, lambda);
  const double atw_norm = op.apply_adjoint(res.w.data()).norm();

  fs::create_directories(dir);
  write_image_csv(dir / "f_dagger.csv", res.f_dagger);
  write_image_pgm16(dir / "f_dagger.pgm", res.f_dagger);
  write_sinogram_csv(dir / "w.csv", res.w);
  json prov{{"input", input},
            {"p", o.p},
            {"side", f0.side()},
            {"n_theta", o.n_theta},
            {"lambda_sc", lambda},
            {"sc_residual", res.sc_residual},
            {"sc_residual_rel", atw_norm > 0.0 ? res.sc_residual / atw_norm : 0.0},
            {"rel_change", res.rel_change},
            {"penalty_value", eval_R(pen, res.f_dagger)},
            {"w_norm", res.w.data().norm()}};
  write_json(dir / "provenance.json", prov);
  json manifest{{"command", "phantom"}, {"config", opts_to_json(o)},
                {"input", input},      {"output_dir", dir.string()},
                {"versions", version_block()}};
  write_json(dir / "manifest.json", manifest);

  std::cout << "phantom: wrote f_dagger (side " << f0.side() << ") to " << dir.string()
            << "; rel_change " << format_double(res.rel_change) << ", sc_residual_rel "
            << format_double(atw_norm > 0.0 ? res.sc_residual / atw_norm : 0.0) << '\n';
  return 0;
}

int cmd_experiment(CLI::App* cmd, CommonOpts& o, const ExperimentFlags& fl) {
  (void)cmd;
  apply_full_scale(o, fl);
  if (o.n_values.empty()) o.n_values = desk_n_values();
  const fs::path dir = resolve_output_dir(o.output_dir);
  fs::create_directories(dir);
  const std::string tag = p_tag(o.p) + "_" + o.regime;

  json manifest{{"command", "experiment"},
                {"config", opts_to_json(o)},
                {"output_dir", dir.string()},
                {"artifacts",
                 {{"raw", "raw_" + tag + ".csv"},
                  {"summary", "summary_" + tag + ".csv"},
                  {"plot", "plot_" + tag + ".svg"}}},
                {"versions", version_block()}};
  write_json(dir / ("manifest_" + tag + ".json"), manifest);
  if (o.dry_run) {
    std::cout << "experiment (dry run): manifest written to " << dir.string() << '\n';
    return 0;
  }

  const ExperimentPlan plan = build_plan(to_plan_params(o));
  std::cout << "experiment: phantom ready (rel_change "
            << format_double(plan.phantom.rel_change) << "), sweeping " << o.n_values.size()
            << " N values x " << o.realizations << " realizations\n";
  try {
    const SweepResult sweep = run_sweep(plan, o.workers);
    write_raw_records_csv(dir / ("raw_" + tag + ".csv"), sweep.records);
    write_summary_csv(dir / ("summary_" + tag + ".csv"), sweep);
    write_rate_plot_svg(dir / ("plot_" + tag + ".svg"), sweep,
                        "Bregman distance decay, p = " + format_double(o.p) + ", " + o.regime +
                            " noise");
    size_t failures = 0;
    for (const auto& r : sweep.records) failures += r.failed ? 1 : 0;
    std::cout << "experiment: beta = " << format_double(sweep.fit.beta)
              << ", c = " << format_double(sweep.fit.c)
              << ", r^2 = " << format_double(sweep.fit.r_squared) << ", failures " << failures
              << "/" << sweep.records.size() << "; outputs in " << dir.string() << '\n';
    return 0;
  } catch (const SweepAbort& abort) {
    write_raw_records_csv(dir / ("raw_" + tag + ".csv"), abort.records);
    std::cerr << "error: " << abort.what() << "; partial raw table retained\n";
    return 2;
  }
}

int cmd_reconstruct(CommonOpts& o, int n, int realization, bool dump_trace) {
  const fs::path dir = resolve_output_dir(o.output_dir);
  PlanParams pp = to_plan_params(o);
  pp.n_values = {n};
  pp.realizations = realization + 1;
  const ExperimentPlan plan = build_plan(pp);
  const RealizationOutput out = run_realization_full(plan, n, realization);

  fs::create_directories(dir);
  write_image_csv(dir / "reconstruction.csv", out.solve.reconstruction);
  write_image_pgm16(dir / "reconstruction.pgm", out.solve.reconstruction);
  write_image_csv(dir / "f_dagger.csv", plan.phantom.f_dagger);
  write_image_pgm16(dir / "f_dagger.pgm", plan.phantom.f_dagger);
  write_sinogram_csv(dir / "data.csv", out.data);
  if (dump_trace) {
    std::ofstream tr(dir / "trace.csv");
    if (!tr) throw std::runtime_error("cannot open trace.csv for writing");
    tr << "iteration,objective,step\n";
    for (Eigen::Index i = 0; i < out.solve.objective_trace.size(); ++i)
      tr << i << ',' << format_double(out.solve.objective_trace[i]) << ','
         << format_double(out.solve.step_trace[i]) << '\n';
  }
  json result{{"n", n},
              {"realization", realization},
              {"seed", out.record.seed},
              {"delta", out.record.delta},
              {"alpha", out.record.alpha},
              {"bregman", out.record.bregman},
              {"objective", out.record.objective},
              {"iterations", out.record.iterations},
              {"converged", out.record.converged},
              {"apriori_ok", out.record.apriori_ok},
              {"angles", out.angles.indices()}};
  write_json(dir / "result.json", result);
  json manifest{{"command", "reconstruct"},
                {"config", opts_to_json(o)},
                {"n", n},
                {"realization", realization},
                {"output_dir", dir.string()},
                {"versions", version_block()}};
  write_json(dir / "manifest.json", manifest);
  std::cout << "reconstruct: N = " << n << ", bregman "
            << format_double(out.record.bregman) << ", iterations "
            << out.record.iterations << (out.record.converged ? " (converged)" : " (cap hit)")
            << "; outputs in " << dir.string() << '\n';
  return 0;
}

int cmd_fit(const std::string& input, const std::string& output_dir) {
  const fs::path dir = resolve_output_dir(output_dir);
  std::ifstream in(input);
  if (!in) throw std::runtime_error("cannot open raw records CSV: " + input);
  std::string line;
  if (!std::getline(in, line) || line.rfind("p,regime,N,", 0) != 0)
    throw std::runtime_error("not a raw records CSV (missing header): " + input);
  std::map<int, std::vector<double>> by_n;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 11) throw std::runtime_error("malformed raw CSV row: " + line);
    const int n = std::stoi(cells[2]);
    const double breg = std::strtod(cells[7].c_str(), nullptr);
    if (std::isfinite(breg)) by_n[n].push_back(breg);
  }
  if (by_n.size() < 2) throw std::invalid_argument("need at least two N groups to fit");
  std::vector<int> ns;
  Vector means(Eigen::Index(by_n.size()));
  Vector stddevs(Eigen::Index(by_n.size()));
  Eigen::Index i = 0;
  for (const auto& [n, vals] : by_n) {
    ns.push_back(n);
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= double(vals.size());
    double ss_ = 0.0;
    for (double v : vals) ss_ += (v - mean) * (v - mean);
    means[i] = mean;
    stddevs[i] = vals.size() > 1 ? std::sqrt(ss_ / double(vals.size() - 1)) : 0.0;
    ++i;
  }
  RateFitResult fit = fit_monomial(ns, means);
  fit.per_n_stddevs = stddevs;
  SweepResult refit;
  refit.fit = fit;
  refit.n_values = ns;
  fs::create_directories(dir);
  write_summary_csv(dir / "summary_refit.csv", refit);
  json manifest{{"command", "fit"},
                {"input", input},
                {"output_dir", dir.string()},
                {"beta", fit.beta},
                {"c", fit.c},
                {"r_squared", fit.r_squared},
                {"versions", version_block()}};
  write_json(dir / "manifest.json", manifest);
  std::cout << "fit: beta = " << format_double(fit.beta) << ", c = " << format_double(fit.c)
            << ", r^2 = " << format_double(fit.r_squared) << "; summary in " << dir.string()
            << '\n';
  return 0;
}

int cmd_diagnose(CommonOpts& o, int truncation, int alpha_grid) {
  const fs::path dir = resolve_output_dir(o.output_dir);
  const RadonOperator op(o.side, o.n_theta);
  const Penalty pen = make_penalty(o.p, o.side);
  const AnalysisTransform& w = pen.transform();
  json report;
  std::ostringstream text;
  text << "tomolearn diagnostics (side " << o.side << ", n_theta " << o.n_theta << ", p "
       << format_double(o.p) << ")\n\n";

  // adjoint identity on seeded random vectors
  {
    const Vector f = gaussian_noise(op.cols(), RngSeed{o.seed, 101});
    const Vector g = gaussian_noise(op.rows(), RngSeed{o.seed, 102});
    const double lhs = op.apply(f).dot(g);
    const double rhs = f.dot(op.apply_adjoint(g));
    const double rel = std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    report["adjoint_identity_rel_error"] = rel;
    text << "adjoint identity relative error: " << format_double(rel) << "\n";
  }
  // orthonormal transform round trip and Parseval
  {
    const Vector x = gaussian_noise(w.size(), RngSeed{o.seed, 103});
    const double rt = (w.synthesis(w.analysis(x)) - x).norm() / x.norm();
    const double parseval =
        std::abs(w.analysis(x).squaredNorm() - x.squaredNorm()) / x.squaredNorm();
    report["wavelet_round_trip_rel_error"] = rt;
    report["wavelet_parseval_rel_error"] = parseval;
    text << "wavelet round-trip relative error: " << format_double(rt) << "\n"
         << "wavelet Parseval relative error: " << format_double(parseval) << "\n";
  }
  // per-angle mass preservation
  {
    const Vector img = gaussian_noise(op.cols(), RngSeed{o.seed, 104}).cwiseAbs();
    const double mass = img.sum();
    const Vector sino = op.apply(img);
    double worst = 0.0;
    for (int k = 0; k < op.n_theta(); ++k) {
      const double row_sum = sino.segment(Eigen::Index(k) * op.n_dtc(), op.n_dtc()).sum();
      worst = std::max(worst, std::abs(row_sum - mass) / mass);
    }
    report["mass_preservation_rel_error"] = worst;
    text << "per-angle mass preservation worst relative error: " << format_double(worst)
         << "\n";
  }
  // effective dimension over a log-spaced alpha grid
  {
    const Matrix a = materialize(op) / std::sqrt(double(op.n_theta()));
    const Matrix gram = a.transpose() * a;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    const double top = std::max(eig.eigenvalues().maxCoeff(), 1e-300);
    std::vector<double> alphas, dims;
    bool decreasing = true;
    for (int i = 0; i < alpha_grid; ++i) {
      const double alpha =
          top * std::pow(10.0, -5.0 + 5.0 * double(i) / std::max(alpha_grid - 1, 1));
      double dim = 0.0;
      for (Eigen::Index j = 0; j < eig.eigenvalues().size(); ++j) {
        const double lam = std::max(eig.eigenvalues()[j], 0.0);
        dim += lam / (lam + alpha);
      }
      if (!alphas.empty() && dim >= dims.back()) decreasing = false;
      alphas.push_back(alpha);
      dims.push_back(dim);
    }
    const double cross = effective_dimension(op, alphas[alphas.size() / 2]);
    const double cross_rel = std::abs(cross - dims[dims.size() / 2]) /
                             std::max(std::abs(dims[dims.size() / 2]), 1e-300);
    report["effective_dimension"] = {{"alpha", alphas},
                                     {"value", dims},
                                     {"strictly_decreasing", decreasing},
                                     {"library_cross_check_rel_error", cross_rel}};
    text << "effective dimension: strictly decreasing over " << alpha_grid
         << "-point alpha grid: " << (decreasing ? "yes" : "NO") << "\n";
  }
  // Besov assumption partial sums by level
  {
    const int trunc = std::min<int>(truncation, int(w.size()));
    const double s_besov = 2.0 * (1.0 / o.p - 0.5);
    const BesovSumResult sum = besov_assumption_sum(op, pen, s_besov, trunc);
    std::vector<double> subs(sum.level_subtotals.data(),
                             sum.level_subtotals.data() + sum.level_subtotals.size());
    report["besov_assumption"] = {{"truncation", trunc},
                                  {"s", s_besov},
                                  {"total", sum.total},
                                  {"level_subtotals", subs}};
    text << "besov assumption partial sum (first " << trunc
         << " basis functions): " << format_double(sum.total) << "\n  level subtotals:";
    for (double v : subs) text << ' ' << format_double(v);
    text << "\n";
  }
  // small end-to-end solve with the a-priori bound
  {
    PlanParams pp = to_plan_params(o);
    pp.n_values = {std::min(10, o.n_theta)};
    pp.realizations = 1;
    pp.solver.max_iters = std::min(o.max_iters, 800);
    const ExperimentPlan plan = build_plan(pp);
    const RealizationOutput out = run_realization_full(plan, pp.n_values[0], 0);
    report["apriori_check"] = {{"n", pp.n_values[0]},
                               {"converged", out.record.converged},
                               {"holds", out.record.apriori_ok},
                               {"bregman", out.record.bregman}};
    text << "a-priori penalty bound on a sample solve (N = " << pp.n_values[0]
         << "): " << (out.record.apriori_ok ? "holds" : "VIOLATED") << "\n";
  }

  fs::create_directories(dir);
  write_json(dir / "diagnose.json", report);
  std::ofstream txt(dir / "diagnose.txt");
  if (!txt) throw std::runtime_error("cannot open diagnose.txt for writing");
  txt << text.str();
  json manifest{{"command", "diagnose"},
                {"config", opts_to_json(o)},
                {"truncation", truncation},
                {"alpha_grid", alpha_grid},
                {"output_dir", dir.string()},
                {"versions", version_block()}};
  write_json(dir / "manifest.json", manifest);
  std::cout << text.str() << "report written to " << dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex p-homogeneous regularization for tomographic inverse learning"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "INI config file (CLI flags take precedence)");
  app.require_subcommand(1);

  CommonOpts phantom_opts;
  std::string phantom_input = "blobs";
  auto* phantom_cmd =
      app.add_subcommand("phantom", "Project an image onto the discrete source condition");
  add_common_options(phantom_cmd, phantom_opts, false);
  phantom_cmd->add_option("--input", phantom_input,
                          "Builtin name 'blobs' or a CSV/PGM image path");

  CommonOpts exp_opts;
  auto* exp_cmd = app.add_subcommand("experiment", "Monte-Carlo N-sweep with rate fit");
  const ExperimentFlags exp_flags = add_common_options(exp_cmd, exp_opts, true);

  CommonOpts rec_opts;
  int rec_n = 50, rec_realization = 0;
  bool rec_trace = false;
  auto* rec_cmd = app.add_subcommand("reconstruct", "Single regularized reconstruction");
  add_common_options(rec_cmd, rec_opts, false);
  rec_cmd->add_option("--n", rec_n, "Number of sampled angles")->capture_default_str();
  rec_cmd->add_option("--realization", rec_realization, "Realization index")
      ->capture_default_str();
  rec_cmd->add_flag("--trace", rec_trace, "Also write the per-iteration trace CSV");

  std::string fit_input, fit_output;
  auto* fit_cmd = app.add_subcommand("fit", "Refit the monomial rate from a raw records CSV");
  fit_cmd->add_option("input", fit_input, "raw_*.csv produced by the experiment command")
      ->required();
  fit_cmd->add_option("--output-dir", fit_output, "Output directory");

  CommonOpts diag_opts;
  diag_opts.side = 32;
  diag_opts.n_theta = 60;
  int diag_truncation = 256, diag_alpha_grid = 7;
  auto* diag_cmd = app.add_subcommand("diagnose", "Operator and assumption diagnostics");
  add_common_options(diag_cmd, diag_opts, false);
  diag_cmd->add_option("--truncation", diag_truncation, "Besov sum truncation")
      ->capture_default_str();
  diag_cmd->add_option("--alpha-grid", diag_alpha_grid, "Effective-dimension grid size")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (phantom_cmd->parsed()) return cmd_phantom(phantom_opts, phantom_input);
    if (exp_cmd->parsed()) return cmd_experiment(exp_cmd, exp_opts, exp_flags);
    if (rec_cmd->parsed()) return cmd_reconstruct(rec_opts, rec_n, rec_realization, rec_trace);
    if (fit_cmd->parsed()) return cmd_fit(fit_input, fit_output);
    if (diag_cmd->parsed()) return cmd_diagnose(diag_opts, diag_truncation, diag_alpha_grid);
  } catch (const SweepAbort& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
