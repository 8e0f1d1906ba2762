// Copyright 2026 The gaussot authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <clocale>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gaussot/barycenter.hpp"
#include "gaussot/divergence.hpp"
#include "gaussot/gp.hpp"
#include "gaussot/io.hpp"
#include "gaussot/rkhs.hpp"
#include "gaussot/validate.hpp"

namespace {

using namespace gaussot;

// Input and schema problems exit 2; numerical failures exit 3.
bool is_input_error(const std::string& kind) {
  return kind == "SchemaError" || kind == "DimensionMismatch" ||
         kind == "KernelMismatch" || kind == "SampleCountMismatch" ||
         kind == "InvalidEpsilon" || kind == "DimensionTooLarge" ||
         kind == "NotSymmetric";
}

void emit(const io::JsonValue& doc, const std::string& out_path) {
  const std::string text = doc.dump();
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) fail("SchemaError", "cannot write '" + out_path + "'");
  out << text;
}

int emit_error(const Error& e, const std::string& out_path) {
  io::JsonValue doc = io::JsonValue::object();
  doc.set("error", io::JsonValue::string(e.kind()));
  doc.set("message", io::JsonValue::string(e.what()));
  try {
    emit(doc, out_path);
  } catch (const Error&) {
    std::cerr << doc.dump();
  }
  return is_input_error(e.kind()) ? 2 : 3;
}

Vector read_nodes(const std::string& path) {
  const Matrix m = io::read_csv_matrix(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  fail("SchemaError", "grid file must be a single column or row of nodes");
}

struct DistanceOptions {
  std::string mu0, mu1, from_plan, metric = "w2", out;
  double eps = 0.0;
  bool report = false;
};

int run_distance(const DistanceOptions& opt) {
  if (!opt.from_plan.empty()) {
    const EntropicPlan plan = io::read_plan(opt.from_plan);
    DivergenceReport r;
    r.eps = plan.eps;
    r.mean_term = (plan.mean0 - plan.mean1).squaredNorm();
    r.trace_terms = transport_cost(plan) - r.mean_term;
    r.logdet_term = plan.eps * plan_kl(plan);
    r.value = r.mean_term + r.trace_terms + r.logdet_term;
    emit(io::report_json(r, opt.report), opt.out);
    return 0;
  }
  const GaussianMeasure mu0 = io::read_measure(opt.mu0);
  const GaussianMeasure mu1 = io::read_measure(opt.mu1);
  DivergenceReport r;
  if (opt.metric == "w2" || opt.eps == 0.0) {
    r = wasserstein2_report(mu0, mu1);
  } else if (opt.metric == "ot") {
    r = entropic_ot(mu0, mu1, opt.eps);
  } else if (opt.metric == "sinkhorn") {
    r = sinkhorn_divergence(mu0, mu1, opt.eps);
  } else {
    fail("SchemaError", "unknown metric '" + opt.metric + "'");
  }
  emit(io::report_json(r, opt.report), opt.out);
  return 0;
}

struct BarycenterOptions {
  std::string problem, method = "sinkhorn", out;
  double eps = 1.0, tol = 1e-12, damping = 0.0;
  int max_iter = 1000;
};

int run_barycenter(const BarycenterOptions& opt) {
  BarycenterProblem problem = io::read_barycenter_problem(opt.problem);
  problem.eps = opt.eps;
  problem.tol = opt.tol;
  problem.max_iter = opt.max_iter;
  problem.damping = opt.damping;
  BarycenterResult result;
  if (opt.method == "exact" || opt.eps == 0.0) {
    problem.eps = 0.0;
    result = exact_barycenter(problem);
  } else if (opt.method == "entropic") {
    result = entropic_barycenter(problem);
  } else if (opt.method == "sinkhorn") {
    result = sinkhorn_barycenter(problem);
  } else {
    fail("SchemaError", "unknown method '" + opt.method + "'");
  }
  emit(io::barycenter_json(result), opt.out);
  return 0;
}

struct RkhsOptions {
  std::string x, y, kernel = "linear", metric = "sinkhorn", out;
  double eps = 1.0;
  bool report = false;
};

int run_rkhs(const RkhsOptions& opt) {
  const KernelSpec spec = KernelSpec::parse(opt.kernel);
  const KernelDataset a{io::read_csv_matrix(opt.x), spec};
  const KernelDataset b{io::read_csv_matrix(opt.y), spec};
  DivergenceReport r;
  if (opt.metric == "ot") {
    r = rkhs_entropic_ot(a, b, opt.eps);
  } else if (opt.metric == "sinkhorn") {
    r = rkhs_sinkhorn(a, b, opt.eps);
  } else if (opt.metric == "mmd") {
    r.value = r.mean_term = mmd_sq(a, b);
  } else if (opt.metric == "kw") {
    r.mean_term = mmd_sq(a, b);
    r.value = kernel_wasserstein(a, b);
    r.trace_terms = r.value - r.mean_term;
  } else {
    fail("SchemaError", "unknown rkhs metric '" + opt.metric + "'");
  }
  emit(io::report_json(r, opt.report), opt.out);
  return 0;
}

struct GpOptions {
  std::string grid, gp1, gp2, metric = "sinkhorn", weights = "trapezoid", out;
  double eps = 1.0;
  double ridge = 0.0;
};

int run_gp(const GpOptions& opt) {
  const Vector nodes = read_nodes(opt.grid);
  QuadratureGrid grid;
  if (opt.weights == "trapezoid") {
    grid = QuadratureGrid::trapezoid(nodes);
  } else if (opt.weights == "uniform") {
    grid = QuadratureGrid::uniform(nodes);
  } else {
    fail("SchemaError", "unknown weights scheme '" + opt.weights + "'");
  }
  const GpSpec gp1 = io::read_gp_spec(opt.gp1);
  const GpSpec gp2 = io::read_gp_spec(opt.gp2);
  const double value = gp_divergence(gp_metric_from_string(opt.metric), gp1, gp2, grid,
                                     opt.eps, opt.ridge);
  io::JsonValue doc = io::JsonValue::object();
  doc.set("value", io::JsonValue::number(value));
  doc.set("metric", io::JsonValue::string(opt.metric));
  doc.set("eps", io::JsonValue::number(opt.eps));
  doc.set("nodes", io::JsonValue::integer(grid.size()));
  emit(doc, opt.out);
  return 0;
}

int run_validate(const std::string& out, std::uint64_t seed) {
  const auto checks = run_validation_suite(seed);
  bool all_pass = true;
  io::JsonValue arr = io::JsonValue::array();
  for (const auto& c : checks) {
    all_pass = all_pass && c.pass;
    io::JsonValue item = io::JsonValue::object();
    item.set("name", io::JsonValue::string(c.name));
    item.set("residual", io::JsonValue::number(c.residual));
    item.set("tolerance", io::JsonValue::number(c.tolerance));
    item.set("pass", io::JsonValue::boolean(c.pass));
    arr.push(std::move(item));
  }
  io::JsonValue doc = io::JsonValue::object();
  doc.set("checks", std::move(arr));
  doc.set("all_pass", io::JsonValue::boolean(all_pass));
  emit(doc, out);
  return all_pass ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");
  CLI::App app{
      "gaussot: exact and entropic 2-Wasserstein distances, Sinkhorn divergences,\n"
      "optimal entropic plans, and barycenters between Gaussian measures, with\n"
      "RKHS Gram-matrix and Gaussian-process instantiations plus an independent\n"
      "validation oracle.  GS_NUM_THREADS caps internal parallelism (0 = auto);\n"
      "GS_SIMD selects the kernel backend (auto|scalar|avx2)."};
  app.require_subcommand(1);

  DistanceOptions dist;
  auto* cmd_distance = app.add_subcommand(
      "distance", "Divergence between two Gaussian measures (JSON in, JSON out)");
  cmd_distance->add_option("--mu0", dist.mu0, "First measure: {\"mean\":[...],\"cov\":[[...]]}");
  cmd_distance->add_option("--mu1", dist.mu1, "Second measure");
  cmd_distance->add_option("--from-plan", dist.from_plan,
                           "Evaluate transport_cost + eps*KL from a saved plan instead");
  cmd_distance->add_option("--eps", dist.eps,
                           "Regularization; 0 routes ot/sinkhorn to the exact W2^2")
      ->check(CLI::NonNegativeNumber);
  cmd_distance->add_option("--metric", dist.metric, "w2 | ot | sinkhorn (default w2)");
  cmd_distance->add_flag("--report", dist.report, "Include the term decomposition");
  cmd_distance->add_option("--out", dist.out, "Write JSON here instead of stdout");

  BarycenterOptions bary;
  auto* cmd_bary = app.add_subcommand("barycenter", "Barycenter of N Gaussian measures");
  cmd_bary->add_option("--problem", bary.problem,
                       "{\"weights\":[...],\"measures\":[{mean,cov},...]}")
      ->required();
  cmd_bary->add_option("--method", bary.method, "entropic | sinkhorn | exact");
  cmd_bary->add_option("--eps", bary.eps, "Regularization; 0 selects the exact solver")
      ->check(CLI::NonNegativeNumber);
  cmd_bary->add_option("--tol", bary.tol, "Relative trace-norm convergence tolerance");
  cmd_bary->add_option("--max-iter", bary.max_iter, "Iteration cap");
  cmd_bary->add_option("--damping", bary.damping, "Damping in [0,1), default 0");
  cmd_bary->add_option("--out", bary.out, "Write JSON here instead of stdout");

  auto* cmd_plan = app.add_subcommand("plan", "Optimal entropic transport plan");
  DistanceOptions plan_opt;
  cmd_plan->add_option("--mu0", plan_opt.mu0, "First measure")->required();
  cmd_plan->add_option("--mu1", plan_opt.mu1, "Second measure")->required();
  cmd_plan->add_option("--eps", plan_opt.eps, "Regularization (> 0)")->required();
  cmd_plan->add_option("--out", plan_opt.out, "Write JSON here instead of stdout");

  RkhsOptions rkhs;
  auto* cmd_rkhs = app.add_subcommand(
      "rkhs", "Gram-matrix divergences between kernel-embedded datasets (CSV rows)");
  cmd_rkhs->add_option("--x", rkhs.x, "First dataset CSV")->required();
  cmd_rkhs->add_option("--y", rkhs.y, "Second dataset CSV")->required();
  cmd_rkhs->add_option("--kernel", rkhs.kernel, "linear | rbf:<gamma> | poly:<degree>,<offset>");
  cmd_rkhs->add_option("--eps", rkhs.eps, "Regularization for ot/sinkhorn")
      ->check(CLI::NonNegativeNumber);
  cmd_rkhs->add_option("--metric", rkhs.metric, "ot | sinkhorn | mmd | kw");
  cmd_rkhs->add_flag("--report", rkhs.report, "Include the term decomposition");
  cmd_rkhs->add_option("--out", rkhs.out, "Write JSON here instead of stdout");

  GpOptions gp;
  auto* cmd_gp = app.add_subcommand(
      "gp", "Divergence between Gaussian processes discretized on a quadrature grid");
  cmd_gp->add_option("--grid", gp.grid, "CSV of grid nodes (one column)")->required();
  cmd_gp->add_option("--gp1", gp.gp1, "GP spec JSON")->required();
  cmd_gp->add_option("--gp2", gp.gp2, "GP spec JSON")->required();
  cmd_gp->add_option("--metric", gp.metric, "w2 | ot | sinkhorn | kl");
  cmd_gp->add_option("--eps", gp.eps, "Regularization for ot/sinkhorn")
      ->check(CLI::NonNegativeNumber);
  cmd_gp->add_option("--weights", gp.weights, "trapezoid | uniform (default trapezoid)");
  cmd_gp->add_option("--ridge", gp.ridge,
                     "Add ridge*I to the reference covariance for the kl metric")
      ->check(CLI::NonNegativeNumber);
  cmd_gp->add_option("--out", gp.out, "Write JSON here instead of stdout");

  std::string validate_out;
  std::uint64_t validate_seed = 42;
  auto* cmd_validate = app.add_subcommand(
      "validate", "Run the oracle-vs-closed-form suite; exit 4 on any tolerance breach");
  cmd_validate->add_option("--seed", validate_seed, "Monte Carlo seed (default 42)");
  cmd_validate->add_option("--out", validate_out, "Write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    io::JsonValue doc = io::JsonValue::object();
    doc.set("error", io::JsonValue::string("SchemaError"));
    doc.set("message", io::JsonValue::string(e.what()));
    std::cout << doc.dump();
    return 2;
  }

  std::string out_path;
  try {
    if (cmd_distance->parsed()) {
      out_path = dist.out;
      if (dist.from_plan.empty() && (dist.mu0.empty() || dist.mu1.empty()))
        fail("SchemaError", "distance needs --mu0 and --mu1 (or --from-plan)");
      return run_distance(dist);
    }
    if (cmd_bary->parsed()) {
      out_path = bary.out;
      return run_barycenter(bary);
    }
    if (cmd_plan->parsed()) {
      out_path = plan_opt.out;
      const GaussianMeasure mu0 = io::read_measure(plan_opt.mu0);
      const GaussianMeasure mu1 = io::read_measure(plan_opt.mu1);
      emit(io::plan_json(optimal_plan(mu0, mu1, plan_opt.eps)), plan_opt.out);
      return 0;
    }
    if (cmd_rkhs->parsed()) {
      out_path = rkhs.out;
      return run_rkhs(rkhs);
    }
    if (cmd_gp->parsed()) {
      out_path = gp.out;
      return run_gp(gp);
    }
    if (cmd_validate->parsed()) {
      return run_validate(validate_out, validate_seed);
    }
  } catch (const Error& e) {
    return emit_error(e, out_path);
  } catch (const std::exception& e) {
    return emit_error(Error("InternalError", e.what()), out_path);
  }
  return 2;
}
