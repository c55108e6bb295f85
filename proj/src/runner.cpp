#include "katu/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace katu {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("short write to " + path.string());
}

std::string iterates_csv(const SolveResult& result) {
  std::string s = "iteration,t,u,w\n";
  for (std::size_t n = 0; n < result.iterates.size(); ++n) {
    const auto& it = result.iterates[n];
    for (std::size_t i = 0; i < it.size(); ++i) {
      s += std::to_string(n) + ',' + g17(result.t_nodes[i]) + ',' + g17((*result.mesh)[i]) + ',' + g17(it[i]) + '\n';
    }
  }
  return s;
}

}  // namespace

nlohmann::ordered_json make_report(const SolveResult& result, const ProblemSpec& spec, bool emit_bounds) {
  nlohmann::ordered_json j;
  j["l"] = result.l;
  j["L"] = result.L;
  j["iterations"] = result.iterations_used;
  j["final_increment"] = result.final_increment;
  j["residual_sup"] = result.residual_sup;
  auto terms = nlohmann::ordered_json::array();
  auto ratios = nlohmann::ordered_json::array();
  if (emit_bounds) {
    for (double v : result.apriori_terms) terms.push_back(v);
    if (spec.hyp.bound_M > 0.0) {
      const std::size_t n_max = result.iterations_used < 2 ? 2 : result.iterations_used;
      try {
        for (double r : ratio_sequence(n_max, spec.params, spec.hyp, result.L)) ratios.push_back(r);
      } catch (const DegenerateError&) {
        ratios = nlohmann::ordered_json::array();
      }
    }
  }
  j["apriori_terms"] = std::move(terms);
  j["ratio_sequence"] = std::move(ratios);
  j["converged"] = result.converged;
  return j;
}

std::string solution_csv(const SolveResult& result, const ProblemSpec& spec) {
  const double gw = spec.params.gamma_w();
  std::string s = "t,u,w,x\n";
  for (std::size_t i = 0; i < result.weighted_solution.size(); ++i) {
    const double x = result.unweighted(i, gw);
    s += g17(result.t_nodes[i]) + ',' + g17((*result.mesh)[i]) + ',' + g17(result.weighted_solution[i]) + ',';
    if (!std::isnan(x)) s += g17(x);
    s += '\n';
  }
  return s;
}

std::string solution_json(const SolveResult& result, const ProblemSpec& spec) {
  const double gw = spec.params.gamma_w();
  nlohmann::ordered_json j;
  auto t = nlohmann::ordered_json::array();
  auto u = nlohmann::ordered_json::array();
  auto w = nlohmann::ordered_json::array();
  auto x = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < result.weighted_solution.size(); ++i) {
    t.push_back(result.t_nodes[i]);
    u.push_back((*result.mesh)[i]);
    w.push_back(result.weighted_solution[i]);
    const double xi = result.unweighted(i, gw);
    if (std::isnan(xi)) {
      x.push_back(nullptr);
    } else {
      x.push_back(xi);
    }
  }
  j["t"] = std::move(t);
  j["u"] = std::move(u);
  j["w"] = std::move(w);
  j["x"] = std::move(x);
  return j.dump(2) + "\n";
}

std::filesystem::path report_path(const std::filesystem::path& solution_path) {
  auto p = solution_path;
  p.replace_extension(".report.json");
  return p;
}

std::filesystem::path iterates_path(const std::filesystem::path& solution_path) {
  auto p = solution_path;
  p.replace_extension(".iterates.csv");
  return p;
}

int run_solve(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg = load_config(config_path);
    const ProblemSpec spec = cfg.problem();
    SolverConfig solver = cfg.solver;
    solver.keep_iterates = cfg.output.emit_iterates;
    const SolveResult result = picard_solve(spec, solver);

    write_file(cfg.output.path, cfg.output.format == OutputFormat::Csv ? solution_csv(result, spec)
                                                                       : solution_json(result, spec));
    write_file(report_path(cfg.output.path), make_report(result, spec, cfg.output.emit_bounds).dump(2) + "\n");
    if (cfg.output.emit_iterates) write_file(iterates_path(cfg.output.path), iterates_csv(result));

    if (!result.converged) {
      err << "katu: no convergence after " << result.iterations_used
          << " iterations (final increment " << g17(result.final_increment) << ")\n";
      return kExitNotConverged;
    }
    out << "converged in " << result.iterations_used << " iterations; wrote " << cfg.output.path.string() << "\n";
    return kExitConverged;
  } catch (const std::exception& e) {
    err << "katu: " << e.what() << "\n";
    return kExitError;
  }
}

int run_operators(const OperatorArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const FracParams params(args.alpha, args.beta, args.rho, args.a);
    const expr::Expr e = expr::parse(args.expr);
    if (e.uses_x()) throw std::invalid_argument("operator expressions may use u and t only");
    auto mesh = std::make_shared<const GradedMesh>(args.L, args.N, args.r);
    const GridFunction g = sample_on_mesh(mesh, [&](double u) { return e.eval({to_t(u, params), 0.0, u}); });

    std::vector<double> result;
    switch (args.kind) {
      case OperatorKind::Integral: {
        const auto r = katugampola_integral_grid(g, args.alpha);
        result.assign(r.values().begin(), r.values().end());
        break;
      }
      case OperatorKind::Derivative: {
        const auto r = katugampola_derivative_grid(g, args.alpha);
        result.assign(r.values().begin(), r.values().end());
        break;
      }
      case OperatorKind::Generalized: {
        const auto r = generalized_derivative_grid(g, params);
        result.assign(r.values().begin(), r.values().end());
        break;
      }
    }
    std::string s = "u,value\n";
    for (std::size_t i = 0; i < result.size(); ++i) s += g17((*mesh)[i]) + ',' + g17(result[i]) + '\n';
    out << s;
    return kExitConverged;
  } catch (const std::exception& ex) {
    err << "katu: " << ex.what() << "\n";
    return kExitError;
  }
}

}  // namespace katu
