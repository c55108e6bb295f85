#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "katu/picard.hpp"
#include "katu/run_config.hpp"

namespace katu {

enum ExitCode : int { kExitConverged = 0, kExitError = 1, kExitNotConverged = 2 };

/// JSON report with exactly the keys l, L, iterations, final_increment,
/// residual_sup, apriori_terms, ratio_sequence, converged.
nlohmann::ordered_json make_report(const SolveResult& result, const ProblemSpec& spec, bool emit_bounds);

/// t,u,w,x table with 17 significant digits; x is blank at u = 0 when gamma_w < 1.
std::string solution_csv(const SolveResult& result, const ProblemSpec& spec);
std::string solution_json(const SolveResult& result, const ProblemSpec& spec);

/// Where the report for a given solution path goes: "<stem>.report.json" next to it.
std::filesystem::path report_path(const std::filesystem::path& solution_path);
std::filesystem::path iterates_path(const std::filesystem::path& solution_path);

/// Loads the config, solves, writes the solution and report files.
/// Returns one of the ExitCode values; diagnostics go to err.
int run_solve(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

enum class OperatorKind { Integral, Derivative, Generalized };

struct OperatorArgs {
  OperatorKind kind = OperatorKind::Integral;
  double alpha = 0.5;
  double beta = 0.0;
  double rho = 1.0;
  double a = 1.0;
  std::string expr = "1";
  std::size_t N = 2048;
  double r = 3.0;
  double L = 1.0;
};

/// Samples expr (a function of u, optionally t) on the mesh and prints
/// "u,value" rows for the requested operator.
int run_operators(const OperatorArgs& args, std::ostream& out, std::ostream& err);

}  // namespace katu
