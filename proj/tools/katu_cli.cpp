// katu: Picard solver and fractional operator utilities.
//
//   katu solve problem.ini
//   katu integral    --alpha 0.5 --expr "1" [--N 2048 --r 3 --L 1 --rho 1 --a 1]
//   katu derivative  --alpha 0.5 --expr "u^(-0.5)"
//   katu generalized --alpha 0.5 --beta 1 --expr "u"

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "katu/runner.hpp"

namespace {

void add_operator_flags(CLI::App* sub, katu::OperatorArgs& args, bool with_beta) {
  sub->add_option("--alpha", args.alpha, "order")->required();
  if (with_beta) sub->add_option("--beta", args.beta, "type, in [0, 1]")->capture_default_str();
  sub->add_option("--rho", args.rho, "scale rho > 0")->capture_default_str();
  sub->add_option("--a", args.a, "left endpoint")->capture_default_str();
  sub->add_option("--expr", args.expr, "function of u (and t)")->required();
  sub->add_option("--N", args.N, "panels")->capture_default_str();
  sub->add_option("--r", args.r, "mesh grading")->capture_default_str();
  sub->add_option("--L", args.L, "transformed length")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Katugampola operators and weighted Cauchy problem solver"};
  app.require_subcommand(1);

  std::string config;
  auto* solve = app.add_subcommand("solve", "solve the problem described by a config file");
  solve->add_option("config", config, "INI config path")->required();

  katu::OperatorArgs integral_args;
  integral_args.kind = katu::OperatorKind::Integral;
  auto* integral = app.add_subcommand("integral", "Katugampola fractional integral of order alpha");
  add_operator_flags(integral, integral_args, false);

  katu::OperatorArgs derivative_args;
  derivative_args.kind = katu::OperatorKind::Derivative;
  auto* derivative = app.add_subcommand("derivative", "Katugampola fractional derivative of order alpha");
  add_operator_flags(derivative, derivative_args, false);

  katu::OperatorArgs generalized_args;
  generalized_args.kind = katu::OperatorKind::Generalized;
  auto* generalized = app.add_subcommand("generalized", "generalized derivative of order alpha and type beta");
  add_operator_flags(generalized, generalized_args, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : katu::kExitError;
  }

  if (*solve) return katu::run_solve(config, std::cout, std::cerr);
  if (*integral) return katu::run_operators(integral_args, std::cout, std::cerr);
  if (*derivative) return katu::run_operators(derivative_args, std::cout, std::cerr);
  return katu::run_operators(generalized_args, std::cout, std::cerr);
}
