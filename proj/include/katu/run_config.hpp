#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "katu/picard.hpp"

namespace katu {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class OutputFormat { Csv, Json };

struct OutputSection {
  OutputFormat format = OutputFormat::Csv;
  std::filesystem::path path;  // resolved against the config file's directory
  bool emit_iterates = false;
  bool emit_bounds = true;
};

/// Flat key = value configuration, sections [problem], [solver], [output].
///
///   [problem]  alpha beta rho a x_a f M k A ball_radius horizon_h   (all required)
///   [solver]   N grading_r tol max_iter                             (defaults 2048, 3, 1e-8, 200)
///   [output]   format=csv|json path emit_iterates emit_bounds        (path required)
///
/// '#' starts a comment. Every key may appear once.
struct RunConfig {
  double alpha = 0.0;
  double beta = 0.0;
  double rho = 1.0;
  double a = 0.0;
  double x_a = 0.0;
  std::string f;
  HypothesisData hyp;
  SolverConfig solver;
  OutputSection output;

  ProblemSpec problem() const;
};

RunConfig parse_config(std::string_view text, const std::string& source = "<config>",
                       const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

}  // namespace katu
