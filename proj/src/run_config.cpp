#include "katu/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace katu {

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& message)
    : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + message),
      line_(line) {}

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
  bool used = false;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

class Sections {
 public:
  Sections(std::string_view text, std::string source) : source_(std::move(source)) {
    std::string section;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto end = text.find('\n', start);
      const auto raw = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
      ++line_no;
      std::string line = raw.find('#') == std::string_view::npos ? trim(raw) : trim(raw.substr(0, raw.find('#')));
      if (!line.empty()) {
        if (line.front() == '[') {
          if (line.back() != ']') fail(line_no, "malformed section header '" + line + "'");
          section = trim(std::string_view(line).substr(1, line.size() - 2));
          if (section != "problem" && section != "solver" && section != "output") {
            fail(line_no, "unknown section [" + section + "]; expected [problem], [solver] or [output]");
          }
        } else {
          const auto eq = line.find('=');
          if (eq == std::string::npos) fail(line_no, "expected key = value");
          if (section.empty()) fail(line_no, "key outside of any section");
          const std::string key = trim(std::string_view(line).substr(0, eq));
          const std::string value = trim(std::string_view(line).substr(eq + 1));
          if (key.empty()) fail(line_no, "empty key");
          auto& sec = entries_[section];
          if (sec.count(key)) {
            fail(line_no, "duplicate key '" + key + "' (first set on line " + std::to_string(sec[key].line) + ")");
          }
          sec[key] = Entry{value, line_no, false};
        }
      }
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
  }

  [[noreturn]] void fail(std::size_t line, const std::string& msg) const { throw ConfigError(source_, line, msg); }

  const Entry* find(const std::string& section, const std::string& key) {
    auto s = entries_.find(section);
    if (s == entries_.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.used = true;
    return &k->second;
  }

  const Entry& require(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) fail(0, "missing required key '" + key + "' in [" + section + "]");
    return *e;
  }

  double number(const Entry& e, const std::string& key) const {
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
      fail(e.line, key + ": expected a finite number, got '" + e.value + "'");
    }
    return v;
  }

  std::size_t count(const Entry& e, const std::string& key) const {
    std::size_t v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
      fail(e.line, key + ": expected a nonnegative integer, got '" + e.value + "'");
    }
    return v;
  }

  bool boolean(const Entry& e, const std::string& key) const {
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    fail(e.line, key + ": expected true or false, got '" + e.value + "'");
  }

  void reject_unused() const {
    for (const auto& [section, keys] : entries_) {
      for (const auto& [key, entry] : keys) {
        if (!entry.used) fail(entry.line, "unknown key '" + key + "' in [" + section + "]");
      }
    }
  }

 private:
  std::string source_;
  std::map<std::string, std::map<std::string, Entry>> entries_;
};

}  // namespace

ProblemSpec RunConfig::problem() const {
  return make_problem(FracParams(alpha, beta, rho, a), x_a, f, hyp);
}

RunConfig parse_config(std::string_view text, const std::string& source, const std::filesystem::path& base_dir) {
  Sections s(text, source);
  RunConfig cfg;

  const Entry& e_alpha = s.require("problem", "alpha");
  cfg.alpha = s.number(e_alpha, "alpha");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    s.fail(e_alpha.line, "alpha (order of the derivative) must satisfy 0 < alpha < 1");
  }
  const Entry& e_beta = s.require("problem", "beta");
  cfg.beta = s.number(e_beta, "beta");
  if (!(cfg.beta >= 0.0 && cfg.beta <= 1.0)) {
    s.fail(e_beta.line, "beta (type of the derivative) must satisfy 0 <= beta <= 1");
  }
  const Entry& e_rho = s.require("problem", "rho");
  cfg.rho = s.number(e_rho, "rho");
  if (!(cfg.rho > 0.0)) s.fail(e_rho.line, "rho must be positive");
  const Entry& e_a = s.require("problem", "a");
  cfg.a = s.number(e_a, "a");
  if (!(cfg.a >= 0.0)) s.fail(e_a.line, "a must be nonnegative");
  if (cfg.rho < 1.0 && cfg.a == 0.0) s.fail(e_a.line, "a must be positive when rho < 1");
  cfg.x_a = s.number(s.require("problem", "x_a"), "x_a");

  const Entry& e_M = s.require("problem", "M");
  cfg.hyp.bound_M = s.number(e_M, "M");
  if (!(cfg.hyp.bound_M >= 0.0)) s.fail(e_M.line, "M (growth bound) must be >= 0");
  const Entry& e_k = s.require("problem", "k");
  cfg.hyp.exponent_k = s.number(e_k, "k");
  const double k_min = cfg.beta * (1.0 - cfg.alpha) - 1.0;
  if (!(cfg.hyp.exponent_k > k_min)) {
    std::ostringstream os;
    os.precision(17);
    os << "k (growth exponent) must exceed beta(1 - alpha) - 1 = " << k_min;
    s.fail(e_k.line, os.str());
  }
  const Entry& e_A = s.require("problem", "A");
  cfg.hyp.lipschitz_A = s.number(e_A, "A");
  if (!(cfg.hyp.lipschitz_A > 0.0)) s.fail(e_A.line, "A (Lipschitz constant) must be > 0");
  const Entry& e_b = s.require("problem", "ball_radius");
  cfg.hyp.ball_radius = s.number(e_b, "ball_radius");
  if (!(cfg.hyp.ball_radius > 0.0)) s.fail(e_b.line, "ball_radius must be > 0");
  const Entry& e_h = s.require("problem", "horizon_h");
  cfg.hyp.horizon_h = s.number(e_h, "horizon_h");
  if (!(cfg.hyp.horizon_h > 0.0)) s.fail(e_h.line, "horizon_h must be > 0");

  const Entry& e_f = s.require("problem", "f");
  cfg.f = e_f.value;
  try {
    (void)cfg.problem();
  } catch (const expr::ParseError& e) {
    s.fail(e_f.line, std::string("f: ") + e.what());
  } catch (const std::exception& e) {
    s.fail(e_f.line, std::string("f: ") + e.what());
  }

  if (const Entry* e = s.find("solver", "N")) {
    cfg.solver.node_count_N = s.count(*e, "N");
    if (cfg.solver.node_count_N < 2) s.fail(e->line, "N must be >= 2");
  }
  if (const Entry* e = s.find("solver", "grading_r")) {
    cfg.solver.grading_r = s.number(*e, "grading_r");
    if (!(cfg.solver.grading_r >= 1.0)) s.fail(e->line, "grading_r must be >= 1");
  }
  if (const Entry* e = s.find("solver", "tol")) {
    cfg.solver.tol = s.number(*e, "tol");
    if (!(cfg.solver.tol > 0.0)) s.fail(e->line, "tol must be > 0");
  }
  if (const Entry* e = s.find("solver", "max_iter")) {
    cfg.solver.max_iter = s.count(*e, "max_iter");
    if (cfg.solver.max_iter < 1) s.fail(e->line, "max_iter must be >= 1");
  }

  if (const Entry* e = s.find("output", "format")) {
    if (e->value == "csv") {
      cfg.output.format = OutputFormat::Csv;
    } else if (e->value == "json") {
      cfg.output.format = OutputFormat::Json;
    } else {
      s.fail(e->line, "format must be csv or json, got '" + e->value + "'");
    }
  }
  const Entry& e_path = s.require("output", "path");
  if (e_path.value.empty()) s.fail(e_path.line, "path must not be empty");
  cfg.output.path = e_path.value;
  if (cfg.output.path.is_relative() && !base_dir.empty()) cfg.output.path = base_dir / cfg.output.path;
  if (const Entry* e = s.find("output", "emit_iterates")) cfg.output.emit_iterates = s.boolean(*e, "emit_iterates");
  if (const Entry* e = s.find("output", "emit_bounds")) cfg.output.emit_bounds = s.boolean(*e, "emit_bounds");

  s.reject_unused();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string(), path.parent_path());
}

}  // namespace katu
