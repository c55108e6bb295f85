#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

namespace katu_test {

namespace fs = std::filesystem;

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

/// Fresh empty directory under the system temp dir.
inline fs::path scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const fs::path dir = fs::temp_directory_path() /
                       ("katu-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

/// Copies a checked-in config into dir so outputs land there.
inline fs::path stage_config(const std::string& name, const fs::path& dir) {
  const fs::path dst = dir / name;
  fs::copy_file(fs::path(KATU_TEST_DATA) / name, dst, fs::copy_options::overwrite_existing);
  return dst;
}

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

inline std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') q += "'\\''";
    else q += c;
  }
  return q + "'";
}

inline Run run_cli(const std::vector<std::string>& args, const fs::path& dir) {
  std::string cmd = quote(KATU_CLI_PATH);
  for (const auto& a : args) cmd += " " + quote(a);
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  cmd += " >" + quote(out.string()) + " 2>" + quote(err.string());
  const int raw = std::system(cmd.c_str());
  Run r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

/// Checks a document against the subset of JSON Schema used by the report
/// schema: type, required, properties, additionalProperties, items, minimum,
/// exclusiveMinimum. Returns one message per violation.
inline void check_schema(const nlohmann::json& schema, const nlohmann::json& doc, const std::string& where,
                         std::vector<std::string>& errors) {
  if (schema.contains("type")) {
    const std::string t = schema["type"];
    bool ok = false;
    if (t == "object") ok = doc.is_object();
    else if (t == "array") ok = doc.is_array();
    else if (t == "number") ok = doc.is_number();
    else if (t == "integer") ok = doc.is_number_integer();
    else if (t == "boolean") ok = doc.is_boolean();
    else if (t == "string") ok = doc.is_string();
    else if (t == "null") ok = doc.is_null();
    if (!ok) {
      errors.push_back(where + ": expected " + t);
      return;
    }
  }
  if (doc.is_number()) {
    const double v = doc.get<double>();
    if (schema.contains("minimum") && v < schema["minimum"].get<double>()) errors.push_back(where + ": below minimum");
    if (schema.contains("exclusiveMinimum") && v <= schema["exclusiveMinimum"].get<double>()) {
      errors.push_back(where + ": not above exclusiveMinimum");
    }
  }
  if (doc.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema["required"]) {
        if (!doc.contains(key.get<std::string>())) errors.push_back(where + ": missing " + key.get<std::string>());
      }
    }
    const bool closed = schema.contains("additionalProperties") && schema["additionalProperties"] == false;
    for (const auto& [key, value] : doc.items()) {
      if (schema.contains("properties") && schema["properties"].contains(key)) {
        check_schema(schema["properties"][key], value, where + "." + key, errors);
      } else if (closed) {
        errors.push_back(where + ": unexpected key " + key);
      }
    }
  }
  if (doc.is_array() && schema.contains("items")) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      check_schema(schema["items"], doc[i], where + "[" + std::to_string(i) + "]", errors);
    }
  }
}

inline std::vector<std::string> validate_report(const fs::path& report) {
  const auto schema = nlohmann::json::parse(slurp(fs::path(KATU_TEST_DATA) / "report.schema.json"));
  std::vector<std::string> errors;
  try {
    check_schema(schema, nlohmann::json::parse(slurp(report)), "$", errors);
  } catch (const nlohmann::json::exception& e) {
    errors.push_back(e.what());
  }
  return errors;
}

}  // namespace katu_test
