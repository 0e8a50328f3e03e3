#pragma once

#include <map>
#include <string>
#include <vector>

#include "e2rc/exit_engine.hpp"

namespace e2rc {

/// key=value job configuration ('#' comments). Every key must be consumed;
/// unknown keys are rejected when the job finishes parsing.
class JobConfig {
 public:
  JobConfig() = default;
  static JobConfig from_file(const std::string& path);
  static JobConfig from_text(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  long get_int(const std::string& key);
  long get_int(const std::string& key, long fallback);
  double get_real(const std::string& key);
  double get_real(const std::string& key, double fallback);
  /// comma/space separated values: "8/16, 8/14" or "0.5 0.6"; fractions allowed
  std::vector<double> get_rationals(const std::string& key);
  std::vector<double> get_rationals(const std::string& key, const std::string& fallback);

  /// throws listing any keys that were never read
  void reject_unknown() const;
  /// resolved key=value lines, sorted, for run manifests
  std::string manifest() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> consumed_;
  const std::string& raw(const std::string& key);
};

double parse_rational(const std::string& text);

std::string curve_csv(const ExitCurve& curve);
ExitCurve curve_from_csv(const std::string& text);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace e2rc
