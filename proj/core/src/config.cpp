#include "e2rc/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace e2rc {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

JobConfig JobConfig::from_file(const std::string& path) {
  return from_text(read_text_file(path));
}

JobConfig JobConfig::from_text(const std::string& text) {
  JobConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
    cfg.set(key, value);
  }
  return cfg;
}

void JobConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
  consumed_[key] = false;
}

bool JobConfig::has(const std::string& key) const { return values_.count(key) > 0; }

const std::string& JobConfig::raw(const std::string& key) {
  auto it = values_.find(key);
  if (it == values_.end()) throw std::runtime_error("missing config key: " + key);
  consumed_[key] = true;
  return it->second;
}

std::string JobConfig::get_string(const std::string& key) { return raw(key); }

std::string JobConfig::get_string(const std::string& key, const std::string& fallback) {
  return has(key) ? raw(key) : fallback;
}

long JobConfig::get_int(const std::string& key) {
  const std::string& v = raw(key);
  size_t pos = 0;
  long out = std::stol(v, &pos);
  if (pos != v.size()) throw std::runtime_error("config key " + key + ": not an integer");
  return out;
}

long JobConfig::get_int(const std::string& key, long fallback) {
  return has(key) ? get_int(key) : fallback;
}

double JobConfig::get_real(const std::string& key) {
  const std::string& v = raw(key);
  size_t pos = 0;
  double out = std::stod(v, &pos);
  if (pos != v.size()) throw std::runtime_error("config key " + key + ": not a number");
  return out;
}

double JobConfig::get_real(const std::string& key, double fallback) {
  return has(key) ? get_real(key) : fallback;
}

std::vector<double> JobConfig::get_rationals(const std::string& key) {
  std::string v = raw(key);
  for (char& c : v)
    if (c == ',') c = ' ';
  std::istringstream is(v);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) out.push_back(parse_rational(tok));
  if (out.empty()) throw std::runtime_error("config key " + key + ": empty list");
  return out;
}

std::vector<double> JobConfig::get_rationals(const std::string& key, const std::string& fallback) {
  if (!has(key)) set(key, fallback);
  return get_rationals(key);
}

void JobConfig::reject_unknown() const {
  std::string unknown;
  for (auto& [key, used] : consumed_) {
    if (!used) unknown += (unknown.empty() ? "" : ", ") + key;
  }
  if (!unknown.empty()) throw std::runtime_error("unknown config keys: " + unknown);
}

std::string JobConfig::manifest() const {
  std::ostringstream os;
  for (auto& [key, value] : values_) os << key << " = " << value << '\n';
  return os.str();
}

double parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return std::stod(text);
  double num = std::stod(text.substr(0, slash));
  double den = std::stod(text.substr(slash + 1));
  if (den == 0.0) throw std::runtime_error("rational with zero denominator: " + text);
  return num / den;
}

std::string curve_csv(const ExitCurve& curve) {
  std::string out = "i_a,i_e\n";
  char buf[80];
  for (size_t k = 0; k < curve.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", curve.ia[k], curve.ie[k]);
    out += buf;
  }
  return out;
}

ExitCurve curve_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "i_a,i_e")
    throw std::invalid_argument("curve csv: bad header");
  ExitCurve curve;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("curve csv: bad row");
    curve.ia.push_back(std::stod(line.substr(0, comma)));
    curve.ie.push_back(std::stod(line.substr(comma + 1)));
  }
  curve.validate();
  return curve;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

}  // namespace e2rc
