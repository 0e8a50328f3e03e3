#include "e2rc/protograph.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace e2rc {

int Protograph::var_degree(int v) const {
  int d = 0;
  for (auto& row : base) d += row[v];
  return d;
}

int Protograph::check_degree(int c) const {
  int d = 0;
  for (int x : base[c]) d += x;
  return d;
}

int Protograph::total_edges() const {
  int d = 0;
  for (int c = 0; c < num_checks(); ++c) d += check_degree(c);
  return d;
}

double Protograph::design_rate() const {
  return double(num_vars() - num_checks()) / num_vars();
}

double Protograph::transmitted_rate() const {
  int tx = 0;
  for (uint8_t p : punctured) tx += (p == 0);
  if (tx == 0) throw std::invalid_argument("all variables punctured");
  return double(num_vars() - num_checks()) / tx;
}

std::vector<int> Protograph::parity_new_vars() const {
  std::vector<int> out;
  for (int v = 0; v < num_vars(); ++v)
    if (roles[v] == VarRole::ParityNew) out.push_back(v);
  return out;
}

void Protograph::validate() const {
  if (base.empty() || base[0].empty()) throw std::invalid_argument("empty protograph");
  const size_t n = base[0].size();
  for (auto& row : base) {
    if (row.size() != n) throw std::invalid_argument("ragged base matrix");
    int sum = 0;
    for (int x : row) {
      if (x < 0) throw std::invalid_argument("negative multiplicity");
      sum += x;
    }
    if (sum == 0) throw std::invalid_argument("all-zero check row");
  }
  for (size_t v = 0; v < n; ++v) {
    int sum = 0;
    for (auto& row : base) sum += row[v];
    if (sum == 0) throw std::invalid_argument("all-zero variable column");
  }
  if (roles.size() != n) throw std::invalid_argument("roles size mismatch");
  if (punctured.size() != n) throw std::invalid_argument("puncture flags size mismatch");
  if (!labels.empty() && labels.size() != n) throw std::invalid_argument("labels size mismatch");
}

std::string to_text(const Protograph& g) {
  g.validate();
  std::ostringstream os;
  os << g.num_checks() << ' ' << g.num_vars() << '\n';
  for (auto& row : g.base) {
    for (size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[j];
    os << '\n';
  }
  for (int v = 0; v < g.num_vars(); ++v)
    os << (v ? " " : "") << (g.roles[v] == VarRole::Systematic ? 's' : 'p');
  os << '\n';
  for (int v = 0; v < g.num_vars(); ++v) os << (v ? " " : "") << (g.punctured[v] ? 1 : 0);
  os << '\n';
  return os.str();
}

Protograph protograph_from_text(const std::string& text) {
  std::istringstream is(text);
  int m = 0, n = 0;
  if (!(is >> m >> n) || m <= 0 || n <= 0)
    throw std::invalid_argument("protograph header: expected 'm n'");
  Protograph g;
  g.base.assign(m, std::vector<int>(n, 0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      if (!(is >> g.base[i][j])) throw std::invalid_argument("truncated base matrix");
  g.roles.resize(n);
  for (int v = 0; v < n; ++v) {
    char r;
    if (!(is >> r) || (r != 's' && r != 'p'))
      throw std::invalid_argument("role row: expected s or p");
    if (r == 's') {
      g.roles[v] = VarRole::Systematic;
    } else {
      // old parity nodes come from the starting graph (degree >= 3);
      // check-splitting only ever introduces degree-2 parity nodes
      g.roles[v] = g.var_degree(v) <= 2 ? VarRole::ParityNew : VarRole::ParityOld;
    }
  }
  g.punctured.resize(n);
  for (int v = 0; v < n; ++v) {
    int p;
    if (!(is >> p) || (p != 0 && p != 1))
      throw std::invalid_argument("puncture row: expected 0 or 1");
    g.punctured[v] = uint8_t(p);
  }
  std::string rest;
  if (is >> rest) throw std::invalid_argument("trailing content after puncture row");
  g.validate();
  return g;
}

void save_protograph(const Protograph& g, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << to_text(g);
}

Protograph load_protograph(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open protograph file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return protograph_from_text(buf.str());
}

}  // namespace e2rc
