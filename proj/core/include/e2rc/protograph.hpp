#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace e2rc {

enum class VarRole : uint8_t { Systematic, ParityOld, ParityNew };

/// Small bipartite multigraph template: base matrix of edge multiplicities,
/// per-variable role tags and puncture flags.
struct Protograph {
  std::vector<std::vector<int>> base;  // checks x variables, multiplicities
  std::vector<VarRole> roles;          // per variable
  std::vector<uint8_t> punctured;      // per variable
  std::vector<std::string> labels;     // optional, empty or per variable

  int num_checks() const { return int(base.size()); }
  int num_vars() const { return base.empty() ? 0 : int(base[0].size()); }

  int var_degree(int v) const;
  int check_degree(int c) const;
  int total_edges() const;

  /// (num_vars - num_checks) / num_vars, all variables transmitting.
  double design_rate() const;
  /// (num_vars - num_checks) / (number of unpunctured variables).
  double transmitted_rate() const;

  std::vector<int> parity_new_vars() const;

  /// Throws std::invalid_argument on ragged rows, all-zero rows/columns,
  /// negative multiplicities, or size mismatches.
  void validate() const;

  bool operator==(const Protograph&) const = default;
};

/// Shared text format: "m n", m rows of n multiplicities, a row of roles
/// (s/p), a row of puncture flags (0/1). Round-trips bit-exactly.
std::string to_text(const Protograph& g);
Protograph protograph_from_text(const std::string& text);
void save_protograph(const Protograph& g, const std::string& path);
Protograph load_protograph(const std::string& path);

}  // namespace e2rc
