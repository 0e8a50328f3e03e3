#pragma once

#include <limits>
#include <map>
#include <vector>

#include "e2rc/protograph.hpp"

namespace e2rc {

/// Recovery depth of parity variables under erasure peeling with all parity
/// punctured and everything else known. kNever marks unrecoverable nodes.
struct SRProfile {
  static constexpr int kNever = std::numeric_limits<int>::max();

  std::vector<int> level;  // per variable: 0 = known a priori, k >= 1 = k-SR

  std::map<int, int> census() const;  // finite level -> node count
  bool complete() const;              // no kNever among classified nodes
};

/// Square m x m parity protograph built by recursive check doubling: each
/// stage splits every check, the inheritor keeps all existing parity
/// connections, and a fresh degree-2 variable joins the two offspring.
/// m must be a power of two.
Protograph build_h2_base(int m);

/// Erasure-peeling classification of the parity-new variables of g.
/// Systematic and old parity variables count as resolved from round 0.
SRProfile sr_classify(const Protograph& g);

/// Parity-new variables sorted by SR level ascending, ties broken by
/// descending node index (construction order is the variable order, so this
/// punctures newest nodes first). Throws if any level is unresolved.
std::vector<int> puncture_order(const SRProfile& profile, const Protograph& g);

/// Puncture mask over the parity variables of build_h2_base(m) for code rate
/// k_sys/(k_sys + m - p). Throws (listing achievable rates) when no integer
/// p in [0, m-1] matches.
std::vector<uint8_t> puncture_mask_for_rate(int m, int k_sys, double target_rate);

/// First `count` variables of `order` as a mask over num_vars variables.
std::vector<uint8_t> mask_from_order(const std::vector<int>& order, int count, int num_vars);

/// Pivot sequence (check, variable) that lower-triangularizes the parity
/// part by greedy peeling; empty when the structure does not triangularize.
std::vector<std::pair<int, int>> parity_peel_pivots(const Protograph& g);

}  // namespace e2rc
