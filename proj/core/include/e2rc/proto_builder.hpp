#pragma once

#include <functional>
#include <vector>

#include "e2rc/protograph.hpp"

namespace e2rc {

/// How a check's old-node connections divide between its two offspring.
struct SplitPattern {
  std::vector<int> s01, s02;  // indexed over old nodes in variable order

  bool operator==(const SplitPattern&) const = default;
};

/// Scores a candidate protograph; lower is better (Eb/N0 dB by convention).
using ThresholdFn = std::function<double(const Protograph&)>;

/// Splits `check` into two: the offspring with the lexicographically larger
/// old-node share keeps all of the parent's connections to degree-2 parity
/// nodes and takes the parent's row; the other is appended. A fresh degree-2
/// parity variable joins both.
Protograph check_split(const Protograph& g, int check, const SplitPattern& pattern);

/// All patterns dividing s0 as evenly as possible (|s01[i] - s02[i]| <= 1):
/// each odd component contributes a binary choice. Deterministic order,
/// truncated to `budget`.
std::vector<SplitPattern> enumerate_equal_splits(const std::vector<int>& s0, int budget);

struct StageLogEntry {
  int stage;
  int check;
  SplitPattern pattern;
  int new_var;
};

struct ProtographFamily {
  Protograph start;
  Protograph mother;
  std::vector<Protograph> members;  // start first, one more per split
  std::vector<StageLogEntry> stage_log;

  /// Nested masks over the mother: mask_for(j) punctures the j newest
  /// incremental-redundancy nodes (inverse addition order).
  std::vector<uint8_t> mask_for(int punctured_count) const;
  std::vector<double> rates() const;  // transmitted rate per mask count
};

/// Stage-by-stage greedy construction: every stage splits each current
/// check once; each step picks the (check, pattern) pair whose intermediate
/// protograph scores best (ties: lowest check index, then lexicographically
/// smallest pattern). tradeoff_weight in [0,1] blends the intermediate
/// score with a lookahead estimate of the finished mother (remaining splits
/// completed with first equal patterns); 0 is the pure greedy default.
ProtographFamily build_family(const Protograph& start, int stages, int pattern_budget,
                              const ThresholdFn& threshold_fn, double tradeoff_weight = 0.0);

struct RankedCandidate {
  std::vector<int> degrees;  // nonincreasing variable degrees
  double score;
};

/// Exhaustive scan over nonincreasing degree vectors in [min_deg, d_v_max]
/// for an m0-check protograph; returns the best `top_k` by score ascending.
std::vector<RankedCandidate> search_starting_protographs_ranked(
    int m0, int n0, int d_v_max, int min_deg, const ThresholdFn& threshold_fn, int top_k,
    int threads = 1);

/// The minimum-threshold starting protograph from the same scan.
Protograph search_starting_protograph(int m0, int n0, int d_v_max, int min_deg,
                                      const ThresholdFn& threshold_fn, int threads = 1);

/// Protograph for one degree vector: variables joined to the m0 checks with
/// multiplicities spread as evenly as possible (single row when m0 == 1).
/// The last minimum-degree variable is tagged as the high-rate parity node.
Protograph protograph_from_degrees(int m0, const std::vector<int>& degrees);

}  // namespace e2rc
