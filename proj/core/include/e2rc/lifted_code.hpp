#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "e2rc/protograph.hpp"

namespace e2rc {

/// Quasi-cyclic code: every protograph edge replaced by a cyclically
/// shifted identity of size q (multiplicity-k blocks carry k distinct
/// shifts). Girth is at least 6 whenever construction succeeds.
struct LiftedCode {
  Protograph proto;
  int q = 0;
  std::vector<std::vector<std::vector<int>>> shifts;  // [check][var] -> shift list

  // bit-level sparse views, built by lift()
  std::vector<std::vector<int>> row_cols;
  std::vector<std::vector<int>> col_rows;

  // encoder: peel pivots (check block, var block, shift) in elimination
  // order, then a dense GF(2) solve for whatever refuses to peel
  struct PeelStep {
    int check, var, shift;
  };
  std::vector<PeelStep> peel_plan;
  std::vector<int> residual_vars;              // var blocks solved densely
  std::vector<std::vector<uint64_t>> residual_inv;  // packed inverse rows
  std::vector<int> residual_checks;            // check blocks feeding the dense solve

  int n() const { return proto.num_vars() * q; }
  int m() const { return proto.num_checks() * q; }
  int k() const { return n() - m(); }
  std::vector<int> systematic_vars() const;  // leading non-parity blocks
};

/// Greedy girth-aware circulant selection in seeded random edge order:
/// shifts creating 4-cycles are rejected outright, surviving shifts ranked
/// by the number of 6-cycles they close. Throws when some edge has no
/// 4-cycle-free shift after `retry_budget` reshuffles.
LiftedCode lift(const Protograph& g, int q, uint64_t seed, int retry_budget = 25);

/// Systematic encoding; message length k(). H x = 0 by construction.
std::vector<uint8_t> encode(const LiftedCode& code, const std::vector<uint8_t>& message);

struct DecodeResult {
  std::vector<uint8_t> bits;
  int iterations = 0;
  bool converged = false;
};

/// Flooding sum-product with the exact tanh rule, LLR clip +-20, early exit
/// on zero syndrome. Punctured positions carry llr = 0.
DecodeResult bp_decode(const LiftedCode& code, const std::vector<double>& llr,
                       int max_iters = 100);

bool syndrome_ok(const LiftedCode& code, const std::vector<uint8_t>& word);

/// Standard alist text form of the bit-level parity-check matrix.
std::string to_alist(const LiftedCode& code);
void save_alist(const LiftedCode& code, const std::string& path);

/// Sparse binary matrix read back from alist text (rows x cols adjacency).
struct AlistMatrix {
  int n = 0, m = 0;
  std::vector<std::vector<int>> col_rows;
  std::vector<std::vector<int>> row_cols;
};
AlistMatrix alist_from_text(const std::string& text);
AlistMatrix load_alist(const std::string& path);

}  // namespace e2rc
