#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "e2rc/infotheory.hpp"
#include "e2rc/protograph.hpp"

namespace e2rc {

/// Reciprocal map of the consistent-Gaussian reliability domain:
/// C(s) + C(R(s)) = 1 with C(s) = J(sqrt(s)). Involution, R(0) = +inf.
double rca_reciprocal(double s);

/// One density-evolution run: per-edge reliability flooding with the
/// reciprocal-channel check rule. True when every directed edge reaches
/// mutual information 1 - 1e-6 within max_iters. Punctured variables
/// contribute no channel reliability.
bool rca_converges(const Protograph& g, const ChannelParam& chan, int max_iters = 10000);

// test/diagnostic hook: per-iteration snapshots of all directed-edge
// reliabilities (variable-to-check then check-to-variable)
bool rca_converges_traced(const Protograph& g, const ChannelParam& chan, int max_iters,
                          std::vector<std::vector<double>>* trace);

/// Worst channel at which DE still converges; bisection on Eb/N0 at the
/// protograph's transmitted rate, resolution 1e-4 dB. Empty when even a
/// near-noiseless channel fails (unrecoverable puncturing) or when nothing
/// is transmitted.
std::optional<ChannelParam> rca_threshold(const Protograph& g, int max_iters = 10000,
                                          double resolution_db = 1e-4);

/// Convenience: threshold as Eb/N0 in dB (+inf when rca_threshold is empty).
double rca_threshold_db(const Protograph& g, int max_iters = 10000,
                        double resolution_db = 1e-4);

struct ThresholdRow {
  double rate;
  double sigma2;
  double ebn0;
  double gap;
};

/// Per-rate thresholds of a rate-compatible family given as (graph, mask)
/// pairs; the mask overrides the graph's puncture flags.
std::vector<ThresholdRow> family_threshold_report(
    const std::vector<std::pair<Protograph, std::vector<uint8_t>>>& family,
    int max_iters = 10000, double resolution_db = 1e-4);

}  // namespace e2rc
