#pragma once

#include <cstdint>
#include <vector>

#include "e2rc/lifted_code.hpp"

namespace e2rc {

struct SimRow {
  double ebn0_db = 0.0;
  double rate = 0.0;
  long frames = 0;
  long bit_errors = 0;    // over information bits
  long frame_errors = 0;  // frames with any information-bit error
  double ber = 0.0;
  double fer = 0.0;
  double avg_iters = 0.0;
};

struct SimStop {
  long min_frame_errors = 100;
  long max_frames = 10000000;
};

struct RateSimResult {
  double rate = 0.0;
  std::vector<uint8_t> mask;  // per protograph variable
  std::vector<SimRow> rows;   // one per Eb/N0 point
};

/// BPSK over BIAWGN per Eb/N0 point (noise set from the punctured rate),
/// punctured bits withheld (llr 0), random messages, accumulation until the
/// stop rule. Bit-identical results for a fixed seed when threads == 1.
std::vector<RateSimResult> simulate(const LiftedCode& code,
                                    const std::vector<std::vector<uint8_t>>& masks,
                                    const std::vector<double>& ebn0_list, const SimStop& stop,
                                    uint64_t seed, int threads = 1, int max_iters = 100);

/// Eb/N0 at which interpolated log-BER crosses `target_ber`; +inf when the
/// sweep never gets there.
double measured_threshold_db(const std::vector<SimRow>& rows, double target_ber = 1e-4);

std::string sim_rows_csv(const std::vector<SimRow>& rows);

}  // namespace e2rc
