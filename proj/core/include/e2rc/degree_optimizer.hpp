#pragma once

#include <utility>
#include <vector>

#include "e2rc/e2rc_structure.hpp"
#include "e2rc/exit_engine.hpp"
#include "e2rc/infotheory.hpp"

namespace e2rc {

/// Raised when no degree distribution opens the decoding tunnel at the
/// requested channel.
class no_tunnel_error : public std::runtime_error {
 public:
  explicit no_tunnel_error(const std::string& what) : std::runtime_error(what) {}
};

/// Deterministic parity structure plus the total check-degree budget; the
/// reusable template behind every semi-structured design job.
class E2rcStructure {
 public:
  E2rcStructure(int m, DegreeDistribution total_check_degrees, int k_sys);

  int m() const { return m_; }
  int k_sys() const { return k_sys_; }
  const DegreeDistribution& check_degrees() const { return check_degrees_; }
  const Protograph& h2() const { return h2_; }

  /// Edge-perspective distribution over interleaver-side check degrees.
  DegreeDistribution left_check_dist() const;

  std::vector<uint8_t> mask_for_rate(double rate) const;
  StructuredComponent component(double noise_variance) const;
  StructuredComponent component(double noise_variance, double rate) const;

 private:
  int m_, k_sys_;
  DegreeDistribution check_degrees_;
  Protograph h2_;
  std::vector<int> totals_;
  std::vector<int> order_;  // designed puncture order
};

struct SemiStructuredSpec {
  E2rcStructure structure;
  DegreeDistribution lambda;
  int d_v_max;
};

struct JointDesignSpec {
  std::vector<double> rates;
  double g_min = 0.05, g_max = 1.0, g_step = 0.01;  // dB gap sweep
  double rate_tol = 0.005;  // mother-rate acceptance slack
};

struct DesignResult {
  DegreeDistribution lambda;
  double gap_db = 0.0;        // sweep position that produced the design
  double achieved_rate = 0.0;
};

/// Swapped-axis curve; flat segments keep their leftmost preimage.
ExitCurve invert_curve(const ExitCurve& curve);

/// LP over edge fractions {lambda_d, min_degree <= d <= d_v_max}: maximize
/// sum lambda_d/d subject to the tunnel staying open against the inverted
/// structured curve at every grid point (margin 1e-5 in MI). Designs default
/// to a degree-3 floor; degree 2 is admissible but rises too fast for its
/// own good near the corner.
DegreeDistribution optimize_lambda(const ChannelParam& chan, const ExitCurve& inv_structured,
                                   int d_v_max, int grid = 10000, int min_degree = 3);

/// Mother-code rate implied by lambda and the interleaver-side check
/// distribution: K/(K + M) with K ~ sum lambda_d/d and M ~ sum rho_d/d.
double rate_of(const SemiStructuredSpec& spec);

/// Worst channel (largest noise) at which the tunnel stays open at `rate`
/// under the designed puncture mask; Eb/N0 bisection at 1e-4 dB resolution.
ChannelParam predict_threshold(const SemiStructuredSpec& spec, double rate, int grid = 10000);

/// True when the two EXIT curves do not cross at this channel and mask.
bool tunnel_open(const SemiStructuredSpec& spec, const ChannelParam& chan, double rate,
                 int grid = 10000);

/// Walks the channel away from the Shannon limit of target_rate in 0.01 dB
/// steps, re-optimizing lambda, until the achieved mother rate reaches the
/// target. Throws no_tunnel_error when the 2 dB gap cap is hit first.
DesignResult design_at_rate(double target_rate, const E2rcStructure& structure, int d_v_max,
                            int grid = 10000, double gap_cap_db = 2.0, int min_degree = 3);

/// One LP under the union of per-rate tunnel constraints, the gap g swept
/// upward until the mother rate is acceptable. Returns (lambda, g).
DesignResult joint_optimize(const JointDesignSpec& jspec, const E2rcStructure& structure,
                            int d_v_max, int grid = 10000, int min_degree = 3);

}  // namespace e2rc
