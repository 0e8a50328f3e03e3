#pragma once

#include <cstdint>
#include <vector>

#include "e2rc/infotheory.hpp"
#include "e2rc/protograph.hpp"

namespace e2rc {

/// A protograph-structured code component: the deterministic graph plus
/// per-check sockets into the random interleaver. The channel acts on the
/// component's variables, honoring their puncture flags.
struct StructuredComponent {
  Protograph proto;
  std::vector<int> left_sockets;  // per check, edges toward the interleaver
  double noise_variance = 1.0;

  int total_left() const;
  void validate() const;
};

/// Sampled monotone EXIT map. Abscissae strictly increasing.
struct ExitCurve {
  std::vector<double> ia;
  std::vector<double> ie;

  size_t size() const { return ia.size(); }
  /// Piecewise-linear evaluation, clamped to the sampled range.
  double eval(double x) const;
  void validate() const;
};

/// EXIT-function point of the structured component at a-priori input i_a_in:
/// solves the per-edge mutual-information fixed point (variable update,
/// check-to-right update, check-to-left readout) by alternating sweeps from
/// zero initialization until the check-output vector moves less than 1e-6.
double structured_exit_point(const StructuredComponent& comp, double i_a_in);

/// Full curve on a uniform i_a grid over [0,1). Reuses the previous point's
/// converged state as warm start; identical to cold start within 1e-8.
ExitCurve structured_exit_curve(const StructuredComponent& comp, int num_points = 10000,
                                int threads = 1);

/// Monte-Carlo estimate of the same EXIT point: consistent-Gaussian a-priori
/// LLRs on the interleaver sockets, channel LLRs on the variables,
/// component-local sum-product decoding, extrinsic MI measured on the socket
/// outputs via the time-average estimator. Deterministic per seed when
/// threads == 1.
double monte_carlo_exit(const StructuredComponent& comp, double i_a_in, long num_samples,
                        uint64_t seed, int threads = 1);

/// Tabulates the variable-node EXIT formula for the unstructured part.
ExitCurve unstructured_exit_curve(const DegreeDistribution& lambda, const ChannelParam& chan,
                                  int num_points);

/// Per-check total-degree assignment for an H2 base: node-perspective counts
/// from the edge-perspective distribution over total check degrees, larger
/// totals paired with larger parity-row degrees.
std::vector<int> assign_check_degrees(const Protograph& h2, const DegreeDistribution& total_dist);

/// E2RC structured component: H2 base of size m, left sockets = assigned
/// total degree minus parity-row degree. Optional mask punctures parity
/// variables of the base.
StructuredComponent make_e2rc_component(int m, const DegreeDistribution& total_check_dist,
                                        double noise_variance,
                                        const std::vector<uint8_t>* mask = nullptr);

/// Accumulator-chain component (checks in a row, adjacent checks sharing a
/// degree-2 parity variable), concentrated total check degree.
StructuredComponent make_ira_component(int m, int total_check_degree, double noise_variance);

// test/diagnostic hook: per-sweep snapshots of the check-output vector
double structured_exit_point_traced(const StructuredComponent& comp, double i_a_in,
                                    std::vector<std::vector<double>>* check_trace);

}  // namespace e2rc
