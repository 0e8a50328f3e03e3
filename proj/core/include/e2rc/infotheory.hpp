#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace e2rc {

/// Thrown by j_inverse(1): perfect information has no finite LLR deviation.
class saturation_error : public std::domain_error {
 public:
  saturation_error() : std::domain_error("mutual information saturated at 1") {}
};

/// BIAWGN channel seen by one variable node (BPSK +-1, noise variance sigma_n^2).
/// A punctured node receives no channel observation.
struct ChannelParam {
  double noise_variance = 1.0;
  bool punctured = false;

  ChannelParam() = default;
  explicit ChannelParam(double sigma2, bool punct = false)
      : noise_variance(sigma2), punctured(punct) {
    if (!(sigma2 > 0.0)) throw std::domain_error("noise variance must be > 0");
  }

  /// Variance of the channel LLR message: 4/sigma_n^2, or 0 when punctured.
  double msg_variance() const { return punctured ? 0.0 : 4.0 / noise_variance; }
};

/// Edge-perspective degree distribution (lambda for variables, rho for checks).
class DegreeDistribution {
 public:
  DegreeDistribution() = default;
  DegreeDistribution(std::initializer_list<std::pair<int, double>> init)
      : DegreeDistribution(std::vector<std::pair<int, double>>(init)) {}
  explicit DegreeDistribution(std::vector<std::pair<int, double>> entries);
  explicit DegreeDistribution(const std::map<int, double>& entries);

  static DegreeDistribution single(int degree);
  /// Distribution of edge counts per degree, normalized to fractions.
  static DegreeDistribution from_edge_counts(const std::map<int, long long>& counts);

  const std::vector<std::pair<int, double>>& entries() const { return entries_; }
  double fraction(int degree) const;
  int max_degree() const;
  /// sum_d f_d / d  (proportional to the node count behind the edges)
  double sum_inv_degree() const;

  bool operator==(const DegreeDistribution&) const = default;

 private:
  std::vector<std::pair<int, double>> entries_;  // sorted by degree
  void validate() const;
};

/// Mutual information between a +-1 bit and a consistent Gaussian LLR
/// (mean sigma^2/2, variance sigma^2). Strictly increasing, J(0)=0, J(inf)=1.
double j_function(double sigma);

/// Inverse of j_function on [0,1). Throws saturation_error at i=1.
double j_inverse(double i);

/// J(sqrt(s)) for reliability s = sigma^2 in [0, +inf]; +inf maps to 1.
double mi_of_reliability(double s);

/// [J^{-1}(i)]^2; returns +inf for i >= 1 (non-throwing kernel for the engines).
double reliability_of_mi(double i);

/// Capacity of the BIAWGN channel at chan.noise_variance, bits/channel use.
double biawgn_capacity(const ChannelParam& chan);

/// Noise variance whose BIAWGN capacity equals `rate` (bisection).
ChannelParam shannon_noise_for_rate(double rate);

/// Eb/N0 in dB for unit-energy BPSK: 10*log10(1/(2*R*sigma_n^2)).
double ebn0_db(const ChannelParam& chan, double rate);

/// Eb/N0 gap of `chan` to the Shannon limit at `rate`, in dB.
double gap_db(const ChannelParam& chan, double rate);

/// Noise variance at Eb/N0 `db` for code rate `rate`.
ChannelParam channel_at_ebn0_db(double db, double rate);

/// Variable-node EXIT: sum_d lambda_d * J(sqrt((d-1)*J^{-1}(i_a)^2 + s_mch)).
double exit_variable(const DegreeDistribution& lambda, double i_a, const ChannelParam& chan);

/// Check-node EXIT: 1 - sum_d rho_d * J(sqrt((d-1)) * J^{-1}(1 - i_a)).
double exit_check(const DegreeDistribution& rho, double i_a);

}  // namespace e2rc
