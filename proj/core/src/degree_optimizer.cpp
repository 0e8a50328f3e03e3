#include "e2rc/degree_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "e2rc/simplex.hpp"

namespace e2rc {

namespace {
constexpr double kMargin = 1e-5;     // strict ">" realized as a fixed MI margin
constexpr double kBisectDb = 1e-4;   // threshold resolution in Eb/N0 dB
// The degree-1 core of the parity tree keeps the component's average
// extrinsic MI strictly below one, so tunnel requirements demanding
// a-priori quality above this cap are never imposed.
constexpr double kPlateauCap = 1.0 - 0.03;
}  // namespace

E2rcStructure::E2rcStructure(int m, DegreeDistribution total_check_degrees, int k_sys)
    : m_(m), k_sys_(k_sys), check_degrees_(std::move(total_check_degrees)) {
  if (k_sys_ < 1) throw std::invalid_argument("k_sys must be >= 1");
  h2_ = build_h2_base(m_);
  totals_ = assign_check_degrees(h2_, check_degrees_);
  order_ = puncture_order(sr_classify(h2_), h2_);
}

DegreeDistribution E2rcStructure::left_check_dist() const {
  std::map<int, long long> edge_counts;
  for (int c = 0; c < m_; ++c) {
    int left = totals_[c] - h2_.check_degree(c);
    if (left > 0) edge_counts[left] += left;
  }
  return DegreeDistribution::from_edge_counts(edge_counts);
}

std::vector<uint8_t> E2rcStructure::mask_for_rate(double rate) const {
  int p = -1;
  for (int cand = 0; cand < m_; ++cand) {
    if (std::abs(double(k_sys_) / double(k_sys_ + m_ - cand) - rate) < 1e-9) {
      p = cand;
      break;
    }
  }
  if (p < 0) {
    std::ostringstream os;
    os << "rate " << rate << " not reachable by the designed puncturing pattern";
    throw std::invalid_argument(os.str());
  }
  return mask_from_order(order_, p, m_);
}

StructuredComponent E2rcStructure::component(double noise_variance) const {
  StructuredComponent comp;
  comp.proto = h2_;
  comp.left_sockets.resize(m_);
  for (int c = 0; c < m_; ++c) comp.left_sockets[c] = totals_[c] - h2_.check_degree(c);
  comp.noise_variance = noise_variance;
  comp.validate();
  return comp;
}

StructuredComponent E2rcStructure::component(double noise_variance, double rate) const {
  StructuredComponent comp = component(noise_variance);
  comp.proto.punctured = mask_for_rate(rate);
  return comp;
}

ExitCurve invert_curve(const ExitCurve& curve) {
  curve.validate();  // rejects non-monotone input
  ExitCurve inv;
  inv.ia.reserve(curve.size());
  inv.ie.reserve(curve.size());
  for (size_t k = 0; k < curve.size(); ++k) {
    if (!inv.ia.empty() && curve.ie[k] <= inv.ia.back()) continue;  // leftmost preimage
    inv.ia.push_back(curve.ie[k]);
    inv.ie.push_back(curve.ia[k]);
  }
  if (inv.ia.empty()) throw std::invalid_argument("curve has no invertible range");
  return inv;
}

namespace {

struct TunnelConstraints {
  // per grid point inside the structured curve's range:
  // sum_d lambda_d * coef[d] >= required
  std::vector<std::vector<double>> coef;  // indexed [point][degree-2]
  std::vector<double> required;
};

// LP rows straight from the sampled pairs of the structured curve: where the
// structured part outputs e_k from input a_k, the variable side must already
// deliver more than a_k at decoder state e_k.
TunnelConstraints build_constraints(const ChannelParam& chan, const ExitCurve& inv_structured,
                                    int d_v_max, int grid, int min_degree) {
  TunnelConstraints out;
  const double s_mch = chan.msg_variance();
  const double top = inv_structured.ia.back();
  for (int k = 0; k < grid; ++k) {
    double x = double(k) / grid;
    if (x > top) break;  // beyond the component's reachable output
    double need = inv_structured.eval(x);
    if (need > kPlateauCap) continue;
    double r = reliability_of_mi(x);
    std::vector<double> row(d_v_max - min_degree + 1);
    for (int d = min_degree; d <= d_v_max; ++d)
      row[d - min_degree] = mi_of_reliability((d - 1) * r + s_mch);
    out.coef.push_back(std::move(row));
    out.required.push_back(need + kMargin);
  }
  return out;
}

DegreeDistribution lambda_from_solution(const std::vector<double>& x, int d_v_max,
                                        int min_degree) {
  std::vector<std::pair<int, double>> entries;
  double sum = 0.0;
  for (int d = min_degree; d <= d_v_max; ++d) sum += std::max(0.0, x[d - min_degree]);
  for (int d = min_degree; d <= d_v_max; ++d) {
    double f = std::max(0.0, x[d - min_degree]) / sum;
    if (f > 1e-12) entries.emplace_back(d, f);
  }
  // re-normalize exactly
  double total = 0.0;
  for (auto& [d, f] : entries) total += f;
  for (auto& [d, f] : entries) f /= total;
  return DegreeDistribution(entries);
}

// Row generation: solve on a subset, verify on the full grid, add violators.
DegreeDistribution solve_tunnel_lp(const TunnelConstraints& con, int d_v_max, int min_degree) {
  const int n = d_v_max - min_degree + 1;
  const int total = int(con.coef.size());
  if (total == 0) throw std::invalid_argument("empty constraint set");

  LpProblem lp;
  lp.objective.resize(n);
  for (int d = min_degree; d <= d_v_max; ++d) lp.objective[d - min_degree] = 1.0 / d;

  std::vector<char> active(total, 0);
  const int stride = std::max(1, total / 128);
  for (int k = 0; k < total; k += stride) active[k] = 1;
  active[total - 1] = 1;

  for (int round = 0; round < 40; ++round) {
    lp.rows.clear();
    lp.rhs.clear();
    for (int k = 0; k < total; ++k) {
      if (active[k]) {
        lp.rows.push_back(con.coef[k]);
        lp.rhs.push_back(con.required[k]);
      }
    }
    LpResult res = solve_simplex(lp);
    // full-grid re-verification guards against thinning leaks
    int added = 0;
    for (int k = 0; k < total; ++k) {
      if (active[k]) continue;
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) lhs += con.coef[k][j] * res.x[j];
      if (lhs < con.required[k] - 1e-11) {
        active[k] = 1;
        ++added;
      }
    }
    if (added == 0) return lambda_from_solution(res.x, d_v_max, min_degree);
  }
  throw std::runtime_error("tunnel LP row generation did not settle");
}

}  // namespace

DegreeDistribution optimize_lambda(const ChannelParam& chan, const ExitCurve& inv_structured,
                                   int d_v_max, int grid, int min_degree) {
  if (min_degree < 2) throw std::invalid_argument("min_degree must be >= 2");
  if (d_v_max < min_degree) throw std::invalid_argument("d_v_max below min_degree");
  auto con = build_constraints(chan, inv_structured, d_v_max, grid, min_degree);
  try {
    return solve_tunnel_lp(con, d_v_max, min_degree);
  } catch (const infeasible_error&) {
    throw no_tunnel_error("no open tunnel at this channel");
  }
}

double rate_of(const SemiStructuredSpec& spec) {
  double k_factor = spec.lambda.sum_inv_degree();
  double m_factor = spec.structure.left_check_dist().sum_inv_degree();
  if (k_factor <= 0.0 || m_factor <= 0.0) throw std::invalid_argument("degenerate distributions");
  return k_factor / (k_factor + m_factor);
}

bool tunnel_open(const SemiStructuredSpec& spec, const ChannelParam& chan, double rate,
                 int grid) {
  StructuredComponent comp = spec.structure.component(chan.noise_variance, rate);
  ExitCurve inv = invert_curve(structured_exit_curve(comp, grid));
  const double s_mch = chan.msg_variance();
  const double top = inv.ia.back();
  for (int k = 0; k < grid; ++k) {
    double x = double(k) / grid;  // decoder state handed back to the variables
    if (x > top) break;           // beyond the component's reachable output
    double need = inv.eval(x);
    if (need > kPlateauCap) continue;
    double r = reliability_of_mi(x);
    double lhs = 0.0;
    for (auto& [d, f] : spec.lambda.entries()) lhs += f * mi_of_reliability((d - 1) * r + s_mch);
    if (lhs <= need + kMargin) return false;
  }
  return true;
}

ChannelParam predict_threshold(const SemiStructuredSpec& spec, double rate, int grid) {
  spec.structure.mask_for_rate(rate);  // validates achievability
  const double shannon_db = ebn0_db(shannon_noise_for_rate(rate), rate);
  double lo = shannon_db - 0.05, hi = shannon_db + 0.3;
  while (!tunnel_open(spec, channel_at_ebn0_db(hi, rate), rate, grid)) {
    hi += 0.3;
    if (hi > shannon_db + 12.0)
      throw no_tunnel_error("tunnel closed even at near-zero noise");
  }
  while (hi - lo > kBisectDb) {
    double mid = 0.5 * (lo + hi);
    if (tunnel_open(spec, channel_at_ebn0_db(mid, rate), rate, grid))
      hi = mid;
    else
      lo = mid;
  }
  return channel_at_ebn0_db(0.5 * (lo + hi), rate);
}

DesignResult design_at_rate(double target_rate, const E2rcStructure& structure, int d_v_max,
                            int grid, double gap_cap_db, int min_degree) {
  if (!(target_rate > 0.0 && target_rate < 1.0))
    throw std::invalid_argument("target rate outside (0,1)");
  const double shannon_db = ebn0_db(shannon_noise_for_rate(target_rate), target_rate);
  for (double g = 0.01; g <= gap_cap_db + 1e-12; g += 0.01) {
    ChannelParam chan = channel_at_ebn0_db(shannon_db + g, target_rate);
    StructuredComponent comp = structure.component(chan.noise_variance);
    ExitCurve inv = invert_curve(structured_exit_curve(comp, grid));
    DegreeDistribution lambda;
    try {
      lambda = optimize_lambda(chan, inv, d_v_max, grid, min_degree);
    } catch (const no_tunnel_error&) {
      continue;
    }
    SemiStructuredSpec spec{structure, lambda, d_v_max};
    double rate = rate_of(spec);
    if (rate >= target_rate) return {lambda, g, rate};
  }
  throw no_tunnel_error("d_v_max too small to reach the target rate within the gap cap");
}

DesignResult joint_optimize(const JointDesignSpec& jspec, const E2rcStructure& structure,
                            int d_v_max, int grid, int min_degree) {
  if (jspec.rates.empty()) throw std::invalid_argument("empty rate set");
  if (!(jspec.g_min < jspec.g_max)) throw std::invalid_argument("g_min must be below g_max");
  double target = *std::min_element(jspec.rates.begin(), jspec.rates.end());
  for (double r : jspec.rates) structure.mask_for_rate(r);  // validate all up front

  DegreeDistribution best;
  bool have_best = false;
  for (double g = jspec.g_min; g <= jspec.g_max + 1e-12; g += jspec.g_step) {
    TunnelConstraints merged;
    bool feasible_setup = true;
    for (double rate : jspec.rates) {
      double db = ebn0_db(shannon_noise_for_rate(rate), rate) + g;
      ChannelParam chan = channel_at_ebn0_db(db, rate);
      StructuredComponent comp = structure.component(chan.noise_variance, rate);
      ExitCurve inv;
      try {
        inv = invert_curve(structured_exit_curve(comp, grid));
      } catch (const std::invalid_argument&) {
        feasible_setup = false;
        break;
      }
      auto con = build_constraints(chan, inv, d_v_max, grid, min_degree);
      merged.coef.insert(merged.coef.end(), con.coef.begin(), con.coef.end());
      merged.required.insert(merged.required.end(), con.required.begin(), con.required.end());
    }
    if (!feasible_setup) continue;
    DegreeDistribution lambda;
    try {
      lambda = solve_tunnel_lp(merged, d_v_max, min_degree);
    } catch (const infeasible_error&) {
      continue;
    }
    best = lambda;
    have_best = true;
    double rate = rate_of(SemiStructuredSpec{structure, lambda, d_v_max});
    if (rate >= target - jspec.rate_tol) return {lambda, g, rate};
  }
  std::ostringstream os;
  os << "gap sweep exhausted without an acceptable mother rate";
  if (have_best) os << " (a feasible but low-rate solution exists)";
  throw no_tunnel_error(os.str());
}

}  // namespace e2rc
