#include "e2rc/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace e2rc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.69314718055994530942;

// log2(1 + e^-l), stable for any l
double soft_bit_info(double l) {
  if (l >= 0.0) return std::log1p(std::exp(-l)) / kLn2;
  return (-l + std::log1p(std::exp(l))) / kLn2;
}

// Gauss-Hermite rule for integral f(x) e^{-x^2} dx, orthonormal-recurrence based.
struct HermiteRule {
  std::vector<double> nodes;    // positive half; full rule is symmetric
  std::vector<double> weights;

  explicit HermiteRule(int n) {
    auto pn = [](double x, int upto) {
      // orthonormal Hermite value p_upto(x); p_0 = pi^{-1/4}
      double pm1 = 0.0, p = 0.75112554446494248286;
      for (int k = 0; k < upto; ++k) {
        double pk1 = x * std::sqrt(2.0 / (k + 1)) * p - std::sqrt(double(k) / (k + 1)) * pm1;
        pm1 = p;
        p = pk1;
      }
      return p;
    };
    const double xmax = std::sqrt(2.0 * n + 2.0);
    const double step = 0.01;
    double prev_x = 1e-12, prev_v = pn(prev_x, n);
    for (double x = step; x < xmax + step; x += step) {
      double v = pn(x, n);
      if (prev_v == 0.0 || (prev_v < 0) != (v < 0)) {
        double lo = prev_x, hi = x, flo = prev_v;
        for (int it = 0; it < 90; ++it) {
          double mid = 0.5 * (lo + hi);
          double fm = pn(mid, n);
          if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        double root = 0.5 * (lo + hi);
        double s = 0.0;  // sum of p_k(root)^2, k < n
        {
          double pm1 = 0.0, p = 0.75112554446494248286;
          s += p * p;
          for (int k = 0; k + 1 < n; ++k) {
            double pk1 = root * std::sqrt(2.0 / (k + 1)) * p - std::sqrt(double(k) / (k + 1)) * pm1;
            pm1 = p;
            p = pk1;
            s += p * p;
          }
        }
        nodes.push_back(root);
        weights.push_back(1.0 / s);  // Christoffel weight of the orthonormal family
      }
      prev_x = x;
      prev_v = v;
    }
  }
};

// Cached monotone map J(sigma) on a fine uniform grid with cubic Hermite
// interpolation, plus a direct inverse table. Read-only after construction.
class JTable {
 public:
  JTable() {
    HermiteRule gh(128);
    values_.resize(kN);
    slopes_.resize(kN);
    for (int i = 0; i < kN; ++i) values_[i] = direct(i * kH, gh);
    values_[0] = 0.0;
    for (int i = 1; i < kN; ++i) {
      values_[i] = std::max(values_[i], values_[i - 1]);
      if (values_[i] > 1.0 - 1e-13) values_[i] = 1.0;  // below quadrature noise
    }
    for (int i = 0; i < kN; ++i) {
      if (i == 0)
        slopes_[i] = (values_[1] - values_[0]) / kH;
      else if (i == kN - 1)
        slopes_[i] = (values_[i] - values_[i - 1]) / kH;
      else
        slopes_[i] = (values_[i + 1] - values_[i - 1]) / (2.0 * kH);
      slopes_[i] = std::max(slopes_[i], 0.0);
    }
    // Fritsch-Carlson limiting keeps the cubic monotone on every cell
    for (int i = 0; i < kN; ++i) {
      double dl = (i > 0) ? (values_[i] - values_[i - 1]) / kH : kInf;
      double dr = (i < kN - 1) ? (values_[i + 1] - values_[i]) / kH : kInf;
      double cap = 3.0 * std::min(dl, dr);
      if (cap <= 0.0)
        slopes_[i] = 0.0;
      else
        slopes_[i] = std::min(slopes_[i], cap);
    }
    // top of the strictly increasing range (beyond: 1.0 in double precision)
    strict_top_ = kN - 1;
    while (strict_top_ > 0 && values_[strict_top_] >= 1.0) --strict_top_;
    sigma_top_ = strict_top_ * kH;

    // bucket -> first candidate cell, for O(1) inverse lookups
    cell_hint_.assign(kBuckets + 1, 0);
    int cell = 0;
    for (int b = 0; b <= kBuckets; ++b) {
      double target = double(b) / kBuckets;
      while (cell < strict_top_ && values_[cell + 1] < target) ++cell;
      cell_hint_[b] = cell;
    }
  }

  double forward(double sigma) const {
    if (sigma <= 0.0) return 0.0;
    if (sigma >= kSigmaMax) return 1.0;
    double u = sigma * (1.0 / kH);
    int idx = std::min(int(u), kN - 2);
    double t = u - idx;
    return std::min(1.0, hermite(values_[idx], values_[idx + 1], slopes_[idx] * kH,
                                 slopes_[idx + 1] * kH, t));
  }

  double forward_deriv(double sigma) const {
    if (sigma <= 0.0) sigma = 0.0;
    if (sigma >= kSigmaMax) return 0.0;
    double u = sigma * (1.0 / kH);
    int idx = std::min(int(u), kN - 2);
    double t = u - idx;
    return hermite_deriv(values_[idx], values_[idx + 1], slopes_[idx] * kH,
                         slopes_[idx + 1] * kH, t) /
           kH;
  }

  // cell lookup on the forward grid, then in-cell solve of the cubic
  double inverse(double i) const {
    if (i <= 0.0) return 0.0;
    if (i >= values_[strict_top_]) return sigma_top_;
    int idx = cell_hint_[int(i * kBuckets)];
    int scanned = 0;
    while (idx + 1 < kN - 1 && values_[idx + 1] < i) {
      ++idx;
      if (++scanned > 64) {  // vertical tail: one bucket spans many cells
        auto it = std::lower_bound(values_.begin() + idx, values_.begin() + strict_top_ + 1, i);
        idx = std::max(idx, int(it - values_.begin()) - 1);
        break;
      }
    }
    const double y0 = values_[idx], y1 = values_[idx + 1];
    const double m0 = slopes_[idx] * kH, m1 = slopes_[idx + 1] * kH;
    double lo = 0.0, hi = 1.0, t = (y1 > y0) ? (i - y0) / (y1 - y0) : 0.5;
    for (int b = 0; b < 30; ++b) {
      double f = hermite(y0, y1, m0, m1, t) - i;
      if (std::abs(f) < 1e-14) break;
      double d = hermite_deriv(y0, y1, m0, m1, t);
      if (f > 0.0)
        hi = t;
      else
        lo = t;
      double next = (d > 0.0) ? t - f / d : -1.0;
      t = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
      if (hi - lo < 1e-15) break;
    }
    return (idx + t) * kH;
  }

  double sigma_top() const { return sigma_top_; }

 private:
  static constexpr double kSigmaMax = 17.0;
  static constexpr double kH = 1.0 / 2048.0;
  static constexpr int kN = int(kSigmaMax * 2048) + 1;
  static constexpr int kBuckets = 1 << 16;
  std::vector<double> values_, slopes_;
  std::vector<int> cell_hint_;
  double sigma_top_ = 0.0;
  int strict_top_ = 0;

  static double hermite(double y0, double y1, double m0, double m1, double t) {
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * m1;
  }
  static double hermite_deriv(double y0, double y1, double m0, double m1, double t) {
    double t2 = t * t;
    return (6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * y1 +
           (3 * t2 - 2 * t) * m1;
  }

  static double direct(double sigma, const HermiteRule& gh) {
    if (sigma <= 0.0) return 0.0;
    const double mu = 0.5 * sigma * sigma;
    const double c = sigma * 1.4142135623730950488;
    double acc = 0.0;
    for (size_t k = 0; k < gh.nodes.size(); ++k) {
      acc += gh.weights[k] * (soft_bit_info(mu + c * gh.nodes[k]) + soft_bit_info(mu - c * gh.nodes[k]));
    }
    return 1.0 - acc / 1.7724538509055160273;  // / sqrt(pi)
  }
};

const JTable& jtable() {
  static const JTable table;
  return table;
}

}  // namespace

DegreeDistribution::DegreeDistribution(std::vector<std::pair<int, double>> entries)
    : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
  validate();
}

DegreeDistribution::DegreeDistribution(const std::map<int, double>& entries)
    : DegreeDistribution(std::vector<std::pair<int, double>>(entries.begin(), entries.end())) {}

DegreeDistribution DegreeDistribution::single(int degree) {
  return DegreeDistribution({{degree, 1.0}});
}

DegreeDistribution DegreeDistribution::from_edge_counts(const std::map<int, long long>& counts) {
  long long total = 0;
  for (auto& [d, c] : counts) total += c;
  if (total <= 0) throw std::invalid_argument("empty edge count distribution");
  std::vector<std::pair<int, double>> entries;
  for (auto& [d, c] : counts)
    if (c > 0) entries.emplace_back(d, double(c) / double(total));
  return DegreeDistribution(std::move(entries));
}

void DegreeDistribution::validate() const {
  if (entries_.empty()) throw std::invalid_argument("degree distribution is empty");
  double sum = 0.0;
  int prev = 0;
  for (auto& [d, f] : entries_) {
    if (d < 1) throw std::invalid_argument("degree must be >= 1");
    if (d == prev) throw std::invalid_argument("duplicate degree");
    if (f < -1e-15) throw std::invalid_argument("negative degree fraction");
    prev = d;
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("degree fractions must sum to 1");
}

double DegreeDistribution::fraction(int degree) const {
  for (auto& [d, f] : entries_)
    if (d == degree) return f;
  return 0.0;
}

int DegreeDistribution::max_degree() const { return entries_.back().first; }

double DegreeDistribution::sum_inv_degree() const {
  double s = 0.0;
  for (auto& [d, f] : entries_) s += f / d;
  return s;
}

double j_function(double sigma) {
  if (sigma < 0.0) throw std::domain_error("j_function: sigma must be >= 0");
  return jtable().forward(sigma);
}

double j_inverse(double i) {
  if (i < 0.0 || i > 1.0) throw std::domain_error("j_inverse: argument outside [0,1]");
  if (i == 1.0) throw saturation_error();
  return jtable().inverse(i);
}

double mi_of_reliability(double s) {
  if (std::isinf(s)) return 1.0;
  return jtable().forward(std::sqrt(s));
}

double reliability_of_mi(double i) {
  if (i >= 1.0) return kInf;
  double sigma = jtable().inverse(i);
  return sigma * sigma;
}

double biawgn_capacity(const ChannelParam& chan) {
  return mi_of_reliability(4.0 / chan.noise_variance);
}

ChannelParam shannon_noise_for_rate(double rate) {
  if (!(rate > 0.0 && rate < 1.0)) throw std::domain_error("rate must be in (0,1)");
  double lo = std::log(1e-9), hi = std::log(1e9);
  for (int it = 0; it < 120; ++it) {
    double mid = 0.5 * (lo + hi);
    if (biawgn_capacity(ChannelParam(std::exp(mid))) > rate)
      lo = mid;  // capacity decreases with noise
    else
      hi = mid;
  }
  return ChannelParam(std::exp(0.5 * (lo + hi)));
}

double ebn0_db(const ChannelParam& chan, double rate) {
  if (!(rate > 0.0 && rate < 1.0)) throw std::domain_error("rate must be in (0,1)");
  return 10.0 * std::log10(1.0 / (2.0 * rate * chan.noise_variance));
}

double gap_db(const ChannelParam& chan, double rate) {
  return ebn0_db(chan, rate) - ebn0_db(shannon_noise_for_rate(rate), rate);
}

ChannelParam channel_at_ebn0_db(double db, double rate) {
  return ChannelParam(1.0 / (2.0 * rate * std::pow(10.0, db / 10.0)));
}

double exit_variable(const DegreeDistribution& lambda, double i_a, const ChannelParam& chan) {
  if (i_a >= 1.0) return 1.0;  // perfect a-priori, handled as a limit
  if (i_a < 0.0) throw std::domain_error("i_a must be in [0,1]");
  const double r = reliability_of_mi(i_a);
  const double s_mch = chan.msg_variance();
  double out = 0.0;
  for (auto& [d, f] : lambda.entries()) out += f * mi_of_reliability((d - 1) * r + s_mch);
  return out;
}

double exit_check(const DegreeDistribution& rho, double i_a) {
  if (i_a < 0.0 || i_a > 1.0) throw std::domain_error("i_a must be in [0,1]");
  const double r = reliability_of_mi(1.0 - i_a);
  double out = 1.0;
  for (auto& [d, f] : rho.entries()) {
    if (d > 1) out -= f * mi_of_reliability((d - 1) * r);
    // d == 1: a degree-1 check repeats nothing, J(0) = 0 contribution
  }
  return out;
}

}  // namespace e2rc
