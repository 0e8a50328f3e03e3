#include "e2rc/proto_de.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace e2rc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// reliability at which an edge counts as fully informed (MI = 1 - 1e-6)
double target_reliability() {
  static const double s = reliability_of_mi(1.0 - 1e-6);
  return s;
}
}  // namespace

double rca_reciprocal(double s) {
  if (s <= 0.0) return kInf;
  if (std::isinf(s)) return 0.0;
  return reliability_of_mi(1.0 - mi_of_reliability(s));
}

namespace {

struct DeGraph {
  int n_edges = 0;
  std::vector<int> edge_var;
  std::vector<std::vector<int>> check_edges, var_edges;
  std::vector<double> s_ch;

  DeGraph(const Protograph& g, const ChannelParam& chan) {
    g.validate();
    const int m = g.num_checks(), n = g.num_vars();
    check_edges.resize(m);
    var_edges.resize(n);
    for (int c = 0; c < m; ++c) {
      for (int v = 0; v < n; ++v) {
        for (int k = 0; k < g.base[c][v]; ++k) {
          check_edges[c].push_back(n_edges);
          var_edges[v].push_back(n_edges);
          edge_var.push_back(v);
          ++n_edges;
        }
      }
    }
    s_ch.resize(n);
    for (int v = 0; v < n; ++v)
      s_ch[v] = g.punctured[v] ? 0.0 : 4.0 / chan.noise_variance;
  }
};

}  // namespace

bool rca_converges(const Protograph& g, const ChannelParam& chan, int max_iters) {
  return rca_converges_traced(g, chan, max_iters, nullptr);
}

bool rca_converges_traced(const Protograph& g, const ChannelParam& chan, int max_iters,
                          std::vector<std::vector<double>>* trace) {
  DeGraph de(g, chan);
  const double s_star = target_reliability();
  std::vector<double> a(de.n_edges, 0.0);  // variable -> check reliabilities
  std::vector<double> b(de.n_edges, 0.0);  // check -> variable
  std::vector<double> r(de.n_edges);
  std::vector<double> a_snap, b_snap;
  constexpr int kSnapPeriod = 256;

  for (int iter = 0; iter < max_iters; ++iter) {
    // variable update: reliabilities add
    for (size_t v = 0; v < de.var_edges.size(); ++v) {
      double sum = de.s_ch[v];
      int n_inf = 0;
      for (int e : de.var_edges[v]) {
        if (std::isinf(b[e]))
          ++n_inf;
        else
          sum += b[e];
      }
      for (int e : de.var_edges[v]) {
        int others_inf = n_inf - (std::isinf(b[e]) ? 1 : 0);
        a[e] = others_inf > 0 ? kInf : sum - (std::isinf(b[e]) ? 0.0 : b[e]);
      }
    }
    // check update through the reciprocal domain
    for (int e = 0; e < de.n_edges; ++e) r[e] = rca_reciprocal(a[e]);
    for (auto& edges : de.check_edges) {
      double sum = 0.0;
      int n_inf = 0;
      for (int e : edges) {
        if (std::isinf(r[e]))
          ++n_inf;
        else
          sum += r[e];
      }
      for (int e : edges) {
        int others_inf = n_inf - (std::isinf(r[e]) ? 1 : 0);
        b[e] = others_inf > 0 ? 0.0 : rca_reciprocal(sum - (std::isinf(r[e]) ? 0.0 : r[e]));
      }
    }
    if (trace) {
      std::vector<double> snap(a);
      snap.insert(snap.end(), b.begin(), b.end());
      trace->push_back(std::move(snap));
    }
    bool done = true;
    for (int e = 0; e < de.n_edges && done; ++e)
      done = a[e] >= s_star && b[e] >= s_star;
    if (done) return true;
    // bitwise-stable state means a fixed point below the target
    if (iter % kSnapPeriod == kSnapPeriod - 1) {
      if (a == a_snap && b == b_snap) return false;
      a_snap = a;
      b_snap = b;
    }
  }
  return false;
}

std::optional<ChannelParam> rca_threshold(const Protograph& g, int max_iters,
                                          double resolution_db) {
  int tx = 0;
  for (uint8_t p : g.punctured) tx += (p == 0);
  if (tx == 0) return std::nullopt;
  const double rate = g.transmitted_rate();
  if (!(rate > 0.0 && rate < 1.0)) throw std::invalid_argument("degenerate transmitted rate");

  const double shannon_db = ebn0_db(shannon_noise_for_rate(rate), rate);
  double lo = shannon_db - 0.1;
  double hi = shannon_db + 0.5;
  while (!rca_converges(g, channel_at_ebn0_db(hi, rate), max_iters)) {
    hi += (hi - shannon_db);
    if (hi > shannon_db + 20.0) return std::nullopt;
  }
  while (rca_converges(g, channel_at_ebn0_db(lo, rate), max_iters)) {
    lo -= 0.5;
    if (lo < shannon_db - 6.0) break;  // effectively at the limit already
  }
  while (hi - lo > resolution_db) {
    double mid = 0.5 * (lo + hi);
    if (rca_converges(g, channel_at_ebn0_db(mid, rate), max_iters))
      hi = mid;
    else
      lo = mid;
  }
  return channel_at_ebn0_db(0.5 * (lo + hi), rate);
}

double rca_threshold_db(const Protograph& g, int max_iters, double resolution_db) {
  auto chan = rca_threshold(g, max_iters, resolution_db);
  if (!chan) return kInf;
  return ebn0_db(*chan, g.transmitted_rate());
}

std::vector<ThresholdRow> family_threshold_report(
    const std::vector<std::pair<Protograph, std::vector<uint8_t>>>& family, int max_iters,
    double resolution_db) {
  std::vector<ThresholdRow> rows;
  for (auto& [graph, mask] : family) {
    Protograph g = graph;
    if (!mask.empty()) {
      if (int(mask.size()) != g.num_vars())
        throw std::invalid_argument("mask size mismatch in family");
      g.punctured = mask;
    }
    double rate = g.transmitted_rate();
    auto chan = rca_threshold(g, max_iters, resolution_db);
    if (!chan) throw std::runtime_error("family member has no threshold");
    rows.push_back({rate, chan->noise_variance, ebn0_db(*chan, rate), gap_db(*chan, rate)});
  }
  return rows;
}

}  // namespace e2rc
