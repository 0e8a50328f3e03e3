#include "e2rc/exit_engine.hpp"

#include "e2rc/e2rc_structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <stdexcept>
#include <thread>

namespace e2rc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEpsThresh = 1e-6;
constexpr int kMaxSweeps = 100000;
}  // namespace

int StructuredComponent::total_left() const {
  return std::accumulate(left_sockets.begin(), left_sockets.end(), 0);
}

void StructuredComponent::validate() const {
  proto.validate();
  if (int(left_sockets.size()) != proto.num_checks())
    throw std::invalid_argument("left_sockets size mismatch");
  for (int l : left_sockets)
    if (l < 0) throw std::invalid_argument("negative left socket count");
  if (!(noise_variance > 0.0)) throw std::invalid_argument("noise variance must be > 0");
  if (total_left() == 0) throw std::invalid_argument("component has no interleaver sockets");
}

double ExitCurve::eval(double x) const {
  if (ia.empty()) throw std::invalid_argument("empty curve");
  if (x <= ia.front()) return ie.front();
  if (x >= ia.back()) return ie.back();
  auto it = std::upper_bound(ia.begin(), ia.end(), x);
  size_t hi = size_t(it - ia.begin()), lo = hi - 1;
  double t = (x - ia[lo]) / (ia[hi] - ia[lo]);
  return ie[lo] + t * (ie[hi] - ie[lo]);
}

void ExitCurve::validate() const {
  if (ia.size() != ie.size() || ia.empty()) throw std::invalid_argument("malformed curve");
  for (size_t k = 0; k < ia.size(); ++k) {
    if (ia[k] < 0.0 || ia[k] > 1.0 || ie[k] < -1e-12 || ie[k] > 1.0 + 1e-12)
      throw std::invalid_argument("curve values outside [0,1]");
    if (k > 0 && ia[k] <= ia[k - 1]) throw std::invalid_argument("abscissa not increasing");
    if (k > 0 && ie[k] < ie[k - 1] - 1e-9) throw std::invalid_argument("curve not monotone");
  }
}

namespace {

// Flattened edge view of a component. Parallel edges become separate
// instances; all copies of the replicated base carry identical MI, so the
// computation runs on the base graph alone.
struct ComponentGraph {
  int n_checks = 0, n_vars = 0, n_edges = 0;
  std::vector<int> edge_check, edge_var;
  std::vector<std::vector<int>> check_edges, var_edges;
  std::vector<int> left_cnt;
  std::vector<double> s_mch;
  int min_sweeps = 2;

  explicit ComponentGraph(const StructuredComponent& comp) {
    comp.validate();
    const Protograph& g = comp.proto;
    n_checks = g.num_checks();
    n_vars = g.num_vars();
    check_edges.resize(n_checks);
    var_edges.resize(n_vars);
    for (int c = 0; c < n_checks; ++c) {
      for (int v = 0; v < n_vars; ++v) {
        for (int k = 0; k < g.base[c][v]; ++k) {
          check_edges[c].push_back(n_edges);
          var_edges[v].push_back(n_edges);
          edge_check.push_back(c);
          edge_var.push_back(v);
          ++n_edges;
        }
      }
    }
    left_cnt = comp.left_sockets;
    s_mch.resize(n_vars);
    for (int v = 0; v < n_vars; ++v)
      s_mch[v] = g.punctured[v] ? 0.0 : 4.0 / comp.noise_variance;
    min_sweeps = diameter() / 2 + 3;
  }

  // longest shortest path in the bipartite graph, in node hops
  int diameter() const {
    const int total = n_checks + n_vars;
    int best = 1;
    std::vector<int> dist(total);
    for (int s = 0; s < total; ++s) {
      std::fill(dist.begin(), dist.end(), -1);
      std::queue<int> q;
      q.push(s);
      dist[s] = 0;
      while (!q.empty()) {
        int u = q.front();
        q.pop();
        best = std::max(best, dist[u]);
        if (u < n_checks) {
          for (int e : check_edges[u]) {
            int w = n_checks + edge_var[e];
            if (dist[w] < 0) {
              dist[w] = dist[u] + 1;
              q.push(w);
            }
          }
        } else {
          for (int e : var_edges[u - n_checks]) {
            int w = edge_check[e];
            if (dist[w] < 0) {
              dist[w] = dist[u] + 1;
              q.push(w);
            }
          }
        }
      }
    }
    return best;
  }
};

class FixedPointSolver {
 public:
  explicit FixedPointSolver(const StructuredComponent& comp) : g_(comp) {}

  void reset() {
    iv_.assign(g_.n_edges, 0.0);
    ic_.assign(g_.n_edges, 0.0);
    warm_ = false;
  }

  // Solves the MI system at i_a_in. When warm, continues from the previous
  // state (the iterates stay sandwiched between old and new fixed points).
  double solve(double i_a_in, std::vector<std::vector<double>>* trace = nullptr) {
    if (i_a_in < 0.0 || i_a_in > 1.0) throw std::domain_error("i_a_in outside [0,1]");
    if (i_a_in == 1.0) return 1.0;  // analytic limit
    if (!warm_) reset();
    warm_ = true;
    const double lt = reliability_of_mi(1.0 - i_a_in);  // +inf at i_a_in = 0
    const bool lt_inf = std::isinf(lt);

    std::vector<double> t(g_.n_edges), u(g_.n_edges), prev_ic;
    for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
      prev_ic = ic_;
      check_update(lt, lt_inf, t);
      if (trace) trace->push_back(ic_);
      double delta2 = 0.0;
      for (int e = 0; e < g_.n_edges; ++e) {
        double d = ic_[e] - prev_ic[e];
        delta2 += d * d;
      }
      if (sweep >= g_.min_sweeps && std::sqrt(delta2) < kEpsThresh)
        return left_readout(lt, lt_inf, t);
      var_update(u);
    }
    throw std::runtime_error("structured EXIT fixed point did not converge in 100000 sweeps");
  }

 private:
  ComponentGraph g_;
  std::vector<double> iv_, ic_;
  bool warm_ = false;

  void check_update(double lt, bool lt_inf, std::vector<double>& t) {
    for (int e = 0; e < g_.n_edges; ++e) t[e] = reliability_of_mi(1.0 - iv_[e]);
    for (int c = 0; c < g_.n_checks; ++c) {
      double sum_fin = lt_inf ? 0.0 : g_.left_cnt[c] * lt;
      int n_inf = (lt_inf && g_.left_cnt[c] > 0) ? 1 : 0;
      for (int e : g_.check_edges[c]) {
        if (std::isinf(t[e]))
          ++n_inf;
        else
          sum_fin += t[e];
      }
      for (int e : g_.check_edges[c]) {
        int others_inf = n_inf - (std::isinf(t[e]) ? 1 : 0);
        if (others_inf > 0) {
          ic_[e] = 0.0;
        } else {
          double s = sum_fin - (std::isinf(t[e]) ? 0.0 : t[e]);
          ic_[e] = 1.0 - mi_of_reliability(s);
        }
      }
    }
  }

  void var_update(std::vector<double>& u) {
    for (int e = 0; e < g_.n_edges; ++e) u[e] = reliability_of_mi(ic_[e]);
    for (int v = 0; v < g_.n_vars; ++v) {
      double sum_fin = g_.s_mch[v];
      int n_inf = 0;
      for (int e : g_.var_edges[v]) {
        if (std::isinf(u[e]))
          ++n_inf;
        else
          sum_fin += u[e];
      }
      for (int e : g_.var_edges[v]) {
        int others_inf = n_inf - (std::isinf(u[e]) ? 1 : 0);
        if (others_inf > 0) {
          iv_[e] = 1.0;
        } else {
          double s = sum_fin - (std::isinf(u[e]) ? 0.0 : u[e]);
          iv_[e] = mi_of_reliability(s);
        }
      }
    }
  }

  double left_readout(double lt, bool lt_inf, std::vector<double>& t) {
    for (int e = 0; e < g_.n_edges; ++e) t[e] = reliability_of_mi(1.0 - iv_[e]);
    double acc = 0.0;
    long total = 0;
    for (int c = 0; c < g_.n_checks; ++c) {
      if (g_.left_cnt[c] == 0) continue;
      double sum_fin = lt_inf ? 0.0 : (g_.left_cnt[c] - 1) * lt;
      int n_inf = (lt_inf && g_.left_cnt[c] > 1) ? 1 : 0;
      for (int e : g_.check_edges[c]) {
        if (std::isinf(t[e]))
          ++n_inf;
        else
          sum_fin += t[e];
      }
      double out = (n_inf > 0) ? 0.0 : 1.0 - mi_of_reliability(sum_fin);
      acc += g_.left_cnt[c] * out;
      total += g_.left_cnt[c];
    }
    return acc / total;
  }
};

}  // namespace

double structured_exit_point(const StructuredComponent& comp, double i_a_in) {
  FixedPointSolver solver(comp);
  solver.reset();
  return solver.solve(i_a_in);
}

double structured_exit_point_traced(const StructuredComponent& comp, double i_a_in,
                                    std::vector<std::vector<double>>* check_trace) {
  FixedPointSolver solver(comp);
  solver.reset();
  return solver.solve(i_a_in, check_trace);
}

ExitCurve structured_exit_curve(const StructuredComponent& comp, int num_points, int threads) {
  if (num_points < 2) throw std::invalid_argument("num_points must be >= 2");
  ExitCurve curve;
  curve.ia.resize(num_points);
  curve.ie.resize(num_points);
  for (int k = 0; k < num_points; ++k) curve.ia[k] = double(k) / num_points;

  threads = std::max(1, std::min(threads, num_points / 64 + 1));
  auto run_chunk = [&](int lo, int hi) {
    FixedPointSolver solver(comp);
    solver.reset();
    for (int k = lo; k < hi; ++k) curve.ie[k] = solver.solve(curve.ia[k]);
  };
  if (threads == 1) {
    run_chunk(0, num_points);
  } else {
    std::vector<std::thread> pool;
    int chunk = (num_points + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      int lo = t * chunk, hi = std::min(num_points, lo + chunk);
      if (lo < hi) pool.emplace_back(run_chunk, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return curve;
}

ExitCurve unstructured_exit_curve(const DegreeDistribution& lambda, const ChannelParam& chan,
                                  int num_points) {
  if (num_points < 2) throw std::invalid_argument("num_points must be >= 2");
  ExitCurve curve;
  curve.ia.resize(num_points);
  curve.ie.resize(num_points);
  for (int k = 0; k < num_points; ++k) {
    curve.ia[k] = double(k) / num_points;
    curve.ie[k] = exit_variable(lambda, curve.ia[k], chan);
  }
  return curve;
}

namespace {

// One Monte-Carlo decode of the component; returns the sum over left sockets
// of log2(1 + exp(-L_out)) for the all-zero word.
class McDecoder {
 public:
  explicit McDecoder(const ComponentGraph& g) : g_(g) {}

  double run(std::mt19937_64& rng, double apriori_var) {
    std::normal_distribution<double> norm;
    // channel LLRs on variables, a-priori LLRs on sockets (all-zero word)
    llr_ch_.resize(g_.n_vars);
    for (int v = 0; v < g_.n_vars; ++v) {
      double s = g_.s_mch[v];
      llr_ch_[v] = s > 0.0 ? 0.5 * s + std::sqrt(s) * norm(rng) : 0.0;
    }
    left_tanh_.clear();
    left_llr_.clear();
    for (int c = 0; c < g_.n_checks; ++c) {
      for (int k = 0; k < g_.left_cnt[c]; ++k) {
        double l;
        if (std::isinf(apriori_var))
          l = 400.0;  // perfect a-priori
        else
          l = 0.5 * apriori_var + std::sqrt(apriori_var) * norm(rng);
        left_llr_.push_back(l);
        left_tanh_.push_back(std::tanh(0.5 * l));
      }
    }
    m_vc_.assign(g_.n_edges, 0.0);
    m_cv_.assign(g_.n_edges, 0.0);

    for (int sweep = 0; sweep < 200; ++sweep) {
      double max_change = check_sweep();
      var_sweep();
      if (sweep + 1 >= g_.min_sweeps && max_change < 1e-4) break;
    }
    check_sweep();
    return socket_readout();
  }

 private:
  const ComponentGraph& g_;
  std::vector<double> llr_ch_, left_llr_, left_tanh_, m_vc_, m_cv_;
  std::vector<double> fac_, pre_, suf_;

  static double msg_from_tanh(double x) {
    x = std::clamp(x, -1.0 + 1e-15, 1.0 - 1e-15);
    return 2.0 * std::atanh(x);
  }

  double check_sweep() {
    double max_change = 0.0;
    int socket_base = 0;
    for (int c = 0; c < g_.n_checks; ++c) {
      const auto& edges = g_.check_edges[c];
      const int dr = int(edges.size()), dl = g_.left_cnt[c];
      fac_.resize(dr + dl);
      for (int i = 0; i < dr; ++i) fac_[i] = std::tanh(0.5 * m_vc_[edges[i]]);
      for (int i = 0; i < dl; ++i) fac_[dr + i] = left_tanh_[socket_base + i];
      const int d = dr + dl;
      pre_.resize(d + 1);
      suf_.resize(d + 1);
      pre_[0] = 1.0;
      for (int i = 0; i < d; ++i) pre_[i + 1] = pre_[i] * fac_[i];
      suf_[d] = 1.0;
      for (int i = d - 1; i >= 0; --i) suf_[i] = suf_[i + 1] * fac_[i];
      for (int i = 0; i < dr; ++i) {
        double out = msg_from_tanh(pre_[i] * suf_[i + 1]);
        max_change = std::max(max_change, std::abs(out - m_cv_[edges[i]]));
        m_cv_[edges[i]] = out;
      }
      socket_base += dl;
    }
    return max_change;
  }

  void var_sweep() {
    for (int v = 0; v < g_.n_vars; ++v) {
      double total = llr_ch_[v];
      for (int e : g_.var_edges[v]) total += m_cv_[e];
      for (int e : g_.var_edges[v]) m_vc_[e] = total - m_cv_[e];
    }
  }

  double socket_readout() {
    double acc = 0.0;
    int socket_base = 0;
    for (int c = 0; c < g_.n_checks; ++c) {
      const auto& edges = g_.check_edges[c];
      const int dr = int(edges.size()), dl = g_.left_cnt[c];
      if (dl == 0) continue;
      fac_.resize(dr + dl);
      for (int i = 0; i < dr; ++i) fac_[i] = std::tanh(0.5 * m_vc_[edges[i]]);
      for (int i = 0; i < dl; ++i) fac_[dr + i] = left_tanh_[socket_base + i];
      const int d = dr + dl;
      pre_.resize(d + 1);
      suf_.resize(d + 1);
      pre_[0] = 1.0;
      for (int i = 0; i < d; ++i) pre_[i + 1] = pre_[i] * fac_[i];
      suf_[d] = 1.0;
      for (int i = d - 1; i >= 0; --i) suf_[i] = suf_[i + 1] * fac_[i];
      for (int i = 0; i < dl; ++i) {
        double l_out = msg_from_tanh(pre_[dr + i] * suf_[dr + i + 1]);
        acc += soft_bit_info_bits(l_out);
      }
      socket_base += dl;
    }
    return acc;
  }

  static double soft_bit_info_bits(double l) {
    constexpr double kLn2 = 0.69314718055994530942;
    if (l >= 0.0) return std::log1p(std::exp(-l)) / kLn2;
    return (-l + std::log1p(std::exp(l))) / kLn2;
  }
};

}  // namespace

double monte_carlo_exit(const StructuredComponent& comp, double i_a_in, long num_samples,
                        uint64_t seed, int threads) {
  if (num_samples < 1) throw std::invalid_argument("num_samples must be >= 1");
  if (i_a_in < 0.0 || i_a_in > 1.0) throw std::domain_error("i_a_in outside [0,1]");
  if (i_a_in == 1.0) return 1.0;  // same analytic limit as the fixed-point solver
  ComponentGraph graph(comp);
  const double apriori_var = reliability_of_mi(i_a_in);
  const long total_left = comp.total_left();

  threads = std::max(1, threads);
  std::vector<double> acc(threads, 0.0);
  auto worker = [&](int w) {
    std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ull * uint64_t(w));
    McDecoder dec(graph);
    long lo = num_samples * w / threads, hi = num_samples * (w + 1) / threads;
    double a = 0.0;
    for (long s = lo; s < hi; ++s) a += dec.run(rng, apriori_var);
    acc[w] = a;
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }
  double total = std::accumulate(acc.begin(), acc.end(), 0.0);
  return 1.0 - total / (double(num_samples) * double(total_left));
}

std::vector<int> assign_check_degrees(const Protograph& h2, const DegreeDistribution& total_dist) {
  const int m = h2.num_checks();
  // node-perspective counts by largest remainder
  std::vector<std::pair<int, double>> node;
  double norm = 0.0;
  for (auto& [d, f] : total_dist.entries()) {
    node.emplace_back(d, f / d);
    norm += f / d;
  }
  std::vector<int> counts(node.size());
  std::vector<std::pair<double, size_t>> rema(node.size());
  int assigned = 0;
  for (size_t i = 0; i < node.size(); ++i) {
    double exact = node[i].second / norm * m;
    counts[i] = int(exact);
    rema[i] = {exact - counts[i], i};
    assigned += counts[i];
  }
  std::sort(rema.begin(), rema.end(), std::greater<>());
  for (int k = 0; assigned < m; ++k, ++assigned) counts[rema[k % rema.size()].second]++;

  std::vector<int> totals;
  for (size_t i = 0; i < node.size(); ++i)
    totals.insert(totals.end(), counts[i], node[i].first);
  std::sort(totals.begin(), totals.end(), std::greater<>());

  // pair the largest totals with the largest parity rows
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (h2.check_degree(a) != h2.check_degree(b))
      return h2.check_degree(a) > h2.check_degree(b);
    return a < b;
  });
  std::vector<int> per_check(m);
  for (int i = 0; i < m; ++i) per_check[order[i]] = totals[i];
  for (int c = 0; c < m; ++c) {
    if (per_check[c] < h2.check_degree(c))
      throw std::invalid_argument("total check degree below the parity-row degree");
  }
  return per_check;
}

StructuredComponent make_e2rc_component(int m, const DegreeDistribution& total_check_dist,
                                        double noise_variance,
                                        const std::vector<uint8_t>* mask) {
  StructuredComponent comp;
  comp.proto = build_h2_base(m);
  auto totals = assign_check_degrees(comp.proto, total_check_dist);
  comp.left_sockets.resize(m);
  for (int c = 0; c < m; ++c) comp.left_sockets[c] = totals[c] - comp.proto.check_degree(c);
  comp.noise_variance = noise_variance;
  if (mask) {
    if (int(mask->size()) != comp.proto.num_vars())
      throw std::invalid_argument("mask size mismatch");
    comp.proto.punctured = *mask;
  }
  comp.validate();
  return comp;
}

StructuredComponent make_ira_component(int m, int total_check_degree, double noise_variance) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  StructuredComponent comp;
  Protograph& g = comp.proto;
  g.base.assign(m, std::vector<int>(m, 0));
  for (int i = 0; i < m; ++i) {
    g.base[i][i] = 1;               // check i - parity i
    if (i > 0) g.base[i][i - 1] = 1;  // chain link to the previous parity
  }
  g.roles.assign(m, VarRole::ParityNew);
  g.punctured.assign(m, 0);
  comp.left_sockets.resize(m);
  for (int c = 0; c < m; ++c) {
    int row = g.check_degree(c);
    if (total_check_degree < row)
      throw std::invalid_argument("total check degree below the chain degree");
    comp.left_sockets[c] = total_check_degree - row;
  }
  comp.noise_variance = noise_variance;
  comp.validate();
  return comp;
}

}  // namespace e2rc
