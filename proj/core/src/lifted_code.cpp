#include "e2rc/lifted_code.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "e2rc/e2rc_structure.hpp"

namespace e2rc {

namespace {

struct EdgeInst {
  int check, var, index;  // index within the (check,var) multiplicity list
};

// 4-cycle test for a candidate shift: two column blocks close a 4-cycle
// when the same shift difference appears on two distinct (check, instance)
// pairs joining them.
bool makes_4cycle(const Protograph& g, const std::vector<std::vector<std::vector<int>>>& shifts,
                  const EdgeInst& cand, int s, int q) {
  const int m = g.num_checks(), n = g.num_vars();
  for (int v1 = 0; v1 < n; ++v1) {
    const auto& top = shifts[cand.check][v1];
    for (size_t i1 = 0; i1 < top.size(); ++i1) {
      if (v1 == cand.var && int(i1) == cand.index) continue;
      int s1 = top[i1];
      if (s1 < 0) continue;
      if (v1 == cand.var && (s1 - s) % q == 0) return true;  // doubled bit
      int d1 = ((s1 - s) % q + q) % q;
      for (int c2 = 0; c2 < m; ++c2) {
        const auto& left = shifts[c2][cand.var];
        for (size_t i2 = 0; i2 < left.size(); ++i2) {
          if (c2 == cand.check && int(i2) == cand.index) continue;
          int s2 = left[i2];
          if (s2 < 0) continue;
          const auto& right = shifts[c2][v1];
          for (size_t i3 = 0; i3 < right.size(); ++i3) {
            if (c2 == cand.check && v1 == cand.var && int(i3) == cand.index) continue;
            if (c2 == cand.check && int(i3) == int(i1)) continue;  // reuse of e1
            if (c2 == cand.check && v1 == cand.var && int(i2) == int(i1)) continue;
            int s3 = right[i3];
            if (s3 < 0) continue;
            int d2 = ((s3 - s2) % q + q) % q;
            if (d1 == d2) return true;
          }
        }
      }
    }
  }
  return false;
}

// Proper 6-cycles through the candidate edge (all six blocks distinct).
int count_6cycles(const Protograph& g, const std::vector<std::vector<std::vector<int>>>& shifts,
                  const EdgeInst& cand, int s, int q) {
  const int m = g.num_checks(), n = g.num_vars();
  int count = 0;
  for (int v1 = 0; v1 < n; ++v1) {
    if (v1 == cand.var) continue;
    for (int s1 : shifts[cand.check][v1]) {
      if (s1 < 0) continue;
      for (int c2 = 0; c2 < m; ++c2) {
        if (c2 == cand.check) continue;
        for (int s2 : shifts[c2][v1]) {
          if (s2 < 0) continue;
          for (int v2 = 0; v2 < n; ++v2) {
            if (v2 == cand.var || v2 == v1) continue;
            for (int s3 : shifts[c2][v2]) {
              if (s3 < 0) continue;
              for (int c3 = 0; c3 < m; ++c3) {
                if (c3 == cand.check || c3 == c2) continue;
                for (int s4 : shifts[c3][v2]) {
                  if (s4 < 0) continue;
                  for (int s5 : shifts[c3][cand.var]) {
                    if (s5 < 0) continue;
                    if (((s - s1 + s2 - s3 + s4 - s5) % q + q) % q == 0) ++count;
                  }
                }
              }
            }
          }
        }
      }
    }
  }
  return count;
}

// packed GF(2) rows for the residual encoder block
struct BitMatrix {
  int cols = 0;
  std::vector<std::vector<uint64_t>> rows;

  BitMatrix(int r, int c) : cols(c), rows(r, std::vector<uint64_t>((c + 63) / 64, 0)) {}
  void set(int r, int c) { rows[r][c >> 6] ^= 1ull << (c & 63); }
  bool get(int r, int c) const { return (rows[r][c >> 6] >> (c & 63)) & 1; }
  void xor_rows(int dst, int src) {
    for (size_t w = 0; w < rows[dst].size(); ++w) rows[dst][w] ^= rows[src][w];
  }
};

}  // namespace

std::vector<int> LiftedCode::systematic_vars() const {
  std::vector<int> out;
  for (int v = 0; v < proto.num_vars(); ++v)
    if (proto.roles[v] == VarRole::Systematic) out.push_back(v);
  return out;
}

LiftedCode lift(const Protograph& g, int q, uint64_t seed, int retry_budget) {
  g.validate();
  int max_mult = 0;
  for (auto& row : g.base)
    for (int x : row) max_mult = std::max(max_mult, x);
  if (q < max_mult) throw std::invalid_argument("q below the largest multiplicity");

  const int m = g.num_checks(), n = g.num_vars();
  std::vector<EdgeInst> edges;
  for (int c = 0; c < m; ++c)
    for (int v = 0; v < n; ++v)
      for (int k = 0; k < g.base[c][v]; ++k) edges.push_back({c, v, k});

  LiftedCode code;
  code.proto = g;
  code.q = q;

  // densest variable blocks carry the tightest difference constraints;
  // assigning them while the table is empty leaves them the most freedom
  std::vector<int> var_rank(n);
  {
    std::vector<int> by_degree(n);
    for (int v = 0; v < n; ++v) by_degree[v] = v;
    std::stable_sort(by_degree.begin(), by_degree.end(),
                     [&](int a, int b) { return g.var_degree(a) > g.var_degree(b); });
    for (int r = 0; r < n; ++r) var_rank[by_degree[r]] = r;
  }

  long best_quality = -1;
  LiftedCode best_code;
  for (int attempt = 0; attempt <= retry_budget; ++attempt) {
    std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ull * uint64_t(attempt));
    std::vector<EdgeInst> order = edges;
    std::shuffle(order.begin(), order.end(), rng);
    if (attempt % 2 == 1) {  // alternate restarts: densest variable blocks first
      std::stable_sort(order.begin(), order.end(), [&](const EdgeInst& a, const EdgeInst& b) {
        return var_rank[a.var] < var_rank[b.var];
      });
    }
    code.shifts.assign(m, std::vector<std::vector<int>>(n));
    for (int c = 0; c < m; ++c)
      for (int v = 0; v < n; ++v) code.shifts[c][v].assign(g.base[c][v], -1);
    code.peel_plan.clear();
    code.residual_vars.clear();
    code.residual_checks.clear();
    code.residual_inv.clear();

    bool ok = true;
    long total_c6 = 0;
    for (const EdgeInst& e : order) {
      int rot = int(rng() % uint64_t(q));
      int best_shift = -1, best_count = INT32_MAX;
      for (int raw = 0; raw < q; ++raw) {
        int s = (raw + rot) % q;
        if (makes_4cycle(g, code.shifts, e, s, q)) continue;
        int c6 = count_6cycles(g, code.shifts, e, s, q);
        if (c6 < best_count) {
          best_count = c6;
          best_shift = s;
          if (c6 == 0) break;
        }
      }
      if (best_shift < 0) {
        ok = false;
        break;
      }
      total_c6 += best_count;
      code.shifts[e.check][e.var][e.index] = best_shift;
    }
    if (!ok) continue;
    // sample a handful of successful restarts, keep the shortest-cycle one
    if (best_quality < 0 || total_c6 < best_quality) {
      best_quality = total_c6;
      best_code.shifts = code.shifts;
    }
    if (attempt < std::min(retry_budget, 5)) continue;
    code.shifts = best_code.shifts;

    // bit-level adjacency: block (c,v) with shift s puts ones at
    // (row c*q + (x+s) mod q, column v*q + x)
    code.row_cols.assign(size_t(m) * q, {});
    code.col_rows.assign(size_t(n) * q, {});
    for (int c = 0; c < m; ++c) {
      for (int v = 0; v < n; ++v) {
        for (int s : code.shifts[c][v]) {
          for (int x = 0; x < q; ++x) {
            int row = c * q + (x + s) % q;
            int col = v * q + x;
            code.row_cols[row].push_back(col);
            code.col_rows[col].push_back(row);
          }
        }
      }
    }

    // encoder plan: block peeling, then a dense solve for the leftovers
    auto pivots = parity_peel_pivots(g);
    std::vector<uint8_t> resolved(n, 0);
    for (int v = 0; v < n; ++v) resolved[v] = (g.roles[v] == VarRole::Systematic);
    std::vector<uint8_t> check_used(m, 0);
    for (auto& [c, v] : pivots) {
      code.peel_plan.push_back({c, v, code.shifts[c][v][0]});
      resolved[v] = 1;
      check_used[c] = 1;
    }
    for (int v = 0; v < n; ++v)
      if (!resolved[v]) code.residual_vars.push_back(v);
    for (int c = 0; c < m; ++c)
      if (!check_used[c]) code.residual_checks.push_back(c);

    if (!code.residual_vars.empty()) {
      if (code.residual_checks.size() != code.residual_vars.size())
        throw std::runtime_error("parity residual is not square");
      const int rb = int(code.residual_vars.size());
      const int dim = rb * q;
      BitMatrix a(dim, dim), inv(dim, dim);
      for (int i = 0; i < dim; ++i) inv.set(i, i);
      for (int ci = 0; ci < rb; ++ci) {
        int c = code.residual_checks[ci];
        for (int vi = 0; vi < rb; ++vi) {
          int v = code.residual_vars[vi];
          for (int s : code.shifts[c][v])
            for (int x = 0; x < q; ++x) a.set(ci * q + (x + s) % q, vi * q + x);
        }
      }
      bool singular = false;
      for (int col = 0; col < dim; ++col) {
        int piv = -1;
        for (int r = col; r < dim; ++r) {
          if (a.get(r, col)) {
            piv = r;
            break;
          }
        }
        if (piv < 0) {
          singular = true;
          break;
        }
        std::swap(a.rows[piv], a.rows[col]);
        std::swap(inv.rows[piv], inv.rows[col]);
        for (int r = 0; r < dim; ++r) {
          if (r != col && a.get(r, col)) {
            a.xor_rows(r, col);
            inv.xor_rows(r, col);
          }
        }
      }
      if (singular) {  // discard this shift set and retry fresh
        best_quality = -1;
        continue;
      }
      code.residual_inv = std::move(inv.rows);
    }
    return code;
  }
  throw std::runtime_error("no 4-cycle-free circulant assignment found; increase q");
}

std::vector<uint8_t> encode(const LiftedCode& code, const std::vector<uint8_t>& message) {
  const int q = code.q, n = code.proto.num_vars(), m = code.proto.num_checks();
  auto sys = code.systematic_vars();
  if (int(message.size()) != code.k())
    throw std::invalid_argument("message length must be k = n - m bits");
  if (int(sys.size()) * q != code.k())
    throw std::invalid_argument("systematic blocks do not cover the message");

  std::vector<uint8_t> word(size_t(n) * q, 0);
  std::vector<uint8_t> acc(size_t(m) * q, 0);  // running syndrome
  auto add_block = [&](int c, int v) {
    for (int s : code.shifts[c][v])
      for (int x = 0; x < q; ++x) acc[c * q + (x + s) % q] ^= word[v * q + x];
  };

  for (size_t i = 0; i < sys.size(); ++i)
    std::copy(message.begin() + i * q, message.begin() + (i + 1) * q,
              word.begin() + size_t(sys[i]) * q);
  for (int c = 0; c < m; ++c)
    for (int v : sys)
      if (!code.shifts[c][v].empty()) add_block(c, v);

  for (auto& step : code.peel_plan) {
    // P_s x = acc  =>  x[i] = acc[(i + s) mod q]
    for (int x = 0; x < q; ++x)
      word[step.var * q + x] = acc[step.check * q + (x + step.shift) % q];
    for (int c = 0; c < m; ++c)
      if (!code.shifts[c][step.var].empty()) add_block(c, step.var);
  }

  if (!code.residual_vars.empty()) {
    const int rb = int(code.residual_vars.size());
    const int dim = rb * q;
    std::vector<uint8_t> rhs(dim);
    for (int ci = 0; ci < rb; ++ci)
      for (int x = 0; x < q; ++x) rhs[ci * q + x] = acc[code.residual_checks[ci] * q + x];
    for (int i = 0; i < dim; ++i) {
      uint8_t bit = 0;
      const auto& row = code.residual_inv[i];
      for (int j = 0; j < dim; ++j)
        if (rhs[j]) bit ^= uint8_t((row[j >> 6] >> (j & 63)) & 1);
      word[code.residual_vars[i / q] * q + (i % q)] = bit;
    }
  }
  return word;
}

bool syndrome_ok(const LiftedCode& code, const std::vector<uint8_t>& word) {
  for (auto& cols : code.row_cols) {
    int parity = 0;
    for (int c : cols) parity ^= word[c];
    if (parity) return false;
  }
  return true;
}

DecodeResult bp_decode(const LiftedCode& code, const std::vector<double>& llr, int max_iters) {
  const int n_bits = code.n();
  if (int(llr.size()) != n_bits) throw std::invalid_argument("llr length mismatch");
  const double clip = 20.0;

  const auto& rows = code.row_cols;
  std::vector<int> row_start(rows.size() + 1, 0);
  for (size_t r = 0; r < rows.size(); ++r) row_start[r + 1] = row_start[r] + int(rows[r].size());
  const int n_edges = row_start.back();
  std::vector<int> edge_col(n_edges);
  std::vector<std::vector<int>> col_edges(n_bits);
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t j = 0; j < rows[r].size(); ++j) {
      int e = row_start[r] + int(j);
      edge_col[e] = rows[r][j];
      col_edges[rows[r][j]].push_back(e);
    }
  }

  std::vector<double> ch(n_bits);
  for (int i = 0; i < n_bits; ++i) ch[i] = std::clamp(llr[i], -clip, clip);
  std::vector<double> m_vc(n_edges), m_cv(n_edges, 0.0);
  for (int e = 0; e < n_edges; ++e) m_vc[e] = ch[edge_col[e]];

  DecodeResult res;
  res.bits.assign(n_bits, 0);
  std::vector<double> tanh_buf, suf;

  for (int iter = 1; iter <= max_iters; ++iter) {
    for (size_t r = 0; r < rows.size(); ++r) {
      const int lo = row_start[r], d = row_start[r + 1] - lo;
      tanh_buf.resize(d);
      suf.resize(d + 1);
      for (int j = 0; j < d; ++j) tanh_buf[j] = std::tanh(0.5 * m_vc[lo + j]);
      suf[d] = 1.0;
      for (int j = d - 1; j >= 0; --j) suf[j] = suf[j + 1] * tanh_buf[j];
      double pre = 1.0;
      for (int j = 0; j < d; ++j) {
        double prod = std::clamp(pre * suf[j + 1], -0.9999999999999, 0.9999999999999);
        m_cv[lo + j] = std::clamp(2.0 * std::atanh(prod), -clip, clip);
        pre *= tanh_buf[j];
      }
    }
    bool undecided = false;
    for (int i = 0; i < n_bits; ++i) {
      double total = ch[i];
      for (int e : col_edges[i]) total += m_cv[e];
      for (int e : col_edges[i]) m_vc[e] = std::clamp(total - m_cv[e], -clip, clip);
      res.bits[i] = total < 0.0 ? 1 : 0;
      undecided |= (total == 0.0);
    }
    res.iterations = iter;
    bool ok = !undecided;
    for (size_t r = 0; r < rows.size() && ok; ++r) {
      int parity = 0;
      for (int j = row_start[r]; j < row_start[r + 1]; ++j) parity ^= res.bits[edge_col[j]];
      ok = parity == 0;
    }
    if (ok) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

}  // namespace e2rc
