#include "e2rc/proto_builder.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace e2rc {

namespace {

std::vector<int> old_node_indices(const Protograph& g) {
  std::vector<int> idx;
  for (int v = 0; v < g.num_vars(); ++v)
    if (g.roles[v] != VarRole::ParityNew) idx.push_back(v);
  return idx;
}

}  // namespace

Protograph check_split(const Protograph& g, int check, const SplitPattern& pattern) {
  if (check < 0 || check >= g.num_checks()) throw std::invalid_argument("check out of range");
  auto old_idx = old_node_indices(g);
  if (pattern.s01.size() != old_idx.size() || pattern.s02.size() != old_idx.size())
    throw std::invalid_argument("pattern length does not match the old-node count");
  for (size_t i = 0; i < old_idx.size(); ++i) {
    if (pattern.s01[i] < 0 || pattern.s02[i] < 0 ||
        pattern.s01[i] + pattern.s02[i] != g.base[check][old_idx[i]])
      throw std::invalid_argument("pattern does not sum to the check's old-node connections");
  }
  // the lexicographically larger share inherits the new-node connections
  const bool first_is_c01 = !std::lexicographical_compare(
      pattern.s01.begin(), pattern.s01.end(), pattern.s02.begin(), pattern.s02.end());
  const std::vector<int>& share01 = first_is_c01 ? pattern.s01 : pattern.s02;
  const std::vector<int>& share02 = first_is_c01 ? pattern.s02 : pattern.s01;

  Protograph out = g;
  const int nv = g.num_vars();
  for (auto& row : out.base) row.push_back(0);
  std::vector<int> c02(nv + 1, 0);
  // c01 rewrites the parent's row: old-node share + inherited new-node edges
  for (size_t i = 0; i < old_idx.size(); ++i) {
    out.base[check][old_idx[i]] = share01[i];
    c02[old_idx[i]] = share02[i];
  }
  out.base[check][nv] = 1;
  c02[nv] = 1;
  out.base.push_back(std::move(c02));
  out.roles.push_back(VarRole::ParityNew);
  out.punctured.push_back(0);
  if (!out.labels.empty()) out.labels.push_back("p" + std::to_string(nv));
  out.validate();
  return out;
}

std::vector<SplitPattern> enumerate_equal_splits(const std::vector<int>& s0, int budget) {
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");
  std::vector<int> odd_pos;
  for (size_t i = 0; i < s0.size(); ++i) {
    if (s0[i] < 0) throw std::invalid_argument("negative connection count");
    if (s0[i] % 2 == 1) odd_pos.push_back(int(i));
  }
  const int choices = int(odd_pos.size());
  long long count = choices >= 62 ? std::numeric_limits<long long>::max()
                                  : (1LL << choices);
  std::vector<SplitPattern> out;
  for (long long bits = 0; bits < count && int(out.size()) < budget; ++bits) {
    SplitPattern p;
    p.s01.resize(s0.size());
    p.s02.resize(s0.size());
    int b = 0;
    for (size_t i = 0; i < s0.size(); ++i) {
      int half = s0[i] / 2;
      if (s0[i] % 2 == 0) {
        p.s01[i] = p.s02[i] = half;
      } else {
        bool extra_to_first = ((bits >> (choices - 1 - b)) & 1) == 0;
        p.s01[i] = half + (extra_to_first ? 1 : 0);
        p.s02[i] = half + (extra_to_first ? 0 : 1);
        ++b;
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<uint8_t> ProtographFamily::mask_for(int punctured_count) const {
  const int n = mother.num_vars();
  const int added = int(stage_log.size());
  if (punctured_count < 0 || punctured_count > added)
    throw std::invalid_argument("punctured_count outside the family");
  std::vector<uint8_t> mask(n, 0);
  for (int j = 0; j < punctured_count; ++j)
    mask[stage_log[added - 1 - j].new_var] = 1;
  return mask;
}

std::vector<double> ProtographFamily::rates() const {
  std::vector<double> out;
  const int k = mother.num_vars() - mother.num_checks();
  for (int j = int(stage_log.size()); j >= 0; --j)
    out.push_back(double(k) / (mother.num_vars() - j));
  std::reverse(out.begin(), out.end());  // mother first, then climbing rates
  return out;
}

namespace {

// deterministic quick completion: split everything left with its first
// equal pattern, down to the final stage
Protograph complete_cheaply(Protograph g, const std::vector<int>& old_idx,
                            std::vector<int> eligible, int stages_left) {
  for (int stage = 0;; ++stage) {
    if (eligible.empty()) {
      if (--stages_left <= 0) break;
      eligible.resize(g.num_checks());
      for (size_t i = 0; i < eligible.size(); ++i) eligible[i] = int(i);
    }
    int c = eligible.front();
    eligible.erase(eligible.begin());
    std::vector<int> s0(old_idx.size());
    for (size_t i = 0; i < old_idx.size(); ++i) s0[i] = g.base[c][old_idx[i]];
    g = check_split(g, c, enumerate_equal_splits(s0, 1).front());
  }
  return g;
}

}  // namespace

ProtographFamily build_family(const Protograph& start, int stages, int pattern_budget,
                              const ThresholdFn& threshold_fn, double tradeoff_weight) {
  start.validate();
  if (start.num_checks() < 1) throw std::invalid_argument("start needs at least one check");
  if (tradeoff_weight < 0.0 || tradeoff_weight > 1.0)
    throw std::invalid_argument("tradeoff_weight outside [0,1]");
  ProtographFamily fam;
  fam.start = start;
  fam.members = {start};
  Protograph current = start;
  auto old_idx = old_node_indices(start);

  for (int stage = 1; stage <= stages; ++stage) {
    std::vector<int> eligible(current.num_checks());
    for (size_t i = 0; i < eligible.size(); ++i) eligible[i] = int(i);
    while (!eligible.empty()) {
      double best_score = std::numeric_limits<double>::infinity();
      int best_check = -1;
      SplitPattern best_pattern;
      Protograph best_graph;
      for (int c : eligible) {
        std::vector<int> s0(old_idx.size());
        for (size_t i = 0; i < old_idx.size(); ++i) s0[i] = current.base[c][old_idx[i]];
        for (const auto& pattern : enumerate_equal_splits(s0, pattern_budget)) {
          Protograph candidate = check_split(current, c, pattern);
          double score = threshold_fn(candidate);
          if (tradeoff_weight > 0.0) {
            std::vector<int> rest;
            for (int other : eligible)
              if (other != c) rest.push_back(other);
            Protograph mother_est =
                complete_cheaply(candidate, old_idx, rest, stages - stage + 1);
            score = (1.0 - tradeoff_weight) * score + tradeoff_weight * threshold_fn(mother_est);
          }
          bool better = score < best_score - 1e-12;
          bool tie = std::abs(score - best_score) <= 1e-12;
          if (tie && c == best_check) {
            // lexicographically smaller pattern wins the tie
            better = std::lexicographical_compare(pattern.s01.begin(), pattern.s01.end(),
                                                  best_pattern.s01.begin(),
                                                  best_pattern.s01.end());
          } else if (tie) {
            better = c < best_check;
          }
          if (better) {
            best_score = score;
            best_check = c;
            best_pattern = pattern;
            best_graph = std::move(candidate);
          }
        }
      }
      if (best_check < 0) throw std::runtime_error("no admissible split found");
      current = std::move(best_graph);
      fam.members.push_back(current);
      fam.stage_log.push_back({stage, best_check, best_pattern, current.num_vars() - 1});
      eligible.erase(std::find(eligible.begin(), eligible.end(), best_check));
    }
  }
  fam.mother = current;
  return fam;
}

Protograph protograph_from_degrees(int m0, const std::vector<int>& degrees) {
  if (m0 < 1) throw std::invalid_argument("m0 must be >= 1");
  if (degrees.empty()) throw std::invalid_argument("empty degree vector");
  Protograph g;
  const int n = int(degrees.size());
  g.base.assign(m0, std::vector<int>(n, 0));
  for (int v = 0; v < n; ++v) {
    for (int c = 0; c < m0; ++c)
      g.base[c][v] = degrees[v] / m0 + (c < degrees[v] % m0 ? 1 : 0);
  }
  g.roles.assign(n, VarRole::Systematic);
  // one variable per check becomes a parity node; the convention is the
  // trailing minimum-degree block
  for (int c = 0; c < m0; ++c) g.roles[n - 1 - c] = VarRole::ParityOld;
  g.punctured.assign(n, 0);
  g.validate();
  return g;
}

namespace {

void enumerate_degree_vectors(int n, int max_deg, int min_deg,
                              std::vector<int>& prefix,
                              const std::function<void(const std::vector<int>&)>& emit) {
  if (int(prefix.size()) == n) {
    emit(prefix);
    return;
  }
  int hi = prefix.empty() ? max_deg : prefix.back();
  for (int d = hi; d >= min_deg; --d) {
    prefix.push_back(d);
    enumerate_degree_vectors(n, max_deg, min_deg, prefix, emit);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<RankedCandidate> search_starting_protographs_ranked(
    int m0, int n0, int d_v_max, int min_deg, const ThresholdFn& threshold_fn, int top_k,
    int threads) {
  if (n0 <= m0) throw std::invalid_argument("need more variables than checks");
  if (min_deg > d_v_max) throw std::invalid_argument("empty search space");
  std::vector<std::vector<int>> all;
  {
    std::vector<int> prefix;
    enumerate_degree_vectors(n0, d_v_max, min_deg, prefix,
                             [&](const std::vector<int>& v) { all.push_back(v); });
  }
  std::vector<double> scores(all.size());
  threads = std::max(1, threads);
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(64);
      if (i >= all.size()) return;
      size_t end = std::min(all.size(), i + 64);
      for (; i < end; ++i) scores[i] = threshold_fn(protograph_from_degrees(m0, all[i]));
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::vector<int> order(all.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = int(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] < scores[b]; });
  std::vector<RankedCandidate> out;
  for (int i = 0; i < int(order.size()) && i < top_k; ++i)
    out.push_back({all[order[i]], scores[order[i]]});
  return out;
}

Protograph search_starting_protograph(int m0, int n0, int d_v_max, int min_deg,
                                      const ThresholdFn& threshold_fn, int threads) {
  auto ranked = search_starting_protographs_ranked(m0, n0, d_v_max, min_deg, threshold_fn, 1,
                                                   threads);
  if (ranked.empty()) throw std::runtime_error("empty search space");
  return protograph_from_degrees(m0, ranked.front().degrees);
}

}  // namespace e2rc
