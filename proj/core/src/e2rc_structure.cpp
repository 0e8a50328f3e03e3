#include "e2rc/e2rc_structure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace e2rc {

std::map<int, int> SRProfile::census() const {
  std::map<int, int> out;
  for (int l : level)
    if (l >= 1 && l != kNever) ++out[l];
  return out;
}

bool SRProfile::complete() const {
  return std::none_of(level.begin(), level.end(), [](int l) { return l == kNever; });
}

Protograph build_h2_base(int m) {
  if (m < 1 || (m & (m - 1)) != 0)
    throw std::invalid_argument("build_h2_base: m must be a power of two");
  Protograph g;
  g.base = {{1}};
  g.roles = {VarRole::ParityNew};
  g.punctured = {0};
  while (g.num_checks() < m) {
    const int stage_checks = g.num_checks();
    for (int c = 0; c < stage_checks; ++c) {
      // inheritor keeps row c as is; the sibling starts empty
      const int nv = g.num_vars();
      for (auto& row : g.base) row.push_back(0);
      g.base.emplace_back(nv + 1, 0);
      g.base[c][nv] = 1;              // inheritor joins the fresh variable
      g.base.back()[nv] = 1;          // sibling's only connection so far
      g.roles.push_back(VarRole::ParityNew);
      g.punctured.push_back(0);
    }
  }
  return g;
}

SRProfile sr_classify(const Protograph& g) {
  g.validate();
  const int m = g.num_checks(), n = g.num_vars();
  SRProfile profile;
  profile.level.assign(n, 0);
  int unresolved = 0;
  for (int v = 0; v < n; ++v) {
    if (g.roles[v] == VarRole::ParityNew) {
      profile.level[v] = SRProfile::kNever;
      ++unresolved;
    }
  }
  if (unresolved == 0) throw std::invalid_argument("sr_classify: no parity-new variables");
  for (int round = 1; unresolved > 0; ++round) {
    std::vector<int> newly;
    for (int c = 0; c < m; ++c) {
      int candidate = -1, open = 0;
      for (int v = 0; v < n && open <= 1; ++v) {
        if (g.base[c][v] == 0) continue;
        if (profile.level[v] == SRProfile::kNever) {
          ++open;
          // a repeated edge never isolates the variable in the lifted graph
          candidate = (g.base[c][v] == 1) ? v : -1;
        }
      }
      if (open == 1 && candidate >= 0) newly.push_back(candidate);
    }
    if (newly.empty()) break;  // fixpoint: the rest stay unrecoverable
    for (int v : newly) {
      if (profile.level[v] == SRProfile::kNever) {
        profile.level[v] = round;
        --unresolved;
      }
    }
  }
  return profile;
}

std::vector<int> puncture_order(const SRProfile& profile, const Protograph& g) {
  std::vector<int> vars = g.parity_new_vars();
  for (int v : vars)
    if (profile.level[v] == SRProfile::kNever)
      throw std::runtime_error("puncture_order: structure has unrecoverable parity nodes");
  std::sort(vars.begin(), vars.end(), [&](int a, int b) {
    if (profile.level[a] != profile.level[b]) return profile.level[a] < profile.level[b];
    return a > b;  // newest construction-stage nodes first
  });
  return vars;
}

std::vector<uint8_t> puncture_mask_for_rate(int m, int k_sys, double target_rate) {
  int p = -1;
  for (int cand = 0; cand < m; ++cand) {
    double r = double(k_sys) / double(k_sys + m - cand);
    if (std::abs(r - target_rate) < 1e-9) {
      p = cand;
      break;
    }
  }
  if (p < 0) {
    std::ostringstream os;
    os << "unachievable rate " << target_rate << "; achievable:";
    for (int cand = 0; cand < m; ++cand)
      os << ' ' << k_sys << '/' << (k_sys + m - cand);
    throw std::invalid_argument(os.str());
  }
  Protograph g = build_h2_base(m);
  auto order = puncture_order(sr_classify(g), g);
  return mask_from_order(order, p, g.num_vars());
}

std::vector<uint8_t> mask_from_order(const std::vector<int>& order, int count, int num_vars) {
  if (count < 0 || count > int(order.size()))
    throw std::invalid_argument("mask_from_order: count out of range");
  std::vector<uint8_t> mask(num_vars, 0);
  for (int i = 0; i < count; ++i) mask[order[i]] = 1;
  return mask;
}

std::vector<std::pair<int, int>> parity_peel_pivots(const Protograph& g) {
  const int m = g.num_checks(), n = g.num_vars();
  std::vector<uint8_t> open(n, 0), check_used(m, 0);
  int remaining = 0;
  for (int v = 0; v < n; ++v) {
    if (g.roles[v] != VarRole::Systematic) {
      open[v] = 1;
      ++remaining;
    }
  }
  std::vector<std::pair<int, int>> pivots;
  bool progress = true;
  while (remaining > 0 && progress) {
    progress = false;
    for (int c = 0; c < m; ++c) {
      if (check_used[c]) continue;
      int candidate = -1, cnt = 0;
      for (int v = 0; v < n && cnt <= 1; ++v) {
        if (g.base[c][v] != 0 && open[v]) {
          ++cnt;
          candidate = (g.base[c][v] == 1) ? v : -1;
        }
      }
      if (cnt == 1 && candidate >= 0) {
        pivots.emplace_back(c, candidate);
        check_used[c] = 1;
        open[candidate] = 0;
        --remaining;
        progress = true;
      }
    }
  }
  if (remaining > 0) return {};
  return pivots;
}

}  // namespace e2rc
