#include "e2rc/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace e2rc {

namespace {

// Tableau with Bland-flavored pivoting. Columns: [structural | surplus |
// artificial | rhs]; the objective lives in the last row.
class Tableau {
 public:
  Tableau(int rows, int cols) : n_rows_(rows), n_cols_(cols), a_(size_t(rows) * cols, 0.0) {}

  double& at(int r, int c) { return a_[size_t(r) * n_cols_ + c]; }
  double at(int r, int c) const { return a_[size_t(r) * n_cols_ + c]; }

  // one pivot; returns false at optimality
  bool step(const std::vector<bool>& allowed, std::vector<int>& basis) {
    const int obj = n_rows_ - 1;
    int col = -1;
    for (int j = 0; j + 1 < n_cols_; ++j) {  // Bland: first improving column
      if (allowed[j] && at(obj, j) > 1e-11) {
        col = j;
        break;
      }
    }
    if (col < 0) return false;
    int row = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < n_rows_; ++i) {
      double a = at(i, col);
      if (a > 1e-11) {
        double ratio = at(i, n_cols_ - 1) / a;
        int tie = row >= 0 ? basis[i] < basis[row] : true;
        if (ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && tie)) {
          best = ratio;
          row = i;
        }
      }
    }
    if (row < 0) throw std::runtime_error("simplex: unbounded problem");
    pivot(row, col);
    basis[row] = col;
    return true;
  }

  void pivot(int row, int col) {
    double p = at(row, col);
    for (int j = 0; j < n_cols_; ++j) at(row, j) /= p;
    for (int i = 0; i < n_rows_; ++i) {
      if (i == row) continue;
      double f = at(i, col);
      if (f == 0.0) continue;
      for (int j = 0; j < n_cols_; ++j) at(i, j) -= f * at(row, j);
    }
  }

 private:
  int n_rows_, n_cols_;
  std::vector<double> a_;
};

}  // namespace

LpResult solve_simplex(const LpProblem& lp) {
  const int n = int(lp.objective.size());
  const int m = int(lp.rows.size());
  if (int(lp.rhs.size()) != m) throw std::invalid_argument("rhs size mismatch");
  for (auto& r : lp.rows)
    if (int(r.size()) != n) throw std::invalid_argument("row size mismatch");

  // m inequality rows (>=, with surplus) plus the sum(x) = 1 equality
  const int n_con = m + 1;
  const int n_surplus = m;
  std::vector<int> art_for(n_con, -1);
  int n_art = 0;
  for (int i = 0; i < m; ++i)
    if (lp.rhs[i] > 0.0) art_for[i] = n_art++;
  art_for[m] = n_art++;

  const int cols = n + n_surplus + n_art + 1;
  const int rows = n_con + 1;
  Tableau t(rows, cols);
  std::vector<int> basis(n_con, -1);

  for (int i = 0; i < m; ++i) {
    double sign = lp.rhs[i] > 0.0 ? 1.0 : -1.0;  // keep rhs nonnegative
    for (int j = 0; j < n; ++j) t.at(i, j) = sign * lp.rows[i][j];
    t.at(i, n + i) = -sign;  // surplus
    t.at(i, cols - 1) = sign * lp.rhs[i];
    if (art_for[i] >= 0) {
      t.at(i, n + n_surplus + art_for[i]) = 1.0;
      basis[i] = n + n_surplus + art_for[i];
    } else {
      basis[i] = n + i;  // flipped surplus is basic when rhs <= 0
    }
  }
  for (int j = 0; j < n; ++j) t.at(m, j) = 1.0;
  t.at(m, cols - 1) = 1.0;
  t.at(m, n + n_surplus + art_for[m]) = 1.0;
  basis[m] = n + n_surplus + art_for[m];

  std::vector<bool> allowed(cols - 1, true);
  const int obj = rows - 1;

  // phase 1: drive the artificials to zero. The objective row carries the
  // reduced costs of maximize(-sum of artificials); its rhs equals the
  // remaining artificial mass.
  for (int i = 0; i < n_con; ++i) {
    if (basis[i] >= n + n_surplus)
      for (int j = 0; j < cols; ++j) t.at(obj, j) += t.at(i, j);
  }
  for (int j = n + n_surplus; j < cols - 1; ++j) t.at(obj, j) = 0.0;
  while (t.step(allowed, basis)) {
  }
  if (t.at(obj, cols - 1) > 1e-8) throw infeasible_error("no feasible distribution");
  for (int i = 0; i < n_con; ++i) {
    if (basis[i] >= n + n_surplus) {  // degenerate artificial: pivot it out
      for (int j = 0; j < n + n_surplus; ++j) {
        if (std::abs(t.at(i, j)) > 1e-9) {
          t.pivot(i, j);
          basis[i] = j;
          break;
        }
      }
    }
  }

  // phase 2: the real objective over structural and surplus columns
  for (int j = 0; j < cols; ++j) t.at(obj, j) = 0.0;
  for (int j = 0; j < n; ++j) t.at(obj, j) = lp.objective[j];
  for (int i = 0; i < n_con; ++i) {
    if (basis[i] < cols - 1) {
      double f = t.at(obj, basis[i]);
      if (f != 0.0)
        for (int j = 0; j < cols; ++j) t.at(obj, j) -= f * t.at(i, j);
    }
  }
  for (int j = n + n_surplus; j + 1 < cols; ++j) allowed[j] = false;
  while (t.step(allowed, basis)) {
  }

  LpResult res;
  res.x.assign(n, 0.0);
  for (int i = 0; i < n_con; ++i)
    if (basis[i] < n) res.x[basis[i]] = std::max(0.0, t.at(i, cols - 1));
  res.objective = 0.0;
  for (int j = 0; j < n; ++j) res.objective += lp.objective[j] * res.x[j];
  return res;
}

}  // namespace e2rc
