#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "e2rc/lifted_code.hpp"

namespace e2rc {

std::string to_alist(const LiftedCode& code) {
  const int n = code.n(), m = code.m();
  size_t max_col = 0, max_row = 0;
  for (auto& c : code.col_rows) max_col = std::max(max_col, c.size());
  for (auto& r : code.row_cols) max_row = std::max(max_row, r.size());

  std::string out;
  out.reserve(size_t(n) * 16);
  auto append_line = [&](const std::vector<int>& xs) {
    for (size_t i = 0; i < xs.size(); ++i) {
      out += std::to_string(xs[i]);
      out += (i + 1 < xs.size()) ? ' ' : '\n';
    }
    if (xs.empty()) out += '\n';
  };
  out += std::to_string(n) + " " + std::to_string(m) + "\n";
  out += std::to_string(max_col) + " " + std::to_string(max_row) + "\n";
  {
    std::vector<int> w(n);
    for (int i = 0; i < n; ++i) w[i] = int(code.col_rows[i].size());
    append_line(w);
    w.assign(m, 0);
    for (int i = 0; i < m; ++i) w[i] = int(code.row_cols[i].size());
    append_line(w);
  }
  for (int i = 0; i < n; ++i) {
    std::vector<int> ids(code.col_rows[i]);
    std::sort(ids.begin(), ids.end());
    for (int& x : ids) ++x;       // alist indices are 1-based
    ids.resize(max_col, 0);       // zero padding for irregular codes
    append_line(ids);
  }
  for (int i = 0; i < m; ++i) {
    std::vector<int> ids(code.row_cols[i]);
    std::sort(ids.begin(), ids.end());
    for (int& x : ids) ++x;
    ids.resize(max_row, 0);
    append_line(ids);
  }
  return out;
}

void save_alist(const LiftedCode& code, const std::string& path) {
  std::string text = to_alist(code);
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

AlistMatrix alist_from_text(const std::string& text) {
  std::vector<long> nums;
  nums.reserve(text.size() / 2);
  {
    const char* p = text.c_str();
    char* end = nullptr;
    for (;;) {
      long v = std::strtol(p, &end, 10);
      if (end == p) break;
      nums.push_back(v);
      p = end;
    }
  }
  size_t at = 0;
  auto next = [&]() {
    if (at >= nums.size()) throw std::invalid_argument("truncated alist");
    return nums[at++];
  };
  AlistMatrix a;
  a.n = int(next());
  a.m = int(next());
  if (a.n <= 0 || a.m <= 0) throw std::invalid_argument("bad alist dimensions");
  long max_col = next(), max_row = next();
  std::vector<int> colw(a.n), roww(a.m);
  for (int i = 0; i < a.n; ++i) colw[i] = int(next());
  for (int i = 0; i < a.m; ++i) roww[i] = int(next());
  a.col_rows.resize(a.n);
  a.row_cols.resize(a.m);
  for (int i = 0; i < a.n; ++i) {
    for (long j = 0; j < max_col; ++j) {
      long v = next();
      if (v != 0) a.col_rows[i].push_back(int(v - 1));
    }
    if (int(a.col_rows[i].size()) != colw[i])
      throw std::invalid_argument("alist column weight mismatch");
  }
  for (int i = 0; i < a.m; ++i) {
    for (long j = 0; j < max_row; ++j) {
      long v = next();
      if (v != 0) a.row_cols[i].push_back(int(v - 1));
    }
    if (int(a.row_cols[i].size()) != roww[i])
      throw std::invalid_argument("alist row weight mismatch");
  }
  return a;
}

AlistMatrix load_alist(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "r");
  if (!f) throw std::runtime_error("cannot open alist file: " + path);
  std::string text;
  char buf[65536];
  size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, got);
  std::fclose(f);
  return alist_from_text(text);
}

}  // namespace e2rc
