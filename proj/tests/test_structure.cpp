#include <doctest.h>

#include <algorithm>
#include <set>

#include "e2rc/e2rc_structure.hpp"
#include "e2rc/protograph.hpp"
#include "fixtures.hpp"

using namespace e2rc;

TEST_CASE("h2 base rejects non powers of two") {
  CHECK_THROWS_AS(build_h2_base(0), std::invalid_argument);
  CHECK_THROWS_AS(build_h2_base(3), std::invalid_argument);
  CHECK_THROWS_AS(build_h2_base(6), std::invalid_argument);
  CHECK_THROWS_AS(build_h2_base(-4), std::invalid_argument);
}

TEST_CASE("h2 base m=1 is the single degree-1 node") {
  Protograph g = build_h2_base(1);
  CHECK(g.num_checks() == 1);
  CHECK(g.num_vars() == 1);
  CHECK(g.base[0][0] == 1);
  SRProfile p = sr_classify(g);
  CHECK(p.level[0] == 1);
}

TEST_CASE("h2 base column weights are 1 or 2 with a single weight-1 column") {
  for (int m : {2, 4, 8, 16, 32}) {
    CAPTURE(m);
    Protograph g = build_h2_base(m);
    int ones = 0;
    for (int v = 0; v < g.num_vars(); ++v) {
      int d = g.var_degree(v);
      CHECK(d >= 1);
      CHECK(d <= 2);
      ones += (d == 1);
    }
    CHECK(ones == 1);
    CHECK(g.var_degree(0) == 1);
  }
}

// Census expected from the construction induction: m/2 nodes recovered in
// round 1, m/4 in round 2, ..., m/2^t in round t, one residual node deeper.
TEST_CASE("h2 base SR census halves per level") {
  for (int t = 1; t <= 6; ++t) {
    const int m = 1 << t;
    CAPTURE(m);
    Protograph g = build_h2_base(m);
    SRProfile prof = sr_classify(g);
    CHECK(prof.complete());
    auto census = prof.census();
    for (int k = 1; k <= t; ++k) {
      CAPTURE(k);
      CHECK(census[k] == m >> k);
    }
    CHECK(census[t + 1] == 1);  // the original degree-1 node
    CHECK(prof.level[0] == t + 1);
    int classified = 0;
    for (auto& [lvl, cnt] : census) classified += cnt;
    CHECK(classified == m);
  }
}

TEST_CASE("h2 base m=8 census") {
  Protograph g = build_h2_base(8);
  auto census = sr_classify(g).census();
  CHECK(census[1] == 4);
  CHECK(census[2] == 2);
  CHECK(census[3] == 1);
  CHECK(census[4] == 1);
}

TEST_CASE("h2 base triangularizes by greedy peeling") {
  for (int m : {1, 2, 8, 32, 128}) {
    CAPTURE(m);
    Protograph g = build_h2_base(m);
    auto pivots = parity_peel_pivots(g);
    CHECK(int(pivots.size()) == m);
    std::set<int> used_checks, used_vars;
    for (auto& [c, v] : pivots) {
      used_checks.insert(c);
      used_vars.insert(v);
    }
    CHECK(int(used_checks.size()) == m);
    CHECK(int(used_vars.size()) == m);
  }
}

TEST_CASE("three-node recovery-depth gadget") {
  // chain: c0 sees a known systematic node and p0; c1 sees p0,p1; c2 sees p1,p2
  Protograph g;
  g.base = {{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  g.roles = {VarRole::Systematic, VarRole::ParityNew, VarRole::ParityNew, VarRole::ParityNew};
  g.punctured = {0, 0, 0, 0};
  SRProfile p = sr_classify(g);
  CHECK(p.level[1] == 1);
  CHECK(p.level[2] == 2);
  CHECK(p.level[3] == 3);
}

TEST_CASE("repeated edges block recovery") {
  Protograph g;
  g.base = {{1, 2}};
  g.roles = {VarRole::Systematic, VarRole::ParityNew};
  g.punctured = {0, 0};
  SRProfile p = sr_classify(g);
  CHECK(p.level[1] == SRProfile::kNever);
  CHECK(!p.complete());
  CHECK_THROWS_AS(puncture_order(p, g), std::runtime_error);
}

TEST_CASE("puncture order: ascending level, newest first inside a level") {
  Protograph g = build_h2_base(8);
  SRProfile prof = sr_classify(g);
  auto order = puncture_order(prof, g);
  CHECK(order == std::vector<int>{7, 6, 5, 4, 3, 2, 1, 0});

  // first four punctured nodes are exactly the 1-SR set
  std::set<int> level1;
  for (int v = 0; v < 8; ++v)
    if (prof.level[v] == 1) level1.insert(v);
  CHECK(std::set<int>(order.begin(), order.begin() + 4) == level1);

  // a permutation of all parity nodes
  auto sorted = order;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("puncture order m=1") {
  Protograph g = build_h2_base(1);
  CHECK(puncture_order(sr_classify(g), g) == std::vector<int>{0});
}

TEST_CASE("puncture masks per rate") {
  auto none = puncture_mask_for_rate(8, 8, 8.0 / 16.0);
  CHECK(std::count(none.begin(), none.end(), 1) == 0);

  auto half = puncture_mask_for_rate(8, 8, 8.0 / 12.0);
  CHECK(std::count(half.begin(), half.end(), 1) == 4);
  Protograph g = build_h2_base(8);
  SRProfile prof = sr_classify(g);
  for (int v = 0; v < 8; ++v) {
    CAPTURE(v);
    CHECK((half[v] == 1) == (prof.level[v] == 1));
  }

  auto deep = puncture_mask_for_rate(8, 8, 8.0 / 9.0);
  CHECK(std::count(deep.begin(), deep.end(), 1) == 7);
  CHECK(deep[0] == 0);  // only the deepest node stays

  CHECK_THROWS_AS(puncture_mask_for_rate(8, 8, 0.3), std::invalid_argument);
}

TEST_CASE("puncture masks are nested") {
  Protograph g = build_h2_base(16);
  auto order = puncture_order(sr_classify(g), g);
  for (int p = 0; p + 1 < 16; ++p) {
    auto a = mask_from_order(order, p, 16);
    auto b = mask_from_order(order, p + 1, 16);
    for (int v = 0; v < 16; ++v) {
      if (a[v]) CHECK(b[v]);
    }
  }
}

TEST_CASE("protograph text format round-trips") {
  Protograph g = build_h2_base(8);
  std::string text = to_text(g);
  Protograph back = protograph_from_text(text);
  CHECK(back == g);
  CHECK(to_text(back) == text);  // bit-exact

  Protograph p1 = fixtures::protograph_one();
  CHECK(to_text(p1) == fixtures::kProtographOneText);
}

TEST_CASE("role inference distinguishes old from new parity") {
  Protograph p1 = fixtures::protograph_one();
  CHECK(p1.roles[8] == VarRole::ParityOld);   // degree 3
  for (int v = 9; v < 16; ++v) CHECK(p1.roles[v] == VarRole::ParityNew);
  CHECK(p1.var_degree(0) == 20);
  CHECK(p1.var_degree(1) == 8);
}

TEST_CASE("published mother protograph peels with the expected census") {
  Protograph p1 = fixtures::protograph_one();
  SRProfile prof = sr_classify(p1);
  CHECK(prof.complete());
  auto census = prof.census();
  CHECK(census[1] == 4);
  CHECK(census[2] == 2);
  CHECK(census[3] == 1);
  auto order = puncture_order(prof, p1);
  CHECK(order == std::vector<int>{15, 14, 13, 12, 11, 10, 9});
}

TEST_CASE("protograph rates") {
  Protograph p1 = fixtures::protograph_one();
  CHECK(p1.design_rate() == doctest::Approx(0.5));
  CHECK(p1.transmitted_rate() == doctest::Approx(0.5));
  p1.punctured[15] = p1.punctured[14] = 1;
  CHECK(p1.transmitted_rate() == doctest::Approx(8.0 / 14.0));
}

TEST_CASE("protograph validation") {
  Protograph g;
  g.base = {{1, 0}, {1, 0}};
  g.roles = {VarRole::Systematic, VarRole::ParityNew};
  g.punctured = {0, 0};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);  // all-zero column
  g.base = {{1, 1}, {0, 0}};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);  // all-zero row
  g.base = {{1, -1}, {0, 1}};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);  // negative entry
  g.base = {{1, 1}, {0, 1}};
  CHECK_NOTHROW(g.validate());
  CHECK_THROWS_AS(protograph_from_text("2 2\n1 0\n0 1\ns s\n0 0\nextra"), std::invalid_argument);
  CHECK_THROWS_AS(protograph_from_text("banana"), std::invalid_argument);
}
