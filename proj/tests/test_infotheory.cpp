#include <doctest.h>

#include <cmath>
#include <random>

#include "e2rc/infotheory.hpp"
#include "oracles.hpp"

using namespace e2rc;

TEST_CASE("j_function endpoints") {
  CHECK(j_function(0.0) == 0.0);
  CHECK(j_function(50.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(j_function(-0.1), std::domain_error);
}

TEST_CASE("j_function matches the quadrature oracle") {
  for (double sigma : {0.05, 0.2, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0}) {
    CAPTURE(sigma);
    CHECK(std::abs(j_function(sigma) - oracle::mi_quadrature(sigma)) < 1e-7);
  }
}

TEST_CASE("j_function regression value at sigma = 2") {
  // frozen from oracle::mi_quadrature(2.0)
  const double expected = 0.485944154133;
  CHECK(std::abs(j_function(2.0) - expected) < 1e-7);
}

TEST_CASE("j_function monotone") {
  // strictly increasing while doubles can resolve the growth, nondecreasing beyond
  double prev = -1.0;
  for (int k = 0; k <= 1000; ++k) {
    double v = j_function(10.0 * k / 1000.0);
    CHECK(v > prev);
    prev = v;
  }
  for (int k = 0; k <= 400; ++k) {
    double v = j_function(10.0 + 30.0 * k / 400.0);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("j_inverse roundtrips and domain") {
  CHECK(j_inverse(0.0) == 0.0);
  CHECK(j_inverse(j_function(1.5)) == doctest::Approx(1.5).epsilon(1e-4));
  for (int k = 1; k < 100; ++k) {
    double i = k / 100.0;
    CHECK(std::abs(j_function(j_inverse(i)) - i) < 1e-6);
  }
  for (double sigma = 0.01; sigma <= 10.0; sigma += 0.0997) {
    CHECK(std::abs(j_inverse(j_function(sigma)) - sigma) < 1e-4);
  }
  CHECK_THROWS_AS(j_inverse(1.0), saturation_error);
  CHECK_THROWS_AS(j_inverse(-0.01), std::domain_error);
  CHECK_THROWS_AS(j_inverse(1.01), std::domain_error);
}

TEST_CASE("j_inverse of one half against oracle bisection") {
  const double sigma_star = oracle::mi_inverse_quadrature(0.5);
  CHECK(std::abs(j_inverse(0.5) - sigma_star) < 1e-5);
  const double frozen = 2.043539395708;  // oracle bisection fixture
  CHECK(std::abs(j_inverse(0.5) - frozen) < 1e-6);
}

TEST_CASE("biawgn capacity limits and oracle value") {
  CHECK(biawgn_capacity(ChannelParam(1e6)) == doctest::Approx(0.0).scale(1).epsilon(1e-3));
  CHECK(biawgn_capacity(ChannelParam(1e-6)) == doctest::Approx(1.0).epsilon(1e-6));
  const double sigma2 = 0.95775;
  CHECK(std::abs(biawgn_capacity(ChannelParam(sigma2)) -
                 oracle::biawgn_capacity_quadrature(sigma2)) < 1e-6);
  const double frozen = 0.500031599157;  // quadrature fixture
  CHECK(std::abs(biawgn_capacity(ChannelParam(sigma2)) - frozen) < 1e-6);
}

TEST_CASE("biawgn capacity strictly decreasing in noise") {
  double prev = 2.0;
  for (double s2 = 0.2; s2 < 4.0; s2 += 0.1) {
    double c = biawgn_capacity(ChannelParam(s2));
    CHECK(c < prev);
    prev = c;
  }
}

TEST_CASE("shannon noise roundtrips") {
  for (double r : {0.5, 8.0 / 14, 8.0 / 12, 8.0 / 10, 8.0 / 9}) {
    CAPTURE(r);
    CHECK(std::abs(biawgn_capacity(shannon_noise_for_rate(r)) - r) < 1e-6);
  }
  // better channels needed as the rate climbs
  CHECK(shannon_noise_for_rate(0.9).noise_variance < shannon_noise_for_rate(0.5).noise_variance);
  CHECK(shannon_noise_for_rate(0.999).noise_variance < 0.1);
  CHECK_THROWS_AS(shannon_noise_for_rate(0.0), std::domain_error);
  CHECK_THROWS_AS(shannon_noise_for_rate(1.0), std::domain_error);

  const double frozen_half = 0.957842189557;  // oracle bisection fixture
  CHECK(std::abs(shannon_noise_for_rate(0.5).noise_variance - frozen_half) < 1e-5);
}

TEST_CASE("ebn0 conversions") {
  CHECK(ebn0_db(ChannelParam(1.0), 0.5) == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  double a = ebn0_db(ChannelParam(0.7), 0.6);
  double b = ebn0_db(ChannelParam(1.4), 0.6);
  CHECK(a - b == doctest::Approx(10.0 * std::log10(2.0)));
  // a 3.27 dB channel at rate 8/9 sits about a quarter dB from the limit
  ChannelParam th = channel_at_ebn0_db(3.27, 8.0 / 9.0);
  CHECK(std::abs(gap_db(th, 8.0 / 9.0) - 0.24) < 0.10);
}

TEST_CASE("exit_variable corner cases") {
  DegreeDistribution d1 = DegreeDistribution::single(1);
  ChannelParam punct(1.0, true);
  for (double ia = 0.0; ia < 1.0; ia += 0.099)
    CHECK(exit_variable(d1, ia, punct) == doctest::Approx(0.0).scale(1).epsilon(1e-12));

  // zero a-priori: output depends only on the channel term
  DegreeDistribution lam({{2, 0.3}, {5, 0.7}});
  ChannelParam chan(0.8);
  CHECK(exit_variable(lam, 0.0, chan) ==
        doctest::Approx(j_function(std::sqrt(4.0 / 0.8))).epsilon(1e-12));
  CHECK(exit_variable(lam, 1.0, chan) == 1.0);
}

TEST_CASE("exit_variable reference distribution against per-degree oracle") {
  DegreeDistribution lam({{3, 0.4243}, {7, 0.5757}});
  ChannelParam chan = shannon_noise_for_rate(0.5);
  const double ia = 0.5;
  double r = oracle::mi_inverse_quadrature(ia);
  double expected = 0.4243 * oracle::mi_quadrature(std::sqrt(2.0 * r * r + chan.msg_variance())) +
                    0.5757 * oracle::mi_quadrature(std::sqrt(6.0 * r * r + chan.msg_variance()));
  CHECK(std::abs(exit_variable(lam, ia, chan) - expected) < 1e-6);
}

TEST_CASE("exit_check corner cases and identity") {
  DegreeDistribution rho({{6, 0.339623}, {7, 0.660377}});
  CHECK(exit_check(rho, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  DegreeDistribution d2 = DegreeDistribution::single(2);
  for (double ia = 0.0; ia <= 1.0; ia += 0.0403) {
    CAPTURE(ia);
    CHECK(std::abs(exit_check(d2, ia) - ia) <= 1e-9);
  }
}

TEST_CASE("exit_check reference distribution against per-degree oracle") {
  DegreeDistribution rho({{6, 0.339623}, {7, 0.660377}});
  const double ia = 0.9;
  double r = oracle::mi_inverse_quadrature(1.0 - ia);
  double expected = 1.0 - 0.339623 * oracle::mi_quadrature(std::sqrt(5.0) * r) -
                    0.660377 * oracle::mi_quadrature(std::sqrt(6.0) * r);
  CHECK(std::abs(exit_check(rho, ia) - expected) < 1e-6);
}

TEST_CASE("exit maps monotone in i_a for random distributions") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    double f = unif(rng);
    int d1 = 2 + int(unif(rng) * 6), d2 = d1 + 1 + int(unif(rng) * 12);
    DegreeDistribution dist({{d1, f}, {d2, 1.0 - f}});
    ChannelParam chan(0.3 + 2.0 * unif(rng));
    double pv = -1.0, pc = -1.0;
    for (int k = 0; k < 1000; ++k) {
      double ia = k / 1000.0;
      double v = exit_variable(dist, ia, chan);
      double c = exit_check(dist, ia);
      CHECK(v >= pv);
      CHECK(c >= pc - 1e-12);
      pv = v;
      pc = c;
    }
  }
}

TEST_CASE("degree distribution validation") {
  CHECK_THROWS_AS(DegreeDistribution({{2, 0.5}, {3, 0.6}}), std::invalid_argument);
  CHECK_THROWS_AS(DegreeDistribution({{0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(DegreeDistribution({{2, -0.1}, {3, 1.1}}), std::invalid_argument);
  CHECK_THROWS_AS(DegreeDistribution({{2, 0.5}, {2, 0.5}}), std::invalid_argument);
  DegreeDistribution ok({{2, 0.25}, {4, 0.75}});
  CHECK(ok.sum_inv_degree() == doctest::Approx(0.25 / 2 + 0.75 / 4));
  CHECK(ok.max_degree() == 4);
  CHECK(ok.fraction(2) == 0.25);
  CHECK(ok.fraction(3) == 0.0);
}

TEST_CASE("channel param invariants") {
  CHECK_THROWS_AS(ChannelParam(0.0), std::domain_error);
  CHECK_THROWS_AS(ChannelParam(-1.0), std::domain_error);
  CHECK(ChannelParam(2.0).msg_variance() == doctest::Approx(2.0));
  CHECK(ChannelParam(2.0, true).msg_variance() == 0.0);
}
