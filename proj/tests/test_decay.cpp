#include <catch_amalgamated.hpp>

#include "lrlab/decay.hpp"
#include "lrlab/lattice.hpp"

using namespace lrlab;

TEST_CASE("decay profile values") {
  REQUIRE(DecayFn::power_law(2).eval(3) == Catch::Approx(1.0 / 16).epsilon(1e-15));
  REQUIRE(DecayFn::stretched_exp(1, 1).eval(0) == 1.0);
  REQUIRE(DecayFn::power_law(1, 2.0).eval(1) == Catch::Approx(0.25).epsilon(1e-15));
  REQUIRE(DecayFn::finite_range(2).eval(2) == 1.0);
  REQUIRE(DecayFn::finite_range(2).eval(3) == 0.0);
  REQUIRE_THROWS_AS(DecayFn::power_law(2).eval(-1), std::invalid_argument);
  REQUIRE_THROWS_AS(DecayFn::power_law(0), std::invalid_argument);
  REQUIRE_THROWS_AS(DecayFn::stretched_exp(1, 1.5), std::invalid_argument);
}

TEST_CASE("profiles are positive and non-increasing") {
  for (const DecayFn& F : {DecayFn::power_law(0.5), DecayFn::power_law(3),
                           DecayFn::stretched_exp(1, 0.5), DecayFn::stretched_exp(2, 1)}) {
    double prev = F.eval(0);
    REQUIRE(prev > 0);
    for (int r = 1; r <= 40; ++r) {
      double cur = F.eval(r);
      REQUIRE(cur > 0);
      REQUIRE(cur <= prev);
      prev = cur;
    }
  }
}

TEST_CASE("shift realizes translated profiles") {
  DecayFn F = DecayFn::power_law(2);
  DecayFn Fs = F.with_shift(4.0);
  for (int r = 0; r <= 10; ++r) REQUIRE(Fs.eval(r) == Catch::Approx(F.eval(r + 4)).epsilon(1e-15));
}

TEST_CASE("double sums") {
  SiteGraph chain = build_graph({GraphKind::Chain, 1, 8, 2});
  DecayFn F1 = DecayFn::power_law(1);
  REQUIRE(double_sum(chain, F1, {0}, {4}) == Catch::Approx(0.2).epsilon(1e-15));
  double four = 1.0 / 6 + 1.0 / 7 + 1.0 / 5 + 1.0 / 6;
  REQUIRE(double_sum(chain, F1, {0, 1}, {5, 6}) == Catch::Approx(four).epsilon(1e-14));
  REQUIRE(double_sum(chain, DecayFn::finite_range(1), {0}, {4, 5}) == 0.0);
  REQUIRE_THROWS_AS(double_sum(chain, F1, {}, {1}), std::invalid_argument);

  // symmetry and the crude |X||Y| F(dist) cap
  SiteSet X = {0, 2}, Y = {5, 6, 7};
  for (const DecayFn& F : {F1, DecayFn::stretched_exp(1, 0.5)}) {
    REQUIRE(double_sum(chain, F, X, Y) == Catch::Approx(double_sum(chain, F, Y, X)));
    REQUIRE(double_sum(chain, F, X, Y) <=
            X.size() * Y.size() * F.eval(chain.set_distance(X, Y)) + 1e-15);
  }
}

TEST_CASE("tail sums") {
  SiteGraph chain = build_graph({GraphKind::Chain, 1, 16, 2});
  DecayFn F2 = DecayFn::power_law(2);
  double tail = tail_sum_sup(chain, F2, 2);
  // independent oracle at the worst-case center
  double best = 0.0;
  for (int x = 0; x < 16; ++x) {
    double s = 0.0;
    for (int y = 0; y < 16; ++y) {
      int d = std::abs(x - y);
      if (d >= 2) s += std::pow(1.0 + d, -2.0);
    }
    best = std::max(best, s);
  }
  REQUIRE(tail == Catch::Approx(best).epsilon(1e-14));
  REQUIRE(tail < 2.0 * (M_PI * M_PI / 6.0 - 1.25));

  REQUIRE(tail_sum_sup(chain, F2, chain.diameter() + 1) == 0.0);
  REQUIRE(tail_sum_sup(chain, DecayFn::finite_range(1), 2) == 0.0);
}

TEST_CASE("double sum against the tail-sum intermediate bound") {
  SiteGraph box = build_graph({GraphKind::Box, 2, 4, 2});
  DecayFn F = DecayFn::power_law(3);
  SiteSet X = {0, 1}, Y = {10, 11, 14, 15};
  double lhs = double_sum(box, F, X, Y);
  double rhs = std::min(X.size(), Y.size()) * tail_sum_sup(box, F, box.set_distance(X, Y));
  REQUIRE(lhs <= rhs + 1e-15);
}

TEST_CASE("fitted tail constant dominates every radius") {
  SiteGraph box = build_graph({GraphKind::Box, 2, 5, 2});
  DecayFn F = DecayFn::power_law(3);
  DecayFn Fr = DecayFn::power_law(1);
  double c4 = fitted_tail_constant(box, F, Fr);
  REQUIRE(c4 > 0);
  for (int R = 0; R <= box.diameter(); ++R)
    REQUIRE(tail_sum_sup(box, F, R) <= c4 * Fr.eval(R) + 1e-14);
}

TEST_CASE("compensated summation survives adversarial ordering") {
  KahanSum acc;
  acc.add(1.0);
  for (int i = 0; i < 1000000; ++i) acc.add(1e-16);
  REQUIRE(acc.value() == Catch::Approx(1.0 + 1e-10).epsilon(1e-12));
}
