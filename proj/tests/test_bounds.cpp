#include <catch_amalgamated.hpp>

#include "lrlab/bounds.hpp"

using namespace lrlab;

TEST_CASE("commutator bound forms") {
  BoundSpec s;
  s.form = BoundForm::CorCommDoubleSum;
  s.psi_norm = 1.0;
  s.t = 0.0;
  s.geometric = 0.2;
  REQUIRE(lrb_rhs(s) == 0.0);

  // chain L=8, X={0}, Y={4}, F_1: 4 * 0.2
  s.t = 1.0;
  REQUIRE(lrb_rhs(s) == Catch::Approx(0.8).epsilon(1e-15));

  BoundSpec xy;
  xy.form = BoundForm::LongRangeCommXY;
  xy.F = DecayFn::power_law(2);
  xy.psi_norm = 1.0;
  xy.size_X = 1.0;
  xy.size_Y = 1.0;
  xy.t = 1.0;
  xy.r = 3.0;
  REQUIRE(lrb_rhs(xy) == Catch::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("bound values are non-negative and linear in t") {
  for (BoundForm form : {BoundForm::ShortRangeComm, BoundForm::ShortRangeLoc,
                         BoundForm::LongRangeCommMinXY, BoundForm::LongRangeCommXY,
                         BoundForm::LongRangeLoc, BoundForm::CorCommDoubleSum,
                         BoundForm::CorLocDoubleSum}) {
    BoundSpec s;
    s.form = form;
    s.F = form == BoundForm::ShortRangeComm || form == BoundForm::ShortRangeLoc
              ? DecayFn::stretched_exp(1, 0.5)
              : DecayFn::power_law(3);
    s.psi_norm = 1.3;
    s.size_X = 2;
    s.size_Y = 3;
    s.r = 2.0;
    s.D = 1;
    s.geometric = 0.7;
    s.b_prime = 0.5;
    s.t = 1.0;
    double v1 = lrb_rhs(s);
    REQUIRE(v1 >= 0.0);
    s.t = 2.0;
    REQUIRE(lrb_rhs(s) == Catch::Approx(2.0 * v1).epsilon(1e-14));
    s.t = -2.0;
    REQUIRE(lrb_rhs(s) == Catch::Approx(2.0 * v1).epsilon(1e-14));
  }
}

TEST_CASE("exact double sum never exceeds the coarse product form") {
  SiteGraph g = build_graph({GraphKind::Box, 2, 4, 2});
  DecayFn F = DecayFn::power_law(2);
  SiteSet X = {0, 1}, Y = {11, 14, 15};
  BoundSpec fine;
  fine.form = BoundForm::CorCommDoubleSum;
  fine.psi_norm = 1.0;
  fine.t = 1.0;
  fine.geometric = double_sum(g, F, X, Y);
  BoundSpec coarse;
  coarse.form = BoundForm::LongRangeCommXY;
  coarse.F = F;
  coarse.psi_norm = 1.0;
  coarse.t = 1.0;
  coarse.size_X = X.size();
  coarse.size_Y = Y.size();
  coarse.r = g.set_distance(X, Y);
  REQUIRE(lrb_rhs(fine) <= lrb_rhs(coarse) + 1e-14);
}

namespace {
// independently coded copy of the long-range correlation bound (guards the
// constants 8, sqrt(alpha/pi), ln(1+r))
double corr_rhs_reference(double a, double b, double x, double y, double rho, double alpha,
                          double psi, double g, double r) {
  double inner = std::sqrt(alpha / 3.14159265358979323846) * psi / g + 1.0;
  return 8.0 * a * b * x * y * rho * inner * std::log(1.0 + r) * std::pow(1.0 + r, -alpha);
}
}  // namespace

TEST_CASE("correlation decay bound") {
  CorrSpec s;
  s.long_range = true;
  s.F = DecayFn::power_law(1);
  s.psi_norm = 1.0;
  s.gap = 1.0;
  s.r = 0.0;
  REQUIRE(corr_rhs(s) == 0.0);  // ln(1) = 0

  s.r = 4.0;
  double want = 8.0 * (1.0 / std::sqrt(M_PI) + 1.0) * std::log(5.0) / 5.0;
  REQUIRE(corr_rhs(s) == Catch::Approx(want).epsilon(1e-14));
  REQUIRE(corr_rhs(s) == Catch::Approx(4.028).epsilon(1e-3));
  REQUIRE(corr_rhs(s) ==
          Catch::Approx(corr_rhs_reference(1, 1, 1, 1, 1, 1, 1, 1, 4)).epsilon(1e-14));

  // g -> infinity limit
  s.gap = 1e12;
  REQUIRE(corr_rhs(s) == Catch::Approx(8.0 * std::log(5.0) / 5.0).epsilon(1e-10));

  s.gap = -1;
  REQUIRE_THROWS_AS(corr_rhs(s), std::invalid_argument);
}

TEST_CASE("correlation decay short-range form") {
  CorrSpec s;
  s.long_range = false;
  s.F = DecayFn::stretched_exp(1.0, 0.5);
  s.psi_norm = 2.0;
  s.gap = 1.5;
  s.r = 4.0;
  s.b_tilde = 0.5;
  s.c_bbp = 3.0;
  double C = std::sqrt(0.5 * 3.0 / (M_PI * M_E * 0.5));
  double want = (C * 2.0 / 1.5 + 1.0) * std::exp(-0.5 * std::sqrt(4.0));
  REQUIRE(corr_rhs(s) == Catch::Approx(want).epsilon(1e-14));

  s.b_tilde = 1.5;  // must stay below b
  REQUIRE_THROWS_AS(corr_rhs(s), std::invalid_argument);
}

TEST_CASE("lppl bound") {
  LpplSpec s;
  s.long_range = true;
  s.F = DecayFn::power_law(1);
  s.psi_norm = 1.0;
  s.norm_V = 0.0;
  s.gap = 1.0;
  s.r = 4.0;
  REQUIRE(lppl_rhs(s) == 0.0);

  s.norm_V = 1.0;
  REQUIRE(lppl_rhs(s) == Catch::Approx(38.4).epsilon(1e-14));  // 32*2*(1/5)*3

  double at1 = lppl_rhs(s);
  s.gap = 2.0;
  REQUIRE(lppl_rhs(s) < at1);  // (g+2)/g^3 decreasing
  s.gap = 0.0;
  REQUIRE_THROWS_AS(lppl_rhs(s), std::invalid_argument);
}

TEST_CASE("interaction picture norm bound") {
  SiteGraph chain = build_graph({GraphKind::Chain, 1, 8, 2});
  Interaction psi;
  psi.graph = &chain;
  for (int x = 0; x + 1 < 8; ++x) psi.terms.push_back(zz_term(x, x + 1, 1.0));
  DecayFn F = DecayFn::power_law(2);

  Interaction phi0;
  phi0.graph = &chain;
  PhiIntCheck zero = phi_int_norm_check(psi, phi0, F, 1, 1.0);
  REQUIRE(zero.lhs == 0.0);
  REQUIRE(zero.rhs == 0.0);

  Interaction phi = transverse_field(chain, 1.0);
  PhiIntCheck chk = phi_int_norm_check(psi, phi, F, 1, 1.0);
  REQUIRE(chk.lhs > 0.0);
  REQUIRE(chk.lhs <= chk.rhs + 1e-12);

  Interaction nopsi;
  nopsi.graph = &chain;
  PhiIntCheck trivial = phi_int_norm_check(nopsi, phi, F, 0, 1.0);
  REQUIRE(trivial.lhs <= trivial.rhs + 1e-12);
}
