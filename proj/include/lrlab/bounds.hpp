#pragma once

#include "lrlab/dynamics.hpp"

namespace lrlab {

/// Right-hand-side evaluators for the Lieb-Robinson, correlation-decay and
/// LPPL bounds. Wherever a bound has a "there exists a constant C" slot, the
/// slot is filled with the exact tail-sum constant measured on the concrete
/// graph, so every inequality is parameter-free.

enum class BoundForm {
  FiniteRange,          // zero beyond the range
  ShortRangeComm,       // C_{b,b'} ||Psi|| min{|X|,|Y|} |t| F_{b',p}(dist)
  ShortRangeLoc,        //           ... |X| |t| F_{b',p}(r)
  LongRangeCommMinXY,   // C ||Psi|| min{|X|,|Y|} |t| F_{alpha-D}(dist)
  LongRangeCommXY,      // 4 ||Psi|| |X||Y| |t| F_alpha(dist)
  LongRangeLoc,         // C ||Psi|| |X| |t| F_{alpha-D}(r)
  CorCommDoubleSum,     // 4 ||Psi|| |t| double_sum(X, Y)
  CorLocDoubleSum,      // 4 ||Psi|| |t| double_sum(X, complement of X_r)
};

struct BoundSpec {
  BoundForm form = BoundForm::CorCommDoubleSum;
  DecayFn F;               // the profile the interaction norm is measured in
  double psi_norm = 0.0;   // ||Psi||_F
  double norm_A = 1.0;
  double norm_B = 1.0;
  double size_X = 1.0;
  double size_Y = 1.0;
  double t = 0.0;
  double r = 0.0;          // separation dist(X,Y) resp. localization radius
  double geometric = 0.0;  // exact double sum (Cor forms) or fitted constant C/4
  int range = 0;           // finite-range forms
  int D = 1;
  double b_prime = 0.0;    // reduced stretched-exp rate
};

inline double lrb_rhs(const BoundSpec& s) {
  double base = s.psi_norm * s.norm_A * std::abs(s.t);
  switch (s.form) {
    case BoundForm::FiniteRange:
      return s.r > s.range ? 0.0 : std::numeric_limits<double>::infinity();
    case BoundForm::ShortRangeComm:
      return 4.0 * s.geometric * base * s.norm_B * std::min(s.size_X, s.size_Y) *
             DecayFn::stretched_exp(s.b_prime, s.F.p).eval(s.r);
    case BoundForm::ShortRangeLoc:
      return 4.0 * s.geometric * base * s.size_X *
             DecayFn::stretched_exp(s.b_prime, s.F.p).eval(s.r);
    case BoundForm::LongRangeCommMinXY:
      return 4.0 * s.geometric * base * s.norm_B * std::min(s.size_X, s.size_Y) *
             DecayFn::power_law(s.F.alpha - s.D).eval(s.r);
    case BoundForm::LongRangeCommXY:
      return 4.0 * base * s.norm_B * s.size_X * s.size_Y * s.F.eval(s.r);
    case BoundForm::LongRangeLoc:
      return 4.0 * s.geometric * base * s.size_X *
             DecayFn::power_law(s.F.alpha - s.D).eval(s.r);
    case BoundForm::CorCommDoubleSum:
      return 4.0 * base * s.norm_B * s.geometric;
    case BoundForm::CorLocDoubleSum:
      return 4.0 * base * s.geometric;
  }
  return 0.0;
}

struct CorrSpec {
  bool long_range = true;
  DecayFn F;              // F_alpha resp. F_{b,p}
  double psi_norm = 0.0;  // measured in F
  double norm_A = 1.0, norm_B = 1.0;
  double size_X = 1.0, size_Y = 1.0;
  double rho0_trace_norm = 1.0;
  double gap = 0.0;
  double r = 0.0;
  double b_tilde = 0.0;   // short-range target rate, < b
  double c_bbp = 0.0;     // measured C_{b,(b+b~)/2} tail constant
};

/// Decay-of-correlations RHS. Long-range:
///   8 |A||B| |X||Y| ||rho0||_1 (sqrt(alpha/pi) ||Psi||/g + 1) ln(1+r) F_alpha(r).
/// Short-range:
///   |A||B| min{|X|,|Y|} ||rho0||_1 (C ||Psi||/g + 1) F_{b~,p}(r),
///   C = sqrt(b~ C_{b,(b+b~)/2} / (pi e (b - b~))).
inline double corr_rhs(const CorrSpec& s) {
  if (s.gap <= 0) throw std::invalid_argument("corr_rhs: gap must be positive");
  if (s.long_range) {
    double factor = std::sqrt(s.F.alpha / M_PI) * s.psi_norm / s.gap + 1.0;
    return 8.0 * s.norm_A * s.norm_B * s.size_X * s.size_Y * s.rho0_trace_norm * factor *
           std::log1p(s.r) * s.F.eval(s.r);
  }
  if (s.b_tilde <= 0 || s.b_tilde >= s.F.b)
    throw std::invalid_argument("corr_rhs: need 0 < b~ < b");
  double C = std::sqrt(s.b_tilde * s.c_bbp / (M_PI * M_E * (s.F.b - s.b_tilde)));
  double factor = C * s.psi_norm / s.gap + 1.0;
  return s.norm_A * s.norm_B * std::min(s.size_X, s.size_Y) * s.rho0_trace_norm * factor *
         DecayFn::stretched_exp(s.b_tilde, s.F.p).eval(s.r);
}

struct LpplSpec {
  bool long_range = true;
  DecayFn F;
  double psi_norm = 0.0;
  double norm_B = 1.0;
  double norm_V = 0.0;
  double size_X = 1.0, size_Y = 1.0;
  double gap = 0.0;
  double r = 0.0;
  double b_prime = 0.0;
  double c_bbp = 0.0;
};

/// LPPL RHS. Long-range:
///   32 ||Psi|| |B| (|V| + |V|^2) |X||Y| F_alpha(r) (g+2)/g^3.
/// Short-range: 8 C_{b,b'} ||Psi|| |B| (|V|+|V|^2) min{|X|,|Y|} F_{b',p}(r) (g+2)/g^3.
inline double lppl_rhs(const LpplSpec& s) {
  if (s.gap <= 0) throw std::invalid_argument("lppl_rhs: gap must be positive");
  double v = s.norm_V + s.norm_V * s.norm_V;
  double gap_factor = (s.gap + 2.0) / (s.gap * s.gap * s.gap);
  if (s.long_range)
    return 32.0 * s.psi_norm * s.norm_B * v * s.size_X * s.size_Y * s.F.eval(s.r) * gap_factor;
  return 8.0 * s.c_bbp * s.psi_norm * s.norm_B * v * std::min(s.size_X, s.size_Y) *
         DecayFn::stretched_exp(s.b_prime, s.F.p).eval(s.r) * gap_factor;
}

struct PhiIntCheck {
  double lhs = 0.0;  // ||Phi^int||_F
  double rhs = 0.0;  // (1+kappa)^2 R^{2D} ||Phi||_{F(.+2R)}
};

/// Both sides of the interaction-picture norm bound; callers assert lhs <= rhs.
inline PhiIntCheck phi_int_norm_check(const Interaction& psi, const Interaction& phi,
                                      const DecayFn& F, int R, double t) {
  PhiIntCheck out;
  if (phi.terms.empty()) return out;
  Interaction phi_int = interaction_picture(psi, phi, R, t);
  out.lhs = interaction_norm(phi_int, F);
  int D = psi.graph->dim_hint();
  double kappa = psi.graph->surface_regularity_constant(D);
  double c = std::pow(static_cast<double>(R == 0 ? 1 : R), 2.0 * D) * (1.0 + kappa) * (1.0 + kappa);
  if (R == 0) c = 1.0;  // Psi = 0: the transform is the identity re-keying
  out.rhs = c * interaction_norm(phi, F.with_shift(2.0 * R));
  return out;
}

}  // namespace lrlab
