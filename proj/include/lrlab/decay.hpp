#pragma once

#include <cmath>
#include <stdexcept>

#include "lrlab/lattice.hpp"

namespace lrlab {

/// Kahan compensated accumulator; the inequality checks downstream are run at
/// 1e-12 slack, so plain summation over ~1e6 terms is not good enough.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

enum class DecayKind { PowerLaw, StretchedExp, FiniteRange };

/// Decay profile F(r). The shift parameter realizes F(. + 2R) profiles.
struct DecayFn {
  DecayKind kind = DecayKind::PowerLaw;
  double alpha = 1.0;  // power-law exponent
  double b = 1.0;      // stretched-exp rate
  double p = 1.0;      // stretched-exp power, in (0,1]
  int R = 0;           // finite range
  double shift = 0.0;

  static DecayFn power_law(double alpha, double shift = 0.0) {
    if (alpha <= 0) throw std::invalid_argument("DecayFn: alpha > 0 required");
    DecayFn f;
    f.kind = DecayKind::PowerLaw;
    f.alpha = alpha;
    f.shift = shift;
    return f;
  }

  static DecayFn stretched_exp(double b, double p, double shift = 0.0) {
    if (b <= 0) throw std::invalid_argument("DecayFn: b > 0 required");
    if (p <= 0 || p > 1) throw std::invalid_argument("DecayFn: p in (0,1] required");
    DecayFn f;
    f.kind = DecayKind::StretchedExp;
    f.b = b;
    f.p = p;
    f.shift = shift;
    return f;
  }

  static DecayFn finite_range(int R, double shift = 0.0) {
    if (R < 0) throw std::invalid_argument("DecayFn: R >= 0 required");
    DecayFn f;
    f.kind = DecayKind::FiniteRange;
    f.R = R;
    f.shift = shift;
    return f;
  }

  double eval(double r) const {
    if (r < 0) throw std::invalid_argument("DecayFn::eval: r >= 0 required");
    double s = r + shift;
    switch (kind) {
      case DecayKind::PowerLaw:
        return std::pow(1.0 + s, -alpha);
      case DecayKind::StretchedExp:
        return std::exp(-b * std::pow(s, p));
      case DecayKind::FiniteRange:
        // Support indicator; never valid as a norm denominator.
        return s <= static_cast<double>(R) ? 1.0 : 0.0;
    }
    return 0.0;
  }

  DecayFn with_shift(double extra) const {
    DecayFn f = *this;
    f.shift += extra;
    return f;
  }
};

inline double eval_decay(const DecayFn& F, double r) { return F.eval(r); }

/// Sum_{x in X} Sum_{y in Y} F(d(x,y)), exact on the finite graph.
inline double double_sum(const SiteGraph& g, const DecayFn& F, const SiteSet& X,
                         const SiteSet& Y) {
  if (X.empty() || Y.empty()) throw std::invalid_argument("double_sum: empty site set");
  KahanSum acc;
  for (int x : X)
    for (int y : Y) acc.add(F.eval(g.dist(x, y)));
  return acc.value();
}

/// sup_x Sum_{y : d(x,y) >= R} F(d(x,y)) on the finite graph.
inline double tail_sum_sup(const SiteGraph& g, const DecayFn& F, int R) {
  if (R < 0) throw std::invalid_argument("tail_sum_sup: R >= 0 required");
  double best = 0.0;
  for (int x = 0; x < g.size(); ++x) {
    KahanSum acc;
    for (int y = 0; y < g.size(); ++y) {
      int d = g.dist(x, y);
      if (d >= R) acc.add(F.eval(d));
    }
    best = std::max(best, acc.value());
  }
  return best;
}

/// Measured constant C/4 in tail_sum_sup(F_alpha, R) <= (C/4) F_{alpha-D}(R):
/// the ratio maximized over all radii realized on the graph. The analogous
/// ratio against F_{b',p} covers the stretched-exponential profiles.
inline double fitted_tail_constant(const SiteGraph& g, const DecayFn& F,
                                   const DecayFn& F_reduced) {
  double best = 0.0;
  for (int R = 0; R <= g.diameter(); ++R) {
    double denom = F_reduced.eval(R);
    if (denom <= 0) throw std::invalid_argument("fitted_tail_constant: zero denominator");
    best = std::max(best, tail_sum_sup(g, F, R) / denom);
  }
  return best;
}

}  // namespace lrlab
