#pragma once

#include "lrlab/bounds.hpp"
#include "lrlab/random_models.hpp"
#include "lrlab/report.hpp"
#include "lrlab/spectra.hpp"

namespace lrlab {

/// First site at graph distance exactly r from x, or -1.
inline int site_at_distance(const SiteGraph& g, int x, int r) {
  for (int y = 0; y < g.size(); ++y)
    if (g.dist(x, y) == r) return y;
  return -1;
}

// ---------------------------------------------------------------------------
// Sharpness protocols

enum class SharpnessProto { CnotPair, ZzSets };

struct SharpnessParams {
  double alpha = 1.0;
  double C = 1.0;
  SiteSet X, Y;
  std::vector<double> t_grid;
};

/// Flip-flop operator |all-up><all-down| + h.c. on Y; spectral norm 1.
inline LocalOp flip_flop(const SiteSet& Y) {
  int64_t d = int_pow(2, static_cast<int>(Y.size()));
  Matrix m = Matrix::Zero(d, d);
  m(0, d - 1) = 1.0;
  m(d - 1, 0) = 1.0;
  return make_local_op(Y, std::move(m), 2);
}

/// Product of Pauli X over the sites of X.
inline LocalOp x_product(const SiteSet& X) {
  std::map<int, char> letters;
  for (int x : X) letters[x] = 'X';
  return dense_from_pauli(make_pauli_string(std::move(letters)));
}

/// Per grid point: two inequality rows. side=0 is the analytic lower bound
/// against the measurement, side=1 is the measurement against the exact
/// double-sum upper bound. The ratio column is measured/upper.
inline SweepReport run_sharpness(const SiteGraph& g, SharpnessProto proto,
                                 const SharpnessParams& p, int threads = 1) {
  if (!set_intersection(p.X, p.Y).empty())
    throw std::invalid_argument("run_sharpness: X and Y overlap");
  if (p.X.empty() || p.Y.empty() || p.t_grid.empty())
    throw std::invalid_argument("run_sharpness: X, Y and the t grid must be non-empty");
  DecayFn F = DecayFn::power_law(p.alpha);

  Interaction psi;
  LocalOp A, B;
  double c = 0.0;  // phase rate in the analytic lower bound 2|sin(rate * t)|
  double rate_factor = 0.0;
  if (proto == SharpnessProto::ZzSets) {
    psi = zz_set_protocol(g, p.X, p.Y, p.alpha, p.C);
    A = x_product(p.X);
    B = flip_flop(p.Y);
    c = p.C * double_sum(g, F, p.X, p.Y);
    rate_factor = 2.0;
  } else {
    if (p.X.size() != 1 || p.Y.size() != 1)
      throw std::invalid_argument("run_sharpness: cnot_pair needs single-site X and Y");
    psi = cnot_pair(g, p.X[0], p.Y[0], p.alpha);
    A = dense_from_pauli(make_pauli_string({{p.X[0], 'X'}}));
    B = dense_from_pauli(make_pauli_string({{p.Y[0], 'Z'}}));
    c = F.eval(g.dist(p.X[0], p.Y[0]));
    rate_factor = 1.0;
  }
  double psi_norm = interaction_norm(psi, F);
  double geometric = double_sum(g, F, p.X, p.Y);

  SweepReport report;
  int n = static_cast<int>(p.t_grid.size());
  report.rows = parallel_rows(n, threads, [&](int i) {
    double t = p.t_grid[i];
    double measured = commutator_norm_measured(psi, A, B, t);
    BoundSpec spec;
    spec.form = BoundForm::CorCommDoubleSum;
    spec.psi_norm = psi_norm;
    spec.t = t;
    spec.geometric = geometric;
    double upper = lrb_rhs(spec);
    double lower = 2.0 * std::abs(std::sin(rate_factor * t * c));
    double ratio = upper > 0 ? measured / upper : 0.0;
    std::vector<SweepRow> rows;
    rows.push_back(make_row({{"t", t}, {"side", 0.0}, {"ratio", ratio}}, lower, measured));
    rows.push_back(make_row({{"t", t}, {"side", 1.0}, {"ratio", ratio}}, measured, upper));
    return rows;
  });
  report.finalize();
  return report;
}

// ---------------------------------------------------------------------------
// Lieb-Robinson inequality sweeps
//
// Row encoding (form column):
//   0  exact double-sum commutator bound
//   1  |X||Y| F(dist) commutator bound                       (power law)
//   2  measured-constant min{|X|,|Y|} F_reduced(dist) bound  (power law, alpha > D)
//   3  measured-constant stretched-exponential bound         (stretched profile)
//   4  local approximation vs crossing-term sum
//   5  local approximation vs double-sum form

inline SweepReport run_lrb_sweep(const Interaction& psi, const DecayFn& F,
                                 const std::vector<double>& t_grid, int threads = 1) {
  if (t_grid.empty()) throw std::invalid_argument("run_lrb_sweep: empty t grid");
  const SiteGraph& g = *psi.graph;
  int D = g.dim_hint();
  LocalOp A = dense_from_pauli(make_pauli_string({{0, 'X'}}));
  double psi_norm = interaction_norm(psi, F);
  double norm_A = spectral_norm(A);

  bool power = F.kind == DecayKind::PowerLaw;
  bool stretched = F.kind == DecayKind::StretchedExp;
  bool has_reduced = power && F.alpha > D;
  DecayFn F_reduced = has_reduced ? DecayFn::power_law(F.alpha - D)
                     : stretched  ? DecayFn::stretched_exp(F.b / 2.0, F.p)
                                  : F;
  double fitted = (has_reduced || stretched) ? fitted_tail_constant(g, F, F_reduced) : 0.0;

  std::vector<int> radii;
  for (int r = 1; r <= g.diameter(); ++r)
    if (site_at_distance(g, 0, r) >= 0) radii.push_back(r);

  SweepReport report;
  int n = static_cast<int>(t_grid.size());
  report.rows = parallel_rows(n, threads, [&](int i) {
    double t = t_grid[i];
    std::vector<SweepRow> rows;
    for (int r : radii) {
      int y = site_at_distance(g, 0, r);
      LocalOp B = dense_from_pauli(make_pauli_string({{y, 'X'}}));
      double measured = commutator_norm_measured(psi, A, B, t);
      BoundSpec s;
      s.F = F;
      s.psi_norm = psi_norm;
      s.norm_A = norm_A;
      s.norm_B = 1.0;
      s.size_X = 1.0;
      s.size_Y = 1.0;
      s.t = t;
      s.r = r;
      s.D = D;
      s.form = BoundForm::CorCommDoubleSum;
      s.geometric = double_sum(g, F, A.support, B.support);
      rows.push_back(make_row({{"form", 0.0}, {"t", t}, {"r", double(r)}}, measured, lrb_rhs(s)));
      if (power) {
        s.form = BoundForm::LongRangeCommXY;
        rows.push_back(make_row({{"form", 1.0}, {"t", t}, {"r", double(r)}}, measured, lrb_rhs(s)));
      }
      if (has_reduced) {
        s.form = BoundForm::LongRangeCommMinXY;
        s.geometric = fitted;
        rows.push_back(make_row({{"form", 2.0}, {"t", t}, {"r", double(r)}}, measured, lrb_rhs(s)));
      }
      if (stretched) {
        s.form = BoundForm::ShortRangeComm;
        s.geometric = fitted;
        s.b_prime = F_reduced.b;
        rows.push_back(make_row({{"form", 3.0}, {"t", t}, {"r", double(r)}}, measured, lrb_rhs(s)));
      }
    }
    // Local approximation: shrink the region to the r-ball around supp(A).
    for (int r = 0; r <= g.diameter(); ++r) {
      SiteSet inner = g.neighborhood(A.support, r);
      LocalApproxResult la = local_approx_error(psi, A, t, g.all_sites(), inner, F, psi_norm);
      rows.push_back(
          make_row({{"form", 4.0}, {"t", t}, {"r", double(r)}}, la.lhs, la.rhs_term_sum));
      rows.push_back(
          make_row({{"form", 5.0}, {"t", t}, {"r", double(r)}}, la.lhs, la.rhs_double_sum));
    }
    return rows;
  });
  report.finalize();
  return report;
}

// Localization sweep rows (form column):
//   0  exact double-sum localization bound
//   1  measured-constant F_reduced(r) bound   (power law, alpha > D)
//   2  measured-constant stretched bound      (stretched profile)

inline SweepReport run_localization_sweep(const Interaction& psi, const DecayFn& F,
                                          const std::vector<double>& t_grid, int threads = 1) {
  if (t_grid.empty()) throw std::invalid_argument("run_localization_sweep: empty t grid");
  const SiteGraph& g = *psi.graph;
  int D = g.dim_hint();
  LocalOp A = dense_from_pauli(make_pauli_string({{0, 'X'}}));
  double psi_norm = interaction_norm(psi, F);
  double norm_A = spectral_norm(A);

  bool power = F.kind == DecayKind::PowerLaw;
  bool stretched = F.kind == DecayKind::StretchedExp;
  bool has_reduced = power && F.alpha > D;
  DecayFn F_reduced = has_reduced ? DecayFn::power_law(F.alpha - D)
                     : stretched  ? DecayFn::stretched_exp(F.b / 2.0, F.p)
                                  : F;
  double fitted = (has_reduced || stretched) ? fitted_tail_constant(g, F, F_reduced) : 0.0;

  SweepReport report;
  int n = static_cast<int>(t_grid.size());
  report.rows = parallel_rows(n, threads, [&](int i) {
    double t = t_grid[i];
    std::vector<SweepRow> rows;
    for (int r = 0; r <= g.diameter(); ++r) {
      double measured = localization_error_measured(psi, A, t, r);
      SiteSet outside = set_difference(g.all_sites(), g.neighborhood(A.support, r));
      BoundSpec s;
      s.F = F;
      s.psi_norm = psi_norm;
      s.norm_A = norm_A;
      s.size_X = static_cast<double>(A.support.size());
      s.t = t;
      s.r = r;
      s.D = D;
      s.form = BoundForm::CorLocDoubleSum;
      s.geometric = outside.empty() ? 0.0 : double_sum(g, F, A.support, outside);
      rows.push_back(make_row({{"form", 0.0}, {"t", t}, {"r", double(r)}}, measured, lrb_rhs(s)));
      if (has_reduced) {
        s.form = BoundForm::LongRangeLoc;
        s.geometric = fitted;
        rows.push_back(make_row({{"form", 1.0}, {"t", t}, {"r", double(r)}}, measured, lrb_rhs(s)));
      }
      if (stretched) {
        s.form = BoundForm::ShortRangeLoc;
        s.geometric = fitted;
        s.b_prime = F_reduced.b;
        rows.push_back(make_row({{"form", 2.0}, {"t", t}, {"r", double(r)}}, measured, lrb_rhs(s)));
      }
    }
    return rows;
  });
  report.finalize();
  return report;
}

// ---------------------------------------------------------------------------
// Decay of correlations

/// For each B: the ground-sector connected correlator against corr_rhs. The
/// covariance column holds |tr(rho0 A B) - tr(rho0 A) tr(rho0 B)| when the
/// ground state is unique, else 0.
inline SweepReport run_decay_correlations(const Interaction& model, const LocalOp& A,
                                          const std::vector<LocalOp>& Bs, const DecayFn& F) {
  const SiteGraph& g = *model.graph;
  if (!is_commuting(model))
    throw std::invalid_argument("run_decay_correlations: interaction must commute");
  SiteSet region = g.all_sites();
  GroundData gd = ground_data(model, region);
  if (!gd.gapped || gd.gap <= 0)
    throw std::invalid_argument("run_decay_correlations: spectrum is not gapped (ground energy " +
                                std::to_string(gd.ground_energy) + ", degeneracy " +
                                std::to_string(gd.degeneracy) + ")");
  double psi_norm = interaction_norm(model, F);
  Matrix Am = embed(A, region).mat;

  SweepReport report;
  for (const LocalOp& B : Bs) {
    if (!set_intersection(A.support, B.support).empty())
      throw std::invalid_argument("run_decay_correlations: supports of A and B overlap");
    Matrix Bm = embed(B, region).mat;
    Complex ab = (gd.rho0 * Am * Bm).trace();
    Complex apb = (gd.rho0 * Am * gd.P0 * Bm).trace();
    Complex bpa = (gd.rho0 * Bm * gd.P0 * Am).trace();
    double lhs = std::abs(ab - 0.5 * (apb + bpa));
    double r = 1e300;
    for (int x : A.support)
      for (int y : B.support) r = std::min(r, static_cast<double>(g.dist(x, y)));
    CorrSpec cs;
    cs.long_range = F.kind == DecayKind::PowerLaw;
    cs.F = F;
    cs.psi_norm = psi_norm;
    cs.norm_A = spectral_norm(A);
    cs.norm_B = spectral_norm(B);
    cs.size_X = static_cast<double>(A.support.size());
    cs.size_Y = static_cast<double>(B.support.size());
    cs.rho0_trace_norm = 1.0;
    cs.gap = gd.gap;
    cs.r = r;
    double covariance = 0.0;
    if (gd.degeneracy == 1) {
      Complex a1 = (gd.rho0 * Am).trace();
      Complex b1 = (gd.rho0 * Bm).trace();
      covariance = std::abs(ab - a1 * b1);
    }
    report.rows.push_back(make_row({{"r", r}, {"covariance", covariance}}, lhs, corr_rhs(cs)));
  }
  report.finalize();
  return report;
}

// ---------------------------------------------------------------------------
// LPPL
//
// Row encoding (form column, x column):
//   0  gap certification:      x = lambda, lhs = required min gap, rhs = gap
//   1  ground-state response:  x = r,      lhs = |tr(rho0 B) - tr(rho1 B)|, rhs = bound
//   2  perturbed-evolution premise: x = t
//   3  uniqueness:             x = lambda, lhs = degeneracy, rhs = 1

inline SweepReport run_lppl(const Interaction& model, const LocalOp& V, const LocalOp& B,
                            const std::vector<double>& lambda_grid, const DecayFn& F,
                            const std::vector<double>& premise_t_grid,
                            double required_gap = 0.0) {
  if (lambda_grid.empty()) throw std::invalid_argument("run_lppl: empty lambda grid");
  const SiteGraph& g = *model.graph;
  SiteSet region = g.all_sites();
  SweepReport report;

  double min_gap = 1e300;
  Matrix rho_first, rho_last;
  for (size_t i = 0; i < lambda_grid.size(); ++i) {
    double lam = lambda_grid[i];
    GroundData gd = ground_data(model, region, V, lam);
    if (gd.degeneracy != 1 || !gd.gapped)
      throw std::invalid_argument("run_lppl: ground state not unique and gapped at lambda = " +
                                  std::to_string(lam));
    min_gap = std::min(min_gap, gd.gap);
    report.rows.push_back(make_row({{"form", 0.0}, {"x", lam}}, required_gap, gd.gap));
    report.rows.push_back(
        make_row({{"form", 3.0}, {"x", lam}}, static_cast<double>(gd.degeneracy), 1.0));
    if (i == 0) rho_first = gd.rho0;
    if (i + 1 == lambda_grid.size()) rho_last = gd.rho0;
  }

  Matrix Bm = embed(B, region).mat;
  double lhs = std::abs(((rho_first - rho_last) * Bm).trace());
  double r = 1e300;
  for (int x : V.support)
    for (int y : B.support) r = std::min(r, static_cast<double>(g.dist(x, y)));
  double psi_norm = interaction_norm(model, F);
  LpplSpec ls;
  ls.long_range = F.kind == DecayKind::PowerLaw;
  ls.F = F;
  ls.psi_norm = psi_norm;
  ls.norm_B = spectral_norm(B);
  ls.norm_V = spectral_norm(V);
  ls.size_X = static_cast<double>(V.support.size());
  ls.size_Y = static_cast<double>(B.support.size());
  ls.gap = min_gap;
  ls.r = r;
  report.rows.push_back(make_row({{"form", 1.0}, {"x", r}}, lhs, lppl_rhs(ls)));

  // Premise: the evolution under H + V moves B slowly past V,
  // ||[tau^{H+V}_t(B), V]|| <= 4 ||Psi|| |B||V| |X||Y| |t| (1 + |V||t|) F(r).
  LocalOp Htot = dense_hamiltonian(model, region);
  Htot.mat += embed(V, region).mat;
  Eigen::SelfAdjointEigenSolver<Matrix> es(Htot.mat);
  Matrix Vm = embed(V, region).mat;
  for (double t : premise_t_grid) {
    Vector phases(Htot.dim());
    for (int64_t k = 0; k < Htot.dim(); ++k)
      phases(k) = std::exp(Complex(0.0, t * es.eigenvalues()(k)));
    Matrix U = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    Matrix Bt = U * Bm * U.adjoint();
    double premise_lhs = spectral_norm(Matrix(Bt * Vm - Vm * Bt));
    double premise_rhs = 4.0 * psi_norm * ls.norm_B * ls.norm_V * ls.size_X * ls.size_Y *
                         std::abs(t) * (1.0 + ls.norm_V * std::abs(t)) * F.eval(r);
    report.rows.push_back(make_row({{"form", 2.0}, {"x", t}}, premise_lhs, premise_rhs));
  }
  report.finalize();
  return report;
}

// ---------------------------------------------------------------------------
// Stability under a commuting part
//
// Row encoding:
//   0  x = t: residual of tau_t = tau^int_{t,0} o tau^Psi_t vs the tolerance
//   1  x = t: interaction-picture norm bound, lhs vs rhs

inline SweepReport run_stability(const Interaction& psi, const Interaction& phi, int R,
                                 const DecayFn& F, const std::vector<double>& t_grid,
                                 double residual_tol = 1e-8, double ode_tol = 1e-10) {
  require_range(psi, R);
  const SiteGraph& g = *psi.graph;
  SiteSet region = g.all_sites();
  LocalOp A = dense_from_pauli(make_pauli_string({{0, 'X'}}));
  LocalOp phi_dense = dense_hamiltonian(phi, region);
  Interaction total = merge(psi, phi);

  // cache the diagonalization of H_Psi so the interaction-picture hamiltonian
  // tau^Psi_u(Phi) costs two matmuls per evaluation
  LocalOp Hpsi = dense_hamiltonian(psi, region);
  Eigen::SelfAdjointEigenSolver<Matrix> es_psi(Hpsi.mat);
  Matrix phi_embedded = embed(phi_dense, region).mat;
  auto ham = [&](double u) {
    Vector phases(Hpsi.dim());
    for (int64_t k = 0; k < Hpsi.dim(); ++k)
      phases(k) = std::exp(Complex(0.0, u * es_psi.eigenvalues()(k)));
    Matrix U = es_psi.eigenvectors() * phases.asDiagonal() * es_psi.eigenvectors().adjoint();
    LocalOp out = make_local_op(region, Matrix(U * phi_embedded * U.adjoint()), Hpsi.q);
    return out;
  };

  SweepReport report;
  for (double t : t_grid) {
    LocalOp full = evolve_dense_oracle(total, region, A, t);
    LocalOp step1 = embed(evolve_heisenberg(psi, region, A, t), region);
    // W solves dW/du = -i H^int(u) W with H^int(u) = tau^Psi_u(Phi);
    // then tau_t(A) = W^dag tau^Psi_t(A) W.
    LocalOp step2 = propagate_time_dependent(ham, region, step1, 0.0, t, ode_tol);
    double residual = op_distance(full, step2);
    report.rows.push_back(make_row({{"form", 0.0}, {"x", t}}, residual, residual_tol));

    PhiIntCheck chk = phi_int_norm_check(psi, phi, F, R, t);
    report.rows.push_back(make_row({{"form", 1.0}, {"x", t}}, chk.lhs, chk.rhs));
  }
  report.finalize();
  return report;
}

/// Exploratory commutator-growth curves for the anisotropic spin chain; data
/// only, every row passes by construction.
inline SweepReport run_xxz_curves(const SiteGraph& g, const std::vector<double>& deltas,
                                  const std::vector<double>& t_grid) {
  LocalOp A = dense_from_pauli(make_pauli_string({{0, 'X'}}));
  LocalOp B = dense_from_pauli(make_pauli_string({{g.size() - 1, 'X'}}));
  SiteSet region = g.all_sites();
  SweepReport report;
  for (double delta : deltas) {
    Interaction psi = xxz_chain(g, delta);
    for (double t : t_grid) {
      LocalOp evolved = evolve_dense_oracle(psi, region, A, t);
      double measured = commutator_norm(evolved, B);
      report.rows.push_back(make_row({{"delta", delta}, {"t", t}}, measured, measured));
    }
  }
  report.finalize();
  return report;
}

// ---------------------------------------------------------------------------
// Tail-sum lower bound on a D-dimensional box

struct TailBoundCheck {
  double lhs = 0.0;  // sum_{d(center, y) >= R} F_alpha(d)
  double rhs = 0.0;  // F_{alpha-D}(R) / ((alpha - D) (D-1)!)
};

inline TailBoundCheck tail_lower_bound_check(const SiteGraph& g, int center, double alpha, int R,
                                             int D) {
  if (alpha <= D) throw std::invalid_argument("tail_lower_bound_check: alpha > D required");
  TailBoundCheck out;
  KahanSum acc;
  DecayFn F = DecayFn::power_law(alpha);
  for (int y = 0; y < g.size(); ++y)
    if (g.dist(center, y) >= R) acc.add(F.eval(g.dist(center, y)));
  out.lhs = acc.value();
  double fact = 1.0;
  for (int k = 2; k <= D - 1; ++k) fact *= k;
  out.rhs = DecayFn::power_law(alpha - D).eval(R) / ((alpha - D) * fact);
  return out;
}

/// Oracle-equivalence battery: seeded random commuting interactions, a random
/// single-site observable each, both engines compared at every t.
inline SweepReport run_oracle_equivalence(const SiteGraph& g, uint64_t seed, int n_models,
                                          const std::vector<double>& t_grid, double tol,
                                          int threads = 1) {
  SweepReport report;
  report.rows = parallel_rows(n_models, threads, [&](int m) {
    Interaction psi = random_commuting_pauli(g, seed + static_cast<uint64_t>(m));
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ull * (m + 1)));
    const char letters[3] = {'X', 'Y', 'Z'};
    int site = static_cast<int>(rng() % g.size());
    LocalOp A = dense_from_pauli(make_pauli_string({{site, letters[rng() % 3]}}));
    std::vector<SweepRow> rows;
    for (double t : t_grid) {
      LocalOp fast = evolve_heisenberg(psi, g.all_sites(), A, t);
      LocalOp slow = evolve_dense_oracle(psi, g.all_sites(), A, t);
      rows.push_back(make_row({{"model", double(m)}, {"t", t}}, op_distance(fast, slow), tol));
    }
    return rows;
  });
  report.finalize();
  return report;
}

}  // namespace lrlab
