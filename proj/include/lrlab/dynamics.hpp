#pragma once

#include <functional>

#include "lrlab/model.hpp"

namespace lrlab {

constexpr double kCommuteTol = 1e-12;

/// tau_t^{Lambda'}(A) for a commuting interaction, via support restriction:
/// only terms inside the region that meet supp(A) act, and the result lives
/// on the union of supp(A) with those term supports.
///
/// All-diagonal interactions (ZZ-type models) use an elementwise phase path;
/// otherwise per-term exponentials are applied in term-index order (the order
/// is irrelevant mathematically, fixing it keeps outputs bit-reproducible).
inline LocalOp evolve_heisenberg(const Interaction& psi, const SiteSet& region,
                                 const LocalOp& A, double t) {
  if (!is_subset(A.support, region))
    throw std::invalid_argument("evolve_heisenberg: supp(A) must lie inside the region");
  Interaction local = restrict_to_region(psi, region);
  double residual = check_commuting(local);
  if (residual > kCommuteTol)
    throw std::invalid_argument(
        "evolve_heisenberg: interaction does not commute (residual " +
        std::to_string(residual) + "); use evolve_dense_oracle");
  Interaction active = terms_intersecting(local, A.support);
  SiteSet support = A.support;
  bool all_diagonal = true;
  for (const Term& term : active.terms) {
    support = set_union(support, term.op.support);
    all_diagonal = all_diagonal && term.diagonal;
  }
  check_dim_cap(static_cast<int>(support.size()), psi.q());
  LocalOp result = embed(A, support);
  if (t == 0.0 || active.terms.empty()) return result;

  if (all_diagonal) {
    int64_t dim = result.dim();
    Eigen::VectorXd phase = Eigen::VectorXd::Zero(dim);
    for (const Term& term : active.terms) {
      auto off = index_offsets(term.op.support, support, psi.q());
      auto rest = index_offsets(set_difference(support, term.op.support), support, psi.q());
      for (size_t a = 0; a < off.size(); ++a) {
        double h = term.op.mat(a, a).real();
        for (int64_t c : rest) phase(off[a] + c) += h;
      }
    }
    Vector u(dim);
    for (int64_t i = 0; i < dim; ++i) u(i) = std::exp(Complex(0.0, t * phase(i)));
    for (int64_t j = 0; j < dim; ++j) {
      Complex uj = std::conj(u(j));
      for (int64_t i = 0; i < dim; ++i) result.mat(i, j) *= u(i) * uj;
    }
  } else {
    for (const Term& term : active.terms) {
      LocalOp u = exp_hermitian(term.op, t);
      apply_local_left(result.mat, u.mat, u.support, support, psi.q());
      apply_local_right(result.mat, u.mat.adjoint(), u.support, support, psi.q());
    }
  }
  result.hermitian = A.hermitian;
  return result;
}

/// Brute-force e^{itH} A e^{-itH} on the region; the reference for all
/// equivalence tests and the only engine valid for non-commuting interactions.
inline LocalOp evolve_dense_oracle(const Interaction& psi, const SiteSet& region,
                                   const LocalOp& A, double t) {
  if (!is_subset(A.support, region))
    throw std::invalid_argument("evolve_dense_oracle: supp(A) must lie inside the region");
  LocalOp H = dense_hamiltonian(psi, region);
  Eigen::SelfAdjointEigenSolver<Matrix> es(H.mat);
  Vector phases(H.dim());
  for (int64_t i = 0; i < H.dim(); ++i)
    phases(i) = std::exp(Complex(0.0, t * es.eigenvalues()(i)));
  Matrix U = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  LocalOp result = embed(A, region);
  result.mat = U * result.mat * U.adjoint();
  result.hermitian = A.hermitian;
  return result;
}

struct LocalApproxResult {
  double lhs = 0.0;             // ||tau^Lambda(A) - tau^Lambda'(A)||
  double rhs_term_sum = 0.0;    // 2 ||A|| |t| sum of crossing term norms
  double rhs_double_sum = 0.0;  // 2 ||A|| ||Psi||_F |t| sum_{x in X, y notin Lambda'} F(d)
};

/// Both sides of the local-approximation bound. The double-sum form needs the
/// interaction norm and profile it is measured against.
inline LocalApproxResult local_approx_error(const Interaction& psi, const LocalOp& A, double t,
                                            const SiteSet& Lambda, const SiteSet& LambdaPrime,
                                            const DecayFn& F, double psi_norm_F) {
  if (!is_subset(A.support, LambdaPrime) || !is_subset(LambdaPrime, Lambda))
    throw std::invalid_argument("local_approx_error: need supp(A) in Lambda' in Lambda");
  LocalApproxResult out;
  LocalOp big = evolve_heisenberg(psi, Lambda, A, t);
  LocalOp small = evolve_heisenberg(psi, LambdaPrime, A, t);
  out.lhs = op_distance(big, small);

  double norm_A = spectral_norm(A);
  SiteSet outside = set_difference(Lambda, LambdaPrime);
  KahanSum crossing;
  for (const Term& term : psi.terms) {
    if (!is_subset(term.op.support, Lambda)) continue;
    if (set_intersection(term.op.support, A.support).empty()) continue;
    if (set_intersection(term.op.support, outside).empty()) continue;
    crossing.add(term.norm);
  }
  out.rhs_term_sum = 2.0 * norm_A * std::abs(t) * crossing.value();
  out.rhs_double_sum =
      outside.empty()
          ? 0.0
          : 2.0 * norm_A * psi_norm_F * std::abs(t) * double_sum(*psi.graph, F, A.support, outside);
  return out;
}

/// ||[tau_t(A), B]|| on the minimal common support; the commuting engine when
/// it applies, the dense oracle otherwise.
inline double commutator_norm_measured(const Interaction& psi, const LocalOp& A,
                                       const LocalOp& B, double t) {
  if (!set_intersection(A.support, B.support).empty())
    throw std::invalid_argument("commutator_norm_measured: supports must be disjoint");
  SiteSet all = psi.graph->all_sites();
  LocalOp evolved = is_commuting(psi) ? evolve_heisenberg(psi, all, A, t)
                                      : evolve_dense_oracle(psi, all, A, t);
  return commutator_norm(evolved, B);
}

/// ||tau_t(A) - E_{X_r}(tau_t(A))||.
inline double localization_error_measured(const Interaction& psi, const LocalOp& A, double t,
                                          int r) {
  SiteSet all = psi.graph->all_sites();
  LocalOp evolved = evolve_heisenberg(psi, all, A, t);
  SiteSet Xr = psi.graph->neighborhood(A.support, r);
  // Outside its own support the evolved operator is identity, so the
  // conditional expectation only needs to trace the sites of supp that
  // fall outside X_r.
  SiteSet Y = set_intersection(evolved.support, Xr);
  if (Y == evolved.support) return 0.0;
  if (Y.empty()) {
    // Fully traced out: compare against (tr A / dim) * identity.
    Complex mean = evolved.mat.trace() / static_cast<double>(evolved.dim());
    LocalOp diff = evolved;
    diff.mat -= mean * Matrix::Identity(evolved.dim(), evolved.dim());
    diff.hermitian = is_hermitian(diff.mat, 1e-9);
    return spectral_norm(diff);
  }
  LocalOp projected = conditional_expectation(evolved, Y);
  return op_distance(evolved, projected);
}

/// Declared-finite-range check: every term diameter must be <= R.
inline void require_range(const Interaction& psi, int R) {
  for (const Term& term : psi.terms)
    if (psi.graph->set_diameter(term.op.support) > R)
      throw std::invalid_argument("interaction exceeds its declared range");
}

/// Interaction-picture transform: Phi^int(t, Z) = sum_{X : X_R = Z}
/// tau^Psi_t(Phi(X)). Psi must be commuting with range <= R; each transformed
/// term then lives inside X_R and keeps its spectral norm.
inline Interaction interaction_picture(const Interaction& psi, const Interaction& phi,
                                       int R, double t) {
  if (!is_commuting(psi)) throw std::invalid_argument("interaction_picture: Psi must commute");
  require_range(psi, R);
  SiteSet all = psi.graph->all_sites();
  std::map<SiteSet, LocalOp> grouped;
  for (const Term& term : phi.terms) {
    SiteSet key = psi.graph->neighborhood(term.op.support, R);
    LocalOp transformed = evolve_heisenberg(psi, all, term.op, t);
    if (!is_subset(transformed.support, key))
      throw std::logic_error("interaction_picture: transformed support escaped X_R");
    LocalOp on_key = embed(transformed, key);
    auto it = grouped.find(key);
    if (it == grouped.end())
      grouped.emplace(std::move(key), std::move(on_key));
    else
      it->second.mat += on_key.mat;
  }
  Interaction out;
  out.graph = psi.graph;
  for (auto& [key, op] : grouped) {
    op.hermitian = is_hermitian(op.mat);
    out.terms.push_back(make_term(std::move(op)));
  }
  return out;
}

/// Time-ordered Heisenberg propagation for a time-dependent Hamiltonian
/// H(u) given as dense matrices on a fixed region: midpoint product steps
/// with step-halving until successive refinements differ by < tol.
inline LocalOp propagate_time_dependent(const std::function<LocalOp(double)>& hamiltonian,
                                        const SiteSet& region, const LocalOp& A, double s,
                                        double t, double tol) {
  auto eval = [&](double u) {
    LocalOp H = hamiltonian(u);
    if (H.support != region) H = embed(H, region);
    return H;
  };
  auto propagator = [&](int steps) {
    // W solves dW/du = -i H(u) W, W(s) = 1; tau_{t,s}(A) = W^dag A W.
    // Fourth-order commutator-free scheme on the two Gauss nodes: per step
    //   W <- exp(-ih (a H1 + b H2)) exp(-ih (b H1 + a H2)) W
    // with a = 1/4 - sqrt(3)/6, b = 1/4 + sqrt(3)/6.
    const double c1 = 0.5 - std::sqrt(3.0) / 6.0, c2 = 0.5 + std::sqrt(3.0) / 6.0;
    const double a1 = 0.25 - std::sqrt(3.0) / 6.0, a2 = 0.25 + std::sqrt(3.0) / 6.0;
    int64_t dim = int_pow(hamiltonian(s).q, static_cast<int>(region.size()));
    Matrix W = Matrix::Identity(dim, dim);
    double h = (t - s) / steps;
    for (int k = 0; k < steps; ++k) {
      double u = s + k * h;
      LocalOp H1 = eval(u + c1 * h);
      LocalOp H2 = eval(u + c2 * h);
      LocalOp right = H1;
      right.mat = a2 * H1.mat + a1 * H2.mat;
      LocalOp left = H1;
      left.mat = a1 * H1.mat + a2 * H2.mat;
      W = exp_hermitian(left, -h).mat * exp_hermitian(right, -h).mat * W;
    }
    return W;
  };
  LocalOp a = embed(A, region);
  if (s == t) return a;
  int steps = 4;
  Matrix W = propagator(steps);
  for (int halving = 0; halving < 20; ++halving) {
    steps *= 2;
    Matrix W2 = propagator(steps);
    Matrix prev = W.adjoint() * a.mat * W;
    Matrix next = W2.adjoint() * a.mat * W2;
    double resid = spectral_norm(Matrix(next - prev));
    W = std::move(W2);
    if (resid < tol) {
      LocalOp out = a;
      out.mat = W.adjoint() * a.mat * W;
      out.hermitian = a.hermitian;
      return out;
    }
  }
  throw std::runtime_error("propagate_time_dependent: no convergence after 20 halvings");
}

}  // namespace lrlab
