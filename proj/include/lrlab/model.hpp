#pragma once

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "lrlab/algebra.hpp"
#include "lrlab/decay.hpp"
#include "lrlab/lattice.hpp"

namespace lrlab {

/// Linear combination of Pauli strings; symbolic fast path for commutativity.
using PauliPolynomial = std::vector<std::pair<Complex, PauliString>>;

inline bool is_diagonal_matrix(const Matrix& m) {
  for (int64_t i = 0; i < m.rows(); ++i)
    for (int64_t j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) != Complex(0.0, 0.0)) return false;
  return true;
}

/// One Hermitian interaction term Psi(Z) on its support Z.
struct Term {
  LocalOp op;
  std::optional<PauliPolynomial> pauli;
  double norm = 0.0;      // spectral norm, cached at construction
  bool diagonal = false;  // exact-zero off-diagonals
};

inline Term make_term(LocalOp op, std::optional<PauliPolynomial> pauli = std::nullopt) {
  if (op.support.empty()) throw std::invalid_argument("make_term: empty support");
  if (!op.hermitian) throw std::invalid_argument("make_term: interaction terms must be Hermitian");
  Term t;
  t.norm = spectral_norm(op);
  t.diagonal = is_diagonal_matrix(op.mat);
  t.op = std::move(op);
  t.pauli = std::move(pauli);
  return t;
}

/// An interaction: a finite list of Hermitian terms on a fixed graph.
struct Interaction {
  const SiteGraph* graph = nullptr;
  std::vector<Term> terms;

  int q() const { return graph->q(); }
};

/// Sub-interaction of the terms whose support meets X (Psi_{\cap X}).
inline Interaction terms_intersecting(const Interaction& psi, const SiteSet& X) {
  if (X.empty()) throw std::invalid_argument("terms_intersecting: empty site set");
  Interaction out;
  out.graph = psi.graph;
  for (const Term& t : psi.terms)
    if (!set_intersection(t.op.support, X).empty()) out.terms.push_back(t);
  return out;
}

/// Terms fully contained in the region (H_{Lambda'}).
inline Interaction restrict_to_region(const Interaction& psi, const SiteSet& region) {
  Interaction out;
  out.graph = psi.graph;
  for (const Term& t : psi.terms)
    if (is_subset(t.op.support, region)) out.terms.push_back(t);
  return out;
}

inline Interaction merge(const Interaction& a, const Interaction& b) {
  if (a.graph != b.graph) throw std::invalid_argument("merge: interactions on different graphs");
  Interaction out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  return out;
}

/// Max over term pairs of ||[Psi(Z1), Psi(Z2)]||. Disjoint supports, mutually
/// diagonal pairs and symbolically commuting Pauli polynomials are skipped
/// without dense work.
inline double check_commuting(const Interaction& psi) {
  double residual = 0.0;
  size_t n = psi.terms.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const Term& a = psi.terms[i];
      const Term& b = psi.terms[j];
      if (set_intersection(a.op.support, b.op.support).empty()) continue;
      if (a.diagonal && b.diagonal) continue;
      if (a.pauli && b.pauli) {
        bool all_commute = true;
        for (auto& [ca, sa] : *a.pauli) {
          for (auto& [cb, sb] : *b.pauli)
            if (!pauli_commute(sa, sb)) {
              all_commute = false;
              break;
            }
          if (!all_commute) break;
        }
        if (all_commute) continue;
      }
      residual = std::max(residual, commutator_norm(a.op, b.op));
    }
  }
  return residual;
}

inline bool is_commuting(const Interaction& psi, double tol = kHermitianTol) {
  return check_commuting(psi) <= tol;
}

/// ||Psi||_F = sup_{x,y} sum_{Z contains x,y} ||Psi(Z)|| / F(d(x,y)).
/// The sup runs over all site pairs including x = y, as the norm is defined.
inline double interaction_norm(const Interaction& psi, const DecayFn& F) {
  std::map<std::pair<int, int>, double> pair_sums;
  for (const Term& t : psi.terms) {
    const SiteSet& s = t.op.support;
    for (size_t i = 0; i < s.size(); ++i)
      for (size_t j = i; j < s.size(); ++j) pair_sums[{s[i], s[j]}] += t.norm;
  }
  double sup = 0.0;
  for (auto& [pair, sum] : pair_sums) {
    double denom = F.eval(psi.graph->dist(pair.first, pair.second));
    if (denom <= 0.0)
      throw std::invalid_argument("interaction_norm: decay profile vanishes on a realized pair");
    sup = std::max(sup, sum / denom);
  }
  return sup;
}

/// H_region = sum of terms with support inside the region, as a dense matrix.
inline LocalOp dense_hamiltonian(const Interaction& psi, const SiteSet& region) {
  check_dim_cap(static_cast<int>(region.size()), psi.q());
  int64_t dim = int_pow(psi.q(), static_cast<int>(region.size()));
  Matrix H = Matrix::Zero(dim, dim);
  for (const Term& t : psi.terms)
    if (is_subset(t.op.support, region)) H += embed(t.op, region).mat;
  LocalOp op;
  op.support = region;
  op.q = psi.q();
  op.hermitian = true;
  op.mat = std::move(H);
  return op;
}

// ---------------------------------------------------------------------------
// Named model builders

inline PauliString zz_string(int x, int y) {
  return make_pauli_string({{x, 'Z'}, {y, 'Z'}});
}

inline Term zz_term(int x, int y, double coeff) {
  PauliString s = zz_string(x, y);
  return make_term(dense_from_pauli(s, coeff), PauliPolynomial{{coeff, s}});
}

inline Term single_pauli_term(int x, char letter, double coeff) {
  PauliString s = make_pauli_string({{x, letter}});
  return make_term(dense_from_pauli(s, coeff), PauliPolynomial{{coeff, s}});
}

/// C * F(d(x,y)) * Z_x Z_y on every site pair.
inline Interaction zz_long_range(const SiteGraph& g, const DecayFn& F, double coupling) {
  Interaction psi;
  psi.graph = &g;
  for (int x = 0; x < g.size(); ++x)
    for (int y = x + 1; y < g.size(); ++y)
      psi.terms.push_back(zz_term(x, y, coupling * F.eval(g.dist(x, y))));
  return psi;
}

/// Single term F_alpha(d(x,y)) * U with U the CNOT gate (control x, target y);
/// U is both unitary and Hermitian, so e^{itU} = cos(t) 1 + i sin(t) U.
inline Interaction cnot_pair(const SiteGraph& g, int x, int y, double alpha) {
  if (x == y) throw std::invalid_argument("cnot_pair: x and y must differ");
  double f = DecayFn::power_law(alpha).eval(g.dist(x, y));
  Matrix u = Matrix::Zero(4, 4);
  // Big-endian over sorted {x,y}: first site is the high bit.
  bool control_first = x < y;
  for (int c = 0; c < 2; ++c)
    for (int tgt = 0; tgt < 2; ++tgt) {
      int in = control_first ? (c << 1) | tgt : (tgt << 1) | c;
      int out_t = c == 1 ? 1 - tgt : tgt;
      int out = control_first ? (c << 1) | out_t : (out_t << 1) | c;
      u(out, in) = 1.0;
    }
  Interaction psi;
  psi.graph = &g;
  psi.terms.push_back(make_term(make_local_op({x, y}, f * u, 2)));
  return psi;
}

/// C * F_alpha(d(x,y)) * Z_x Z_y for x in X, y in Y only (the sharpness
/// protocol coupler set).
inline Interaction zz_set_protocol(const SiteGraph& g, const SiteSet& X, const SiteSet& Y,
                                   double alpha, double coupling) {
  if (!set_intersection(X, Y).empty())
    throw std::invalid_argument("zz_set_protocol: X and Y must be disjoint");
  DecayFn F = DecayFn::power_law(alpha);
  Interaction psi;
  psi.graph = &g;
  for (int x : X)
    for (int y : Y) psi.terms.push_back(zz_term(x, y, coupling * F.eval(g.dist(x, y))));
  return psi;
}

/// -J sum_<xy> Z_x Z_y - h sum_x Z_x.
inline Interaction zz_field(const SiteGraph& g, double J, double h) {
  Interaction psi;
  psi.graph = &g;
  for (int x = 0; x < g.size(); ++x)
    for (int y : g.neighbors(x))
      if (y > x) psi.terms.push_back(zz_term(x, y, -J));
  for (int x = 0; x < g.size(); ++x) psi.terms.push_back(single_pauli_term(x, 'Z', -h));
  return psi;
}

/// -h sum_x X_x; the generic non-commuting partner for the stability checks.
inline Interaction transverse_field(const SiteGraph& g, double h) {
  Interaction phi;
  phi.graph = &g;
  for (int x = 0; x < g.size(); ++x) phi.terms.push_back(single_pauli_term(x, 'X', -h));
  return phi;
}

/// XXZ chain, spin 1/2: -sum_x (S1 S1 + S2 S2 + Delta S3 S3). Intentionally
/// non-commuting; only valid with the dense-oracle engine.
inline Interaction xxz_chain(const SiteGraph& g, double delta) {
  Interaction psi;
  psi.graph = &g;
  for (int x = 0; x + 1 < g.size(); ++x) {
    int y = x + 1;
    PauliPolynomial poly = {{-0.25, make_pauli_string({{x, 'X'}, {y, 'X'}})},
                            {-0.25, make_pauli_string({{x, 'Y'}, {y, 'Y'}})},
                            {-0.25 * delta, make_pauli_string({{x, 'Z'}, {y, 'Z'}})}};
    Matrix m = Matrix::Zero(4, 4);
    for (auto& [c, s] : poly) m += embed(dense_from_pauli(s, c), {x, y}).mat;
    psi.terms.push_back(make_term(make_local_op({x, y}, std::move(m), 2), std::move(poly)));
  }
  return psi;
}

// ---------------------------------------------------------------------------
// Long-range toric code on the edges of the (Z/LZ)^2 torus.
//
// Site ids: vertex v = i*L + j; horizontal edge (v -> right neighbour) is
// 2v, vertical edge (v -> down neighbour) is 2v + 1. Two edge-sites are
// adjacent iff they share a vertex.

inline int toric_vertex(int L, int i, int j) {
  return ((i % L + L) % L) * L + ((j % L + L) % L);
}

inline SiteSet star_edges(int L, int v) {
  int i = v / L, j = v % L;
  return sorted_unique({2 * v, 2 * v + 1, 2 * toric_vertex(L, i, j - 1),
                        2 * toric_vertex(L, i - 1, j) + 1});
}

inline SiteSet plaquette_edges(int L, int p) {
  // Face p has corners (i,j),(i,j+1),(i+1,j),(i+1,j+1); boundary edges:
  int i = p / L, j = p % L;
  return sorted_unique({2 * toric_vertex(L, i, j), 2 * toric_vertex(L, i + 1, j),
                        2 * toric_vertex(L, i, j) + 1, 2 * toric_vertex(L, i, j + 1) + 1});
}

/// Metric graph whose sites are the 2L^2 edges of the L x L torus.
inline SiteGraph toric_edge_graph(int L) {
  if (L < 2) throw std::invalid_argument("toric_edge_graph: L >= 2 required");
  int n = 2 * L * L;
  std::vector<std::pair<int, int>> adj;
  for (int v = 0; v < L * L; ++v) {
    SiteSet e = star_edges(L, v);
    for (size_t a = 0; a < e.size(); ++a)
      for (size_t b = a + 1; b < e.size(); ++b) adj.emplace_back(e[a], e[b]);
  }
  return SiteGraph(n, std::move(adj), 2, 2);
}

/// Torus graph distance between vertices (used for the long-range couplings).
inline int toric_vertex_distance(int L, int v1, int v2) {
  int di = std::abs(v1 / L - v2 / L);
  int dj = std::abs(v1 % L - v2 % L);
  return std::min(di, L - di) + std::min(dj, L - dj);
}

/// H = sum_s (1 - prod X_e) + sum_p (1 - prod Z_e)
///     + sum pairs f(s1,s2) A_{s1} A_{s2} + g(p1,p2) B_{p1} B_{p2},
/// with A_s = -1 + prod X, B_p = -1 + prod Z and 0 <= f,g <= C F_alpha.
/// Passing coupling = 0 gives the bare toric code.
inline Interaction toric_code_long_range(const SiteGraph& edge_graph, int L, double alpha,
                                         double coupling) {
  if (edge_graph.size() != 2 * L * L)
    throw std::invalid_argument("toric_code_long_range: graph is not the L x L edge graph");
  if (coupling < 0)
    throw std::invalid_argument("toric_code_long_range: coefficients must satisfy 0 <= f <= C F_alpha");
  DecayFn F = DecayFn::power_law(alpha > 0 ? alpha : 1.0);
  Interaction psi;
  psi.graph = &edge_graph;

  auto stabilizer = [&](const SiteSet& supp, char letter) {
    std::map<int, char> letters;
    for (int e : supp) letters[e] = letter;
    return make_pauli_string(std::move(letters));
  };
  auto identity_minus = [&](const PauliString& s) {  // 1 - prod  (= -A_s)
    SiteSet supp = s.support();
    Matrix m = identity_op(supp).mat - dense_from_pauli(s).mat;
    PauliPolynomial poly = {{1.0, stabilizer(supp, 'I')}, {-1.0, s}};
    // identity entry carries no letters; represent it by the string itself
    poly[0].second = PauliString{};  // empty string = identity
    return make_term(make_local_op(supp, std::move(m), 2), std::move(poly));
  };

  std::vector<PauliString> stars, plaquettes;
  for (int v = 0; v < L * L; ++v) stars.push_back(stabilizer(star_edges(L, v), 'X'));
  for (int p = 0; p < L * L; ++p) plaquettes.push_back(stabilizer(plaquette_edges(L, p), 'Z'));

  for (auto& s : stars) psi.terms.push_back(identity_minus(s));
  for (auto& p : plaquettes) psi.terms.push_back(identity_minus(p));

  if (coupling > 0) {
    auto same_letter_product = [](const PauliString& s1, const PauliString& s2) {
      // X.X = Z.Z = I, so the product lives on the symmetric difference.
      std::map<int, char> letters = s1.letters;
      for (auto& [site, l] : s2.letters) {
        auto it = letters.find(site);
        if (it != letters.end())
          letters.erase(it);
        else
          letters[site] = l;
      }
      return make_pauli_string(std::move(letters));
    };
    auto pair_product = [&](const PauliString& s1, const PauliString& s2, double f) {
      // f * A_1 A_2 = f (1 - P_1)(1 - P_2) = f (1 - P_1 - P_2 + P_1 P_2)
      SiteSet supp = set_union(s1.support(), s2.support());
      Matrix p1 = embed(dense_from_pauli(s1), supp).mat;
      Matrix p2 = embed(dense_from_pauli(s2), supp).mat;
      Matrix m = f * (identity_op(supp).mat - p1 - p2 + p1 * p2);
      PauliPolynomial poly = {{f, PauliString{}},
                              {-f, s1},
                              {-f, s2},
                              {f, same_letter_product(s1, s2)}};
      return make_term(make_local_op(supp, std::move(m), 2), std::move(poly));
    };
    for (int a = 0; a < L * L; ++a)
      for (int b = a + 1; b < L * L; ++b) {
        double f = coupling * F.eval(toric_vertex_distance(L, a, b));
        psi.terms.push_back(pair_product(stars[a], stars[b], f));
        psi.terms.push_back(pair_product(plaquettes[a], plaquettes[b], f));
      }
  }
  return psi;
}

}  // namespace lrlab
