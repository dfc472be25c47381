#pragma once

#include <random>

#include "lrlab/model.hpp"

namespace lrlab {

/// Uniform double in [-1, 1) from the top 53 bits; the distribution classes in
/// <random> are implementation-defined, this keeps seeds portable.
inline double uniform_pm1(std::mt19937_64& rng) {
  return 2.0 * ((rng() >> 11) * 0x1p-53) - 1.0;
}

/// Seeded random commuting interaction built from Pauli strings: candidate
/// strings on 1-3 random sites are accepted greedily when they commute
/// (symbolically) with everything accepted so far.
inline Interaction random_commuting_pauli(const SiteGraph& g, uint64_t seed, int n_terms = 8) {
  std::mt19937_64 rng(seed);
  const char letters[3] = {'X', 'Y', 'Z'};
  Interaction psi;
  psi.graph = &g;
  std::vector<PauliString> accepted;
  int attempts = 0;
  while (static_cast<int>(accepted.size()) < n_terms && attempts < 4000) {
    ++attempts;
    int k = 1 + static_cast<int>(rng() % 3);
    std::map<int, char> site_letters;
    for (int i = 0; i < k; ++i)
      site_letters[static_cast<int>(rng() % g.size())] = letters[rng() % 3];
    PauliString s = make_pauli_string(std::move(site_letters));
    bool ok = true;
    for (const PauliString& a : accepted)
      if (!pauli_commute(a, s)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    double coeff = uniform_pm1(rng);
    if (std::abs(coeff) < 1e-3) coeff = 1e-3;  // keep the term non-trivial
    accepted.push_back(s);
    psi.terms.push_back(make_term(dense_from_pauli(s, coeff), PauliPolynomial{{coeff, s}}));
  }
  return psi;
}

}  // namespace lrlab
