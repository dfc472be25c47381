#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdlib>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrlab/lattice.hpp"

namespace lrlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

constexpr double kHermitianTol = 1e-12;

/// Dense-dimension cap: full-space objects refuse more than this many q=2
/// sites (dimension 2^cap). Overridable via LRB_LAB_DIM_CAP.
inline int dense_site_cap() {
  static const int cap = [] {
    if (const char* env = std::getenv("LRB_LAB_DIM_CAP")) {
      int v = std::atoi(env);
      if (v > 0) return v;
    }
    return 14;
  }();
  return cap;
}

inline void check_dim_cap(int n_sites, int q) {
  double dim = std::pow(static_cast<double>(q), n_sites);
  double cap = std::pow(2.0, dense_site_cap());
  if (dim > cap)
    throw std::invalid_argument(
        "dense dimension cap exceeded: request needs " + std::to_string(n_sites) +
        " sites of dimension " + std::to_string(q) + " but the cap allows dimension " +
        std::to_string(static_cast<long long>(cap)) +
        " (override with LRB_LAB_DIM_CAP)");
}

inline int64_t int_pow(int64_t base, int exp) {
  int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

/// Complex matrix tagged with its (sorted) support. The global basis index is
/// big-endian over the sorted support: the first listed site is the most
/// significant digit, base q.
struct LocalOp {
  SiteSet support;
  Matrix mat;
  int q = 2;
  bool hermitian = false;

  int64_t dim() const { return mat.rows(); }
};

inline bool is_hermitian(const Matrix& m, double tol = kHermitianTol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline LocalOp make_local_op(SiteSet support, Matrix mat, int q = 2) {
  support = sorted_unique(std::move(support));
  int64_t want = int_pow(q, static_cast<int>(support.size()));
  if (mat.rows() != mat.cols() || mat.rows() != want)
    throw std::invalid_argument("make_local_op: matrix dimension does not match q^|support|");
  if (!mat.allFinite()) throw std::invalid_argument("make_local_op: non-finite entries");
  LocalOp op;
  op.support = std::move(support);
  op.q = q;
  op.hermitian = is_hermitian(mat);
  op.mat = std::move(mat);
  return op;
}

inline LocalOp identity_op(SiteSet support, int q = 2) {
  int64_t d = int_pow(q, static_cast<int>(support.size()));
  return make_local_op(std::move(support), Matrix::Identity(d, d), q);
}

/// Base-q index offsets of sub-support digits inside the target index.
/// sub must be a subset of target (both sorted).
inline std::vector<int64_t> index_offsets(const SiteSet& sub, const SiteSet& target, int q) {
  int m = static_cast<int>(target.size());
  std::vector<int64_t> stride_of;  // stride of each sub site inside target
  stride_of.reserve(sub.size());
  for (int s : sub) {
    auto it = std::lower_bound(target.begin(), target.end(), s);
    if (it == target.end() || *it != s)
      throw std::invalid_argument("index_offsets: support is not a subset of the target");
    int pos = static_cast<int>(it - target.begin());
    stride_of.push_back(int_pow(q, m - 1 - pos));
  }
  int k = static_cast<int>(sub.size());
  int64_t dim_sub = int_pow(q, k);
  std::vector<int64_t> offsets(dim_sub);
  for (int64_t a = 0; a < dim_sub; ++a) {
    int64_t rest = a;
    int64_t off = 0;
    for (int i = k - 1; i >= 0; --i) {
      off += (rest % q) * stride_of[i];
      rest /= q;
    }
    offsets[a] = off;
  }
  return offsets;
}

/// A tensored with identity on target_support \ support, big-endian indexing.
inline LocalOp embed(const LocalOp& op, const SiteSet& target_support) {
  if (op.support == target_support) return op;
  if (!is_subset(op.support, target_support))
    throw std::invalid_argument("embed: op support is not a subset of the target support");
  check_dim_cap(static_cast<int>(target_support.size()), op.q);
  SiteSet rest = set_difference(target_support, op.support);
  auto op_off = index_offsets(op.support, target_support, op.q);
  auto rest_off = index_offsets(rest, target_support, op.q);
  int64_t dim = int_pow(op.q, static_cast<int>(target_support.size()));
  Matrix out = Matrix::Zero(dim, dim);
  int64_t ds = op.mat.rows();
  for (int64_t a = 0; a < ds; ++a)
    for (int64_t b = 0; b < ds; ++b) {
      Complex v = op.mat(a, b);
      if (v == Complex(0.0, 0.0)) continue;
      for (int64_t c : rest_off) out(op_off[a] + c, op_off[b] + c) = v;
    }
  LocalOp res;
  res.support = target_support;
  res.q = op.q;
  res.hermitian = op.hermitian;
  res.mat = std::move(out);
  return res;
}

/// Exact norm for matrices with at most one nonzero per row and per column
/// (A^dag A is then diagonal): max entry magnitude. Returns negative when the
/// structure does not apply. Evolved diagonal-model observables and their
/// commutators with Pauli strings all have this shape, so the big sweep
/// geometries never pay for an eigensolve.
inline double mono_sparse_norm(const Matrix& m) {
  std::vector<char> row_used(m.rows(), 0);
  double best = 0.0;
  for (int64_t j = 0; j < m.cols(); ++j) {
    bool col_used = false;
    for (int64_t i = 0; i < m.rows(); ++i) {
      if (m(i, j) == Complex(0.0, 0.0)) continue;
      if (col_used || row_used[i]) return -1.0;
      col_used = true;
      row_used[i] = 1;
      best = std::max(best, std::abs(m(i, j)));
    }
  }
  return best;
}

/// Largest singular value. Hermitian inputs go through a direct eigensolve.
inline double spectral_norm(const LocalOp& op) {
  if (!op.mat.allFinite()) throw std::invalid_argument("spectral_norm: non-finite entries");
  if (op.mat.rows() == 0) return 0.0;
  if (double fast = mono_sparse_norm(op.mat); fast >= 0.0) return fast;
  if (op.hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(op.mat, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Matrix gram = op.mat.adjoint() * op.mat;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  double top = es.eigenvalues().maxCoeff();
  return top > 0 ? std::sqrt(top) : 0.0;
}

inline double spectral_norm(const Matrix& m) {
  LocalOp tmp;
  tmp.mat = m;
  tmp.hermitian = is_hermitian(m);
  return spectral_norm(tmp);
}

/// E_Y: normalized partial trace over support \ Y.
inline LocalOp conditional_expectation(const LocalOp& op, const SiteSet& Y) {
  if (!is_subset(Y, op.support))
    throw std::invalid_argument("conditional_expectation: Y is not a subset of the support");
  if (Y == op.support) return op;
  SiteSet rest = set_difference(op.support, Y);
  auto y_off = index_offsets(Y, op.support, op.q);
  auto rest_off = index_offsets(rest, op.support, op.q);
  int64_t dy = int_pow(op.q, static_cast<int>(Y.size()));
  Matrix out = Matrix::Zero(dy, dy);
  double norm = 1.0 / static_cast<double>(rest_off.size());
  for (int64_t a = 0; a < dy; ++a)
    for (int64_t b = 0; b < dy; ++b) {
      Complex acc(0.0, 0.0);
      for (int64_t c : rest_off) acc += op.mat(y_off[a] + c, y_off[b] + c);
      out(a, b) = acc * norm;
    }
  return make_local_op(Y, std::move(out), op.q);
}

/// e^{it op} via Hermitian eigendecomposition.
inline LocalOp exp_hermitian(const LocalOp& op, double t) {
  if (!op.hermitian) throw std::invalid_argument("exp_hermitian: operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.mat);
  Vector phases(op.mat.rows());
  for (int64_t i = 0; i < op.mat.rows(); ++i)
    phases(i) = std::exp(Complex(0.0, t * es.eigenvalues()(i)));
  LocalOp res;
  res.support = op.support;
  res.q = op.q;
  res.hermitian = false;
  res.mat = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return res;
}

/// In-place A <- (u embedded) * A, with u acting on sub-support sites of A.
inline void apply_local_left(Matrix& A, const Matrix& u, const SiteSet& u_support,
                             const SiteSet& A_support, int q) {
  auto u_off = index_offsets(u_support, A_support, q);
  SiteSet rest = set_difference(A_support, u_support);
  auto rest_off = index_offsets(rest, A_support, q);
  int64_t du = u.rows();
  Matrix rows(du, A.cols());
  for (int64_t c : rest_off) {
    for (int64_t a = 0; a < du; ++a) rows.row(a) = A.row(u_off[a] + c);
    rows = u * rows;
    for (int64_t a = 0; a < du; ++a) A.row(u_off[a] + c) = rows.row(a);
  }
}

/// In-place A <- A * (u embedded).
inline void apply_local_right(Matrix& A, const Matrix& u, const SiteSet& u_support,
                              const SiteSet& A_support, int q) {
  auto u_off = index_offsets(u_support, A_support, q);
  SiteSet rest = set_difference(A_support, u_support);
  auto rest_off = index_offsets(rest, A_support, q);
  int64_t du = u.rows();
  Matrix cols(A.rows(), du);
  for (int64_t c : rest_off) {
    for (int64_t a = 0; a < du; ++a) cols.col(a) = A.col(u_off[a] + c);
    cols = cols * u;
    for (int64_t a = 0; a < du; ++a) A.col(u_off[a] + c) = cols.col(a);
  }
}

/// Drop support sites on which the operator acts as identity; the represented
/// global operator is unchanged, and re-embedding restores the matrix exactly.
inline LocalOp trim(const LocalOp& op, double tol = kHermitianTol) {
  LocalOp cur = op;
  bool changed = true;
  while (changed && cur.support.size() > 1) {
    changed = false;
    for (int x : cur.support) {
      SiteSet keep = set_difference(cur.support, {x});
      LocalOp reduced = conditional_expectation(cur, keep);
      LocalOp back = embed(reduced, cur.support);
      if ((back.mat - cur.mat).cwiseAbs().maxCoeff() <= tol) {
        reduced.hermitian = cur.hermitian;
        cur = reduced;
        changed = true;
        break;
      }
    }
  }
  return cur;
}

/// ||a - b|| on the union support.
inline double op_distance(const LocalOp& a, const LocalOp& b) {
  SiteSet u = set_union(a.support, b.support);
  Matrix d = embed(a, u).mat - embed(b, u).mat;
  LocalOp diff;
  diff.mat = std::move(d);
  diff.hermitian = is_hermitian(diff.mat, 1e-9);
  return spectral_norm(diff);
}

/// Column map of a matrix with at most one nonzero per column: rows[j] is the
/// row of column j's entry (-1 for a zero column). ok = false when any column
/// has two nonzeros.
struct MonoColumns {
  bool ok = false;
  std::vector<int64_t> rows;
  std::vector<Complex> vals;
};

inline MonoColumns mono_columns(const Matrix& m) {
  MonoColumns mc;
  mc.rows.assign(m.cols(), -1);
  mc.vals.assign(m.cols(), Complex(0.0, 0.0));
  for (int64_t j = 0; j < m.cols(); ++j)
    for (int64_t i = 0; i < m.rows(); ++i) {
      if (m(i, j) == Complex(0.0, 0.0)) continue;
      if (mc.rows[j] >= 0) return mc;  // ok stays false
      mc.rows[j] = i;
      mc.vals[j] = m(i, j);
    }
  mc.ok = true;
  return mc;
}

inline double commutator_norm(const LocalOp& a, const LocalOp& b) {
  SiteSet u = set_union(a.support, b.support);
  Matrix ma = embed(a, u).mat;
  Matrix mb = embed(b, u).mat;
  // Fast path for permutation-weighted operands (evolved observables of
  // diagonal models, Pauli strings): both products stay one-entry-per-column;
  // when the two land on the same row everywhere and rows repeat nowhere,
  // [a,b]^dag [a,b] is diagonal and the norm is the max entry difference.
  if (MonoColumns ca = mono_columns(ma); ca.ok) {
    if (MonoColumns cb = mono_columns(mb); cb.ok) {
      int64_t dim = ma.cols();
      std::vector<char> row_used(dim, 0);
      double best = 0.0;
      bool structured = true;
      for (int64_t j = 0; j < dim && structured; ++j) {
        int64_t i1 = -1, i2 = -1;
        Complex v1(0, 0), v2(0, 0);
        if (cb.rows[j] >= 0 && ca.rows[cb.rows[j]] >= 0) {  // (ab) col j
          i1 = ca.rows[cb.rows[j]];
          v1 = ca.vals[cb.rows[j]] * cb.vals[j];
        }
        if (ca.rows[j] >= 0 && cb.rows[ca.rows[j]] >= 0) {  // (ba) col j
          i2 = cb.rows[ca.rows[j]];
          v2 = cb.vals[ca.rows[j]] * ca.vals[j];
        }
        int64_t row = i1 >= 0 ? i1 : i2;
        if (i1 >= 0 && i2 >= 0 && i1 != i2) {
          structured = false;
          break;
        }
        if (row < 0) continue;
        Complex v = v1 - v2;
        if (v == Complex(0.0, 0.0)) continue;
        if (row_used[row]) {
          structured = false;
          break;
        }
        row_used[row] = 1;
        best = std::max(best, std::abs(v));
      }
      if (structured) return best;
    }
  }
  Matrix c = ma * mb - mb * ma;
  LocalOp comm;
  comm.mat = std::move(c);
  comm.hermitian = false;
  return spectral_norm(comm);
}

// ---------------------------------------------------------------------------
// Pauli fast path (q = 2 only)

inline Matrix pauli_matrix(char letter) {
  Matrix m(2, 2);
  switch (letter) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli_matrix: unknown letter");
  }
  return m;
}

/// Tensor product of Pauli letters on named q=2 sites, with a unit phase.
struct PauliString {
  std::map<int, char> letters;  // site -> X/Y/Z (identity sites omitted)
  Complex phase{1.0, 0.0};

  SiteSet support() const {
    SiteSet s;
    for (auto& [site, l] : letters) s.push_back(site);
    return s;
  }
};

inline PauliString make_pauli_string(std::map<int, char> letters, Complex phase = {1.0, 0.0}) {
  for (auto it = letters.begin(); it != letters.end();) {
    if (it->second == 'I') {
      it = letters.erase(it);
    } else {
      if (it->second != 'X' && it->second != 'Y' && it->second != 'Z')
        throw std::invalid_argument("PauliString: letters must be I/X/Y/Z");
      ++it;
    }
  }
  PauliString s;
  s.letters = std::move(letters);
  s.phase = phase;
  return s;
}

/// Two strings commute iff the number of sites where both act with distinct
/// non-identity letters is even.
inline bool pauli_commute(const PauliString& a, const PauliString& b) {
  int anticommuting = 0;
  for (auto& [site, la] : a.letters) {
    auto it = b.letters.find(site);
    if (it != b.letters.end() && it->second != la) ++anticommuting;
  }
  return anticommuting % 2 == 0;
}

inline LocalOp dense_from_pauli(const PauliString& s, Complex coeff = {1.0, 0.0}) {
  SiteSet supp = s.support();
  if (supp.empty()) throw std::invalid_argument("dense_from_pauli: empty string");
  Matrix m(1, 1);
  m(0, 0) = s.phase * coeff;
  for (int site : supp) {
    const Matrix p = pauli_matrix(s.letters.at(site));
    Matrix next(m.rows() * 2, m.cols() * 2);
    for (int64_t i = 0; i < m.rows(); ++i)
      for (int64_t j = 0; j < m.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = m(i, j) * p;
    m = std::move(next);
  }
  return make_local_op(supp, std::move(m), 2);
}

}  // namespace lrlab
