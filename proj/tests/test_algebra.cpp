#include <catch_amalgamated.hpp>
#include <random>

#include "lrlab/algebra.hpp"

using namespace lrlab;

namespace {

Matrix random_matrix(int64_t dim, std::mt19937_64& rng) {
  auto u = [&] { return 2.0 * ((rng() >> 11) * 0x1p-53) - 1.0; };
  Matrix m(dim, dim);
  for (int64_t i = 0; i < dim; ++i)
    for (int64_t j = 0; j < dim; ++j) m(i, j) = Complex(u(), u());
  return m;
}

Matrix random_hermitian(int64_t dim, std::mt19937_64& rng) {
  Matrix m = random_matrix(dim, rng);
  return Matrix(0.5 * (m + m.adjoint()));
}

}  // namespace

TEST_CASE("embedding convention") {
  LocalOp z = make_local_op({3}, pauli_matrix('Z'), 2);
  REQUIRE(embed(z, {3}).mat == z.mat);

  LocalOp z0 = make_local_op({0}, pauli_matrix('Z'), 2);
  Matrix e = embed(z0, {0, 1}).mat;
  Matrix want(4, 4);
  want.setZero();
  want(0, 0) = 1;
  want(1, 1) = 1;
  want(2, 2) = -1;
  want(3, 3) = -1;
  REQUIRE((e - want).cwiseAbs().maxCoeff() == 0.0);

  REQUIRE_THROWS_AS(embed(z, {0, 1}), std::invalid_argument);
}

TEST_CASE("embedding preserves the norm") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    LocalOp a = make_local_op({1, 4}, random_matrix(4, rng), 2);
    LocalOp big = embed(a, {0, 1, 2, 4, 6});
    REQUIRE(spectral_norm(big) == Catch::Approx(spectral_norm(a)).epsilon(1e-10));
  }
}

TEST_CASE("spectral norms") {
  REQUIRE(spectral_norm(make_local_op({0}, pauli_matrix('Z'), 2)) == Catch::Approx(1.0));
  REQUIRE(spectral_norm(make_local_op({0}, Matrix::Zero(2, 2), 2)) == 0.0);
  Matrix m(2, 2);
  m << 0, 2, 0, 0;
  REQUIRE(spectral_norm(make_local_op({0}, m, 2)) == Catch::Approx(2.0).epsilon(1e-12));

  Matrix bad(2, 2);
  bad << 1, 0, 0, std::numeric_limits<double>::quiet_NaN();
  LocalOp op;
  op.support = {0};
  op.mat = bad;
  REQUIRE_THROWS_AS(spectral_norm(op), std::invalid_argument);
}

TEST_CASE("sparse norm fast path agrees with the eigensolver") {
  std::mt19937_64 rng(11);
  // permutation-weighted matrices: exercise the mono path against a dense copy
  for (int trial = 0; trial < 5; ++trial) {
    int64_t dim = 16;
    std::vector<int> perm(dim);
    for (int64_t i = 0; i < dim; ++i) perm[i] = static_cast<int>(i);
    for (int64_t i = dim - 1; i > 0; --i) std::swap(perm[i], perm[rng() % (i + 1)]);
    Matrix m = Matrix::Zero(dim, dim);
    for (int64_t j = 0; j < dim; ++j)
      m(perm[j], j) = Complex(2.0 * ((rng() >> 11) * 0x1p-53) - 1.0, 0.3);
    REQUIRE(mono_sparse_norm(m) >= 0.0);
    Matrix gram = m.adjoint() * m;
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    REQUIRE(mono_sparse_norm(m) == Catch::Approx(std::sqrt(es.eigenvalues().maxCoeff())));
  }
  Matrix dense = random_matrix(8, rng);
  REQUIRE(mono_sparse_norm(dense) < 0.0);
}

TEST_CASE("conditional expectation") {
  LocalOp id = identity_op({0, 1, 2});
  REQUIRE((conditional_expectation(id, {1}).mat - Matrix::Identity(2, 2)).norm() == 0.0);

  LocalOp zx = dense_from_pauli(make_pauli_string({{0, 'Z'}}));
  LocalOp big = embed(zx, {0, 1});
  REQUIRE(conditional_expectation(big, {1}).mat.cwiseAbs().maxCoeff() <= 1e-15);

  // restriction to operators already inside Y is the identity
  std::mt19937_64 rng(3);
  LocalOp a = make_local_op({1}, random_hermitian(2, rng), 2);
  LocalOp emb = embed(a, {0, 1, 2});
  LocalOp back = conditional_expectation(emb, {1});
  REQUIRE((back.mat - a.mat).cwiseAbs().maxCoeff() <= 1e-14);

  REQUIRE_THROWS_AS(conditional_expectation(a, {0, 3}), std::invalid_argument);
}

TEST_CASE("conditional expectation is a contraction and a projection") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    LocalOp a = make_local_op({0, 1, 2}, random_hermitian(8, rng), 2);
    LocalOp once = conditional_expectation(a, {0, 2});
    REQUIRE(spectral_norm(once) <= spectral_norm(a) + 1e-12);
    LocalOp twice = conditional_expectation(embed(once, {0, 1, 2}), {0, 2});
    REQUIRE((twice.mat - once.mat).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("hermitian exponentials") {
  LocalOp z = make_local_op({0}, pauli_matrix('Z'), 2);
  REQUIRE((exp_hermitian(z, 0.0).mat - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-15);
  LocalOp e = exp_hermitian(z, 0.7);
  REQUIRE(std::abs(e.mat(0, 0) - std::exp(Complex(0, 0.7))) <= 1e-13);
  REQUIRE(std::abs(e.mat(1, 1) - std::exp(Complex(0, -0.7))) <= 1e-13);
  REQUIRE(std::abs(e.mat(0, 1)) <= 1e-15);

  // ZZ coupler adds opposite phases on aligned/anti-aligned basis states
  LocalOp zz = dense_from_pauli(make_pauli_string({{0, 'Z'}, {1, 'Z'}}));
  LocalOp u = exp_hermitian(zz, 0.3);
  REQUIRE(std::abs(u.mat(0, 0) - std::exp(Complex(0, 0.3))) <= 1e-13);
  REQUIRE(std::abs(u.mat(1, 1) - std::exp(Complex(0, -0.3))) <= 1e-13);

  std::mt19937_64 rng(9);
  LocalOp h = make_local_op({0, 1}, random_hermitian(4, rng), 2);
  Matrix prod = exp_hermitian(h, 0.4).mat * exp_hermitian(h, 1.1).mat;
  REQUIRE((prod - exp_hermitian(h, 1.5).mat).cwiseAbs().maxCoeff() <= 1e-10);
  Matrix uu = exp_hermitian(h, 2.0).mat;
  REQUIRE((uu * uu.adjoint() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-10);

  LocalOp nonherm = make_local_op({0}, random_matrix(2, rng), 2);
  REQUIRE_THROWS_AS(exp_hermitian(nonherm, 1.0), std::invalid_argument);
}

TEST_CASE("pauli strings") {
  REQUIRE(pauli_commute(make_pauli_string({{0, 'X'}}), make_pauli_string({{1, 'Z'}})));
  REQUIRE_FALSE(pauli_commute(make_pauli_string({{0, 'X'}}), make_pauli_string({{0, 'Z'}})));
  REQUIRE(pauli_commute(make_pauli_string({{0, 'X'}, {1, 'X'}}),
                        make_pauli_string({{0, 'Z'}, {1, 'Z'}})));
  REQUIRE_THROWS_AS(make_pauli_string({{0, 'Q'}}), std::invalid_argument);
  // identity letters are stripped
  REQUIRE(make_pauli_string({{0, 'I'}, {1, 'X'}}).support() == SiteSet{1});
}

TEST_CASE("symbolic commutation agrees with dense on random pairs") {
  std::mt19937_64 rng(2026);
  const char letters[3] = {'X', 'Y', 'Z'};
  for (int trial = 0; trial < 10000; ++trial) {
    std::map<int, char> la, lb;
    int ka = 1 + static_cast<int>(rng() % 3), kb = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < ka; ++i) la[static_cast<int>(rng() % 8)] = letters[rng() % 3];
    for (int i = 0; i < kb; ++i) lb[static_cast<int>(rng() % 8)] = letters[rng() % 3];
    PauliString a = make_pauli_string(la), b = make_pauli_string(lb);
    double dense = commutator_norm(dense_from_pauli(a), dense_from_pauli(b));
    REQUIRE(pauli_commute(a, b) == (dense <= 1e-12));
  }
}

TEST_CASE("trim round trip") {
  std::mt19937_64 rng(4);
  LocalOp a = make_local_op({2, 5}, random_hermitian(4, rng), 2);
  LocalOp fat = embed(a, {0, 2, 5, 7});
  LocalOp slim = trim(fat);
  REQUIRE(slim.support == a.support);
  REQUIRE((slim.mat - a.mat).cwiseAbs().maxCoeff() <= 1e-12);
  REQUIRE((embed(slim, fat.support).mat - fat.mat).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("dimension cap guards full-space requests") {
  REQUIRE_THROWS_AS(check_dim_cap(20, 2), std::invalid_argument);
  REQUIRE_NOTHROW(check_dim_cap(dense_site_cap(), 2));
}

TEST_CASE("dense pauli construction matches explicit kroneckers") {
  LocalOp xz = dense_from_pauli(make_pauli_string({{0, 'X'}, {2, 'Z'}}));
  Matrix x = pauli_matrix('X'), z = pauli_matrix('Z');
  Matrix want(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      want.block(2 * a, 2 * b, 2, 2) = x(a, b) * z;  // first sorted site is the high bit
  REQUIRE((xz.mat - want).cwiseAbs().maxCoeff() == 0.0);
}
