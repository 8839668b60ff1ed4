#include <doctest.h>

#include <okt/snf.hpp>

#include "oracle_minors.hpp"
#include "test_util.hpp"

using namespace okt;

namespace {

IntMat make(std::initializer_list<std::initializer_list<long long>> rows) {
  IntMat m(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (long long v : r) m(i, j++) = Int(v);
    ++i;
  }
  return m;
}

void check_decomposition(const IntMat& a) {
  auto snf = smith_normal_form<Int>(a);
  CHECK(is_zero(IntMat(snf.u * snf.s * snf.v - a)));
  CHECK(is_zero(IntMat(snf.u * snf.u_inv - IntMat::Identity(a.rows(), a.rows()))));
  CHECK(is_zero(IntMat(snf.v * snf.v_inv - IntMat::Identity(a.cols(), a.cols()))));
  // diagonal shape, nonnegative, divisibility chain, rank position
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (i != j) CHECK(snf.s(i, j).is_zero());
  const Index n = std::min(a.rows(), a.cols());
  for (Index i = 0; i < n; ++i) CHECK(snf.s(i, i) >= Int(0));
  for (Index i = 0; i + 1 < n; ++i) {
    if (!snf.s(i + 1, i + 1).is_zero()) CHECK_FALSE(snf.s(i, i).is_zero());
    if (!snf.s(i, i).is_zero()) CHECK(divides(snf.s(i, i), snf.s(i + 1, i + 1)));
  }
  // agreement with the minors-gcd oracle
  auto facs = oracle::invariant_factors(a);
  CHECK(static_cast<Index>(facs.size()) == snf.rank);
  for (Index i = 0; i < snf.rank; ++i)
    CHECK(snf.s(i, i) == facs[static_cast<std::size_t>(i)]);
}

}  // namespace

TEST_CASE("smith normal form: frozen small cases") {
  auto snf = smith_normal_form<Int>(make({{2, 4}, {6, 8}}));
  CHECK(snf.s(0, 0) == Int(2));
  CHECK(snf.s(1, 1) == Int(4));
  CHECK(snf.rank == 2);

  auto snf2 = smith_normal_form<Int>(make({{1, 2}, {2, 4}}));
  CHECK(snf2.s(0, 0) == Int(1));
  CHECK(snf2.s(1, 1) == Int(0));
  CHECK(snf2.rank == 1);

  // A divisibility fix-up is required here: diag(2, 3) is not in Smith form.
  auto snf3 = smith_normal_form<Int>(make({{2, 0}, {0, 3}}));
  CHECK(snf3.s(0, 0) == Int(1));
  CHECK(snf3.s(1, 1) == Int(6));
}

TEST_CASE("smith normal form: zero and identity") {
  check_decomposition(IntMat::Zero(3, 4));
  check_decomposition(IntMat::Identity(4, 4));
  check_decomposition(IntMat::Zero(1, 1));
}

TEST_CASE("smith normal form: seeded random matrices vs minors oracle") {
  std::mt19937_64 rng(20240811);
  for (int iter = 0; iter < 60; ++iter) {
    Index r = 1 + static_cast<Index>(rng() % 5);
    Index c = 1 + static_cast<Index>(rng() % 5);
    IntMat a = testutil::rand_mat(rng, r, c, -9, 9);
    if (iter % 3 == 0) a.row(0).setZero();          // rank deficiencies
    if (iter % 5 == 0 && c >= 2) a.col(1) = a.col(0);
    check_decomposition(a);
  }
}

TEST_CASE("solve_linear: frozen and random") {
  auto x = solve_linear(make({{1, 2}, {3, 4}}), IntVec(make({{1}, {1}}).col(0)));
  REQUIRE(x.has_value());
  CHECK((*x)(0) == Int(-1));
  CHECK((*x)(1) == Int(1));

  CHECK_FALSE(solve_linear(make({{2}}), IntVec(make({{1}}).col(0))).has_value());
  CHECK_FALSE(solve_linear(make({{1}, {1}}), IntVec(make({{1}, {2}}).col(0))).has_value());

  std::mt19937_64 rng(77001);
  for (int iter = 0; iter < 40; ++iter) {
    Index r = 1 + static_cast<Index>(rng() % 4);
    Index c = 1 + static_cast<Index>(rng() % 4);
    IntMat a = testutil::rand_mat(rng, r, c, -7, 7);
    IntVec x0 = testutil::rand_vec(rng, c, -5, 5);
    IntVec b = a * x0;
    auto y = solve_linear(a, b);
    REQUIRE(y.has_value());
    CHECK(is_zero(IntMat(a * *y - b)));
  }
}

TEST_CASE("kernel_basis spans the kernel lattice") {
  IntMat a = make({{1, 2, 3}});
  IntMat k = kernel_basis(a);
  CHECK(k.cols() == 2);
  CHECK(is_zero(IntMat(a * k)));
  // saturation: these integer kernel vectors must lie in the lattice
  CHECK(lattice_contains(k, IntVec(make({{2}, {-1}, {0}}).col(0))));
  CHECK(lattice_contains(k, IntVec(make({{3}, {0}, {-1}}).col(0))));
  CHECK_FALSE(lattice_contains(k, IntVec(make({{1}, {0}, {0}}).col(0))));

  std::mt19937_64 rng(5150);
  for (int iter = 0; iter < 30; ++iter) {
    Index r = 1 + static_cast<Index>(rng() % 3);
    Index c = 1 + static_cast<Index>(rng() % 5);
    IntMat m = testutil::rand_mat(rng, r, c, -6, 6);
    IntMat kb = kernel_basis(m);
    CHECK(is_zero(IntMat(m * kb)));
    auto snf = smith_normal_form<Int>(m);
    CHECK(kb.cols() == c - snf.rank);
  }
}

TEST_CASE("kron matches the vec identity") {
  std::mt19937_64 rng(424242);
  for (int iter = 0; iter < 25; ++iter) {
    Index p = 1 + static_cast<Index>(rng() % 3);
    Index q = 1 + static_cast<Index>(rng() % 3);
    Index r = 1 + static_cast<Index>(rng() % 3);
    Index s = 1 + static_cast<Index>(rng() % 3);
    IntMat l = testutil::rand_mat(rng, p, q, -5, 5);
    IntMat x = testutil::rand_mat(rng, q, r, -5, 5);
    IntMat rr = testutil::rand_mat(rng, r, s, -5, 5);
    IntVec lhs = vectorize(IntMat(l * x * rr));
    IntVec rhs = kron(IntMat(rr.transpose()), l) * vectorize(x);
    CHECK(is_zero(IntMat(lhs - rhs)));
    CHECK(is_zero(IntMat(unvectorize(vectorize(x), q, r) - x)));
  }
}

TEST_CASE("matrix equation system: sylvester-style solve") {
  std::mt19937_64 rng(99031);
  IntMat a = testutil::rand_mat(rng, 3, 3, -4, 4);
  IntMat b = testutil::rand_mat(rng, 2, 2, -4, 4);
  IntMat x0 = testutil::rand_mat(rng, 3, 2, -4, 4);
  IntMat c = a * x0 - x0 * b;

  MatrixEquationSystem sys;
  int x = sys.add_unknown(3, 2);
  sys.add_equation({{a, x, IntMat::Identity(2, 2)},
                    {IntMat(-IntMat::Identity(3, 3)), x, b}},
                   c);
  auto sol = sys.solve();
  REQUIRE(sol.has_value());
  CHECK(is_zero(IntMat(a * (*sol)[0] - (*sol)[0] * b - c)));
}

TEST_CASE("matrix equation system: inconsistent over the integers") {
  MatrixEquationSystem sys;
  int x = sys.add_unknown(1, 1);
  IntMat two(1, 1), one(1, 1);
  two(0, 0) = Int(2);
  one(0, 0) = Int(1);
  sys.add_equation({{two, x, IntMat::Identity(1, 1)}}, one);
  CHECK_FALSE(sys.solve().has_value());
}

TEST_CASE("matrix equation system: coupled unknowns") {
  // X + Y = A, X - Y = B has integer solutions iff A + B is even entrywise.
  MatrixEquationSystem sys;
  int x = sys.add_unknown(2, 2);
  int y = sys.add_unknown(2, 2);
  IntMat i2 = IntMat::Identity(2, 2);
  IntMat a = IntMat::Constant(2, 2, Int(4));
  IntMat b = IntMat::Constant(2, 2, Int(2));
  sys.add_equation({{i2, x, i2}, {i2, y, i2}}, a);
  sys.add_equation({{i2, x, i2}, {IntMat(-i2), y, i2}}, b);
  auto sol = sys.solve();
  REQUIRE(sol.has_value());
  CHECK(is_zero(IntMat((*sol)[0] + (*sol)[1] - a)));
  CHECK(is_zero(IntMat((*sol)[0] - (*sol)[1] - b)));

  MatrixEquationSystem bad;
  int z = bad.add_unknown(1, 1);
  int w = bad.add_unknown(1, 1);
  IntMat i1 = IntMat::Identity(1, 1);
  bad.add_equation({{i1, z, i1}, {i1, w, i1}}, i1);
  bad.add_equation({{i1, z, i1}, {IntMat(-i1), w, i1}}, IntMat::Zero(1, 1));
  CHECK_FALSE(bad.solve().has_value());
}
