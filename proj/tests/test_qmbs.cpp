#include "doctest.h"

#include <random>

#include "ellspin/error.hpp"
#include "ellspin/qmbs.hpp"
#include "ellspin/sampling.hpp"
#include "oracles.hpp"

using namespace ellspin;

namespace {

QmbsParams draw(std::mt19937_64& g, int N) {
  QmbsParams q;
  q.chain = random_chain_params(g, N);
  return q;
}

Point point(std::mt19937_64& g, const QmbsParams& q) {
  return random_generic_point(g, q.chain.N, q.chain.elliptic(), q.step());
}

// f(x) = exp(lambda . x) v
VectorFn exponential(std::mt19937_64& g, int N) {
  std::vector<cplx> lambda(N);
  for (cplx& l : lambda) l = oracle::rand_c(g, -0.5, 0.5, -0.5, 0.5);
  Vector v(1L << N);
  for (long k = 0; k < v.size(); ++k) v(k) = oracle::rand_c(g, -1, 1, -1, 1);
  return [lambda, v](const Point& x) {
    cplx s = 0;
    for (size_t k = 0; k < x.size(); ++k) s += lambda[k] * x[k];
    return Vector(std::exp(s) * v);
  };
}

double maxabs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("D_1 for N=3 matches the printed expansion") {
  std::mt19937_64 g(301);
  QmbsParams q = draw(g, 3);
  Point x = point(g, q);
  const ChainParams& p = q.chain;
  const cplx c = q.step();
  DiffOp d = build_d1(q);
  auto P = [&](int i, cplx arg) { return perm_P(i, arg, p).matrix; };
  Matrix c1 = coefficient_A(1, x, p) * SpinOperator::identity(3).matrix;
  // Gamma_i f(x) = f(x - c e_i) moves to the right with x_i -> x_i - c
  Matrix c2 = coefficient_A(2, x, p) * P(1, x[1] - x[0]) * P(1, x[0] - (x[1] - c));
  Matrix c3 = coefficient_A(3, x, p) * P(2, x[2] - x[1]) * P(1, x[2] - x[0]) * P(1, x[0] - (x[2] - c)) *
              P(2, x[1] - (x[2] - c));
  CHECK(maxabs(d.coefficient({1, 0, 0}, x) - c1) < 1e-13);
  CHECK(maxabs(d.coefficient({0, 1, 0}, x) - c2) < 1e-12);
  CHECK(maxabs(d.coefficient({0, 0, 1}, x) - c3) < 1e-12);
  CHECK(d.terms().size() == 3);

  DiffOp dm = build_dminus1(q);
  Point mx = {-x[0], -x[1], -x[2]};
  Matrix m3 = coefficient_A(3, mx, p) * SpinOperator::identity(3).matrix;
  Matrix m2 = coefficient_A(2, mx, p) * P(2, x[2] - x[1]) * P(2, (x[1] + c) - x[2]);
  Matrix m1 = coefficient_A(1, mx, p) * P(1, x[1] - x[0]) * P(2, x[2] - x[0]) * P(2, (x[0] + c) - x[2]) *
              P(1, (x[0] + c) - x[1]);
  CHECK(maxabs(dm.coefficient({0, 0, -1}, x) - m3) < 1e-13);
  CHECK(maxabs(dm.coefficient({0, -1, 0}, x) - m2) < 1e-12);
  CHECK(maxabs(dm.coefficient({-1, 0, 0}, x) - m1) < 1e-12);
}

TEST_CASE("coefficient A_i against the theta series") {
  std::mt19937_64 g(303);
  QmbsParams q = draw(g, 4);
  Point x = point(g, q);
  auto T = [&](cplx u) { return oracle::theta_series(u, q.chain.kappa, 4); };
  for (int i = 1; i <= 4; ++i) {
    cplx expect = 1.0;
    for (int j = 1; j <= 4; ++j)
      if (j != i) expect *= T(x[i - 1] - x[j - 1] + q.chain.eta) / T(x[i - 1] - x[j - 1]);
    CHECK(oracle::rel(coefficient_A(i, x, q.chain), expect) < 1e-11);
  }
  Point coincident = x;
  coincident[1] = coincident[0];
  CHECK_THROWS_AS(coefficient_A(1, coincident, q.chain), PoleError);
  CHECK_THROWS_AS(build_d1(q).coefficient({0, 1, 0, 0}, coincident), PoleError);
}

TEST_CASE("spinless reduction at eta -> 0 and a -> -i infinity, trigonometric") {
  // kappa = 0 with eta a = -i 1e4: the deformed permutation is R^tri, which
  // tends to the plain swap as eta -> 0
  std::mt19937_64 g(305);
  QmbsParams q;
  q.chain.N = 3;
  q.chain.kappa = 0.0;
  q.chain.eta = cplx(0, 1e-7);
  q.chain.a = cplx(0, -1e4) / q.chain.eta;
  Point x = point(g, q);
  DiffOp d = build_d1(q), dm = build_dminus1(q);
  Matrix s12 = plain_swap(1, 2, 3).matrix, s23 = plain_swap(2, 3, 3).matrix;
  // the plain permutation products are palindromic and collapse to 1
  Matrix c3 = coefficient_A(3, x, q.chain) * s23 * s12 * s12 * s23;
  CHECK(maxabs(d.coefficient({0, 0, 1}, x) - c3) < 1e-5);
  Matrix c2 = coefficient_A(2, x, q.chain) * s12 * s12;
  CHECK(maxabs(d.coefficient({0, 1, 0}, x) - c2) < 1e-5);
  Point mx = {-x[0], -x[1], -x[2]};
  CHECK(maxabs(dm.coefficient({-1, 0, 0}, x) - coefficient_A(1, mx, q.chain) * s12 * s23 * s23 * s12) < 1e-5);
  // and the spinless Ruijsenaars coefficients are the theta ratios
  auto T = [](cplx u) { return oracle::theta_series(u, 0.0, 3); };
  cplx a2 = T(x[1] - x[0] + q.chain.eta) / T(x[1] - x[0]) * T(x[1] - x[2] + q.chain.eta) / T(x[1] - x[2]);
  CHECK(oracle::rel(coefficient_A(2, x, q.chain), a2) < 1e-12);
}

TEST_CASE("commutativity of D_1, D_-1 and D_N") {
  std::mt19937_64 g(307);
  double worst = 0, worst_n = 0;
  for (int N = 2; N <= 3; ++N)
    for (int n = 0; n < 10; ++n) {
      QmbsParams q = draw(g, N);
      DiffOp d1 = build_d1(q), dm = build_dminus1(q), dn = build_dN(q);
      Point x = point(g, q);
      worst = std::max(worst, commutator_residual(d1, dm, x));
      worst_n = std::max(worst_n, commutator_residual(d1, dn, x));
      worst_n = std::max(worst_n, commutator_residual(dm, dn, x));
    }
  CHECK(worst < 1e-9);
  CHECK(worst_n < 1e-12);
  // spot check at N = 4
  QmbsParams q = draw(g, 4);
  CHECK(commutator_residual(build_d1(q), build_dminus1(q), point(g, q)) < 1e-9);
  // control: mismatched dynamical parameter breaks commutativity
  QmbsParams other = q;
  other.chain.a += 0.3;
  CHECK(commutator_residual(build_d1(q), build_dminus1(other), point(g, q)) > 1e-4);
  QmbsParams q3 = draw(g, 3), o3 = q3;
  o3.chain.eta *= 1.1;
  CHECK(commutator_residual(build_d1(q3), build_dminus1(o3), point(g, q3)) > 1e-4);
}

TEST_CASE("compose: normal form and the empty operator") {
  std::mt19937_64 g(309);
  QmbsParams q = draw(g, 3);
  DiffOp d1 = build_d1(q), dm = build_dminus1(q);
  DiffOp empty(q);
  CHECK(compose(d1, empty).empty());
  CHECK(compose(empty, d1).empty());
  VectorFn f = exponential(g, 3);
  Point x = point(g, q);
  Vector lhs = apply(compose(d1, dm), f, x);
  Vector rhs = apply(d1, [&](const Point& y) { return apply(dm, f, y); }, x);
  CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
  // D_N is the pure total shift
  Vector s = apply(build_dN(q), f, x);
  Point y = x;
  for (cplx& v : y) v -= q.step();
  CHECK((s - f(y)).norm() < 1e-14 * s.norm());
}

TEST_CASE("P^tot invariance") {
  std::mt19937_64 g(311);
  for (int N = 2; N <= 3; ++N)
    for (int n = 0; n < 5; ++n) {
      QmbsParams q = draw(g, N);
      DiffOp d1 = build_d1(q), dm = build_dminus1(q);
      VectorFn f = exponential(g, N);
      Point x = point(g, q);
      for (int i = 1; i < N; ++i) {
        CHECK(ptot_invariance_residual(d1, i, f, x) < 1e-10);
        CHECK(ptot_invariance_residual(dm, i, f, x) < 1e-10);
        // (P^tot)^2 = 1
        Vector twice = ptot_apply(i, [&](const Point& y) { return ptot_apply(i, f, y, q); }, x, q);
        CHECK((twice - f(x)).norm() < 1e-12 * f(x).norm());
        // coefficient level
        DiffOp c = ptot_conjugate(d1, i);
        for (const auto& t : d1.terms()) CHECK(maxabs(c.coefficient(t.first, x) - d1.coefficient(t.first, x)) < 1e-10 * std::max(1.0, maxabs(d1.coefficient(t.first, x))));
      }
    }
}

TEST_CASE("higher charges from the seed") {
  std::mt19937_64 g(313);
  for (int N = 2; N <= 4; ++N) {
    QmbsParams q = draw(g, N);
    Point x = point(g, q);
    DiffOp h1 = build_higher(1, 1, q), d1 = build_d1(q);
    DiffOp hm = build_higher(1, -1, q), dm = build_dminus1(q);
    for (const auto& t : d1.terms())
      CHECK(maxabs(h1.coefficient(t.first, x) - d1.coefficient(t.first, x)) < 1e-11 * std::max(1.0, maxabs(d1.coefficient(t.first, x))));
    for (const auto& t : dm.terms())
      CHECK(maxabs(hm.coefficient(t.first, x) - dm.coefficient(t.first, x)) < 1e-11 * std::max(1.0, maxabs(dm.coefficient(t.first, x))));
    DiffOp top = build_higher(N, 1, q);
    REQUIRE(top.terms().size() == 1);
    CHECK(top.terms().begin()->first == Shift(N, 1));
    CHECK(maxabs(top.coefficient(Shift(N, 1), x) - SpinOperator::identity(N).matrix) < 1e-14);
    for (int r = 1; r <= N; ++r)
      for (int sign : {1, -1}) {
        DiffOp h = build_higher(r, sign, q);
        size_t binom = 1;
        for (int k = 0; k < r; ++k) binom = binom * (N - k) / (k + 1);
        CHECK(h.terms().size() == binom);
        VectorFn f = exponential(g, N);
        for (int i = 1; i < N; ++i) CHECK(ptot_invariance_residual(h, i, f, x) < 1e-10);
      }
  }
  QmbsParams q = draw(g, 3);
  CHECK_THROWS_AS(build_higher(0, 1, q), ParameterError);
  CHECK_THROWS_AS(build_higher(2, 0, q), ParameterError);
}

TEST_CASE("higher charges commute with D_1 at N=3") {
  std::mt19937_64 g(315);
  QmbsParams q = draw(g, 3);
  Point x = point(g, q);
  CHECK(commutator_residual(build_d1(q), build_higher(2, 1, q), x) < 1e-9);
  CHECK(commutator_residual(build_dminus1(q), build_higher(2, -1, q), x) < 1e-9);
}

TEST_CASE("classical equilibria") {
  std::mt19937_64 g(317);
  for (int N = 2; N <= 5; ++N)
    for (int n = 0; n < 3; ++n) {
      ChainParams p = random_chain_params(g, N);
      cplx eps(0, 0.1);
      EquilibriumConfig e1 = equilibrium_1(p, eps);
      std::vector<cplx> a1 = classical_coefficients(e1.x, e1.coupling, e1.tau);
      for (cplx a : a1) CHECK(std::abs(a - e1.a_star) < 1e-11 * std::abs(e1.a_star));
      CHECK(equilibrium_residual(e1) < 1e-10);

      EquilibriumConfig e2 = equilibrium_2(p, eps);
      std::vector<cplx> v2 = classical_velocities(e2);
      for (cplx v : v2) CHECK(std::abs(v - v2[0]) < 1e-11 * std::abs(v2[0]));
      CHECK(std::abs(v2[0] - eps * e2.a_star) < 1e-10 * std::abs(eps * e2.a_star));
      CHECK(equilibrium_residual(e2) < 1e-10);

      for (EquilibriumConfig e : {e1, e2}) {
        e.x[0] += 0.01;
        CHECK(equilibrium_residual(e) > 1e-4);
      }
    }
}

TEST_CASE("equilibrium coefficients in the printed form") {
  // A_j(x*; eta/omega-coupling) = exp(-(N - 2j + 1) eta kappa) A* at the second equilibrium
  ChainParams p;
  p.N = 4;
  p.kappa = 0.8;
  p.eta = cplx(0.25, 0.15);
  EquilibriumConfig e = equilibrium_2(p, cplx(0, 0.1));
  std::vector<cplx> a = classical_coefficients(e.x, e.coupling, e.tau);
  for (int j = 1; j <= 4; ++j) {
    cplx expect = std::exp(-double(4 - 2 * j + 1) * p.eta * p.kappa) * e.a_star;
    CHECK(oracle::rel(a[j - 1], expect) < 1e-11);
  }
  CHECK_THROWS_AS(equilibrium_1(ChainParams{.kappa = 0.0}, 0.1), ParameterError);
}

TEST_CASE("freezing reproduces the chiral hamiltonians") {
  std::mt19937_64 g(319);
  for (int N = 2; N <= 4; ++N)
    for (int n = 0; n < 3; ++n) {
      ChainParams p = random_chain_params(g, N);
      for (Chirality c : {Chirality::Left, Chirality::Right}) {
        FreezeResult r = freeze_check(c, p);
        CHECK(r.gate_residual < 1e-10);
        CHECK(r.deviation < 1e-7);
        CHECK(std::abs(r.fitted_constant - r.a_star) < 1e-7 * std::abs(r.a_star));
        if (N > 2) CHECK(r.unweighted_spread > 1e-6);
      }
    }
}

TEST_CASE("freezing near eta -> 0 approaches the Inozemtsev chain") {
  std::mt19937_64 g(321);
  ChainParams p = random_chain_params(g, 4);
  auto dev = [&](double eta) {
    ChainParams q = p;
    q.eta = eta * std::exp(I * 0.4);
    FreezeResult r = freeze_check(Chirality::Left, q, 1e-6);
    SpinOperator scaled{4, r.frozen.matrix / r.a_star};
    return spectral_distance(spectrum(scaled), spectrum(h_inozemtsev(q)));
  };
  double d2 = dev(1e-2), d3 = dev(1e-3);
  CHECK(d3 < 1e-2);
  CHECK(d2 / d3 > 5.0);
}
