#include "doctest.h"

#include <random>

#include "ellspin/error.hpp"
#include "ellspin/rmatrix.hpp"
#include "oracles.hpp"

using namespace ellspin;

namespace {

EllipticParams ep(double kappa, double N) {
  EllipticParams p;
  p.kappa = kappa;
  p.period = N;
  return p;
}

struct Draw {
  EllipticParams p;
  DynArgs d;
};

Draw draw(std::mt19937_64& g, bool trig = false) {
  Draw r;
  int N = 2 + int(oracle::rand_r(g, 0, 5));
  r.p = ep(trig ? 0.0 : oracle::rand_r(g, 0.3, 1.5), N);
  r.d.eta = oracle::rand_c(g, -0.4, 0.4, -0.4, 0.4);
  r.d.a = oracle::rand_c(g, -1.5, 1.5, -1.5, 1.5);
  r.d.x = oracle::rand_c(g, -1.5, 1.5, -0.7, 0.7);
  return r;
}

double maxabs(const RMatrix4& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("r_check: identity at x = 0, unitarity, literal entries") {
  std::mt19937_64 g(101);
  for (int n = 0; n < 100; ++n) {
    bool trig = n % 4 == 3;
    Draw w = draw(g, trig);
    DynArgs z = w.d;
    z.x = 0.0;
    CHECK(maxabs(r_check(z, w.p) - RMatrix4::Identity()) < 1e-13);
    DynArgs m = w.d;
    m.x = -w.d.x;
    RMatrix4 r = r_check(w.d, w.p);
    CHECK(maxabs(r * r_check(m, w.p) - RMatrix4::Identity()) < 1e-12);
    CHECK(ice_rule_violation(r) == 0.0);
    // entry (2,2) from the theta_1 series directly
    auto T = [&](cplx u) { return oracle::theta_series(u, w.p.kappa, w.p.period); };
    cplx eta = w.d.eta, x = w.d.x, b = w.d.eta * w.d.a;
    CHECK(oracle::rel(r(1, 1), T(eta) * T(x + b) / (T(eta + x) * T(b))) < 1e-11);
    CHECK(oracle::rel(r(2, 1), T(x) * T(eta - b) / (T(x + eta) * T(-b))) < 1e-11);
  }
}

TEST_CASE("r_check: pole on eta*a") {
  EllipticParams p = ep(0.8, 4);
  CHECK_THROWS_AS(r_check({0.3, 4.0 / 0.25, 0.25}, p), PoleError);
  CHECK_THROWS_AS(r_check({0.3, 0.0, 0.25}, p), PoleError);
  CHECK_THROWS_AS(r_check({-0.25, 1.3, 0.25}, p), PoleError);
}

TEST_CASE("r_check_deriv vs finite differences") {
  std::mt19937_64 g(103);
  for (int n = 0; n < 100; ++n) {
    Draw w = draw(g, n % 5 == 0);
    RMatrix4 dr = r_check_deriv(w.d, w.p);
    CHECK(std::abs(dr(0, 0)) == 0.0);
    CHECK(std::abs(dr(3, 3)) == 0.0);
    const double h = 1e-6;
    DynArgs a = w.d, b = w.d;
    a.x += h;
    b.x -= h;
    RMatrix4 fd = (r_check(a, w.p) - r_check(b, w.p)) / (2 * h);
    CHECK(maxabs(fd - dr) < 1e-7 * std::max(1.0, maxabs(dr)));
    cplx eta = w.d.eta, x = w.d.x, c = eta * w.d.a;
    cplx sym = f_ratio(eta, x, c, w.p) * (rho(x + c, w.p) - rho(eta + x, w.p));
    CHECK(oracle::rel(dr(1, 1), sym) < 1e-11);
  }
}

TEST_CASE("exchange: product form equals closed form") {
  std::mt19937_64 g(107);
  double worst = 0;
  for (int n = 0; n < 100; ++n) {
    Draw w = draw(g, n % 5 == 0);
    RMatrix4 e1 = exchange_E(w.d, w.p), e2 = exchange_E_closed(w.d, w.p);
    CHECK(std::abs(e1(0, 0)) == 0.0);
    CHECK(std::abs(e1(3, 3)) == 0.0);
    worst = std::max(worst, maxabs(e1 - e2) / std::max(1.0, maxabs(e2)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("exchange: isotropic limit") {
  RMatrix4 one_minus_p = RMatrix4::Identity() - swap4();
  // kappa > 0: eta -> 0 with eta*a -> 0; the limit holds up to a diagonal
  // conjugation, so compare the spectrum {0, 2} of the central block
  EllipticParams p = ep(0.7, 5);
  auto block_dev = [&](double eta) {
    RMatrix4 e = exchange_E({1.3, {0.9, 0.3}, eta}, p);
    Eigen::Matrix2cd c = e.block<2, 2>(1, 1);
    cplx tr = c.trace(), det = c.determinant();
    return std::max(std::abs(tr - 2.0), std::abs(det));
  };
  double e3 = block_dev(1e-3), e4 = block_dev(1e-4);
  CHECK(e4 < 1e-3);
  CHECK(e3 / e4 > 5.0);  // at least linear convergence
  // kappa = 0: eta*a = -i 1e4 kills the dynamical dependence
  EllipticParams p0 = ep(0.0, 5);
  cplx eta = 1e-4;
  double t4 = maxabs(exchange_E({1.3, cplx(0, -1e4) / eta, eta}, p0) - one_minus_p);
  CHECK(t4 < 1e-3);
}

TEST_CASE("exchange: degenerate normalisation") {
  // locate a zero of V by Newton iteration and evaluate E there
  EllipticParams p = ep(0.8, 4);
  cplx eta(0.3, 0.1), x(2.0, 1.0);
  for (int it = 0; it < 60; ++it) {
    const double h = 1e-6;
    cplx v = potential_V(x, eta, p);
    cplx dv = (potential_V(x + h, eta, p) - potential_V(x - h, eta, p)) / (2 * h);
    x -= v / dv;
  }
  REQUIRE(std::abs(potential_V(x, eta, p)) < 1e-14);
  CHECK_THROWS_AS(exchange_E({x, 1.3, eta}, p), DegenerateError);
}

TEST_CASE("trigonometric R and E") {
  cplx eta(0.3, 0.2);
  int N = 5;
  cplx q = std::exp(I * kPi * eta / double(N));
  RMatrix4 e = e_tri(eta, N);
  CHECK(std::abs(e(1, 1) - 1.0 / q) < 1e-15);
  CHECK(std::abs(e(1, 2) + q) < 1e-15);
  CHECK(std::abs(e(2, 1) + 1.0 / q) < 1e-15);
  CHECK(std::abs(e(2, 2) - q) < 1e-15);
  CHECK(maxabs(e * e - (q + 1.0 / q) * e) < 1e-14);
  CHECK(maxabs(r_tri(0.0, eta, N) - RMatrix4::Identity()) == 0.0);
  CHECK(maxabs(r_tri(0.7, eta, N) * r_tri(-0.7, eta, N) - RMatrix4::Identity()) < 1e-13);

  // exact kappa = 0 branch with eta*a = -i 1e4 reproduces E^tri and R^tri
  EllipticParams p0 = ep(0.0, N);
  cplx a = cplx(0, -1e4) / eta;
  for (cplx x : {cplx(1.3, 0.1), cplx(-2.2, 0.3), cplx(0.4, -0.2)}) {
    CHECK(maxabs(exchange_E({x, a, eta}, p0) - e) < 1e-10);
    CHECK(maxabs(r_check({x, a, eta}, p0) - r_tri(x, eta, N)) < 1e-10);
  }
  // small kappa: the gaussian factor of theta leaves an O(kappa) residue
  EllipticParams ps = ep(1e-3, N);
  cplx as = cplx(0, -15.0) / eta;
  CHECK(maxabs(exchange_E({1.3, as, eta}, ps) - e) < 5e-2);
}

TEST_CASE("dynamical Heisenberg E and R") {
  std::mt19937_64 g(109);
  for (int n = 0; n < 50; ++n) {
    double gamma = oracle::rand_r(g, 0.05, 0.45);
    cplx a = oracle::rand_c(g, -2, 2, -1, 1);
    RMatrix4 e = e_heis(a, gamma);
    cplx s = std::sin(kPi * gamma * a);
    CHECK(oracle::rel(e(1, 1), std::sin(kPi * gamma * (a - 1.0)) / s) < 1e-13);
    CHECK(oracle::rel(e(1, 2), -std::sin(kPi * gamma * (a + 1.0)) / s) < 1e-13);
    CHECK(maxabs(e * e - 2.0 * std::cos(kPi * gamma) * e) < 1e-12 * std::max(1.0, maxabs(e)));
  }
  RMatrix4 one_minus_p = RMatrix4::Identity() - swap4();
  double d6 = maxabs(e_heis(cplx(0, -1e4), 1e-6) - one_minus_p);
  double d7 = maxabs(e_heis(cplx(0, -1e4), 1e-7) - one_minus_p);
  // entries approach those of 1-P with an O(1/|a|) dynamical remainder
  CHECK(d6 < 2e-4);
  CHECK(d7 < 2e-4);
  CHECK_THROWS_AS(e_heis(0.0, 0.3), PoleError);
}

TEST_CASE("dynamical Yang-Baxter equation") {
  std::mt19937_64 g(113);
  double worst = 0, worst_trig = 0, degenerate = 0;
  for (int n = 0; n < 100; ++n) {
    Draw w = draw(g);
    cplx x1 = oracle::rand_c(g, -1.5, 1.5, -0.7, 0.7), x2 = oracle::rand_c(g, -1.5, 1.5, -0.7, 0.7);
    worst = std::max(worst, dybe_residual(w.d.x, x1, x2, w.d.a, w.d.eta, w.p));
    degenerate = std::max(degenerate, dybe_residual(w.d.x, x1, x1, w.d.a, w.d.eta, w.p));
    Draw t = draw(g, true);
    worst_trig = std::max(worst_trig, dybe_residual(t.d.x, x1, x2, t.d.a, t.d.eta, t.p));
  }
  CHECK(worst < 1e-11);
  CHECK(degenerate < 1e-12);
  CHECK(worst_trig < 1e-12);
}
