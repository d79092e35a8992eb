#include "ellspin/rmatrix.hpp"

#include <cmath>
#include <sstream>

#include "ellspin/error.hpp"

namespace ellspin {

namespace {

void check_args(const DynArgs& d, const EllipticParams& p, const char* who) {
  auto bad = [&](cplx z) { return on_theta_lattice(z, p); };
  std::ostringstream os;
  os.precision(12);
  if (bad(d.eta * d.a)) {
    os << who << ": eta*a = " << d.eta * d.a << " lies on the theta zero lattice";
    throw PoleError(os.str());
  }
  if (bad(d.x + d.eta)) {
    os << who << ": x+eta = " << d.x + d.eta << " lies on the theta zero lattice";
    throw PoleError(os.str());
  }
}

RMatrix4 block(cplx a, cplx b, cplx c, cplx d, cplx corner) {
  RMatrix4 m = RMatrix4::Zero();
  m(0, 0) = corner;
  m(3, 3) = corner;
  m(1, 1) = a;
  m(1, 2) = b;
  m(2, 1) = c;
  m(2, 2) = d;
  return m;
}

// sin(u + v)/sin(v) = cos u + sin u cot v
cplx sin_shift_ratio(cplx u, cplx v) {
  cplx cot;
  if (v.imag() >= 0) {
    cot = I * (std::exp(2.0 * I * v) + 1.0) / cexpm1(2.0 * I * v);
  } else {
    cot = -I * (1.0 + std::exp(-2.0 * I * v)) / cexpm1(-2.0 * I * v);
  }
  return std::cos(u) + std::sin(u) * cot;
}

}  // namespace

RMatrix4 swap4() {
  RMatrix4 m = RMatrix4::Zero();
  m(0, 0) = m(3, 3) = 1.0;
  m(1, 2) = m(2, 1) = 1.0;
  return m;
}

RMatrix4 r_check(const DynArgs& d, const EllipticParams& p) {
  check_args(d, p, "r_check");
  const cplx b = d.eta * d.a;
  return block(f_ratio(d.eta, d.x, b, p), f_ratio(d.x, d.eta, b, p), f_ratio(d.x, d.eta, -b, p),
               f_ratio(d.eta, d.x, -b, p), 1.0);
}

RMatrix4 r_check_deriv(const DynArgs& d, const EllipticParams& p) {
  check_args(d, p, "r_check_deriv");
  const cplx b = d.eta * d.a, x = d.x, eta = d.eta;
  ThetaEval te = eval_theta(eta, p), tx = eval_theta(x, p), txe = eval_theta(x + eta, p);
  const cplx rxe = rho(x + eta, p);
  // d/dx f(eta,x,c) = theta(eta) theta'(x+c) / (theta(x+eta) theta(c)) - f rho(x+eta)
  auto d_eta_x = [&](cplx c) {
    ThetaEval tc = eval_theta(c, p), txc = eval_theta(x + c, p);
    cplx first = (te.value * txc.deriv / (txe.value * tc.value)).value();
    cplx f = (te.value * txc.value / (txe.value * tc.value)).value();
    return first - f * rxe;
  };
  // d/dx f(x,eta,c) = theta'(x) theta(eta+c) / (theta(x+eta) theta(c)) - f rho(x+eta)
  auto d_x_eta = [&](cplx c) {
    ThetaEval tc = eval_theta(c, p), tec = eval_theta(eta + c, p);
    cplx first = (tx.deriv * tec.value / (txe.value * tc.value)).value();
    cplx f = (tx.value * tec.value / (txe.value * tc.value)).value();
    return first - f * rxe;
  };
  return block(d_eta_x(b), d_x_eta(b), d_x_eta(-b), d_eta_x(-b), 0.0);
}

RMatrix4 exchange_E(const DynArgs& d, const EllipticParams& p) {
  cplx v = potential_V(d.x, d.eta, p);
  if (std::abs(v) < 1e-14) throw DegenerateError("exchange_E: V(x) vanishes, normalisation undefined");
  DynArgs m = d;
  m.x = -d.x;
  RMatrix4 e = r_check(m, p) * r_check_deriv(d, p) / (theta(d.eta, p) * v);
  e(0, 0) = e(3, 3) = 0.0;  // exact: corners of R are constant
  return e;
}

RMatrix4 exchange_E_closed(const DynArgs& d, const EllipticParams& p) {
  cplx v = potential_V(d.x, d.eta, p);
  if (std::abs(v) < 1e-14) throw DegenerateError("exchange_E: V(x) vanishes, normalisation undefined");
  check_args(d, p, "exchange_E");
  const cplx x = d.x, eta = d.eta, b = d.eta * d.a;
  const cplx rx = rho(x, p), rxe = rho(x + eta, p);
  auto alpha = [&](cplx c) {
    return f_ratio(eta, x, c, p) * f_ratio(eta, -x, c, p) * (rho(x + c, p) - rx) - (rxe - rx);
  };
  auto beta = [&](cplx c) { return f_ratio(x, eta, c, p) * f_ratio(eta, -x, c, p) * (rx - rho(x - c, p)); };
  cplx n = theta(eta, p) * v;
  return block(alpha(b) / n, beta(b) / n, beta(-b) / n, alpha(-b) / n, 0.0);
}

RMatrix4 e_tri(cplx eta, int N) {
  cplx q = std::exp(I * kPi * eta / double(N));
  return block(1.0 / q, -q, -1.0 / q, q, 0.0);
}

RMatrix4 r_tri(cplx x, cplx eta, int N) {
  cplx den = std::sin(kPi * (x + eta) / double(N));
  if (std::abs(den) < 1e-13) throw PoleError("r_tri: sin(pi(x+eta)/N) vanishes");
  RMatrix4 r = RMatrix4::Identity() - (std::sin(kPi * x / double(N)) / den) * e_tri(eta, N);
  return r;
}

RMatrix4 e_heis(cplx a, double gamma) {
  cplx s = std::sin(kPi * gamma * a);
  if (std::abs(s) < 1e-13 && std::abs((kPi * gamma * a).imag()) < 30.0)
    throw PoleError("e_heis: sin(pi gamma a) vanishes");
  const cplx v = kPi * gamma * a, u = kPi * gamma;
  cplx lo = sin_shift_ratio(-u, v);  // sin(pi gamma (a-1)) / sin(pi gamma a)
  cplx hi = sin_shift_ratio(u, v);   // sin(pi gamma (a+1)) / sin(pi gamma a)
  return block(lo, -hi, -lo, hi, 0.0);
}

RMatrix4 r_heis(cplx a, double gamma) {
  return RMatrix4::Identity() - std::exp(-I * kPi * gamma) * e_heis(a, gamma);
}

double dybe_residual(cplx x, cplx x1, cplx x2, cplx a, cplx eta, const EllipticParams& p) {
  using M8 = Eigen::Matrix<cplx, 8, 8>;
  auto R = [&](cplx u, cplx aa) { return r_check({u, aa, eta}, p); };
  auto R12 = [&](cplx u) {
    M8 m = M8::Zero();
    RMatrix4 r = R(u, a);
    // sites (1,2) are the high bits: index = 2*local + s3
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int s = 0; s < 2; ++s) m(2 * i + s, 2 * j + s) = r(i, j);
    return m;
  };
  auto R23 = [&](cplx u) {
    M8 m = M8::Zero();
    m.topLeftCorner<4, 4>() = R(u, a - 1.0);       // site 1 up
    m.bottomRightCorner<4, 4>() = R(u, a + 1.0);   // site 1 down
    return m;
  };
  M8 a1 = R12(x1 - x2), a2 = R23(x - x2), a3 = R12(x - x1);
  M8 b1 = R23(x - x1), b2 = R12(x - x2), b3 = R23(x1 - x2);
  M8 lhs = a1 * a2 * a3, rhs = b1 * b2 * b3;
  auto mod = [](const M8& m) { return Eigen::Matrix<double, 8, 8>(m.cwiseAbs()); };
  double bound = std::max((mod(a1) * mod(a2) * mod(a3)).maxCoeff(), (mod(b1) * mod(b2) * mod(b3)).maxCoeff());
  return (lhs - rhs).cwiseAbs().maxCoeff() / bound;
}

double ice_rule_violation(const RMatrix4& m) {
  double v = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      bool allowed = (i == j && (i == 0 || i == 3)) || (i >= 1 && i <= 2 && j >= 1 && j <= 2);
      if (!allowed) v = std::max(v, std::abs(m(i, j)));
    }
  return v;
}

std::vector<std::string> rmatrix_invariants() {
  return {"rmatrix.initial_condition", "rmatrix.unitarity",         "rmatrix.unitarity_trig",
          "rmatrix.dybe",              "rmatrix.dybe_trig",         "rmatrix.ice_rule",
          "rmatrix.derivative_fd",     "rmatrix.exchange_closed_form", "rmatrix.tl_trig",
          "rmatrix.tl_heis",           "rmatrix.isotropic_exchange"};
}

}  // namespace ellspin
