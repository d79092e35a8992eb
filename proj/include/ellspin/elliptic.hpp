#pragma once

// Theta function of the chain and its relatives.
//
//   theta(x) = sinh(kappa x)/kappa * prod_n (1 - q^n e^{-2 kappa x})(1 - q^n e^{2 kappa x}) / (1 - q^n)^2,
//   q = p^2, p = exp(-period * kappa).
//
// It is odd, theta'(0) = 1, and has quasiperiods `period` and i pi / kappa.
// kappa = 0 is the exact trigonometric branch (period/pi) sin(pi x / period).

#include <string>
#include <vector>

#include "ellspin/types.hpp"

namespace ellspin {

struct EllipticParams {
  double kappa = 1.0;
  double period = 1.0;
  double tolerance = 1e-17;
  int max_terms = 100000;

  void validate() const;
  double nome() const;  // p
};

// Nome exp(2 pi i tau); the only constraint is |exp(2 pi i tau)| < 1.
struct GeneralTheta {
  cplx tau{0.0, 1.0};
  double tolerance = 1e-17;
  int max_terms = 100000;

  void validate() const;
};

// Value stored as mant * exp(log_mag); keeps ratios finite when theta
// itself over- or underflows.
struct Scaled {
  cplx mant{0.0, 0.0};
  double log_mag = 0.0;

  cplx value() const;
  double log_abs() const;
  Scaled operator*(const Scaled& o) const { return {mant * o.mant, log_mag + o.log_mag}; }
  Scaled operator/(const Scaled& o) const { return {mant / o.mant, log_mag - o.log_mag}; }
};

struct ThetaEval {
  Scaled value;
  Scaled deriv;
  // |theta| of the reduced argument: the local scale against which
  // zero proximity is judged.
  double reduced_abs = 0.0;
  bool near_zero() const { return reduced_abs < 1e-13; }
};

ThetaEval eval_theta(cplx x, const EllipticParams& p);
ThetaEval eval_vartheta(cplx x, const GeneralTheta& g);

cplx theta(cplx x, const EllipticParams& p);
cplx theta_deriv(cplx x, const EllipticParams& p);
cplx rho(cplx x, const EllipticParams& p);
cplx rho_deriv(cplx x, const EllipticParams& p);
cplx potential_V(cplx x, cplx eta, const EllipticParams& p);

cplx f_ratio(cplx x, cplx y, cplx z, const EllipticParams& p);
cplx phi(cplx x, cplx y, const EllipticParams& p);
cplx phi_d1(cplx x, cplx y, const EllipticParams& p);

cplx vartheta(cplx x, const GeneralTheta& g);
cplx vartheta_rho(cplx x, const GeneralTheta& g);

// prod_k theta(num_k) / prod_k theta(den_k), evaluated in scaled form.
// Throws PoleError if a denominator theta is (numerically) zero.
cplx theta_ratio(const std::vector<cplx>& num, const std::vector<cplx>& den, const EllipticParams& p,
                 const char* context);
cplx vartheta_ratio(const std::vector<cplx>& num, const std::vector<cplx>& den, const GeneralTheta& g,
                    const char* context);

// True if theta(x) vanishes to the pole threshold.
bool on_theta_lattice(cplx x, const EllipticParams& p);

// exp(z) - 1 without cancellation for small |z|.
cplx cexpm1(cplx z);

std::vector<std::string> elliptic_invariants();

}  // namespace ellspin
