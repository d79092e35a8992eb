#pragma once

// Two-site matrices in the basis (uu, ud, du, dd), up = +1.

#include <string>
#include <vector>

#include "ellspin/elliptic.hpp"
#include "ellspin/types.hpp"

namespace ellspin {

struct DynArgs {
  cplx x;
  cplx a;
  cplx eta;
};

// Felder's dynamical R-matrix: corners 1, central block
//   [[f(eta,x,eta a), f(x,eta,eta a)], [f(x,eta,-eta a), f(eta,x,-eta a)]].
RMatrix4 r_check(const DynArgs& args, const EllipticParams& p);
RMatrix4 r_check_deriv(const DynArgs& args, const EllipticParams& p);

// E(x,a) = R(-x,a) R'(x,a) / (theta(eta) V(x)).
RMatrix4 exchange_E(const DynArgs& args, const EllipticParams& p);
// The same matrix from the closed-form alpha/beta coefficients; needs x off the lattice.
RMatrix4 exchange_E_closed(const DynArgs& args, const EllipticParams& p);

RMatrix4 e_tri(cplx eta, int N);
RMatrix4 r_tri(cplx x, cplx eta, int N);

RMatrix4 e_heis(cplx a, double gamma);
RMatrix4 r_heis(cplx a, double gamma);

RMatrix4 swap4();

// max-norm of
//   R12(x1-x2,a) R23(x-x2,a-s1) R12(x-x1,a) - R23(x-x1,a-s1) R12(x-x2,a) R23(x1-x2,a-s1)
// on the three-spin space, divided by the largest entry of the same products
// taken over the entrywise moduli of the factors.
double dybe_residual(cplx x, cplx x1, cplx x2, cplx a, cplx eta, const EllipticParams& p);

// Off-block entries of an RMatrix4 (must be exactly zero).
double ice_rule_violation(const RMatrix4& m);

std::vector<std::string> rmatrix_invariants();

}  // namespace ellspin
