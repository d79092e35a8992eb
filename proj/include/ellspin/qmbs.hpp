#pragma once

// Dynamical elliptic spin-Ruijsenaars difference operators and the
// classical Ruijsenaars-Schneider equilibria used for freezing.
//
// Gamma_i shifts x_i -> x_i - c with c = i hbar epsilon. A DiffOp is kept in
// normal form, sum_m C_m(x) Gamma^m, and acts on vector-valued functions as
// (D f)(x) = sum_m C_m(x) f(x - c m).

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "ellspin/chain.hpp"

namespace ellspin {

struct QmbsParams {
  ChainParams chain;
  double hbar = 1.0;
  cplx epsilon{0.0, 0.1};

  cplx step() const { return I * hbar * epsilon; }
  void validate() const;
};

using Point = std::vector<cplx>;
using Shift = std::vector<int>;
using CoeffFn = std::function<Matrix(const Point&)>;
using VectorFn = std::function<Vector(const Point&)>;

class DiffOp {
 public:
  explicit DiffOp(const QmbsParams& params);

  void add(const Shift& m, CoeffFn c);
  // sum of the coefficient functions stored under shift m, at x
  Matrix coefficient(const Shift& m, const Point& x) const;

  const std::map<Shift, std::vector<CoeffFn>>& terms() const { return terms_; }
  const QmbsParams& params() const { return *params_; }
  int sites() const { return params_->chain.N; }
  bool empty() const { return terms_.empty(); }

 private:
  std::shared_ptr<const QmbsParams> params_;
  std::map<Shift, std::vector<CoeffFn>> terms_;
};

// A_i(x) = prod_{j != i} theta(x_i - x_j + eta) / theta(x_i - x_j), i is 1-based.
cplx coefficient_A(int i, const Point& x, const ChainParams& p);
// prod_{i in S} prod_{j not in S} theta(x_i - x_j + eta) / theta(x_i - x_j)
cplx coefficient_A_subset(const std::vector<int>& subset, const Point& x, const ChainParams& p);

DiffOp build_d1(const QmbsParams& p);
DiffOp build_dminus1(const QmbsParams& p);
DiffOp build_dN(const QmbsParams& p);
// Charge with r shifts, generated from its seed term by P^tot conjugation.
DiffOp build_higher(int r, int sign, const QmbsParams& p);

DiffOp compose(const DiffOp& a, const DiffOp& b);
// max over shifts of |(AB - BA)_m(x)| relative to the largest summand of that shift
double commutator_residual(const DiffOp& a, const DiffOp& b, const Point& x);

Vector apply(const DiffOp& d, const VectorFn& f, const Point& x);
// (P^tot_i f)(x) = P_{i,i+1}(x_{i+1} - x_i) f(s_i x)
Vector ptot_apply(int i, const VectorFn& f, const Point& x, const QmbsParams& p);
// P^tot_i D P^tot_i as a DiffOp in normal form
DiffOp ptot_conjugate(const DiffOp& d, int i);
// |D f - P^tot_i D P^tot_i f| / |D f| at x
double ptot_invariance_residual(const DiffOp& d, int i, const VectorFn& f, const Point& x);

// ---- classical spinless system ----

struct EquilibriumConfig {
  std::vector<cplx> x, p;
  cplx tau;
  cplx a_star;
  cplx coupling;  // the eta entering A_j(x; coupling | tau)
  cplx epsilon;
};

std::vector<cplx> classical_coefficients(const std::vector<cplx>& x, cplx coupling, cplx tau);
std::vector<cplx> classical_velocities(const EquilibriumConfig& cfg);
std::vector<cplx> classical_forces(const EquilibriumConfig& cfg);
// max_j |v_j - epsilon A*| + |force_j|
double equilibrium_residual(const EquilibriumConfig& cfg);

// omega = i pi / kappa; kappa > 0 is required.
EquilibriumConfig equilibrium_1(const ChainParams& p, cplx epsilon);
EquilibriumConfig equilibrium_2(const ChainParams& p, cplx epsilon);
// closed forms of A*
cplx equilibrium_1_constant(const ChainParams& p);
cplx equilibrium_2_constant(const ChainParams& p);

struct FreezeResult {
  double deviation = 0;          // |F - A* H| / |A* H|
  double gate_residual = 0;      // relative spread of w_j A_j(+-x*)
  double unweighted_spread = 0;  // the same without momentum weights
  cplx a_star;
  cplx fitted_constant;          // <H, F> / <H, H>
  SpinOperator frozen;           // F
};

// Linearises D_{+-1} in epsilon at x*_k = k with weights exp(+-kappa eta (N - 2j + 1)).
// Throws GateError if the weighted coefficients are not j-independent to 1e-10.
FreezeResult freeze_check(Chirality c, const ChainParams& p, double step = 1e-5);

std::vector<std::string> qmbs_invariants();

}  // namespace ellspin
