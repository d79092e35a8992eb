#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ellspin/elliptic.hpp"
#include "ellspin/rmatrix.hpp"
#include "ellspin/types.hpp"

namespace ellspin {

inline constexpr int kMaxSites = 12;

struct ChainParams {
  int N = 4;
  double kappa = 1.0;
  cplx eta{0.3, 0.1};
  cplx a{0.7, 0.2};
  double tolerance = 1e-17;

  EllipticParams elliptic() const;
  // N in [2, 12], kappa >= 0, 2 eta and eta a off the theta zero lattice.
  void validate() const;
};

// Basis index of (s_1..s_N) is sum_k (1 - s_k)/2 * 2^{N-k}: site 1 is the
// most significant bit and a set bit is a down spin.
struct SpinOperator {
  int n_sites = 0;
  Matrix matrix;

  int dim() const { return int(matrix.rows()); }
  static SpinOperator identity(int n);
};

using Family = std::function<RMatrix4(cplx)>;

// Operator on sites (site, site+1) that is block diagonal in the
// configuration of sites 1..site-1; the block for left spin sum s is
// family(a - s). Multiplication touches only 4 rows or columns at a time.
class LocalOp {
 public:
  LocalOp(int n_sites, int site, const Family& family, cplx a);
  static LocalOp constant(int n_sites, int site, const RMatrix4& m);

  void left_multiply(Matrix& m) const;
  void right_multiply(Matrix& m) const;
  void apply(Vector& v) const;
  SpinOperator dense() const;

  int site() const { return site_; }

 private:
  LocalOp(int n_sites, int site) : n_(n_sites), site_(site) {}
  int n_, site_;
  std::vector<RMatrix4> blocks_;  // by number of down spins left of `site`
};

SpinOperator embed_dynamical(const Family& family, int i, const ChainParams& p);

LocalOp perm_local(int i, cplx x, const ChainParams& p);
LocalOp exch_local(int i, cplx x, const ChainParams& p);
SpinOperator perm_P(int i, cplx x, const ChainParams& p);
SpinOperator exch_E(int i, cplx x, const ChainParams& p);

// A product of nearest-neighbour factors, leftmost first.
struct Factor {
  enum Kind { Perm, Exch } kind;
  int site;
  double arg;
};
using Word = std::vector<Factor>;

Word s_left_word(int i, int j);
Word s_right_word(int i, int j);
Word shift_word(const Word& w, int offset);
SpinOperator evaluate_word(const Word& w, const ChainParams& p);

SpinOperator s_left(int i, int j, const ChainParams& p);
SpinOperator s_right(int i, int j, const ChainParams& p);
SpinOperator h_left(const ChainParams& p);
SpinOperator h_right(const ChainParams& p);

// G = K_N P_{N-1,N}(1-N) ... P_12(-1),
// K_N = exp(-kappa eta [a - sum_{k<N} s_k] s_N).
SpinOperator translation_G(const ChainParams& p);
// Diagonal exp(-kappa eta [a M - M^2/2 - N(N-2)/2]), M = sum_k s_k, equal to G^N.
SpinOperator twist_total(const ChainParams& p);
// twist^{-1/N} G with the principal root of each diagonal entry.
SpinOperator g_normalized(const ChainParams& p);

struct MagnonState {
  int momentum_index = 0;
  Vector vector;
};
std::vector<MagnonState> magnon_states(const ChainParams& p);
// |down up ... up>
Vector magnon_reference(int N);

SpinOperator h_inozemtsev(const ChainParams& p);
SpinOperator h_haldane_shastry(int N);
SpinOperator h_intermediate(cplx a_prime, const ChainParams& p);
// Trigonometric chiral chain from R^tri, E^tri and the kappa = 0 potential.
enum class Chirality { Left, Right };
SpinOperator h_deformed_hs(Chirality c, int N, cplx eta);
// sum_i (1 - P_{i,i+1}) with periodic closure
SpinOperator h_heisenberg_xxx(int N);

class XxzChain {
 public:
  XxzChain(double gamma, cplx a, int N);

  const SpinOperator& hamiltonian() const { return h_; }
  // e_i for 1 <= i < N from E^H; e_0 = G^H e_1 (G^H)^{-1}.
  const SpinOperator& e_op(int i) const;
  // the other form (G^H)^{-1} e_{N-1} G^H of the boundary term
  SpinOperator e0_alternative() const;
  const SpinOperator& g_op() const { return g_; }
  // i^N exp(i pi gamma (N-2)/2) G^H, normalised so that u^2 e_1...e_{N-1} = e_{N-1}.
  SpinOperator u_op() const;

  double gamma() const { return gamma_; }
  cplx a() const { return a_; }
  int sites() const { return n_; }

 private:
  double gamma_;
  cplx a_;
  int n_;
  std::vector<SpinOperator> e_;
  SpinOperator g_, h_;
};

XxzChain h_xxz(double gamma, cplx a, int N);

// ---- spin operators and spectra ----

SpinOperator total_sz(int N);
SpinOperator total_sx(int N);
SpinOperator total_sy(int N);
// standard permutation of sites i and j
SpinOperator plain_swap(int i, int j, int N);

std::vector<int> sector_indices(int N, int down);
Matrix sector_block(const SpinOperator& op, int down);
double sz_violation(const SpinOperator& op);

// Eigenvalues sorted by (Re, Im). With a sector, only the block with `down`
// down spins; op must commute with S^z then.
std::vector<cplx> spectrum(const SpinOperator& op, std::optional<int> sector = std::nullopt);

// Max distance under a greedy nearest matching of two eigenvalue multisets.
double spectral_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

double relative_commutator(const Matrix& a, const Matrix& b);

// ||g^n - target||_F / || |g|^n ||_F, with |g| the entrywise modulus: the
// componentwise rounding bound of the product, so that cancellation between
// large entries of g is not mistaken for an error.
double power_residual(const Matrix& g, int n, const Matrix& target);

std::vector<std::string> chain_invariants();

}  // namespace ellspin
