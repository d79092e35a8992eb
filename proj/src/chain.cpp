#include "ellspin/chain.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "ellspin/error.hpp"

namespace ellspin {

namespace {

int down_count(long b) { return std::popcount(static_cast<unsigned long>(b)); }

// +1 for up, -1 for down at 1-based site k
int spin_at(long b, int k, int N) { return ((b >> (N - k)) & 1L) ? -1 : 1; }

void check_pair(int i, int j, int N, const char* who) {
  if (i < 1 || j > N || i >= j) {
    std::ostringstream os;
    os << who << ": need 1 <= i < j <= N, got i=" << i << ", j=" << j << ", N=" << N;
    throw ParameterError(os.str());
  }
}

SpinOperator wrap(int n, Matrix m) {
  SpinOperator op;
  op.n_sites = n;
  op.matrix = std::move(m);
  return op;
}

}  // namespace

EllipticParams ChainParams::elliptic() const {
  EllipticParams e;
  e.kappa = kappa;
  e.period = double(N);
  e.tolerance = tolerance;
  return e;
}

void ChainParams::validate() const {
  if (N < 2) throw ParameterError("N must be at least 2");
  if (N > kMaxSites) {
    std::ostringstream os;
    os << "N = " << N << " exceeds the dense-matrix cap of " << kMaxSites << " sites";
    throw SizeError(os.str());
  }
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ParameterError("kappa must be a finite nonnegative real");
  EllipticParams e = elliptic();
  e.validate();
  if (on_theta_lattice(2.0 * eta, e)) throw ParameterError("2 eta lies on the theta zero lattice N k + i pi l/kappa");
  if (on_theta_lattice(eta * a, e)) throw ParameterError("eta a lies on the theta zero lattice N k + i pi l/kappa");
}

SpinOperator embed_dynamical(const Family& family, int i, const ChainParams& p) {
  return LocalOp(p.N, i, family, p.a).dense();
}

LocalOp perm_local(int i, cplx x, const ChainParams& p) {
  EllipticParams e = p.elliptic();
  cplx eta = p.eta;
  return LocalOp(p.N, i, [&](cplx a) { return r_check({x, a, eta}, e); }, p.a);
}

LocalOp exch_local(int i, cplx x, const ChainParams& p) {
  EllipticParams e = p.elliptic();
  cplx eta = p.eta;
  return LocalOp(p.N, i, [&](cplx a) { return exchange_E({x, a, eta}, e); }, p.a);
}

SpinOperator perm_P(int i, cplx x, const ChainParams& p) { return perm_local(i, x, p).dense(); }
SpinOperator exch_E(int i, cplx x, const ChainParams& p) { return exch_local(i, x, p).dense(); }

Word s_left_word(int i, int j) {
  Word w;
  for (int k = j - 1; k > i; --k) w.push_back({Factor::Perm, k, double(j - k)});
  w.push_back({Factor::Exch, i, double(i - j)});
  for (int k = i + 1; k < j; ++k) w.push_back({Factor::Perm, k, -double(j - k)});
  return w;
}

Word s_right_word(int i, int j) {
  Word w;
  for (int k = i; k <= j - 2; ++k) w.push_back({Factor::Perm, k, double(k - i + 1)});
  w.push_back({Factor::Exch, j - 1, double(i - j)});
  for (int k = j - 2; k >= i; --k) w.push_back({Factor::Perm, k, -double(k - i + 1)});
  return w;
}

Word shift_word(const Word& w, int offset) {
  Word out = w;
  for (Factor& f : out) f.site += offset;
  return out;
}

SpinOperator evaluate_word(const Word& w, const ChainParams& p) {
  SpinOperator m = SpinOperator::identity(p.N);
  for (const Factor& f : w) {
    LocalOp op = f.kind == Factor::Perm ? perm_local(f.site, f.arg, p) : exch_local(f.site, f.arg, p);
    op.right_multiply(m.matrix);
  }
  return m;
}

SpinOperator s_left(int i, int j, const ChainParams& p) {
  check_pair(i, j, p.N, "s_left");
  SpinOperator m = exch_local(i, double(i - j), p).dense();
  for (int k = i + 1; k < j; ++k) {
    perm_local(k, double(j - k), p).left_multiply(m.matrix);
    perm_local(k, -double(j - k), p).right_multiply(m.matrix);
  }
  return m;
}

SpinOperator s_right(int i, int j, const ChainParams& p) {
  check_pair(i, j, p.N, "s_right");
  SpinOperator m = exch_local(j - 1, double(i - j), p).dense();
  for (int k = j - 2; k >= i; --k) {
    perm_local(k, double(k - i + 1), p).left_multiply(m.matrix);
    perm_local(k, -double(k - i + 1), p).right_multiply(m.matrix);
  }
  return m;
}

namespace {

SpinOperator chiral_sum(const ChainParams& p, bool left) {
  p.validate();
  EllipticParams e = p.elliptic();
  SpinOperator h = wrap(p.N, Matrix::Zero(1L << p.N, 1L << p.N));
  for (int i = 1; i <= p.N; ++i)
    for (int j = i + 1; j <= p.N; ++j) {
      cplx v = potential_V(double(i - j), p.eta, e);
      h.matrix += v * (left ? s_left(i, j, p) : s_right(i, j, p)).matrix;
    }
  return h;
}

}  // namespace

SpinOperator h_left(const ChainParams& p) { return chiral_sum(p, true); }
SpinOperator h_right(const ChainParams& p) { return chiral_sum(p, false); }

SpinOperator translation_G(const ChainParams& p) {
  p.validate();
  const int N = p.N;
  SpinOperator g = SpinOperator::identity(N);
  for (int i = 1; i < N; ++i) perm_local(i, -double(i), p).left_multiply(g.matrix);
  const cplx ke = p.kappa * p.eta;
  for (long b = 0; b < (1L << N); ++b) {
    int left = 0;
    for (int k = 1; k < N; ++k) left += spin_at(b, k, N);
    cplx k_n = std::exp(-ke * (p.a - double(left)) * double(spin_at(b, N, N)));
    g.matrix.row(b) *= k_n;
  }
  return g;
}

SpinOperator twist_total(const ChainParams& p) {
  const int N = p.N;
  SpinOperator t = wrap(N, Matrix::Zero(1L << N, 1L << N));
  const cplx ke = p.kappa * p.eta;
  for (long b = 0; b < (1L << N); ++b) {
    double M = double(N - 2 * down_count(b));
    t.matrix(b, b) = std::exp(-ke * (p.a * M - 0.5 * M * M - 0.5 * double(N) * double(N - 2)));
  }
  return t;
}

SpinOperator g_normalized(const ChainParams& p) {
  SpinOperator g = translation_G(p);
  SpinOperator t = twist_total(p);
  for (long b = 0; b < g.dim(); ++b) g.matrix.row(b) *= std::exp(-std::log(t.matrix(b, b)) / double(p.N));
  return g;
}

Vector magnon_reference(int N) {
  Vector v = Vector::Zero(1L << N);
  v(1L << (N - 1)) = 1.0;
  return v;
}

std::vector<MagnonState> magnon_states(const ChainParams& p) {
  SpinOperator g = g_normalized(p);
  Eigen::PartialPivLU<Matrix> lu(g.matrix);
  const int N = p.N;
  std::vector<Vector> orbit;  // G'^{1-j} |down up..up>, j = 1..N
  orbit.push_back(magnon_reference(N));
  for (int j = 2; j <= N; ++j) orbit.push_back(lu.solve(orbit.back()));
  std::vector<MagnonState> out;
  for (int n = 0; n < N; ++n) {
    double mom = 2.0 * kPi * n / N;
    Vector v = Vector::Zero(1L << N);
    for (int j = 1; j <= N; ++j) v += std::exp(I * (mom * j)) * orbit[j - 1];
    out.push_back({n, v});
  }
  return out;
}

SpinOperator plain_swap(int i, int j, int N) {
  const long dim = 1L << N;
  SpinOperator op = wrap(N, Matrix::Zero(dim, dim));
  const int bi = N - i, bj = N - j;
  for (long b = 0; b < dim; ++b) {
    long vi = (b >> bi) & 1L, vj = (b >> bj) & 1L;
    long c = b;
    if (vi != vj) c ^= (1L << bi) | (1L << bj);
    op.matrix(c, b) = 1.0;
  }
  return op;
}

namespace {

SpinOperator isotropic_sum(int N, const std::function<cplx(int)>& vbar) {
  const long dim = 1L << N;
  SpinOperator h = wrap(N, Matrix::Zero(dim, dim));
  Matrix id = Matrix::Identity(dim, dim);
  for (int i = 1; i <= N; ++i)
    for (int j = i + 1; j <= N; ++j) h.matrix += vbar(i - j) * (id - plain_swap(i, j, N).matrix);
  return h;
}

}  // namespace

SpinOperator h_inozemtsev(const ChainParams& p) {
  EllipticParams e = p.elliptic();
  return isotropic_sum(p.N, [&](int x) { return -rho_deriv(double(x), e); });
}

SpinOperator h_haldane_shastry(int N) {
  return isotropic_sum(N, [&](int x) {
    double s = std::sin(kPi * x / N);
    return cplx((kPi / N) * (kPi / N) / (s * s));
  });
}

SpinOperator h_intermediate(cplx a_prime, const ChainParams& p) {
  EllipticParams e = p.elliptic();
  const int N = p.N;
  const long dim = 1L << N;
  SpinOperator h = wrap(N, Matrix::Zero(dim, dim));
  for (int i = 1; i <= N; ++i)
    for (int j = i + 1; j <= N; ++j) {
      const double x = double(i - j);
      const cplx up = phi_d1(x, a_prime, e), dn = phi_d1(x, -a_prime, e);
      const cplx vbar = -rho_deriv(x, e);
      const int bi = N - i, bj = N - j;
      for (long b = 0; b < dim; ++b) {
        long vi = (b >> bi) & 1L, vj = (b >> bj) & 1L;
        if (vi == vj) continue;
        long c = b ^ ((1L << bi) | (1L << bj));
        h.matrix(b, b) += vbar;
        // sigma^+_i sigma^-_j takes (i down, j up) to (i up, j down)
        h.matrix(c, b) += (vi == 1) ? up : dn;
      }
    }
  return h;
}

SpinOperator h_deformed_hs(Chirality c, int N, cplx eta) {
  EllipticParams e;
  e.kappa = 0.0;
  e.period = double(N);
  if (on_theta_lattice(2.0 * eta, e)) throw ParameterError("2 eta lies on the zero lattice of sin(pi x/N)");
  const RMatrix4 et = e_tri(eta, N);
  SpinOperator h = wrap(N, Matrix::Zero(1L << N, 1L << N));
  for (int i = 1; i <= N; ++i)
    for (int j = i + 1; j <= N; ++j) {
      Word w = c == Chirality::Left ? s_left_word(i, j) : s_right_word(i, j);
      SpinOperator m = SpinOperator::identity(N);
      for (const Factor& f : w) {
        LocalOp op = LocalOp::constant(N, f.site, f.kind == Factor::Perm ? r_tri(f.arg, eta, N) : et);
        op.right_multiply(m.matrix);
      }
      h.matrix += potential_V(double(i - j), eta, e) * m.matrix;
    }
  return h;
}

SpinOperator h_heisenberg_xxx(int N) {
  const long dim = 1L << N;
  Matrix id = Matrix::Identity(dim, dim);
  SpinOperator h = wrap(N, Matrix::Zero(dim, dim));
  for (int i = 1; i < N; ++i) h.matrix += id - plain_swap(i, i + 1, N).matrix;
  h.matrix += id - plain_swap(1, N, N).matrix;
  return h;
}

SpinOperator total_sz(int N) {
  const long dim = 1L << N;
  SpinOperator op = wrap(N, Matrix::Zero(dim, dim));
  for (long b = 0; b < dim; ++b) op.matrix(b, b) = double(N - 2 * down_count(b));
  return op;
}

namespace {

SpinOperator total_flip(int N, bool y) {
  const long dim = 1L << N;
  SpinOperator op = wrap(N, Matrix::Zero(dim, dim));
  for (long b = 0; b < dim; ++b)
    for (int k = 1; k <= N; ++k) {
      long c = b ^ (1L << (N - k));
      // sigma^y |up> = i |down>, sigma^y |down> = -i |up>
      cplx amp = 1.0;
      if (y) amp = ((b >> (N - k)) & 1L) ? cplx(0, -1) : cplx(0, 1);
      op.matrix(c, b) += amp;
    }
  return op;
}

}  // namespace

SpinOperator total_sx(int N) { return total_flip(N, false); }
SpinOperator total_sy(int N) { return total_flip(N, true); }

double relative_commutator(const Matrix& a, const Matrix& b) {
  double na = a.norm(), nb = b.norm();
  if (na == 0 || nb == 0) return 0.0;
  return (a * b - b * a).norm() / (na * nb);
}

double power_residual(const Matrix& g, int n, const Matrix& target) {
  Matrix pw = Matrix::Identity(g.rows(), g.cols());
  Eigen::MatrixXd ag = g.cwiseAbs(), apw = Eigen::MatrixXd::Identity(g.rows(), g.cols());
  for (int k = 0; k < n; ++k) {
    pw = pw * g;
    apw = apw * ag;
  }
  double scale = apw.norm();
  return scale == 0 ? 0.0 : (pw - target).norm() / scale;
}

std::vector<std::string> chain_invariants() {
  return {"chain.perm_identity",     "chain.perm_unitarity",   "chain.braid",
          "chain.embed_block",       "chain.sl_shift_covariance", "chain.commute_lr",
          "chain.commute_sz",        "chain.commute_g",        "chain.twist_central",
          "chain.gprime_order",      "chain.chirality_boundary", "chain.magnon_eigen",
          "chain.reference_eigen",   "chain.spectrum_reality", "chain.sector_union",
          "chain.su2_symmetry",      "limits.isotropic",       "limits.trigonometric",
          "limits.hs_from_trig",     "limits.ino_to_hs",       "limits.xxx_from_xxz",
          "limits.short_range",      "limits.intermediate",    "limits.intermediate_to_ino",
          "limits.intermediate_reality", "limits.magnon_isotropic", "xxz.boundary_forms",
          "xxz.tl",                  "xxz.affine_tl"};
}

}  // namespace ellspin
