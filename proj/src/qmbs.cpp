#include "ellspin/qmbs.hpp"

#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include "ellspin/error.hpp"

namespace ellspin {

void QmbsParams::validate() const {
  chain.validate();
  if (!(hbar > 0) || !std::isfinite(hbar)) throw ParameterError("hbar must be a positive real");
  if (epsilon == 0.0) throw ParameterError("epsilon must be nonzero for difference operators");
}

DiffOp::DiffOp(const QmbsParams& params) : params_(std::make_shared<const QmbsParams>(params)) {}

void DiffOp::add(const Shift& m, CoeffFn c) {
  if (int(m.size()) != sites()) throw ParameterError("DiffOp: shift vector has the wrong length");
  terms_[m].push_back(std::move(c));
}

Matrix DiffOp::coefficient(const Shift& m, const Point& x) const {
  const long dim = 1L << sites();
  Matrix out = Matrix::Zero(dim, dim);
  auto it = terms_.find(m);
  if (it == terms_.end()) return out;
  for (const CoeffFn& f : it->second) out += f(x);
  return out;
}

namespace {

Point shifted(const Point& x, const Shift& m, cplx c) {
  Point y = x;
  for (size_t k = 0; k < y.size(); ++k) y[k] -= c * double(m[k]);
  return y;
}

Point negated(const Point& x) {
  Point y = x;
  for (cplx& v : y) v = -v;
  return y;
}

// site k (1-based) of the spin chain; argument of the deformed permutation
struct PermStep {
  int site;
  cplx arg;
};

Matrix perm_product(const std::vector<PermStep>& steps, const ChainParams& p) {
  SpinOperator m = SpinOperator::identity(p.N);
  for (const PermStep& s : steps) perm_local(s.site, s.arg, p).right_multiply(m.matrix);
  return m.matrix;
}

// spin part of the Gamma_i coefficient of D_1, with the shift c
std::vector<PermStep> chain_d1(int i, const Point& x, cplx c) {
  std::vector<PermStep> s;
  for (int k = i - 1; k >= 1; --k) s.push_back({k, x[i - 1] - x[k - 1]});
  for (int k = 1; k <= i - 1; ++k) s.push_back({k, x[k - 1] - x[i - 1] + c});
  return s;
}

// spin part of the Gamma_i^{-1} coefficient of D_{-1}
std::vector<PermStep> chain_dminus1(int i, const Point& x, cplx c, int N) {
  std::vector<PermStep> s;
  for (int k = i; k <= N - 1; ++k) s.push_back({k, x[k] - x[i - 1]});
  for (int k = N - 1; k >= i; --k) s.push_back({k, x[i - 1] + c - x[k]});
  return s;
}

Shift swap_entries(const Shift& m, int i) {
  Shift out = m;
  std::swap(out[i - 1], out[i]);
  return out;
}

// term C Gamma^m conjugated by P^tot_i
CoeffFn conjugate_term(const CoeffFn& fn, const Shift& m, int i, const QmbsParams& q) {
  const Shift sm = swap_entries(m, i);
  const cplx c = q.step();
  const ChainParams chain = q.chain;
  return [fn, sm, i, c, chain](const Point& x) {
    Point sx = x;
    std::swap(sx[i - 1], sx[i]);
    Matrix out = fn(sx);
    perm_local(i, x[i] - x[i - 1], chain).left_multiply(out);
    cplx arg = x[i - 1] - x[i] - c * double(sm[i - 1] - sm[i]);
    perm_local(i, arg, chain).right_multiply(out);
    return out;
  };
}

}  // namespace

cplx coefficient_A_subset(const std::vector<int>& subset, const Point& x, const ChainParams& p) {
  const int N = int(x.size());
  std::vector<bool> in(N, false);
  for (int i : subset) {
    if (i < 1 || i > N) throw ParameterError("coefficient_A: index outside 1..N");
    in[i - 1] = true;
  }
  std::vector<cplx> num, den;
  for (int i = 0; i < N; ++i) {
    if (!in[i]) continue;
    for (int j = 0; j < N; ++j) {
      if (in[j]) continue;
      num.push_back(x[i] - x[j] + p.eta);
      den.push_back(x[i] - x[j]);
    }
  }
  if (num.empty()) return 1.0;
  return theta_ratio(num, den, p.elliptic(), "coefficient_A: coincident coordinates");
}

cplx coefficient_A(int i, const Point& x, const ChainParams& p) { return coefficient_A_subset({i}, x, p); }

DiffOp build_d1(const QmbsParams& q) {
  q.validate();
  DiffOp d(q);
  const int N = q.chain.N;
  const cplx c = q.step();
  const ChainParams chain = q.chain;
  for (int i = 1; i <= N; ++i) {
    Shift m(N, 0);
    m[i - 1] = 1;
    d.add(m, [i, c, chain](const Point& x) {
      return Matrix(coefficient_A(i, x, chain) * perm_product(chain_d1(i, x, c), chain));
    });
  }
  return d;
}

DiffOp build_dminus1(const QmbsParams& q) {
  q.validate();
  DiffOp d(q);
  const int N = q.chain.N;
  const cplx c = q.step();
  const ChainParams chain = q.chain;
  for (int i = 1; i <= N; ++i) {
    Shift m(N, 0);
    m[i - 1] = -1;
    d.add(m, [i, c, chain, N](const Point& x) {
      return Matrix(coefficient_A(i, negated(x), chain) * perm_product(chain_dminus1(i, x, c, N), chain));
    });
  }
  return d;
}

DiffOp build_dN(const QmbsParams& q) {
  q.validate();
  DiffOp d(q);
  const int N = q.chain.N;
  d.add(Shift(N, 1), [N](const Point&) { return SpinOperator::identity(N).matrix; });
  return d;
}

DiffOp build_higher(int r, int sign, const QmbsParams& q) {
  q.validate();
  const int N = q.chain.N;
  if (r < 1 || r > N) throw ParameterError("build_higher: need 1 <= r <= N");
  if (sign != 1 && sign != -1) throw ParameterError("build_higher: sign must be +1 or -1");
  if (N > 6) throw SizeError("build_higher: materialised only for N <= 6");
  const ChainParams chain = q.chain;

  Shift seed(N, 0);
  std::vector<int> subset;
  CoeffFn seed_fn;
  if (sign > 0) {
    for (int k = 1; k <= r; ++k) subset.push_back(k), seed[k - 1] = 1;
    seed_fn = [subset, chain](const Point& x) {
      return Matrix(coefficient_A_subset(subset, x, chain) * SpinOperator::identity(chain.N).matrix);
    };
  } else {
    for (int k = N - r + 1; k <= N; ++k) subset.push_back(k), seed[k - 1] = -1;
    seed_fn = [subset, chain](const Point& x) {
      return Matrix(coefficient_A_subset(subset, negated(x), chain) * SpinOperator::identity(chain.N).matrix);
    };
  }

  DiffOp d(q);
  std::set<Shift> seen{seed};
  std::deque<std::pair<Shift, CoeffFn>> queue{{seed, seed_fn}};
  while (!queue.empty()) {
    auto [m, fn] = queue.front();
    queue.pop_front();
    d.add(m, fn);
    for (int i = 1; i < N; ++i) {
      Shift sm = swap_entries(m, i);
      if (seen.count(sm)) continue;
      seen.insert(sm);
      queue.emplace_back(sm, conjugate_term(fn, m, i, q));
    }
  }
  return d;
}

DiffOp compose(const DiffOp& a, const DiffOp& b) {
  if (a.sites() != b.sites()) throw ParameterError("compose: operators on different numbers of sites");
  DiffOp out(a.params());
  const cplx c = a.params().step();
  for (const auto& [ma, fa] : a.terms())
    for (const auto& [mb, fb] : b.terms()) {
      Shift m = ma;
      for (size_t k = 0; k < m.size(); ++k) m[k] += mb[k];
      for (const CoeffFn& f1 : fa)
        for (const CoeffFn& f2 : fb) {
          Shift shift_a = ma;
          out.add(m, [f1, f2, shift_a, c](const Point& x) { return Matrix(f1(x) * f2(shifted(x, shift_a, c))); });
        }
    }
  return out;
}

double commutator_residual(const DiffOp& a, const DiffOp& b, const Point& x) {
  DiffOp ab = compose(a, b), ba = compose(b, a);
  std::set<Shift> shifts;
  for (const auto& t : ab.terms()) shifts.insert(t.first);
  for (const auto& t : ba.terms()) shifts.insert(t.first);
  const long dim = 1L << a.sites();
  double worst = 0;
  for (const Shift& m : shifts) {
    Matrix diff = Matrix::Zero(dim, dim);
    double scale = 0;
    auto accumulate = [&](const DiffOp& d, double sgn) {
      auto it = d.terms().find(m);
      if (it == d.terms().end()) return;
      for (const CoeffFn& f : it->second) {
        Matrix v = f(x);
        scale = std::max(scale, v.norm());
        diff += sgn * v;
      }
    };
    accumulate(ab, 1.0);
    accumulate(ba, -1.0);
    if (scale > 0) worst = std::max(worst, diff.norm() / scale);
  }
  return worst;
}

Vector apply(const DiffOp& d, const VectorFn& f, const Point& x) {
  const cplx c = d.params().step();
  Vector out = Vector::Zero(1L << d.sites());
  for (const auto& [m, fns] : d.terms()) {
    Vector fv = f(shifted(x, m, c));
    for (const CoeffFn& fn : fns) out += fn(x) * fv;
  }
  return out;
}

Vector ptot_apply(int i, const VectorFn& f, const Point& x, const QmbsParams& p) {
  if (i < 1 || i >= p.chain.N) throw ParameterError("ptot: site outside 1..N-1");
  Point sx = x;
  std::swap(sx[i - 1], sx[i]);
  Vector v = f(sx);
  perm_local(i, x[i] - x[i - 1], p.chain).apply(v);
  return v;
}

DiffOp ptot_conjugate(const DiffOp& d, int i) {
  if (i < 1 || i >= d.sites()) throw ParameterError("ptot: site outside 1..N-1");
  DiffOp out(d.params());
  for (const auto& [m, fns] : d.terms())
    for (const CoeffFn& fn : fns) out.add(swap_entries(m, i), conjugate_term(fn, m, i, d.params()));
  return out;
}

double ptot_invariance_residual(const DiffOp& d, int i, const VectorFn& f, const Point& x) {
  const QmbsParams& q = d.params();
  Vector direct = apply(d, f, x);
  VectorFn pf = [&](const Point& y) { return ptot_apply(i, f, y, q); };
  VectorFn dpf = [&](const Point& y) { return apply(d, pf, y); };
  Vector conj = ptot_apply(i, dpf, x, q);
  double s = direct.norm();
  return s == 0 ? conj.norm() : (direct - conj).norm() / s;
}

FreezeResult freeze_check(Chirality chirality, const ChainParams& p, double step) {
  p.validate();
  const int N = p.N;
  const bool left = chirality == Chirality::Left;
  Point xs(N);
  for (int k = 1; k <= N; ++k) xs[k - 1] = double(k);
  Point xa = left ? xs : negated(xs);

  std::vector<cplx> w(N), g(N), raw(N);
  for (int j = 1; j <= N; ++j) {
    cplx wl = std::exp(p.kappa * p.eta * double(N - 2 * j + 1));
    w[j - 1] = left ? wl : 1.0 / wl;
    raw[j - 1] = coefficient_A(j, xa, p);
    g[j - 1] = w[j - 1] * raw[j - 1];
  }
  auto spread = [](const std::vector<cplx>& v) {
    double s = 0;
    for (cplx z : v) s = std::max(s, std::abs(z - v[0]));
    return s / std::abs(v[0]);
  };
  FreezeResult res;
  res.gate_residual = spread(g);
  res.unweighted_spread = spread(raw);
  res.a_star = g[0];
  if (!(res.gate_residual <= 1e-10)) {
    std::ostringstream os;
    os.precision(6);
    os << "freeze_check: weighted coefficients w_j A_j(x*) not j-independent (relative spread "
       << res.gate_residual << ")";
    throw GateError(os.str());
  }

  const long dim = 1L << N;
  const cplx hbar = 1.0;
  Matrix f = Matrix::Zero(dim, dim);
  for (int j = 1; j <= N; ++j) {
    auto chain_at = [&](double eps) {
      cplx c = I * hbar * eps;
      return perm_product(left ? chain_d1(j, xs, c) : chain_dminus1(j, xs, c, N), p);
    };
    Matrix d = (chain_at(step) - chain_at(-step)) / (2.0 * step);
    f += g[j - 1] * d;
  }
  f /= I * hbar * theta(p.eta, p.elliptic());

  Matrix h = (left ? h_left(p) : h_right(p)).matrix;
  Matrix target = res.a_star * h;
  res.deviation = (f - target).norm() / target.norm();
  res.fitted_constant = h.conjugate().cwiseProduct(f).sum() / h.squaredNorm();
  res.frozen = SpinOperator{N, f};
  return res;
}

std::vector<std::string> qmbs_invariants() {
  return {"qmbs.commute_d1_dminus1", "qmbs.commute_d1_dN",   "qmbs.commute_dminus1_dN",
          "qmbs.ptot_invariance",    "qmbs.ptot_involution", "qmbs.higher_invariance",
          "qmbs.higher_seed",        "qmbs.dN_shift",        "qmbs.normal_form",
          "qmbs.equilibrium_1",      "qmbs.equilibrium_2",   "qmbs.equilibrium_perturbed",
          "qmbs.freeze_left",        "qmbs.freeze_right",    "qmbs.freeze_gate"};
}

}  // namespace ellspin
