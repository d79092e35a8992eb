#include "ellspin/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <thread>

#include "ellspin/chain.hpp"
#include "ellspin/error.hpp"
#include "ellspin/qmbs.hpp"
#include "ellspin/sampling.hpp"

namespace ellspin {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

json chain_json(const ChainParams& p) {
  return {{"N", p.N}, {"kappa", p.kappa}, {"eta", cjson(p.eta)}, {"a", cjson(p.a)}};
}

double rel(cplx a, cplx b) {
  double s = std::max(std::abs(a), std::abs(b));
  return s == 0 ? 0 : std::abs(a - b) / s;
}

double maxabs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double rel_dev(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

double spread(const std::vector<cplx>& ev) {
  double s = 0;
  for (cplx a : ev)
    for (cplx b : ev) s = std::max(s, std::abs(a - b));
  return s;
}

double max_imag(const std::vector<cplx>& ev) {
  double im = 0;
  for (cplx e : ev) im = std::max(im, std::abs(e.imag()));
  return im;
}

// Combined residual of a convergence test, <= 1 iff the finer deviation is
// within `bound` and the coarse/fine ratio lies in [lo, hi] (hi = 0: no cap).
double rate_residual(double coarse, double fine, double bound, double lo, double hi, json& note) {
  double ratio = fine > 0 ? coarse / fine : kInf;
  note["deviation"] = fine;
  note["ratio"] = std::isfinite(ratio) ? json(ratio) : json(nullptr);
  double r = fine / bound;
  if (ratio < lo) r = std::max(r, lo / ratio);
  if (hi > 0 && ratio > hi) r = std::max(r, ratio / hi);
  return r;
}

// A product c M_1 M_2 ... of operators.
struct Product {
  cplx coef;
  std::vector<const Matrix*> factors;
};

// ||L - R||_F / (|| |c_L| |L_1| |L_2| ... ||_F + (same for R)), with |M| the
// entrywise modulus: the componentwise rounding bound of both products.
double product_residual(const Product& l, const Product& r) {
  auto eval = [](const Product& p, bool modulus) {
    Matrix m = modulus ? Matrix(p.factors[0]->cwiseAbs().cast<cplx>()) : *p.factors[0];
    for (size_t k = 1; k < p.factors.size(); ++k)
      m = modulus ? Matrix(m * p.factors[k]->cwiseAbs().cast<cplx>()) : Matrix(m * *p.factors[k]);
    return Matrix((modulus ? cplx(std::abs(p.coef)) : p.coef) * m);
  };
  return (eval(l, false) - eval(r, false)).norm() / (eval(l, true).norm() + eval(r, true).norm());
}

struct Worst {
  double value = 0;
  json params = json::object();
  void add(double v, const json& p) {
    if (std::isnan(value)) return;
    if (params.empty() || std::isnan(v) || v > value) {
      value = v;
      params = p;
    }
  }
};

struct Ctx {
  std::mt19937_64 rng;
  const Overrides& ov;

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  cplx box(double rl, double rh, double il, double ih) {
    double re = uniform(rl, rh);
    return {re, uniform(il, ih)};
  }
  int draws() const { return std::max(1, ov.draws); }
  int per_size(int divisor) const { return std::max(1, ov.draws / divisor); }

  std::vector<int> sizes(int lo, int hi) const {
    if (ov.N) return {*ov.N};
    std::vector<int> s;
    for (int n = lo; n <= hi; ++n) s.push_back(n);
    return s;
  }

  ChainParams chain(int N, DrawOptions o = {}) {
    ChainParams p = random_chain_params(rng, N, o);
    if (ov.kappa && !o.trig) p.kappa = *ov.kappa;
    if (ov.eta) p.eta = *ov.eta;
    if (ov.a) p.a = *ov.a;
    p.validate();
    return p;
  }

  EllipticParams elliptic(bool need_kappa = false) {
    EllipticParams p;
    p.kappa = ov.kappa ? *ov.kappa : uniform(0.3, 2.0);
    p.period = ov.N ? *ov.N : 2 + int(uniform(0, 6));
    if (need_kappa && p.kappa <= 0) throw ParameterError("check needs kappa > 0");
    p.validate();
    return p;
  }

  struct Dyn {
    EllipticParams p;
    DynArgs d;
  };
  Dyn dyn(bool trig = false) {
    Dyn r;
    for (int tries = 0; tries < 200; ++tries) {
      int N = ov.N ? *ov.N : 2 + int(uniform(0, 5));
      r.p = EllipticParams{};
      r.p.kappa = trig ? 0.0 : (ov.kappa ? *ov.kappa : uniform(0.3, 1.5));
      r.p.period = N;
      r.d.eta = ov.eta ? *ov.eta : box(-0.4, 0.4, -0.4, 0.4);
      r.d.a = ov.a ? *ov.a : box(-1.5, 1.5, -1.5, 1.5);
      r.d.x = box(-1.5, 1.5, -0.7, 0.7);
      const cplx eta = r.d.eta;
      bool clear = true;
      for (cplx z : {eta, 2.0 * eta, eta * r.d.a, r.d.x, r.d.x + eta, r.d.x - eta, r.d.x + eta * r.d.a})
        clear = clear && lattice_distance(z, r.p) > 0.05;
      if (clear) break;
    }
    r.p.validate();
    return r;
  }
  static json dyn_json(const Dyn& w) {
    return {{"N", w.p.period}, {"kappa", w.p.kappa}, {"eta", cjson(w.d.eta)}, {"a", cjson(w.d.a)}, {"x", cjson(w.d.x)}};
  }

  QmbsParams qmbs(int N) {
    QmbsParams q;
    q.chain = chain(N);
    return q;
  }
  Point point(const QmbsParams& q) { return random_generic_point(rng, q.chain.N, q.chain.elliptic(), q.step()); }
  VectorFn exponential(int N) {
    std::vector<cplx> lambda(N);
    for (cplx& l : lambda) l = box(-0.5, 0.5, -0.5, 0.5);
    Vector v(1L << N);
    for (long k = 0; k < v.size(); ++k) v(k) = box(-1, 1, -1, 1);
    return [lambda, v](const Point& x) {
      cplx s = 0;
      for (size_t k = 0; k < x.size(); ++k) s += lambda[k] * x[k];
      return Vector(std::exp(s) * v);
    };
  }
};

struct Outcome {
  double residual;
  json params;
};

using CheckFn = std::function<Outcome(Ctx&)>;

struct Entry {
  std::string name;
  double tolerance;
  CheckFn fn;
};

Outcome done(const Worst& w) { return {w.value, w.params}; }

// ---- elliptic ----

cplx random_off_lattice(Ctx& c, const EllipticParams& p, double rl, double rh, double il, double ih) {
  for (;;) {
    cplx x = c.box(rl, rh, il, ih);
    if (lattice_distance(x, p) > 0.05) return x;
  }
}

json ell_json(const EllipticParams& p) { return {{"N", p.period}, {"kappa", p.kappa}}; }

Outcome quasiperiod_imag(Ctx& c) {
  Worst w;
  for (int d = 0; d < c.draws(); ++d) {
    EllipticParams p = c.elliptic(true);
    for (int k = 0; k < 5; ++k) {
      cplx x = c.box(-p.period, p.period, -1.5, 1.5);
      w.add(rel(theta(x + I * kPi / p.kappa, p), -theta(x, p)), ell_json(p));
    }
  }
  return done(w);
}

Outcome quasiperiod_real(Ctx& c) {
  Worst w;
  for (int d = 0; d < c.draws(); ++d) {
    EllipticParams p = c.elliptic();
    const double N = p.period;
    for (int k = 0; k < 5; ++k) {
      cplx x = c.box(-N, N, -1.5, 1.5);
      w.add(rel(theta(x + N, p), -std::exp(p.kappa * (2.0 * x + N)) * theta(x, p)), ell_json(p));
    }
  }
  return done(w);
}

Outcome addition_formula(Ctx& c) {
  Worst w;
  for (int d = 0; d < c.draws(); ++d) {
    EllipticParams p = c.elliptic();
    auto T = [&](cplx u) { return theta(u, p); };
    for (int k = 0; k < 5; ++k) {
      cplx x = c.box(-p.period, p.period, -1.5, 1.5);
      cplx y = c.box(-2, 2, -1, 1), z = c.box(-2, 2, -1, 1), v = c.box(-2, 2, -1, 1);
      cplx lhs = T(x + y) * T(x - y) * T(z + v) * T(z - v);
      cplx r1 = T(x + z) * T(x - z) * T(y + v) * T(y - v);
      cplx r2 = T(x + v) * T(x - v) * T(y + z) * T(y - z);
      double scale = std::max({std::abs(lhs), std::abs(r1), std::abs(r2)});
      w.add(std::abs(lhs - (r1 - r2)) / scale, ell_json(p));
    }
  }
  return done(w);
}

// theta_kappa(x) exp(-kappa x^2 / N) against the kappa = 0 branch at kappa = 1e-3
Outcome kappa_continuity(Ctx& c) {
  Worst w;
  const double kappa = 1e-3;
  for (int d = 0; d < c.draws(); ++d) {
    EllipticParams p0;
    p0.kappa = 0;
    p0.period = c.ov.N ? *c.ov.N : 2 + int(c.uniform(0, 6));
    EllipticParams p1 = p0;
    p1.kappa = kappa;
    cplx x = random_off_lattice(c, p0, -p0.period / 2, p0.period / 2, -0.5, 0.5);
    cplx t1 = theta(x, p1) * std::exp(-kappa * x * x / p0.period);
    w.add(rel(t1, theta(x, p0)), {{"N", p0.period}, {"kappa", kappa}, {"x", cjson(x)}});
  }
  return done(w);
}

Outcome argument_reduction(Ctx& c) {
  Worst w;
  for (int d = 0; d < c.draws(); ++d) {
    EllipticParams p = c.elliptic(true);
    const double N = p.period, k = p.kappa;
    cplx xr = random_off_lattice(c, p, -N / 2, N / 2, -kPi / (2 * k), kPi / (2 * k));
    cplx x = xr + 2.0 * N + I * (3 * kPi / k);
    cplx expect = -theta(xr, p) * std::exp(k * (4.0 * xr + 4.0 * N));
    w.add(rel(theta(x, p), expect), ell_json(p));
  }
  return done(w);
}

Outcome normalisation(Ctx& c) {
  Worst w;
  for (int d = 0; d < c.draws(); ++d) {
    EllipticParams p = c.elliptic();
    double r = std::max(std::abs(theta_deriv(0.0, p) - 1.0), std::abs(theta(0.0, p)));
    cplx x = c.box(-p.period, p.period, -1.5, 1.5);
    r = std::max(r, rel(theta(-x, p), -theta(x, p)));
    w.add(r, ell_json(p));
  }
  return done(w);
}

Outcome rho_periods(Ctx& c) {
  Worst w;
  for (int d = 0; d < c.draws(); ++d) {
    EllipticParams p = c.elliptic(true);
    const double N = p.period;
    cplx x = c.box(-N / 2, N / 2, -1, 1);
    if (lattice_distance(x, p) < 0.1) continue;
    cplx r = rho(x, p);
    double e = std::abs(rho(x + N, p) - r - 2.0 * p.kappa) / std::max(1.0, std::abs(r));
    e = std::max(e, rel(rho(x + I * kPi / p.kappa, p), r));
    w.add(e, ell_json(p));
  }
  return done(w);
}

Outcome potential_symmetry(Ctx& c) {
  Worst w;
  for (int d = 0; d < c.draws();) {
    EllipticParams p = c.elliptic(true);
    const double N = p.period;
    cplx eta = c.ov.eta ? *c.ov.eta : c.box(-0.5, 0.5, -0.5, 0.5);
    cplx x = c.box(-N / 2, N / 2, -1, 1);
    if (!c.ov.eta && (lattice_distance(x + eta, p) < 0.1 || lattice_distance(x - eta, p) < 0.1 ||
                      lattice_distance(2.0 * eta, p) < 0.1))
      continue;
    ++d;
    cplx v = potential_V(x, eta, p);
    // V is a difference of rho values; judge against the size of the terms
    double scale = std::max(std::abs(v), (std::abs(rho(x - eta, p)) + std::abs(rho(x + eta, p))) /
                                             std::abs(theta(2.0 * eta, p)));
    double e = 0;
    for (cplx y : {-x, x + N, x + I * kPi / p.kappa}) e = std::max(e, std::abs(potential_V(y, eta, p) - v) / scale);
    json j = ell_json(p);
    j["eta"] = cjson(eta);
    w.add(e, j);
  }
  return done(w);
}

Outcome modular_bridge(Ctx& c) {
  Worst w;
  for (int d = 0; d < c.draws(); ++d) {
    EllipticParams p = c.elliptic(true);
    cplx omega = I * kPi / p.kappa;
    GeneralTheta gt;
    gt.tau = -p.period / omega;
    for (int k = 0; k < 5; ++k) {
      cplx x = random_off_lattice(c, p, -p.period, p.period, -1.5, 1.5);
      w.add(rel(theta(x, p), omega * vartheta(x / omega, gt)), ell_json(p));
    }
  }
  return done(w);
}

Outcome vartheta_quasiperiod(Ctx& c) {
  Worst w;
  for (int d = 0; d < c.draws(); ++d) {
    GeneralTheta g;
    g.tau = c.box(-1.5, 1.5, 0.3, 2.0);
    for (int k = 0; k < 5; ++k) {
      cplx x = c.box(-1, 1, -0.5 * g.tau.imag(), 0.5 * g.tau.imag());
      cplx t = vartheta(x, g);
      double e = std::max(rel(vartheta(x + 1.0, g), -t),
                          rel(vartheta(x + g.tau, g), -std::exp(-I * kPi * (2.0 * x + g.tau)) * t));
      w.add(e, {{"tau", cjson(g.tau)}});
    }
  }
  return done(w);
}

// ---- rmatrix ----

double max4(const RMatrix4& m) { return m.cwiseAbs().maxCoeff(); }

Outcome initial_condition(Ctx& c) {
  Worst w;
  for (int d = 0; d < c.draws(); ++d) {
    Ctx::Dyn s = c.dyn(d % 4 == 3);
    s.d.x = 0.0;
    w.add(max4(r_check(s.d, s.p) - RMatrix4::Identity()), Ctx::dyn_json(s));
  }
  return done(w);
}

Outcome unitarity_impl(Ctx& c, bool trig) {
  Worst w;
  for (int d = 0; d < c.draws(); ++d) {
    Ctx::Dyn s = c.dyn(trig);
    DynArgs m = s.d;
    m.x = -s.d.x;
    w.add(max4(r_check(s.d, s.p) * r_check(m, s.p) - RMatrix4::Identity()), Ctx::dyn_json(s));
  }
  return done(w);
}

Outcome dybe_impl(Ctx& c, bool trig) {
  Worst w;
  for (int d = 0; d < 5 * c.draws(); ++d) {
    Ctx::Dyn s = c.dyn(trig);
    cplx x1 = c.box(-1.5, 1.5, -0.7, 0.7), x2 = c.box(-1.5, 1.5, -0.7, 0.7);
    w.add(dybe_residual(s.d.x, x1, x2, s.d.a, s.d.eta, s.p), Ctx::dyn_json(s));
  }
  return done(w);
}

Outcome ice_rule(Ctx& c) {
  Worst w;
  for (int d = 0; d < c.draws(); ++d) {
    Ctx::Dyn s = c.dyn(d % 4 == 3);
    int N = int(s.p.period);
    double gamma = c.ov.gamma ? *c.ov.gamma : c.uniform(0.05, 0.45);
    double e = std::max({ice_rule_violation(r_check(s.d, s.p)), ice_rule_violation(r_check_deriv(s.d, s.p)),
                         ice_rule_violation(exchange_E(s.d, s.p)), ice_rule_violation(e_tri(s.d.eta, N)),
                         ice_rule_violation(r_tri(s.d.x, s.d.eta, N)), ice_rule_violation(e_heis(s.d.a, gamma)),
                         ice_rule_violation(r_heis(s.d.a, gamma))});
    w.add(e, Ctx::dyn_json(s));
  }
  return done(w);
}

Outcome derivative_fd(Ctx& c) {
  Worst w;
  for (int d = 0; d < c.draws(); ++d) {
    Ctx::Dyn s = c.dyn(d % 5 == 0);
    RMatrix4 dr = r_check_deriv(s.d, s.p);
    const double h = 1e-6;
    DynArgs a = s.d, b = s.d;
    a.x += h;
    b.x -= h;
    RMatrix4 fd = (r_check(a, s.p) - r_check(b, s.p)) / (2 * h);
    w.add(max4(fd - dr) / std::max(1.0, max4(dr)), Ctx::dyn_json(s));
  }
  return done(w);
}

Outcome exchange_closed_form(Ctx& c) {
  Worst w;
  for (int d = 0; d < 5 * c.draws(); ++d) {
    Ctx::Dyn s = c.dyn(d % 5 == 0);
    RMatrix4 e1 = exchange_E(s.d, s.p), e2 = exchange_E_closed(s.d, s.p);
    w.add(max4(e1 - e2) / std::max(1.0, max4(e2)), Ctx::dyn_json(s));
  }
  return done(w);
}

Outcome tl_trig(Ctx& c) {
  Worst w;
  for (int d = 0; d < c.draws(); ++d) {
    Ctx::Dyn s = c.dyn(true);
    int N = int(s.p.period);
    cplx q = std::exp(I * kPi * s.d.eta / double(N));
    RMatrix4 e = e_tri(s.d.eta, N);
    double sc = std::max(1.0, max4(e));
    w.add(max4(e * e - (q + 1.0 / q) * e) / (sc * sc), Ctx::dyn_json(s));
  }
  return done(w);
}

Outcome tl_heis(Ctx& c) {
  Worst w;
  for (int d = 0; d < c.draws(); ++d) {
    double gamma = c.ov.gamma ? *c.ov.gamma : c.uniform(0.05, 0.45);
    cplx a = c.ov.a ? *c.ov.a : c.box(-2, 2, -1, 1);
    RMatrix4 e = e_heis(a, gamma);
    double sc = std::max(1.0, max4(e));
    w.add(max4(e * e - 2.0 * std::cos(kPi * gamma) * e) / (sc * sc), {{"gamma", gamma}, {"a", cjson(a)}});
  }
  return done(w);
}

// Central block of E tends to that of 1 - P (spectrum {0, 2}) as eta -> 0;
// at kappa = 0 with eta a = -i 1e4 the entries themselves converge.
Outcome isotropic_exchange(Ctx& c) {
  Worst w;
  const RMatrix4 one_minus_p = RMatrix4::Identity() - swap4();
  for (int d = 0; d < c.per_size(4); ++d) {
    Ctx::Dyn s = c.dyn();
    cplx x = s.d.x, a = s.d.a;
    auto block_dev = [&](double eta) {
      RMatrix4 e = exchange_E({x, a, eta * std::exp(I * 0.3)}, s.p);
      Eigen::Matrix2cd b = e.block<2, 2>(1, 1);
      return std::max(std::abs(b.trace() - 2.0), std::abs(b.determinant()));
    };
    json note = Ctx::dyn_json(s);
    double r = rate_residual(block_dev(1e-3), block_dev(1e-4), 1e-3, 5.0, 0.0, note);
    EllipticParams p0 = s.p;
    p0.kappa = 0;
    const cplx eta = 1e-4;
    double t = max4(exchange_E({x, cplx(0, -1e4) / eta, eta}, p0) - one_minus_p);
    note["trig_deviation"] = t;
    w.add(std::max(r, t / 1e-3), note);
  }
  return done(w);
}

// ---- chain ----

Outcome perm_identity(Ctx& c) {
  Worst w;
  for (int N : c.sizes(2, 6))
    for (int d = 0; d < c.per_size(4); ++d) {
      ChainParams p = c.chain(N);
      Matrix id = Matrix::Identity(1L << N, 1L << N);
      double e = 0;
      for (int i = 1; i < N; ++i) e = std::max(e, maxabs(perm_P(i, 0.0, p).matrix - id));
      w.add(e, chain_json(p));
    }
  return done(w);
}

Outcome perm_unitarity(Ctx& c) {
  Worst w;
  for (int N : c.sizes(2, 6))
    for (int d = 0; d < c.per_size(4); ++d) {
      ChainParams p = c.chain(N);
      cplx x = c.box(-1.5, 1.5, -0.5, 0.5);
      Matrix id = Matrix::Identity(1L << N, 1L << N);
      double e = 0;
      for (int i = 1; i < N; ++i) e = std::max(e, maxabs(perm_P(i, -x, p).matrix * perm_P(i, x, p).matrix - id));
      w.add(e, chain_json(p));
    }
  return done(w);
}

Outcome braid(Ctx& c) {
  Worst w;
  for (int N : c.sizes(3, 6))
    for (int d = 0; d < c.per_size(4); ++d) {
      ChainParams p = c.chain(N);
      cplx x = c.box(-1.5, 1.5, -0.5, 0.5), y = c.box(-1.5, 1.5, -0.5, 0.5);
      auto P = [&](int i, cplx z) { return perm_P(i, z, p).matrix; };
      double e = 0;
      for (int i = 1; i + 1 < N; ++i)
        e = std::max(e, maxabs(P(i, x - y) * P(i + 1, x) * P(i, y) - P(i + 1, y) * P(i, x) * P(i + 1, x - y)));
      w.add(e, chain_json(p));
    }
  return done(w);
}

// Dynamical embedding against a bit-by-bit construction, and exch_E against
// the embedded closed form.
Outcome embed_block(Ctx& c) {
  Worst w;
  for (int N : c.sizes(2, 6))
    for (int d = 0; d < c.per_size(4); ++d) {
      ChainParams p = c.chain(N);
      RMatrix4 base;
      for (int r = 0; r < 4; ++r)
        for (int k = 0; k < 4; ++k) base(r, k) = c.box(-1, 1, -1, 1);
      Family fam = [base](cplx a) { return RMatrix4(base * a + RMatrix4::Identity()); };
      double e = 0;
      const long dim = 1L << N;
      for (int i = 1; i < N; ++i) {
        Matrix expect = Matrix::Zero(dim, dim);
        const int shift = N - i - 1;
        for (long col = 0; col < dim; ++col) {
          long left = col >> (N - i + 1);
          int s = 0;
          for (int k = 0; k < i - 1; ++k) s += ((left >> k) & 1) ? -1 : 1;
          RMatrix4 blk = fam(p.a - double(s));
          int lc = int((col >> shift) & 3);
          for (int lr = 0; lr < 4; ++lr) {
            long row = (col & ~(3L << shift)) | (long(lr) << shift);
            expect(row, col) = blk(lr, lc);
          }
        }
        e = std::max(e, rel_dev(embed_dynamical(fam, i, p).matrix, expect));
        EllipticParams ep = p.elliptic();
        double x = -double(1 + int(c.uniform(0, N - 1)));
        Family closed = [&](cplx a) { return exchange_E_closed({x, a, p.eta}, ep); };
        e = std::max(e, rel_dev(exch_E(i, x, p).matrix, embed_dynamical(closed, i, p).matrix));
      }
      w.add(e, chain_json(p));
    }
  return done(w);
}

Outcome sl_shift_covariance(Ctx& c) {
  Worst w;
  for (int N : c.sizes(3, 6))
    for (int d = 0; d < c.per_size(10); ++d) {
      ChainParams p = c.chain(N);
      double e = 0;
      for (int i = 1; i <= N; ++i)
        for (int j = i + 1; j <= N; ++j) {
          e = std::max(e, rel_dev(s_left(i, j, p).matrix,
                                  evaluate_word(shift_word(s_left_word(1, j - i + 1), i - 1), p).matrix));
          e = std::max(e, rel_dev(s_right(i, j, p).matrix,
                                  evaluate_word(shift_word(s_right_word(1, j - i + 1), i - 1), p).matrix));
        }
      w.add(e, chain_json(p));
    }
  return done(w);
}

template <class F>
Outcome over_chain(Ctx& c, int lo, int hi, F f, DrawOptions o = {}) {
  Worst w;
  for (int N : c.sizes(lo, hi))
    for (int d = 0; d < c.per_size(2); ++d) {
      ChainParams p = c.chain(N, o);
      w.add(f(p), chain_json(p));
    }
  return done(w);
}

Outcome commute_lr(Ctx& c) {
  return over_chain(c, 2, 6, [](const ChainParams& p) { return relative_commutator(h_left(p).matrix, h_right(p).matrix); });
}

Outcome commute_sz(Ctx& c) {
  return over_chain(c, 2, 6, [](const ChainParams& p) {
    Matrix sz = total_sz(p.N).matrix;
    return std::max(relative_commutator(h_left(p).matrix, sz), relative_commutator(h_right(p).matrix, sz));
  });
}

Outcome commute_g(Ctx& c) {
  return over_chain(c, 2, 6, [](const ChainParams& p) {
    Matrix g = translation_G(p).matrix;
    return std::max(relative_commutator(h_left(p).matrix, g), relative_commutator(h_right(p).matrix, g));
  });
}

Outcome twist_central(Ctx& c) {
  return over_chain(c, 2, 6, [](const ChainParams& p) {
    Matrix g = translation_G(p).matrix;
    return std::max(power_residual(g, p.N, twist_total(p).matrix),
                    relative_commutator(twist_total(p).matrix, g));
  });
}

Outcome gprime_order(Ctx& c) {
  return over_chain(c, 2, 6, [](const ChainParams& p) {
    Matrix g = g_normalized(p).matrix;
    return power_residual(g, p.N, Matrix::Identity(g.rows(), g.cols()));
  });
}

// S^L_{1N} = G S^L_{12} G^{-1} and S^R_{1N} = G^{-1} S^R_{N-1,N} G in the
// form S G = G S', without inverting G
Outcome chirality_boundary(Ctx& c) {
  return over_chain(c, 3, 6, [](const ChainParams& p) {
    const int N = p.N;
    Matrix g = translation_G(p).matrix;
    Matrix l1n = s_left(1, N, p).matrix, l12 = s_left(1, 2, p).matrix;
    Matrix r1n = s_right(1, N, p).matrix, rn = s_right(N - 1, N, p).matrix;
    return std::max(product_residual({1.0, {&l1n, &g}}, {1.0, {&g, &l12}}),
                    product_residual({1.0, {&g, &r1n}}, {1.0, {&rn, &g}}));
  });
}

Outcome magnon_eigen(Ctx& c) {
  return over_chain(c, 2, 6, [](const ChainParams& p) {
    const int N = p.N;
    Matrix gp = g_normalized(p).matrix;
    std::vector<int> idx = sector_indices(N, 1);
    auto mags = magnon_states(p);
    if (int(mags.size()) != N) return kInf;
    double e = 0;
    for (const MagnonState& m : mags) {
      cplx lam = std::exp(I * (2.0 * kPi * m.momentum_index / N));
      e = std::max(e, (gp * m.vector - lam * m.vector).norm() / m.vector.norm());
      double in = 0;
      for (int k : idx) in += std::norm(m.vector(k));
      e = std::max(e, std::abs(in - m.vector.squaredNorm()) / m.vector.squaredNorm());
    }
    return e;
  });
}

Outcome reference_eigen(Ctx& c) {
  return over_chain(c, 2, 6, [](const ChainParams& p) {
    Vector up = Vector::Zero(1L << p.N);
    up(0) = 1.0;
    double e = 0;
    for (const SpinOperator& h : {h_left(p), h_right(p)}) {
      Vector hv = h.matrix * up;
      e = std::max(e, (hv - hv(0) * up).norm() / std::max(1.0, hv.norm()));
    }
    return e;
  });
}

Outcome spectrum_reality(Ctx& c) {
  return over_chain(
      c, 2, 6,
      [](const ChainParams& p) {
        double e = 0;
        for (const SpinOperator& h : {h_left(p), h_right(p)}) {
          std::vector<cplx> ev = spectrum(h);
          e = std::max(e, max_imag(ev) / spread(ev));
        }
        return e;
      },
      {.reality = true});
}

Outcome sector_union(Ctx& c) {
  return over_chain(c, 2, 6, [](const ChainParams& p) {
    SpinOperator hl = h_left(p);
    std::vector<cplx> all;
    for (int k = 0; k <= p.N; ++k) {
      std::vector<cplx> s = spectrum(hl, k);
      all.insert(all.end(), s.begin(), s.end());
    }
    std::vector<cplx> full = spectrum(hl);
    if (all.size() != full.size()) return kInf;
    return spectral_distance(all, full) / std::max(1.0, spread(full));
  }, {.margin = 0.1});
}

Outcome su2_symmetry(Ctx& c) {
  return over_chain(c, 2, 6, [](const ChainParams& p) {
    const int N = p.N;
    double e = 0;
    for (const SpinOperator& h : {h_inozemtsev(p), h_haldane_shastry(N)})
      for (const SpinOperator& s : {total_sx(N), total_sy(N), total_sz(N)})
        e = std::max(e, maxabs(h.matrix * s.matrix - s.matrix * h.matrix) / std::max(1.0, maxabs(h.matrix)));
    return e;
  });
}

// ---- limits ----

template <class F>
Outcome over_limit(Ctx& c, int lo, int hi, int divisor, F f, DrawOptions o = {}) {
  Worst w;
  for (int N : c.sizes(lo, hi))
    for (int d = 0; d < c.per_size(divisor); ++d) {
      ChainParams p = c.chain(N, o);
      json note = chain_json(p);
      double r = f(p, note);
      w.add(r, note);
    }
  return done(w);
}

Outcome isotropic(Ctx& c) {
  return over_limit(c, 2, 5, 4, [](const ChainParams& p, json& note) {
    std::vector<cplx> ino = spectrum(h_inozemtsev(p));
    double r = 0;
    for (bool left : {true, false}) {
      auto dev = [&](double eta) {
        ChainParams q = p;
        q.eta = eta * std::exp(I * 0.4);
        return spectral_distance(spectrum(left ? h_left(q) : h_right(q)), spectrum(h_inozemtsev(q)));
      };
      json part;
      r = std::max(r, rate_residual(dev(1e-3), dev(1e-4), 1e-3, 5.0, p.N > 2 ? 20.0 : 0.0, part));
      note[left ? "left" : "right"] = part;
    }
    return r;
  });
}

Outcome trigonometric(Ctx& c) {
  return over_limit(
      c, 2, 6, 4,
      [](const ChainParams& p0, json& note) {
        ChainParams p = p0;
        p.a = cplx(0, -1e4) / p.eta;
        note["a"] = cjson(p.a);
        return std::max(rel_dev(h_left(p).matrix, h_deformed_hs(Chirality::Left, p.N, p.eta).matrix),
                        rel_dev(h_right(p).matrix, h_deformed_hs(Chirality::Right, p.N, p.eta).matrix));
      },
      {.trig = true});
}

Outcome hs_from_trig(Ctx& c) {
  Worst w;
  for (int N : c.sizes(2, 6)) {
    std::vector<cplx> hs = spectrum(h_haldane_shastry(N));
    double r = 0;
    json note = {{"N", N}};
    for (Chirality ch : {Chirality::Left, Chirality::Right}) {
      auto dev = [&](double eta) { return spectral_distance(spectrum(h_deformed_hs(ch, N, cplx(0, eta))), hs); };
      json part;
      r = std::max(r, rate_residual(dev(1e-3), dev(1e-4), 1e-3, 5.0, 0.0, part));
      note[ch == Chirality::Left ? "left" : "right"] = part;
    }
    w.add(r, note);
  }
  return done(w);
}

Outcome ino_to_hs(Ctx& c) {
  Worst w;
  for (int N : c.sizes(3, 6)) {
    Matrix hs = h_haldane_shastry(N).matrix;
    ChainParams q;
    q.N = N;
    auto dev = [&](double kappa) {
      q.kappa = kappa;
      return rel_dev(h_inozemtsev(q).matrix, hs);
    };
    json note = {{"N", N}};
    double r = rate_residual(dev(1e-3), dev(1e-4), 1e-4, 5.0, 20.0, note);
    double exact = dev(0.0);
    note["kappa0_deviation"] = exact;
    w.add(std::max(r, exact / 1e-13), note);
  }
  return done(w);
}

Outcome xxx_from_xxz(Ctx& c) {
  Worst w;
  for (int N : c.sizes(3, 5)) {
    std::vector<cplx> ref = spectrum(h_heisenberg_xxx(N));
    auto dev = [&](double gamma) {
      return spectral_distance(spectrum(h_xxz(gamma, cplx(0, -1e4), N).hamiltonian()), ref);
    };
    json note = {{"N", N}, {"a", cjson(cplx(0, -1e4))}};
    w.add(rate_residual(dev(1e-6), dev(1e-7), 0.1, 5.0, 20.0, note), note);
  }
  return done(w);
}

Outcome short_range(Ctx& c) {
  Worst w;
  const double gamma = c.ov.gamma ? *c.ov.gamma : 0.23;
  const cplx a = c.ov.a ? *c.ov.a : cplx(0.37, 0.1);
  for (int N : c.ov.N ? std::vector<int>{*c.ov.N} : std::vector<int>{3, 4}) {
    std::vector<cplx> ref = spectrum(h_xxz(gamma, a, N).hamiltonian());
    auto dev = [&](double kappa) {
      ChainParams p;
      p.N = N;
      p.kappa = kappa;
      p.eta = cplx(0, -kPi * gamma / kappa);
      p.a = a;
      double s = std::sinh(kappa) / kappa;
      SpinOperator h{N, s * s * h_left(p).matrix};
      return spectral_distance(spectrum(h), ref) / std::max(1.0, spread(ref));
    };
    double d4 = dev(4.0), d8 = dev(8.0);
    json note = {{"N", N}, {"gamma", gamma}, {"a", cjson(a)}};
    w.add(rate_residual(d4, d8, 1e-4, 10.0, 0.0, note), note);
  }
  return done(w);
}

Outcome intermediate(Ctx& c) {
  return over_limit(c, 2, 5, 4, [&c](const ChainParams& p, json& note) {
    cplx ap = c.ov.a_prime ? *c.ov.a_prime : c.box(-0.8, 0.8, 0.2, 0.6);
    note["a_prime"] = cjson(ap);
    std::vector<cplx> ref = spectrum(h_intermediate(ap, p));
    double r = 0;
    for (bool left : {true, false}) {
      auto dev = [&](double eta) {
        ChainParams q = p;
        q.eta = eta * std::exp(I * 0.2);
        q.a = ap / q.eta;
        return spectral_distance(spectrum(left ? h_left(q) : h_right(q)), ref);
      };
      json part;
      r = std::max(r, rate_residual(dev(1e-3), dev(1e-4), 1e-3, 5.0, p.N > 2 ? 20.0 : 0.0, part));
      note[left ? "left" : "right"] = part;
    }
    return r;
  });
}

Outcome intermediate_to_ino(Ctx& c) {
  return over_limit(c, 2, 5, 4, [](const ChainParams& p, json& note) {
    std::vector<cplx> ino = spectrum(h_inozemtsev(p));
    const cplx phase = std::exp(I * 0.3);
    double e5 = spectral_distance(spectrum(h_intermediate(1e-5 * phase, p)), ino);
    double e3 = spectral_distance(spectrum(h_intermediate(1e-3 * phase, p)), ino);
    double s = std::max(1.0, spread(ino));
    return rate_residual(e3 / s, e5 / s, 1e-4, 10.0, 0.0, note);
  });
}

Outcome intermediate_reality(Ctx& c) {
  return over_limit(c, 2, 6, 4, [&c](const ChainParams& p, json& note) {
    cplx ap = c.ov.a_prime ? *c.ov.a_prime : cplx(0, c.uniform(0.2, 1.0));
    note["a_prime"] = cjson(ap);
    std::vector<cplx> ev = spectrum(h_intermediate(ap, p));
    return max_imag(ev) / spread(ev);
  });
}

Outcome magnon_isotropic(Ctx& c) {
  return over_limit(c, 3, 6, 4, [](const ChainParams& p, json& note) {
    auto dev = [&](double eta) {
      ChainParams q = p;
      q.eta = eta * std::exp(I * 0.3);
      Matrix hl = h_left(q).matrix;
      std::vector<cplx> e;
      for (const MagnonState& m : magnon_states(q)) e.push_back(m.vector.dot(hl * m.vector) / m.vector.squaredNorm());
      return spectral_distance(e, spectrum(h_inozemtsev(q), 1));
    };
    return rate_residual(dev(1e-3), dev(1e-4), 1e-3, 5.0, 20.0, note);
  });
}

// ---- xxz ----

template <class F>
Outcome over_xxz(Ctx& c, F f) {
  Worst w;
  for (int N : c.sizes(3, 6))
    for (int d = 0; d < c.draws(); ++d) {
      double gamma = 0;
      cplx a;
      // keep every realised sin(pi gamma (a - s)) away from zero
      for (int tries = 0; tries < 200; ++tries) {
        gamma = c.ov.gamma ? *c.ov.gamma : c.uniform(0.05, 0.45);
        a = c.ov.a ? *c.ov.a : c.box(-1.5, 1.5, -1.0, 1.0);
        double least = kInf;
        for (int s = -N; s <= N; ++s) least = std::min(least, std::abs(std::sin(kPi * gamma * (a - double(s)))));
        if (least > 0.1) break;
      }
      w.add(f(XxzChain(gamma, a, N)), {{"N", N}, {"gamma", gamma}, {"a", cjson(a)}});
    }
  return done(w);
}

// e_0 = G e_1 G^{-1} and its other form G^{-1} e_{N-1} G, checked without
// inverting G: e_0 G = G e_1, G e_0' = e_{N-1} G and G^2 e_1 = e_{N-1} G^2.
Outcome boundary_forms(Ctx& c) {
  return over_xxz(c, [](const XxzChain& x) {
    const int N = x.sites();
    const Matrix& g = x.g_op().matrix;
    const Matrix& e0 = x.e_op(0).matrix;
    const Matrix& e1 = x.e_op(1).matrix;
    const Matrix& en = x.e_op(N - 1).matrix;
    Matrix alt = x.e0_alternative().matrix;
    return std::max({product_residual({1.0, {&e0, &g}}, {1.0, {&g, &e1}}),
                     product_residual({1.0, {&g, &alt}}, {1.0, {&en, &g}}),
                     product_residual({1.0, {&g, &g, &e1}}, {1.0, {&en, &g, &g}})});
  });
}

Outcome tl(Ctx& c) {
  return over_xxz(c, [](const XxzChain& x) {
    const int N = x.sites();
    const cplx c2 = 2 * std::cos(kPi * x.gamma());
    auto e = [&](int i) { return &x.e_op(((i % N) + N) % N).matrix; };
    double r = 0;
    for (int i = 0; i < N; ++i) {
      r = std::max(r, product_residual({1.0, {e(i), e(i)}}, {c2, {e(i)}}));
      r = std::max(r, product_residual({1.0, {e(i), e(i + 1), e(i)}}, {1.0, {e(i)}}));
      r = std::max(r, product_residual({1.0, {e(i), e(i - 1), e(i)}}, {1.0, {e(i)}}));
    }
    return r;
  });
}

// u e_i = e_{i-1} u, u^N central, u^2 e_1 ... e_{N-1} = e_{N-1}
Outcome affine_tl(Ctx& c) {
  return over_xxz(c, [](const XxzChain& x) {
    const int N = x.sites();
    auto e = [&](int i) { return &x.e_op(((i % N) + N) % N).matrix; };
    Matrix u = x.u_op().matrix;
    double r = 0;
    for (int i = 0; i < N; ++i) {
      r = std::max(r, product_residual({1.0, {&u, e(i)}}, {1.0, {e(i - 1), &u}}));
      Product l{1.0, std::vector<const Matrix*>(N, &u)}, rr{1.0, {e(i)}};
      l.factors.push_back(e(i));
      rr.factors.insert(rr.factors.end(), N, &u);
      r = std::max(r, product_residual(l, rr));
    }
    Product chain{1.0, {&u, &u}};
    for (int i = 1; i < N; ++i) chain.factors.push_back(e(i));
    return std::max(r, product_residual(chain, {1.0, {e(N - 1)}}));
  });
}

// ---- qmbs ----

json qmbs_json(const QmbsParams& q, const Point& x) {
  json j = chain_json(q.chain);
  j["hbar"] = q.hbar;
  j["epsilon"] = cjson(q.epsilon);
  json pts = json::array();
  for (cplx v : x) pts.push_back(cjson(v));
  j["x"] = pts;
  return j;
}

// full check at N = 2, 3, spot check at N = 4
template <class F>
Outcome over_points(Ctx& c, F f) {
  Worst w;
  std::vector<std::pair<int, int>> plan;
  if (c.ov.N)
    plan.push_back({*c.ov.N, *c.ov.N >= 4 ? 3 : c.draws()});
  else
    plan = {{2, c.draws()}, {3, c.draws()}, {4, 3}};
  for (auto [N, count] : plan)
    for (int k = 0; k < count; ++k) {
      QmbsParams q = c.qmbs(N);
      Point x = c.point(q);
      w.add(f(q, x), qmbs_json(q, x));
    }
  return done(w);
}

Outcome commute_d1_dminus1(Ctx& c) {
  return over_points(c, [](const QmbsParams& q, const Point& x) {
    return commutator_residual(build_d1(q), build_dminus1(q), x);
  });
}

Outcome commute_d1_dN(Ctx& c) {
  return over_points(c, [](const QmbsParams& q, const Point& x) {
    return commutator_residual(build_d1(q), build_dN(q), x);
  });
}

Outcome commute_dminus1_dN(Ctx& c) {
  return over_points(c, [](const QmbsParams& q, const Point& x) {
    return commutator_residual(build_dminus1(q), build_dN(q), x);
  });
}

Outcome ptot_invariance(Ctx& c) {
  return over_points(c, [&c](const QmbsParams& q, const Point& x) {
    const int N = q.chain.N;
    VectorFn f = c.exponential(N);
    DiffOp d1 = build_d1(q), dm = build_dminus1(q);
    double r = 0;
    for (int i = 1; i < N; ++i)
      r = std::max({r, ptot_invariance_residual(d1, i, f, x), ptot_invariance_residual(dm, i, f, x)});
    return r;
  });
}

Outcome ptot_involution(Ctx& c) {
  return over_points(c, [&c](const QmbsParams& q, const Point& x) {
    const int N = q.chain.N;
    VectorFn f = c.exponential(N);
    double r = 0;
    for (int i = 1; i < N; ++i) {
      Vector twice = ptot_apply(i, [&](const Point& y) { return ptot_apply(i, f, y, q); }, x, q);
      r = std::max(r, (twice - f(x)).norm() / f(x).norm());
    }
    return r;
  });
}

template <class F>
Outcome over_higher(Ctx& c, F f) {
  Worst w;
  for (int N : c.sizes(2, 4))
    for (int d = 0; d < c.per_size(10); ++d) {
      QmbsParams q = c.qmbs(N);
      Point x = c.point(q);
      w.add(f(q, x), qmbs_json(q, x));
    }
  return done(w);
}

Outcome higher_invariance(Ctx& c) {
  return over_higher(c, [&c](const QmbsParams& q, const Point& x) {
    const int N = q.chain.N;
    double r = 0;
    for (int k = 1; k <= N; ++k)
      for (int sign : {1, -1}) {
        DiffOp h = build_higher(k, sign, q);
        VectorFn f = c.exponential(N);
        for (int i = 1; i < N; ++i) r = std::max(r, ptot_invariance_residual(h, i, f, x));
      }
    return r;
  });
}

Outcome higher_seed(Ctx& c) {
  return over_higher(c, [](const QmbsParams& q, const Point& x) {
    const int N = q.chain.N;
    double r = 0;
    auto compare = [&](const DiffOp& a, const DiffOp& b) {
      if (a.terms().size() != b.terms().size()) r = kInf;
      for (const auto& t : b.terms()) {
        Matrix cb = b.coefficient(t.first, x);
        r = std::max(r, maxabs(a.coefficient(t.first, x) - cb) / std::max(1.0, maxabs(cb)));
      }
    };
    compare(build_higher(1, 1, q), build_d1(q));
    compare(build_higher(1, -1, q), build_dminus1(q));
    DiffOp top = build_higher(N, 1, q);
    if (top.terms().size() != 1 || top.terms().begin()->first != Shift(N, 1)) return kInf;
    return std::max(r, maxabs(top.coefficient(Shift(N, 1), x) - SpinOperator::identity(N).matrix));
  });
}

Outcome dN_shift(Ctx& c) {
  return over_points(c, [&c](const QmbsParams& q, const Point& x) {
    VectorFn f = c.exponential(q.chain.N);
    Vector s = apply(build_dN(q), f, x);
    Point y = x;
    for (cplx& v : y) v -= q.step();
    return (s - f(y)).norm() / s.norm();
  });
}

Outcome normal_form(Ctx& c) {
  return over_points(c, [&c](const QmbsParams& q, const Point& x) {
    VectorFn f = c.exponential(q.chain.N);
    DiffOp d1 = build_d1(q), dm = build_dminus1(q);
    double r = 0;
    for (auto [a, b] : {std::pair{&d1, &dm}, std::pair{&dm, &d1}}) {
      Vector lhs = apply(compose(*a, *b), f, x);
      Vector rhs = apply(*a, [&](const Point& y) { return apply(*b, f, y); }, x);
      r = std::max(r, (lhs - rhs).norm() / rhs.norm());
    }
    DiffOp empty(q);
    if (!compose(d1, empty).empty() || !compose(empty, d1).empty()) return kInf;
    return r;
  });
}

template <class F>
Outcome over_equilibria(Ctx& c, F f) {
  Worst w;
  for (int N : c.sizes(2, 6))
    for (int d = 0; d < c.per_size(5); ++d) {
      ChainParams p = c.chain(N);
      if (p.kappa <= 0) throw ParameterError("equilibria need kappa > 0");
      json note = chain_json(p);
      w.add(f(p, note), note);
    }
  return done(w);
}

const cplx kEps{0.0, 0.1};

Outcome equilibrium_1_check(Ctx& c) {
  return over_equilibria(c, [](const ChainParams& p, json& note) {
    EquilibriumConfig e = equilibrium_1(p, kEps);
    cplx closed = equilibrium_1_constant(p);
    double r = equilibrium_residual(e);
    for (cplx a : classical_coefficients(e.x, e.coupling, e.tau)) r = std::max(r, rel(a, closed));
    for (cplx v : classical_velocities(e)) r = std::max(r, rel(v / e.epsilon, closed));
    note["a_star"] = cjson(closed);
    return r;
  });
}

Outcome equilibrium_2_check(Ctx& c) {
  return over_equilibria(c, [](const ChainParams& p, json& note) {
    EquilibriumConfig e = equilibrium_2(p, kEps);
    cplx closed = equilibrium_2_constant(p);
    double r = equilibrium_residual(e);
    for (cplx v : classical_velocities(e)) r = std::max(r, rel(v / e.epsilon, closed));
    note["a_star"] = cjson(closed);
    return r;
  });
}

// 1e-4 divided by the smallest residual of a displaced configuration
Outcome equilibrium_perturbed(Ctx& c) {
  return over_equilibria(c, [](const ChainParams& p, json& note) {
    double least = kInf;
    for (EquilibriumConfig e : {equilibrium_1(p, kEps), equilibrium_2(p, kEps)}) {
      e.x[0] += 0.01;
      least = std::min(least, equilibrium_residual(e));
    }
    note["perturbed_residual"] = least;
    return 1e-4 / least;
  });
}

template <class F>
Outcome over_freeze(Ctx& c, Chirality ch, F f) {
  Worst w;
  for (int N : c.sizes(2, 4))
    for (int d = 0; d < c.per_size(4); ++d) {
      ChainParams p = c.chain(N);
      json note = chain_json(p);
      double r;
      try {
        FreezeResult fr = freeze_check(ch, p);
        note["a_star"] = cjson(fr.a_star);
        note["fitted_constant"] = cjson(fr.fitted_constant);
        note["gate_residual"] = fr.gate_residual;
        r = f(fr);
      } catch (const GateError& e) {
        note["gate_failure"] = e.what();
        r = kInf;
      }
      w.add(r, note);
    }
  return done(w);
}

Outcome freeze_deviation(Ctx& c, Chirality ch) {
  return over_freeze(c, ch, [](const FreezeResult& r) {
    return std::max(r.deviation, std::abs(r.fitted_constant - r.a_star) / std::abs(r.a_star));
  });
}

Outcome freeze_gate(Ctx& c) {
  Worst w;
  for (Chirality ch : {Chirality::Left, Chirality::Right}) {
    Outcome o = over_freeze(c, ch, [](const FreezeResult& r) { return r.gate_residual; });
    o.params["chirality"] = ch == Chirality::Left ? "L" : "R";
    w.add(o.residual, o.params);
  }
  return done(w);
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r = {
      {"elliptic.quasiperiod_imag", 1e-11, quasiperiod_imag},
      {"elliptic.quasiperiod_real", 1e-11, quasiperiod_real},
      {"elliptic.addition_formula", 1e-11, addition_formula},
      {"elliptic.kappa_continuity", 1e-5, kappa_continuity},
      {"elliptic.argument_reduction", 1e-12, argument_reduction},
      {"elliptic.normalisation", 1e-13, normalisation},
      {"elliptic.rho_periods", 1e-11, rho_periods},
      {"elliptic.potential_symmetry", 1e-11, potential_symmetry},
      {"elliptic.modular_bridge", 1e-10, modular_bridge},
      {"elliptic.vartheta_quasiperiod", 1e-11, vartheta_quasiperiod},

      {"rmatrix.initial_condition", 1e-13, initial_condition},
      {"rmatrix.unitarity", 1e-12, [](Ctx& c) { return unitarity_impl(c, false); }},
      {"rmatrix.unitarity_trig", 1e-12, [](Ctx& c) { return unitarity_impl(c, true); }},
      {"rmatrix.dybe", 1e-11, [](Ctx& c) { return dybe_impl(c, false); }},
      {"rmatrix.dybe_trig", 1e-12, [](Ctx& c) { return dybe_impl(c, true); }},
      {"rmatrix.ice_rule", 1e-300, ice_rule},
      {"rmatrix.derivative_fd", 1e-7, derivative_fd},
      {"rmatrix.exchange_closed_form", 1e-10, exchange_closed_form},
      {"rmatrix.tl_trig", 1e-12, tl_trig},
      {"rmatrix.tl_heis", 1e-12, tl_heis},
      {"rmatrix.isotropic_exchange", 1.0, isotropic_exchange},

      {"chain.perm_identity", 1e-13, perm_identity},
      {"chain.perm_unitarity", 1e-12, perm_unitarity},
      {"chain.braid", 1e-11, braid},
      {"chain.embed_block", 1e-10, embed_block},
      {"chain.sl_shift_covariance", 1e-12, sl_shift_covariance},
      {"chain.commute_lr", 1e-10, commute_lr},
      {"chain.commute_sz", 1e-10, commute_sz},
      {"chain.commute_g", 1e-10, commute_g},
      {"chain.twist_central", 1e-11, twist_central},
      {"chain.gprime_order", 1e-11, gprime_order},
      {"chain.chirality_boundary", 1e-11, chirality_boundary},
      {"chain.magnon_eigen", 1e-10, magnon_eigen},
      {"chain.reference_eigen", 1e-12, reference_eigen},
      {"chain.spectrum_reality", 1e-8, spectrum_reality},
      {"chain.sector_union", 1e-9, sector_union},
      {"chain.su2_symmetry", 1e-12, su2_symmetry},
      {"xxz.boundary_forms", 1e-11, boundary_forms},
      {"xxz.tl", 1e-11, tl},
      {"xxz.affine_tl", 1e-11, affine_tl},

      {"limits.isotropic", 1.0, isotropic},
      {"limits.trigonometric", 1e-10, trigonometric},
      {"limits.hs_from_trig", 1.0, hs_from_trig},
      {"limits.ino_to_hs", 1.0, ino_to_hs},
      {"limits.xxx_from_xxz", 1.0, xxx_from_xxz},
      {"limits.short_range", 1.0, short_range},
      {"limits.intermediate", 1.0, intermediate},
      {"limits.intermediate_to_ino", 1.0, intermediate_to_ino},
      {"limits.intermediate_reality", 1e-8, intermediate_reality},
      {"limits.magnon_isotropic", 1.0, magnon_isotropic},

      {"qmbs.commute_d1_dminus1", 1e-9, commute_d1_dminus1},
      {"qmbs.commute_d1_dN", 1e-9, commute_d1_dN},
      {"qmbs.commute_dminus1_dN", 1e-9, commute_dminus1_dN},
      {"qmbs.ptot_invariance", 1e-10, ptot_invariance},
      {"qmbs.ptot_involution", 1e-12, ptot_involution},
      {"qmbs.higher_invariance", 1e-10, higher_invariance},
      {"qmbs.higher_seed", 1e-11, higher_seed},
      {"qmbs.dN_shift", 1e-13, dN_shift},
      {"qmbs.normal_form", 1e-12, normal_form},
      {"qmbs.equilibrium_1", 1e-10, equilibrium_1_check},
      {"qmbs.equilibrium_2", 1e-10, equilibrium_2_check},
      {"qmbs.equilibrium_perturbed", 1.0, equilibrium_perturbed},
      {"qmbs.freeze_left", 1e-7, [](Ctx& c) { return freeze_deviation(c, Chirality::Left); }},
      {"qmbs.freeze_right", 1e-7, [](Ctx& c) { return freeze_deviation(c, Chirality::Right); }},
      {"qmbs.freeze_gate", 1e-10, freeze_gate},
  };
  return r;
}

bool in_suite(const std::string& name, Suite s) {
  auto prefix = [&](const char* p) { return name.rfind(p, 0) == 0; };
  switch (s) {
    case Suite::All: return true;
    case Suite::Elliptic: return prefix("elliptic.");
    case Suite::Rmatrix: return prefix("rmatrix.");
    case Suite::Chain: return prefix("chain.") || prefix("xxz.");
    case Suite::Qmbs: return prefix("qmbs.");
    case Suite::Limits: return prefix("limits.");
  }
  return false;
}

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t check_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : name) h = (h ^ ch) * 1099511628211ULL;
  return splitmix(seed ^ splitmix(h));
}

CheckResult run_one(const Entry& e, std::uint64_t seed, const Overrides& ov) {
  CheckResult r;
  r.name = e.name;
  r.tolerance = e.tolerance;
  r.seed = check_seed(seed, e.name);
  auto t0 = std::chrono::steady_clock::now();
  Ctx ctx{std::mt19937_64(r.seed), ov};
  try {
    Outcome o = e.fn(ctx);
    r.residual = o.residual;
    r.params_used = o.params;
    r.pass = o.residual <= e.tolerance;
    r.status = r.pass ? "ok" : "fail";
  } catch (const Error& err) {
    r.residual = std::numeric_limits<double>::quiet_NaN();
    r.pass = false;
    switch (err.code()) {
      case ErrorCode::Pole:
      case ErrorCode::Parameter:
      case ErrorCode::Degenerate:
      case ErrorCode::Size: r.status = "precondition_violation"; break;
      default: r.status = "error";
    }
    r.params_used = {{"error", err.what()}};
  }
  r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::optional<Suite> parse_suite(const std::string& s) {
  static const std::map<std::string, Suite> m = {{"elliptic", Suite::Elliptic}, {"rmatrix", Suite::Rmatrix},
                                                 {"chain", Suite::Chain},       {"qmbs", Suite::Qmbs},
                                                 {"limits", Suite::Limits},     {"all", Suite::All}};
  auto it = m.find(s);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

std::string suite_name(Suite s) {
  switch (s) {
    case Suite::Elliptic: return "elliptic";
    case Suite::Rmatrix: return "rmatrix";
    case Suite::Chain: return "chain";
    case Suite::Qmbs: return "qmbs";
    case Suite::Limits: return "limits";
    case Suite::All: return "all";
  }
  return "";
}

std::vector<std::string> registry_names() { return suite_checks(Suite::All); }

std::vector<std::string> suite_checks(Suite s) {
  std::vector<std::string> out;
  for (const Entry& e : registry())
    if (in_suite(e.name, s)) out.push_back(e.name);
  return out;
}

std::vector<CheckResult> run_suite(Suite s, std::uint64_t seed, const Overrides& ov) {
  if (ov.N && (*ov.N < 2 || *ov.N > kMaxSites)) throw SizeError("N outside [2, 12]");
  std::vector<const Entry*> todo;
  for (const Entry& e : registry())
    if (in_suite(e.name, s)) todo.push_back(&e);

  std::vector<CheckResult> results(todo.size());
  std::vector<std::exception_ptr> failures(todo.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next.fetch_add(1)) < todo.size();) {
      try {
        results[i] = run_one(*todo[i], seed, ov);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  int jobs = std::clamp(ov.jobs, 1, std::max(1, int(todo.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  for (size_t i = 0; i < todo.size(); ++i)
    if (failures[i]) {
      try {
        std::rethrow_exception(failures[i]);
      } catch (const std::exception& e) {
        throw std::runtime_error("check " + todo[i]->name + ": " + e.what());
      }
    }
  return results;
}

json to_json(const CheckResult& r) {
  return {{"name", r.name},
          {"residual", finite_or_null(r.residual)},
          {"tolerance", r.tolerance},
          {"pass", r.pass},
          {"seed", r.seed},
          {"params_used", r.params_used},
          {"runtime_ms", r.runtime_ms},
          {"status", r.status}};
}

json report_json(const std::vector<CheckResult>& results) {
  json a = json::array();
  for (const CheckResult& r : results) a.push_back(to_json(r));
  return a;
}

}  // namespace ellspin
