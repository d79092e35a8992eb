#include "ellspin/elliptic.hpp"

#include <cmath>
#include <sstream>

#include "ellspin/error.hpp"

namespace ellspin {

namespace {

std::string fmt(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  return os.str();
}

// a + b with a common exponent.
Scaled add(const Scaled& a, const Scaled& b) {
  if (a.mant == cplx(0.0)) return b;
  if (b.mant == cplx(0.0)) return a;
  double m = std::max(a.log_mag, b.log_mag);
  return {a.mant * std::exp(a.log_mag - m) + b.mant * std::exp(b.log_mag - m), m};
}

Scaled scale(const Scaled& a, cplx c) { return {a.mant * c, a.log_mag}; }

// sin z and cos z in scaled form, safe for large |Im z|.
Scaled scaled_sin(cplx z) {
  double y = z.imag();
  if (std::abs(y) < 30.0) return {std::sin(z), 0.0};
  if (y > 0) {
    cplx m = -std::polar(1.0, -z.real()) * (-cexpm1(2.0 * I * z)) / (2.0 * I);
    return {m, y};
  }
  cplx m = std::polar(1.0, z.real()) * (-cexpm1(-2.0 * I * z)) / (2.0 * I);
  return {m, -y};
}

Scaled scaled_cos(cplx z) {
  double y = z.imag();
  if (std::abs(y) < 30.0) return {std::cos(z), 0.0};
  if (y > 0) return {std::polar(1.0, -z.real()) * (1.0 + std::exp(2.0 * I * z)) / 2.0, y};
  return {std::polar(1.0, z.real()) * (1.0 + std::exp(-2.0 * I * z)) / 2.0, -y};
}

// cot z = i (e^{2iz} + 1)/(e^{2iz} - 1), arranged so the exponential is small.
cplx stable_cot(cplx z) {
  if (z.imag() >= 0) {
    cplx e = std::exp(2.0 * I * z);
    return I * (e + 1.0) / cexpm1(2.0 * I * z);
  }
  cplx e = std::exp(-2.0 * I * z);
  return -I * (1.0 + e) / cexpm1(-2.0 * I * z);
}

// 1/sin^2 z
cplx stable_csc2(cplx z) {
  if (z.imag() < 0) z = -z;
  cplx e = std::exp(2.0 * I * z);
  cplx d = cexpm1(2.0 * I * z);
  return -4.0 * e / (d * d);
}

// Number of product factors: the first omitted factor deviates from 1 by at
// most bound_base * r^{M+1}, and the whole tail by that over (1 - r).
int truncation_terms(double log_r, double log_bound_base, double tolerance, int max_terms,
                     const char* what) {
  // log_r < 0
  double r = std::exp(log_r);
  double lhs = std::log(tolerance / 2.0) - log_bound_base + std::log1p(-r);
  double need = std::ceil(lhs / log_r) - 1.0;
  if (need < 0) need = 0;
  if (need > max_terms) {
    std::ostringstream os;
    os << what << ": truncation needs " << need << " product terms, cap is " << max_terms;
    throw AccuracyError(os.str());
  }
  return static_cast<int>(need);
}

struct Reduced {
  cplx xr;
  Scaled prefactor;    // multiplier F with theta(x) = F theta(xr)
  cplx dlog_prefactor; // F'/F
  long k = 0, l = 0;
};

Reduced reduce_chain(cplx x, const EllipticParams& p) {
  Reduced r;
  double N = p.period;
  long l = 0;
  cplx x1 = x;
  if (p.kappa > 0) {
    l = std::lround(x.imag() * p.kappa / kPi);
    x1 = x - cplx(0.0, l * kPi / p.kappa);
  }
  long k = std::lround(x1.real() / N);
  r.xr = x1 - double(k) * N;
  r.k = k;
  r.l = l;
  double sign = ((k + l) % 2 == 0) ? 1.0 : -1.0;
  if (p.kappa > 0) {
    double kk = double(k);
    double lm = p.kappa * (2.0 * kk * r.xr.real() + kk * kk * N);
    r.prefactor = {sign * std::polar(1.0, 2.0 * p.kappa * kk * r.xr.imag()), lm};
    r.dlog_prefactor = 2.0 * p.kappa * kk;
  } else {
    r.prefactor = {sign, 0.0};
    r.dlog_prefactor = 0.0;
  }
  return r;
}

struct ProductSums {
  cplx prod{1.0, 0.0};
  cplx dlog{0.0, 0.0};   // sum of d/dx log factor_n
  cplx d2log{0.0, 0.0};  // sum of d^2/dx^2 log factor_n
};

// prod_n (1 - q^n e^{-2 kappa x})(1 - q^n e^{2 kappa x}) / (1 - q^n)^2
ProductSums chain_product(cplx xr, const EllipticParams& p, bool second) {
  ProductSums s;
  const double k = p.kappa, N = p.period;
  int M = truncation_terms(-2.0 * N * k, k * N, p.tolerance, p.max_terms, "theta");
  for (int n = 1; n <= M; ++n) {
    double nN = n * N;
    cplx em_u = cexpm1(-2.0 * k * (nN + xr));  // u - 1
    cplx em_w = cexpm1(-2.0 * k * (nN - xr));  // w - 1
    double em_q = std::expm1(-2.0 * k * nN);
    s.prod *= (em_u / em_q) * (em_w / em_q);
    cplx u = em_u + 1.0, w = em_w + 1.0;
    // 1 - u = -em_u
    s.dlog += 2.0 * k * (u / (-em_u) - w / (-em_w));
    if (second) s.d2log += -4.0 * k * k * (u / (em_u * em_u) + w / (em_w * em_w));
  }
  return s;
}

void require_valid(const EllipticParams& p) { p.validate(); }

}  // namespace

cplx cexpm1(cplx z) {
  double a = z.real(), b = z.imag();
  double em = std::expm1(a);
  double sh = std::sin(0.5 * b);
  double re = em * std::cos(b) - 2.0 * sh * sh;
  double im = std::exp(a) * std::sin(b);
  return {re, im};
}

cplx Scaled::value() const {
  if (mant == cplx(0.0)) return 0.0;
  double lm = log_mag + std::log(std::abs(mant));
  if (lm > 700.0) throw AccuracyError("theta value overflows double precision");
  return mant * std::exp(log_mag);
}

double Scaled::log_abs() const { return log_mag + std::log(std::abs(mant)); }

void EllipticParams::validate() const {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ParameterError("kappa must be a finite nonnegative real");
  if (!(period > 0.0) || !std::isfinite(period)) throw ParameterError("period must be a finite positive real");
  if (!(tolerance > 0.0)) throw ParameterError("tolerance must be positive");
  if (max_terms < 1) throw ParameterError("max_terms must be positive");
}

double EllipticParams::nome() const { return std::exp(-period * kappa); }

void GeneralTheta::validate() const {
  if (!(tau.imag() > 0.0) || !std::isfinite(tau.real()) || !std::isfinite(tau.imag()))
    throw ParameterError("vartheta: |exp(2 pi i tau)| must be < 1, got tau=" + fmt(tau));
  if (!(tolerance > 0.0)) throw ParameterError("tolerance must be positive");
  if (max_terms < 1) throw ParameterError("max_terms must be positive");
}

ThetaEval eval_theta(cplx x, const EllipticParams& p) {
  require_valid(p);
  if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw ParameterError("theta: non-finite argument");
  Reduced r = reduce_chain(x, p);
  ThetaEval out;
  Scaled core, dcore;
  if (p.kappa == 0.0) {
    double c = kPi / p.period;
    core = scale(scaled_sin(c * r.xr), p.period / kPi);
    dcore = scaled_cos(c * r.xr);
  } else {
    const double k = p.kappa;
    ProductSums s = chain_product(r.xr, p, false);
    // sinh(w) = -i sin(i w), cosh(w) = cos(i w)
    Scaled sh = scale(scaled_sin(I * k * r.xr), -I / k);
    Scaled ch = scaled_cos(I * k * r.xr);
    core = scale(sh, s.prod);
    dcore = add(scale(ch, s.prod), scale(sh, s.prod * s.dlog));
  }
  out.reduced_abs = std::abs(core.mant) * std::exp(std::min(core.log_mag, 700.0));
  out.value = core * r.prefactor;
  out.deriv = add(dcore, scale(core, r.dlog_prefactor)) * r.prefactor;
  return out;
}

cplx theta(cplx x, const EllipticParams& p) { return eval_theta(x, p).value.value(); }

cplx theta_deriv(cplx x, const EllipticParams& p) { return eval_theta(x, p).deriv.value(); }

bool on_theta_lattice(cplx x, const EllipticParams& p) { return eval_theta(x, p).near_zero(); }

cplx rho(cplx x, const EllipticParams& p) {
  require_valid(p);
  Reduced r = reduce_chain(x, p);
  if (eval_theta(r.xr, p).near_zero()) throw PoleError("rho: argument " + fmt(x) + " is on the theta zero lattice");
  if (p.kappa == 0.0) {
    double c = kPi / p.period;
    return c * stable_cot(c * r.xr);
  }
  const double k = p.kappa;
  ProductSums s = chain_product(r.xr, p, false);
  // kappa coth(kappa x) = i kappa cot(i kappa x)
  return I * k * stable_cot(I * k * r.xr) + s.dlog + r.dlog_prefactor;
}

cplx rho_deriv(cplx x, const EllipticParams& p) {
  require_valid(p);
  Reduced r = reduce_chain(x, p);
  if (eval_theta(r.xr, p).near_zero())
    throw PoleError("rho_deriv: argument " + fmt(x) + " is on the theta zero lattice");
  if (p.kappa == 0.0) {
    double c = kPi / p.period;
    return -c * c * stable_csc2(c * r.xr);
  }
  const double k = p.kappa;
  ProductSums s = chain_product(r.xr, p, true);
  // 1/sinh^2(w) = -1/sin^2(i w)
  return k * k * stable_csc2(I * k * r.xr) + s.d2log;
}

cplx potential_V(cplx x, cplx eta, const EllipticParams& p) {
  ThetaEval t2 = eval_theta(2.0 * eta, p);
  if (t2.near_zero()) throw PoleError("potential: 2 eta = " + fmt(2.0 * eta) + " lies on the theta zero lattice");
  return (rho(x - eta, p) - rho(x + eta, p)) / t2.value.value();
}

cplx theta_ratio(const std::vector<cplx>& num, const std::vector<cplx>& den, const EllipticParams& p,
                 const char* context) {
  Scaled acc{1.0, 0.0};
  for (cplx d : den) {
    ThetaEval e = eval_theta(d, p);
    if (e.near_zero()) throw PoleError(std::string(context) + ": theta(" + fmt(d) + ") vanishes in a denominator");
    acc = acc / e.value;
  }
  for (cplx n : num) acc = acc * eval_theta(n, p).value;
  return acc.value();
}

cplx f_ratio(cplx x, cplx y, cplx z, const EllipticParams& p) {
  return theta_ratio({x, y + z}, {x + y, z}, p, "f");
}

cplx phi(cplx x, cplx y, const EllipticParams& p) { return theta_ratio({x + y}, {x, y}, p, "phi"); }

cplx phi_d1(cplx x, cplx y, const EllipticParams& p) {
  ThetaEval tx = eval_theta(x, p), ty = eval_theta(y, p);
  if (tx.near_zero() || ty.near_zero()) throw PoleError("phi': theta vanishes in a denominator at x=" + fmt(x) + ", y=" + fmt(y));
  ThetaEval ts = eval_theta(x + y, p);
  Scaled den = tx.value * ty.value;
  // phi' = [theta'(x+y) - theta(x+y) rho(x)] / (theta(x) theta(y))
  Scaled num = add(ts.deriv, scale(ts.value, -rho(x, p)));
  return (num / den).value();
}

// ---- general theta ----

namespace {

struct ReducedTau {
  cplx xr;
  cplx tau;
  Scaled prefactor;
  cplx dlog_prefactor;
};

ReducedTau reduce_tau(cplx x, const GeneralTheta& g) {
  ReducedTau r;
  r.tau = g.tau - std::round(g.tau.real());
  long l = std::lround(x.imag() / r.tau.imag());
  cplx x1 = x - double(l) * r.tau;
  long k = std::lround(x1.real());
  r.xr = x1 - double(k);
  double sign = (((k + l) % 2) == 0) ? 1.0 : -1.0;
  double ld = double(l);
  // exp(-i pi (2 l xr + l^2 tau))
  cplx e = -I * kPi * (2.0 * ld * r.xr + ld * ld * r.tau);
  r.prefactor = {sign * std::polar(1.0, e.imag()), e.real()};
  r.dlog_prefactor = -2.0 * I * kPi * ld;
  return r;
}

ProductSums tau_product(cplx xr, cplx tau, const GeneralTheta& g) {
  ProductSums s;
  double logq = -2.0 * kPi * tau.imag();
  int M = truncation_terms(logq, 0.5 * (-logq), g.tolerance, g.max_terms, "vartheta");
  const cplx tpi = 2.0 * kPi * I;
  for (int n = 1; n <= M; ++n) {
    cplx em_p = cexpm1(tpi * (double(n) * tau + xr));
    cplx em_m = cexpm1(tpi * (double(n) * tau - xr));
    cplx em_q = cexpm1(tpi * double(n) * tau);
    s.prod *= (em_p / em_q) * (em_m / em_q);
    cplx wp = em_p + 1.0, wm = em_m + 1.0;
    s.dlog += -tpi * wp / (-em_p) + tpi * wm / (-em_m);
  }
  return s;
}

}  // namespace

ThetaEval eval_vartheta(cplx x, const GeneralTheta& g) {
  g.validate();
  ReducedTau r = reduce_tau(x, g);
  ProductSums s = tau_product(r.xr, r.tau, g);
  Scaled sn = scale(scaled_sin(kPi * r.xr), 1.0 / kPi);
  Scaled cs = scaled_cos(kPi * r.xr);
  Scaled core = scale(sn, s.prod);
  Scaled dcore = add(scale(cs, s.prod), scale(sn, s.prod * s.dlog));
  ThetaEval out;
  out.reduced_abs = std::abs(core.mant) * std::exp(std::min(core.log_mag, 700.0));
  out.value = core * r.prefactor;
  out.deriv = add(dcore, scale(core, r.dlog_prefactor)) * r.prefactor;
  return out;
}

cplx vartheta(cplx x, const GeneralTheta& g) { return eval_vartheta(x, g).value.value(); }

cplx vartheta_rho(cplx x, const GeneralTheta& g) {
  g.validate();
  ReducedTau r = reduce_tau(x, g);
  if (eval_vartheta(r.xr, g).near_zero())
    throw PoleError("vartheta_rho: argument " + fmt(x) + " is on the zero lattice");
  ProductSums s = tau_product(r.xr, r.tau, g);
  return kPi * stable_cot(kPi * r.xr) + s.dlog + r.dlog_prefactor;
}

cplx vartheta_ratio(const std::vector<cplx>& num, const std::vector<cplx>& den, const GeneralTheta& g,
                    const char* context) {
  Scaled acc{1.0, 0.0};
  for (cplx d : den) {
    ThetaEval e = eval_vartheta(d, g);
    if (e.near_zero()) throw PoleError(std::string(context) + ": vartheta(" + fmt(d) + ") vanishes in a denominator");
    acc = acc / e.value;
  }
  for (cplx n : num) acc = acc * eval_vartheta(n, g).value;
  return acc.value();
}

std::vector<std::string> elliptic_invariants() {
  return {"elliptic.quasiperiod_imag",   "elliptic.quasiperiod_real", "elliptic.addition_formula",
          "elliptic.kappa_continuity",   "elliptic.argument_reduction", "elliptic.normalisation",
          "elliptic.rho_periods",        "elliptic.potential_symmetry", "elliptic.modular_bridge",
          "elliptic.vartheta_quasiperiod"};
}

}  // namespace ellspin
