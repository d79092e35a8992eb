#include "ellspin/sampling.hpp"

#include <cmath>

#include "ellspin/error.hpp"

namespace ellspin {

namespace {

double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace

double lattice_distance(cplx z, const EllipticParams& p) {
  const double N = p.period;
  double re = z.real() - N * std::round(z.real() / N);
  double im = z.imag();
  if (p.kappa > 0) {
    const double w = kPi / p.kappa;
    im -= w * std::round(im / w);
  }
  return std::hypot(re, im);
}

ChainParams random_chain_params(std::mt19937_64& g, int N, const DrawOptions& opt) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    ChainParams p;
    p.N = N;
    p.kappa = opt.trig ? 0.0 : uniform(g, opt.kappa_lo, opt.kappa_hi);
    if (opt.reality) {
      double im = uniform(g, 0.15, 0.45);
      p.eta = cplx(0, im);
      p.a = uniform(g, -1.5, 1.5);
    } else {
      double im = uniform(g, 0.1, 0.4) * (uniform(g, 0, 1) < 0.5 ? -1 : 1);
      p.eta = cplx(uniform(g, -0.4, 0.4), im);
      p.a = cplx(uniform(g, -1.5, 1.5), uniform(g, -1.0, 1.0));
    }
    EllipticParams e = p.elliptic();
    bool ok = lattice_distance(2.0 * p.eta, e) > opt.margin;
    for (int s = -N; s <= N && ok; ++s) ok = lattice_distance(p.eta * (p.a - double(s)), e) > opt.margin;
    for (int x = -N; x <= N && ok; ++x) ok = lattice_distance(double(x) + p.eta, e) > opt.margin;
    for (int x = 1; x < N && ok; ++x) ok = std::abs(potential_V(double(x), p.eta, e)) > 1e-3;
    if (ok) return p;
  }
  throw ParameterError("random_chain_params: no valid draw found");
}

std::vector<cplx> random_generic_point(std::mt19937_64& g, int N, const EllipticParams& p, cplx c, int reach,
                                       double margin) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<cplx> x(N);
    for (cplx& v : x) v = cplx(uniform(g, -0.5 * p.period, 0.5 * p.period), uniform(g, -0.4, 0.4));
    bool ok = true;
    for (int i = 0; i < N && ok; ++i)
      for (int j = 0; j < N && ok; ++j) {
        if (i == j) continue;
        for (int k = -reach; k <= reach && ok; ++k) ok = lattice_distance(x[i] - x[j] + double(k) * c, p) > margin;
      }
    if (ok) return x;
  }
  throw ParameterError("random_generic_point: no generic point found");
}

}  // namespace ellspin
