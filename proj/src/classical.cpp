#include <cmath>

#include "ellspin/error.hpp"
#include "ellspin/qmbs.hpp"

namespace ellspin {

namespace {

GeneralTheta theta_at(cplx tau) {
  GeneralTheta g;
  g.tau = tau;
  g.validate();
  return g;
}

}  // namespace

std::vector<cplx> classical_coefficients(const std::vector<cplx>& x, cplx coupling, cplx tau) {
  GeneralTheta g = theta_at(tau);
  const int N = int(x.size());
  std::vector<cplx> a(N);
  for (int i = 0; i < N; ++i) {
    std::vector<cplx> num, den;
    for (int j = 0; j < N; ++j) {
      if (j == i) continue;
      num.push_back(x[i] - x[j] + coupling);
      den.push_back(x[i] - x[j]);
    }
    a[i] = vartheta_ratio(num, den, g, "classical coefficients: coincident coordinates");
  }
  return a;
}

std::vector<cplx> classical_velocities(const EquilibriumConfig& cfg) {
  std::vector<cplx> a = classical_coefficients(cfg.x, cfg.coupling, cfg.tau);
  for (size_t j = 0; j < a.size(); ++j) a[j] *= cfg.epsilon * std::exp(cfg.epsilon * cfg.p[j]);
  return a;
}

// dA_i/dx_j = A_i sum_{k != i} [rho(x_i - x_k + eta) - rho(x_i - x_k)] (delta_ij - delta_kj)
std::vector<cplx> classical_forces(const EquilibriumConfig& cfg) {
  GeneralTheta g = theta_at(cfg.tau);
  const int N = int(cfg.x.size());
  std::vector<cplx> a = classical_coefficients(cfg.x, cfg.coupling, cfg.tau);
  std::vector<cplx> force(N, 0.0);
  for (int i = 0; i < N; ++i) {
    cplx weight = std::exp(cfg.epsilon * cfg.p[i]) * a[i];
    for (int k = 0; k < N; ++k) {
      if (k == i) continue;
      cplx d = vartheta_rho(cfg.x[i] - cfg.x[k] + cfg.coupling, g) - vartheta_rho(cfg.x[i] - cfg.x[k], g);
      force[i] -= weight * d;
      force[k] += weight * d;
    }
  }
  return force;
}

double equilibrium_residual(const EquilibriumConfig& cfg) {
  std::vector<cplx> v = classical_velocities(cfg), f = classical_forces(cfg);
  double r = 0;
  for (size_t j = 0; j < v.size(); ++j) r = std::max(r, std::abs(v[j] - cfg.epsilon * cfg.a_star) + std::abs(f[j]));
  return r;
}

namespace {

cplx omega_of(const ChainParams& p) {
  if (!(p.kappa > 0)) throw ParameterError("equilibria need kappa > 0 (omega = i pi / kappa)");
  return I * kPi / p.kappa;
}

}  // namespace

cplx equilibrium_1_constant(const ChainParams& p) {
  const cplx w = omega_of(p);
  const double N = p.N;
  return vartheta(p.eta, theta_at(w)) / (N * vartheta(p.eta / N, theta_at(w / N)));
}

cplx equilibrium_2_constant(const ChainParams& p) {
  const cplx w = omega_of(p);
  const double N = p.N;
  return vartheta(p.eta / w, theta_at(-1.0 / w)) / vartheta(p.eta / w, theta_at(-N / w));
}

EquilibriumConfig equilibrium_1(const ChainParams& p, cplx epsilon) {
  const cplx w = omega_of(p);
  const int N = p.N;
  EquilibriumConfig c;
  for (int j = 1; j <= N; ++j) {
    c.x.push_back(double(j) / N);
    c.p.push_back(0.0);
  }
  c.tau = w / double(N);
  c.coupling = p.eta / double(N);
  c.epsilon = epsilon;
  c.a_star = equilibrium_1_constant(p);
  return c;
}

EquilibriumConfig equilibrium_2(const ChainParams& p, cplx epsilon) {
  if (epsilon == 0.0) throw ParameterError("equilibrium_2: epsilon must be nonzero");
  const cplx w = omega_of(p);
  const int N = p.N;
  EquilibriumConfig c;
  for (int j = 1; j <= N; ++j) {
    c.x.push_back(-double(j) / w);
    c.p.push_back(I * kPi * p.eta * double(N - 2 * j + 1) / (w * epsilon));
  }
  c.tau = -double(N) / w;
  c.coupling = -p.eta / w;
  c.epsilon = epsilon;
  c.a_star = equilibrium_2_constant(p);
  return c;
}

}  // namespace ellspin
