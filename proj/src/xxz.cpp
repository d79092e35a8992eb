#include <sstream>

#include "ellspin/chain.hpp"
#include "ellspin/error.hpp"

namespace ellspin {

XxzChain::XxzChain(double gamma, cplx a, int N) : gamma_(gamma), a_(a), n_(N) {
  if (N < 2) throw ParameterError("xxz: N must be at least 2");
  if (N > kMaxSites) throw SizeError("xxz: N exceeds the dense-matrix cap");
  const long dim = 1L << N;
  e_.resize(N);
  for (int i = 1; i < N; ++i) e_[i] = LocalOp(N, i, [&](cplx aa) { return e_heis(aa, gamma); }, a).dense();

  g_ = SpinOperator::identity(N);
  for (int i = 1; i < N; ++i) LocalOp(N, i, [&](cplx aa) { return r_heis(aa, gamma); }, a).left_multiply(g_.matrix);
  for (long b = 0; b < dim; ++b) {
    int left = 0;
    for (int k = 1; k < N; ++k) left += ((b >> (N - k)) & 1L) ? -1 : 1;
    int sn = (b & 1L) ? -1 : 1;
    g_.matrix.row(b) *= std::exp(I * kPi * gamma * (a - double(left)) * double(sn));
  }
  Eigen::PartialPivLU<Matrix> lu(g_.matrix);
  e_[0].n_sites = N;
  e_[0].matrix = g_.matrix * e_[1].matrix * lu.inverse();

  h_.n_sites = N;
  h_.matrix = Matrix::Zero(dim, dim);
  for (int i = 0; i < N; ++i) h_.matrix += e_[i].matrix;
}

const SpinOperator& XxzChain::e_op(int i) const {
  if (i < 0 || i >= n_) {
    std::ostringstream os;
    os << "xxz: e_" << i << " not defined for N=" << n_;
    throw ParameterError(os.str());
  }
  return e_[i];
}

SpinOperator XxzChain::e0_alternative() const {
  Eigen::PartialPivLU<Matrix> lu(g_.matrix);
  SpinOperator out;
  out.n_sites = n_;
  out.matrix = lu.inverse() * e_[n_ - 1].matrix * g_.matrix;
  return out;
}

SpinOperator XxzChain::u_op() const {
  cplx lambda = std::pow(I, n_) * std::exp(I * kPi * gamma_ * double(n_ - 2) / 2.0);
  SpinOperator u = g_;
  u.matrix *= lambda;
  return u;
}

XxzChain h_xxz(double gamma, cplx a, int N) { return XxzChain(gamma, a, N); }

}  // namespace ellspin
