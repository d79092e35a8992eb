#include <bit>
#include <sstream>

#include "ellspin/chain.hpp"
#include "ellspin/error.hpp"

namespace ellspin {

LocalOp::LocalOp(int n_sites, int site, const Family& family, cplx a) : n_(n_sites), site_(site) {
  if (site < 1 || site >= n_sites) {
    std::ostringstream os;
    os << "local operator: site " << site << " outside 1.." << n_sites - 1;
    throw ParameterError(os.str());
  }
  blocks_.reserve(site);
  for (int d = 0; d < site; ++d) {
    double s = double(site - 1 - 2 * d);
    blocks_.push_back(family(a - s));
  }
}

LocalOp LocalOp::constant(int n_sites, int site, const RMatrix4& m) {
  LocalOp op(n_sites, site, [&](cplx) { return m; }, 0.0);
  op.blocks_.assign(1, m);
  return op;
}

namespace {

template <class Fn>
void for_each_group(int n, int site, Fn&& fn) {
  const int hi = n - site, lo = n - site - 1;
  const long dim = 1L << n;
  const long mask = (1L << hi) | (1L << lo);
  for (long r = 0; r < dim; ++r) {
    if (r & mask) continue;
    long idx[4] = {r, r | (1L << lo), r | (1L << hi), r | mask};
    int down_left = std::popcount(static_cast<unsigned long>(r >> (hi + 1)));
    fn(idx, down_left);
  }
}

}  // namespace

void LocalOp::left_multiply(Matrix& m) const {
  const long cols = m.cols();
  for_each_group(n_, site_, [&](const long* idx, int d) {
    const RMatrix4& b = blocks_.size() == 1 ? blocks_[0] : blocks_[d];
    for (long j = 0; j < cols; ++j) {
      cplx v[4] = {m(idx[0], j), m(idx[1], j), m(idx[2], j), m(idx[3], j)};
      for (int r = 0; r < 4; ++r) {
        cplx s = 0;
        for (int c = 0; c < 4; ++c) s += b(r, c) * v[c];
        m(idx[r], j) = s;
      }
    }
  });
}

void LocalOp::right_multiply(Matrix& m) const {
  const long rows = m.rows();
  for_each_group(n_, site_, [&](const long* idx, int d) {
    const RMatrix4& b = blocks_.size() == 1 ? blocks_[0] : blocks_[d];
    cplx* col[4] = {m.col(idx[0]).data(), m.col(idx[1]).data(), m.col(idx[2]).data(), m.col(idx[3]).data()};
    for (long i = 0; i < rows; ++i) {
      cplx v[4] = {col[0][i], col[1][i], col[2][i], col[3][i]};
      for (int c = 0; c < 4; ++c) {
        cplx s = 0;
        for (int r = 0; r < 4; ++r) s += v[r] * b(r, c);
        col[c][i] = s;
      }
    }
  });
}

void LocalOp::apply(Vector& v) const {
  for_each_group(n_, site_, [&](const long* idx, int d) {
    const RMatrix4& b = blocks_.size() == 1 ? blocks_[0] : blocks_[d];
    cplx in[4] = {v(idx[0]), v(idx[1]), v(idx[2]), v(idx[3])};
    for (int r = 0; r < 4; ++r) {
      cplx s = 0;
      for (int c = 0; c < 4; ++c) s += b(r, c) * in[c];
      v(idx[r]) = s;
    }
  });
}

SpinOperator LocalOp::dense() const {
  SpinOperator op = SpinOperator::identity(n_);
  left_multiply(op.matrix);
  return op;
}

SpinOperator SpinOperator::identity(int n) {
  SpinOperator op;
  op.n_sites = n;
  op.matrix = Matrix::Identity(1L << n, 1L << n);
  return op;
}

}  // namespace ellspin
