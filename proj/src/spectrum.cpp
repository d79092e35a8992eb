#include <algorithm>
#include <bit>
#include <limits>
#include <sstream>

#include "ellspin/chain.hpp"
#include "ellspin/error.hpp"

namespace ellspin {

std::vector<int> sector_indices(int N, int down) {
  std::vector<int> idx;
  for (long b = 0; b < (1L << N); ++b)
    if (std::popcount(static_cast<unsigned long>(b)) == down) idx.push_back(int(b));
  return idx;
}

Matrix sector_block(const SpinOperator& op, int down) {
  std::vector<int> idx = sector_indices(op.n_sites, down);
  const long n = long(idx.size());
  Matrix m(n, n);
  for (long r = 0; r < n; ++r)
    for (long c = 0; c < n; ++c) m(r, c) = op.matrix(idx[r], idx[c]);
  return m;
}

double sz_violation(const SpinOperator& op) {
  double worst = 0, scale = 0;
  for (long c = 0; c < op.dim(); ++c)
    for (long r = 0; r < op.dim(); ++r) {
      double v = std::abs(op.matrix(r, c));
      scale = std::max(scale, v);
      if (std::popcount(static_cast<unsigned long>(r)) != std::popcount(static_cast<unsigned long>(c)))
        worst = std::max(worst, v);
    }
  return scale == 0 ? 0.0 : worst / scale;
}

namespace {

std::vector<cplx> eig(const Matrix& m) {
  if (m.rows() == 0) return {};
  Eigen::ComplexEigenSolver<Matrix> es(m, false);
  if (es.info() != Eigen::Success) throw AccuracyError("eigensolver did not converge");
  std::vector<cplx> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return v;
}

void sort_spectrum(std::vector<cplx>& v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

}  // namespace

std::vector<cplx> spectrum(const SpinOperator& op, std::optional<int> sector) {
  const int N = op.n_sites;
  std::vector<cplx> ev;
  if (sector) {
    if (*sector < 0 || *sector > N) {
      std::ostringstream os;
      os << "spectrum: sector " << *sector << " outside 0.." << N;
      throw ParameterError(os.str());
    }
    if (sz_violation(op) > 1e-10) throw ContractError("spectrum: operator does not commute with S^z, sectors undefined");
    ev = eig(sector_block(op, *sector));
  } else if (N > 8 && sz_violation(op) <= 1e-10) {
    for (int k = 0; k <= N; ++k) {
      std::vector<cplx> part = eig(sector_block(op, k));
      ev.insert(ev.end(), part.begin(), part.end());
    }
  } else {
    ev = eig(op.matrix);
  }
  sort_spectrum(ev);
  return ev;
}

double spectral_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<char> used(b.size(), 0);
  double worst = 0;
  for (cplx x : a) {
    double best = std::numeric_limits<double>::infinity();
    size_t bi = 0;
    for (size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      double d = std::abs(x - b[j]);
      if (d < best) {
        best = d;
        bi = j;
      }
    }
    used[bi] = 1;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace ellspin
