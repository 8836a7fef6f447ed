#include "hh2/kernels.hpp"

#include <omp.h>

#include <limits>

#include "hh2/error.hpp"

namespace hh2::kernels {

namespace {

CMat response_at(const StateSpace& sys, const CMat& Ac, double omega) {
  const Index n = sys.states();
  if (n == 0) return sys.D.cast<cplx>();
  CMat M = -Ac;
  M.diagonal().array() += cplx(0.0, omega);
  return sys.C.cast<cplx>() * M.partialPivLu().solve(sys.B.cast<cplx>()) + sys.D.cast<cplx>();
}

std::vector<Index> block_starts(const Mat& L) {
  std::vector<Index> starts;
  for (Index i = 0; i < L.rows();) {
    starts.push_back(i);
    i += (i + 1 < L.rows() && L(i + 1, i) != 0.0) ? 2 : 1;
  }
  starts.push_back(L.rows());
  return starts;
}

using Small = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

void solve_block(const Mat& L, const Mat& G, Mat& C, Index i0, Index p, Index j0, Index q) {
  // (I_q kron Li + Lj kron I_p) vec(X) = -vec(G_ij)
  Small K = Small::Zero(p * q, p * q);
  for (Index b = 0; b < q; ++b)
    for (Index a = 0; a < p; ++a)
      for (Index c = 0; c < p; ++c) K(b * p + a, b * p + c) += L(i0 + a, i0 + c);
  for (Index b = 0; b < q; ++b)
    for (Index d = 0; d < q; ++d)
      for (Index a = 0; a < p; ++a) K(b * p + a, d * p + a) += L(j0 + b, j0 + d);
  Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1> rhs(p * q);
  for (Index b = 0; b < q; ++b)
    for (Index a = 0; a < p; ++a) rhs(b * p + a) = -G(i0 + a, j0 + b);
  const auto x = K.partialPivLu().solve(rhs).eval();
  for (Index b = 0; b < q; ++b)
    for (Index a = 0; a < p; ++a) C(i0 + a, j0 + b) = x(b * p + a);
}

double nearest(const Mat& points, const Mat& centers, Index i, int& label) {
  double best = std::numeric_limits<double>::infinity();
  label = 0;
  for (Index c = 0; c < centers.rows(); ++c) {
    const double d = (points.row(i) - centers.row(c)).squaredNorm();
    if (d < best) {
      best = d;
      label = static_cast<int>(c);
    }
  }
  return best;
}

}  // namespace

std::vector<CMat> frequency_responses(const StateSpace& sys, const std::vector<double>& omegas) {
  const CMat Ac = sys.A.cast<cplx>();
  std::vector<CMat> out(omegas.size());
  const long count = static_cast<long>(omegas.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < count; ++k) out[k] = response_at(sys, Ac, omegas[k]);
  return out;
}

std::vector<CMat> frequency_responses_serial(const StateSpace& sys, const std::vector<double>& omegas) {
  const CMat Ac = sys.A.cast<cplx>();
  std::vector<CMat> out(omegas.size());
  for (std::size_t k = 0; k < omegas.size(); ++k) out[k] = response_at(sys, Ac, omegas[k]);
  return out;
}

double assign_nearest(const Mat& points, const Vec& mass, const Mat& centers, std::vector<int>& labels) {
  const long n = static_cast<long>(points.rows());
  labels.resize(n);
  Vec dist(n);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) dist(i) = nearest(points, centers, i, labels[i]);
  // Summed serially so that the result does not depend on the thread count.
  double total = 0.0;
  for (long i = 0; i < n; ++i) total += mass(i) * dist(i);
  return total;
}

double assign_nearest_serial(const Mat& points, const Vec& mass, const Mat& centers, std::vector<int>& labels) {
  const Index n = points.rows();
  labels.resize(n);
  double total = 0.0;
  for (Index i = 0; i < n; ++i) total += mass(i) * nearest(points, centers, i, labels[i]);
  return total;
}

Mat cauchy_blocks(const Mat& L, const Mat& G) {
  require(L.rows() == L.cols() && G.rows() == L.rows() && G.cols() == L.rows(), ErrorKind::DimensionMismatch,
          "cauchy_blocks dimensions");
  const auto starts = block_starts(L);
  const long nb = static_cast<long>(starts.size()) - 1;
  Mat C(L.rows(), L.rows());
#pragma omp parallel for schedule(dynamic, 8)
  for (long bi = 0; bi < nb; ++bi)
    for (long bj = 0; bj < nb; ++bj)
      solve_block(L, G, C, starts[bi], starts[bi + 1] - starts[bi], starts[bj], starts[bj + 1] - starts[bj]);
  return C;
}

Mat cauchy_blocks_serial(const Mat& L, const Mat& G) {
  require(L.rows() == L.cols() && G.rows() == L.rows() && G.cols() == L.rows(), ErrorKind::DimensionMismatch,
          "cauchy_blocks dimensions");
  const auto starts = block_starts(L);
  const Index nb = static_cast<Index>(starts.size()) - 1;
  Mat C(L.rows(), L.rows());
  for (Index bi = 0; bi < nb; ++bi)
    for (Index bj = 0; bj < nb; ++bj)
      solve_block(L, G, C, starts[bi], starts[bi + 1] - starts[bi], starts[bj], starts[bj + 1] - starts[bj]);
  return C;
}

int max_threads() { return omp_get_max_threads(); }

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace hh2::kernels
