#include "hh2/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hh2/error.hpp"
#include "hh2/random.hpp"
#include "linalg/internal.hpp"
#include "linalg/lapack.hpp"

namespace hh2 {

namespace {

// Schur positions ranked by decreasing |theta|; returns flags for the top
// `count`, extended so that conjugate pairs stay together.
std::vector<int> top_positions(const lapack::Schur& s, Index count, Index& taken) {
  const Index m = s.wr.size();
  std::vector<Index> order(m);
  std::iota(order.begin(), order.end(), 0);
  auto mag = [&](Index i) { return std::hypot(s.wr(i), s.wi(i)); };
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double ma = mag(a), mb = mag(b);
    if (ma != mb) return ma > mb;
    return s.wr(a) < s.wr(b);
  });
  std::vector<int> flags(m, 0);
  taken = 0;
  for (Index r = 0; r < m && taken < count; ++r) {
    const Index i = order[r];
    if (flags[i]) continue;
    flags[i] = 1;
    ++taken;
    // dgees stores a pair at (j, j+1) with wi(j) > 0
    if (s.wi(i) > 0 && i + 1 < m && !flags[i + 1]) {
      flags[i + 1] = 1;
      ++taken;
    } else if (s.wi(i) < 0 && i > 0 && !flags[i - 1]) {
      flags[i - 1] = 1;
      ++taken;
    }
  }
  return flags;
}

// Two passes of classical Gram-Schmidt against the first `k` columns.
Vec orthogonalize(const Mat& V, Index k, Vec& w) {
  Vec h = V.leftCols(k).transpose() * w;
  w.noalias() -= V.leftCols(k) * h;
  const Vec h2 = V.leftCols(k).transpose() * w;
  w.noalias() -= V.leftCols(k) * h2;
  return h + h2;
}

}  // namespace

ArnoldiResult arnoldi_largest(const LinearOperator& op, Index dim, const ArnoldiOptions& options) {
  require(dim >= 1, ErrorKind::InvalidArgument, "operator dimension must be positive");
  const Index nev = std::min(options.nev, dim);
  require(nev >= 1, ErrorKind::InvalidArgument, "nev must be positive");
  Index m = options.ncv > 0 ? options.ncv : std::max(2 * nev + 1, nev + 20);
  m = std::min(m, dim);

  Rng rng(options.seed);
  Mat V = Mat::Zero(dim, m + 1);
  Mat Hb = Mat::Zero(m + 1, m);
  Vec v0(dim);
  for (Index i = 0; i < dim; ++i) v0(i) = rng.normal();
  V.col(0) = v0 / v0.norm();

  ArnoldiResult result;
  Index k = 0;
  Vec w(dim);
  for (int restart = 0;; ++restart) {
    for (Index j = k; j < m; ++j) {
      op(V.col(j), w);
      ++result.operator_applications;
      const Vec h = orthogonalize(V, j + 1, w);
      Hb.col(j).head(j + 1) = h;
      double beta = w.norm();
      if (j + 1 == dim) beta = 0.0;
      if (beta <= 1e-13 * std::max(1.0, h.norm())) {
        // Invariant subspace found; continue with a fresh direction.
        Hb(j + 1, j) = 0.0;
        if (j + 1 < dim) {
          for (Index i = 0; i < dim; ++i) w(i) = rng.normal();
          orthogonalize(V, j + 1, w);
          V.col(j + 1) = w / w.norm();
        } else {
          V.col(j + 1).setZero();
        }
      } else {
        Hb(j + 1, j) = beta;
        V.col(j + 1) = w / beta;
      }
    }

    auto s = lapack::real_schur(Hb.topLeftCorner(m, m));
    Index wanted = 0;
    lapack::reorder_schur(s, top_positions(s, nev, wanted));
    const Eigen::RowVectorXd b = Hb.row(m).head(m) * s.Z;
    double theta_min = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < wanted; ++i) theta_min = std::min(theta_min, std::hypot(s.wr(i), s.wi(i)));
    const double resid = b.head(wanted).norm();
    const bool converged = resid <= options.tol * theta_min || m == dim;

    if (converged || restart >= options.max_restarts) {
      result.basis = V.leftCols(m) * s.Z.leftCols(wanted);
      result.T = s.T.topLeftCorner(wanted, wanted);
      result.theta.resize(wanted);
      for (Index i = 0; i < wanted; ++i) result.theta(i) = cplx(s.wr(i), s.wi(i));
      result.restarts = restart;
      result.converged = converged;
      return result;
    }

    // Keep the wanted block plus half of the rest.
    Index keep = 0;
    lapack::reorder_schur(s, top_positions(s, std::min(m - 1, wanted + (m - wanted) / 2), keep));
    if (keep >= m) keep = wanted;
    const Mat Vk = V.leftCols(m) * s.Z.leftCols(keep);
    const Vec next = V.col(m);
    const Eigen::RowVectorXd bk = Hb.row(m).head(m) * s.Z.leftCols(keep);
    V.leftCols(keep) = Vk;
    V.col(keep) = next;
    Hb.setZero();
    Hb.topLeftCorner(keep, keep) = s.T.topLeftCorner(keep, keep);
    Hb.row(keep).head(keep) = bk;
    k = keep;
  }
}

StableSubspace stable_eigenspace_shift_invert(const LinearOperator& apply_inverse, Index n, Index k,
                                              const Tolerances& tol) {
  require(k >= 1 && k <= n, ErrorKind::InvalidArgument, "k must lie in [1, n]");
  ArnoldiOptions opts;
  opts.max_restarts = tol.krylov_max_restarts;
  opts.tol = tol.krylov_residual;
  for (Index extra = 2; extra <= 2 * n; extra += 4) {
    opts.nev = std::min(2 * k + extra, 2 * n);
    const ArnoldiResult ar = arnoldi_largest(apply_inverse, 2 * n, opts);
    if (!ar.converged)
      fail(ErrorKind::ArnoldiNoConvergence, "shift-invert Arnoldi did not converge in " +
                                                std::to_string(ar.restarts) + " restarts");
    const auto e = lapack::eig(ar.T, true, false);
    const CMat vectors = ar.basis.cast<cplx>() * e.right;
    CVec lambda(e.values.size());
    for (Index i = 0; i < lambda.size(); ++i) lambda(i) = 1.0 / e.values(i);
    Index stable = 0;
    for (Index i = 0; i < lambda.size(); ++i) stable += lambda(i).real() < 0;
    if (stable < k && opts.nev < 2 * n) continue;
    // Eigenvalues of H^{-1} are accurate relative to |theta|; translate that
    // into an axis test relative to |lambda|.
    double axis_tol = 0.0;
    for (Index i = 0; i < lambda.size(); ++i)
      axis_tol = std::max(axis_tol, tol.imaginary_axis * std::max(1.0, std::abs(lambda(i))));
    return select_stable(vectors, lambda, n, k, axis_tol, "stable_eigenspace_shift_invert");
  }
  fail(ErrorKind::ArnoldiNoConvergence, "not enough stable eigenvalues among the Ritz values");
}

}  // namespace hh2
