#include <algorithm>
#include <cmath>

#include "hh2/error.hpp"
#include "hh2/linalg.hpp"
#include "linalg/lapack.hpp"

namespace hh2 {

namespace {

CMat orthonormal_basis(const CMat& v) {
  Eigen::ColPivHouseholderQR<CMat> qr(v);
  qr.setThreshold(1e-6);
  const Index rank = std::max<Index>(qr.rank(), 1);
  CMat q = qr.householderQ() * CMat::Identity(v.rows(), rank);
  return q;
}

// Modes with Re >= -threshold (and Re <= threshold when imaginary_only),
// equal eigenvalues merged.
std::vector<ModeGroup> collect(const CVec& values, const CMat& vectors, double threshold, bool imaginary_only) {
  std::vector<Index> idx;
  for (Index i = 0; i < values.size(); ++i) {
    const double re = values(i).real();
    if (re < -threshold) continue;
    if (imaginary_only && re > threshold) continue;
    idx.push_back(i);
  }
  std::vector<ModeGroup> groups;
  std::vector<char> used(values.size(), 0);
  for (Index i : idx) {
    if (used[i]) continue;
    std::vector<Index> members{i};
    used[i] = 1;
    for (Index j : idx) {
      if (used[j]) continue;
      if (std::abs(values(j) - values(i)) <= 1e-7 * std::max(1.0, std::abs(values(i)))) {
        members.push_back(j);
        used[j] = 1;
      }
    }
    CMat v(vectors.rows(), members.size());
    cplx mean = 0.0;
    for (std::size_t k = 0; k < members.size(); ++k) {
      v.col(k) = vectors.col(members[k]);
      mean += values(members[k]);
    }
    groups.push_back({mean / static_cast<double>(members.size()), orthonormal_basis(v)});
  }
  return groups;
}

bool symmetric(const Mat& A) { return A.rows() == A.cols() && (A - A.transpose()).cwiseAbs().maxCoeff() == 0.0; }

}  // namespace

std::vector<ModeGroup> marginal_modes(const Mat& A, double threshold, bool imaginary_only) {
  require(A.rows() == A.cols(), ErrorKind::DimensionMismatch, "A must be square");
  if (A.rows() == 0) return {};
  if (symmetric(A)) {
    Eigen::SelfAdjointEigenSolver<Mat> es(A);
    return collect(es.eigenvalues().cast<cplx>(), es.eigenvectors().cast<cplx>(), threshold, imaginary_only);
  }
  const auto e = lapack::eig(A, true, false);
  return collect(e.values, e.right, threshold, imaginary_only);
}

bool modes_observed(const std::vector<ModeGroup>& groups, const Mat& C, const Tolerances& tol) {
  const double floor = tol.pbh_rank * std::max(1.0, C.norm());
  for (const auto& g : groups) {
    const Index dim = g.basis.cols();
    if (dim > C.rows()) return false;
    const CMat cv = C.cast<cplx>() * g.basis;
    Eigen::JacobiSVD<CMat> svd(cv);
    if (svd.singularValues()(dim - 1) <= floor) return false;
  }
  return true;
}

namespace {

double scaled(double t, const Mat& A) { return t * std::max(1.0, A.norm()); }

}  // namespace

bool is_detectable(const Mat& A, const Mat& C, const Tolerances& tol) {
  require(C.cols() == A.rows(), ErrorKind::DimensionMismatch, "C columns must match A");
  return modes_observed(marginal_modes(A, scaled(tol.unstable_threshold, A), false), C, tol);
}

bool is_stabilizable(const Mat& A, const Mat& B, const Tolerances& tol) {
  require(B.rows() == A.rows(), ErrorKind::DimensionMismatch, "B rows must match A");
  return is_detectable(A.transpose(), B.transpose(), tol);
}

bool no_unobservable_imaginary_modes(const Mat& A, const Mat& C, const Tolerances& tol) {
  require(C.cols() == A.rows(), ErrorKind::DimensionMismatch, "C columns must match A");
  return modes_observed(marginal_modes(A, scaled(tol.unstable_threshold, A), true), C, tol);
}

bool no_uncontrollable_imaginary_modes(const Mat& A, const Mat& B, const Tolerances& tol) {
  return no_unobservable_imaginary_modes(A.transpose(), B.transpose(), tol);
}

}  // namespace hh2
