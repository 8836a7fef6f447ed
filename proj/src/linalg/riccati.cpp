#include <cmath>
#include <string>

#include "hh2/error.hpp"
#include "hh2/linalg.hpp"
#include "linalg/lapack.hpp"

namespace hh2 {

Mat hamiltonian_matrix(const Mat& A, const Mat& M, const Mat& Q) {
  const Index n = A.rows();
  Mat H(2 * n, 2 * n);
  H << A, -M, -Q, -A.transpose();
  return H;
}

AreSolution solve_are_m(const Mat& A, const Mat& M, const Mat& Q, const Tolerances& tol) {
  const Index n = A.rows();
  require(A.cols() == n && M.rows() == n && M.cols() == n && Q.rows() == n && Q.cols() == n,
          ErrorKind::DimensionMismatch, "ARE data dimensions disagree");
  const Mat H = hamiltonian_matrix(A, M, Q);
  auto s = lapack::real_schur(H);
  const double axis_tol = tol.imaginary_axis * std::max(1.0, H.norm());
  std::vector<int> select(2 * n, 0);
  Index stable = 0;
  for (Index i = 0; i < 2 * n; ++i) {
    if (std::abs(s.wr(i)) <= axis_tol)
      fail(ErrorKind::HamiltonianImaginaryAxis, "Hamiltonian eigenvalue within " + std::to_string(axis_tol) +
                                                    " of the imaginary axis");
    if (s.wr(i) < 0) {
      select[i] = 1;
      ++stable;
    }
  }
  if (stable != n) fail(ErrorKind::HamiltonianImaginaryAxis, "Hamiltonian stable subspace has wrong dimension");
  lapack::reorder_schur(s, select);

  const Mat U1 = s.Z.topLeftCorner(n, n);
  const Mat U2 = s.Z.bottomLeftCorner(n, n);
  Eigen::PartialPivLU<Mat> lu(U1.transpose());
  const double cond = 1.0 / std::max(lu.rcond(), 1e-300);
  if (cond > tol.z1_condition) fail(ErrorKind::SingularZ1, "Z1 condition estimate " + std::to_string(cond));
  const Mat Xr = lu.solve(U2.transpose()).transpose();

  AreSolution out;
  out.X = SymmetricMatrix(0.5 * (Xr + Xr.transpose()), 1.0);
  const Mat& X = out.X.matrix();
  out.z1_condition = cond;
  out.closed_loop = A - M * X;
  out.closed_loop_eigenvalues.resize(n);
  for (Index i = 0; i < n; ++i) out.closed_loop_eigenvalues(i) = cplx(s.wr(i), s.wi(i));
  out.residual = (A.transpose() * X + X * A + Q - X * M * X).norm();
  return out;
}

AreSolution solve_are(const Mat& A, const Mat& B, const Mat& C, const Mat& R, const Tolerances& tol) {
  const Index n = A.rows();
  require(A.cols() == n && B.rows() == n && C.cols() == n && R.rows() == B.cols() && R.cols() == B.cols(),
          ErrorKind::DimensionMismatch, "ARE data dimensions disagree");
  Eigen::LLT<Mat> llt(0.5 * (R + R.transpose()));
  if (llt.info() != Eigen::Success) fail(ErrorKind::SingularR, "R is not positive definite");
  if (condition_number(R) > tol.r_condition) fail(ErrorKind::IllConditionedR, "R is ill conditioned");
  if (!is_stabilizable(A, B, tol)) fail(ErrorKind::NotStabilizable, "(A, B) fails the PBH test");
  const Mat M = B * llt.solve(B.transpose());
  return solve_are_m(A, 0.5 * (M + M.transpose()), C.transpose() * C, tol);
}

}  // namespace hh2
