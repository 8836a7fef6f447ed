#include <cmath>
#include <string>

#include "hh2/error.hpp"
#include "hh2/linalg.hpp"
#include "linalg/lapack.hpp"

namespace hh2 {

// Bartels-Stewart on the real Schur form of A.
SymmetricMatrix solve_lyapunov_w(const Mat& A, const Mat& W, const Tolerances& tol) {
  require(A.rows() == A.cols(), ErrorKind::DimensionMismatch, "A must be square");
  require(W.rows() == A.rows() && W.cols() == A.rows(), ErrorKind::DimensionMismatch,
          "constant term must match A");
  const auto s = lapack::real_schur(A);
  for (Index i = 0; i < s.wr.size(); ++i)
    if (s.wr(i) >= -tol.hurwitz_margin)
      fail(ErrorKind::NotHurwitz, "A has eigenvalue with real part " + std::to_string(s.wr(i)));
  const Mat C = -(s.Z.transpose() * W * s.Z);
  const Mat Y = lapack::sylvester_quasi_triangular(s.T, s.T, 0.5 * (C + C.transpose()));
  const Mat phi = s.Z * Y * s.Z.transpose();
  return SymmetricMatrix(0.5 * (phi + phi.transpose()));
}

SymmetricMatrix solve_lyapunov(const Mat& A, const Mat& B, const Tolerances& tol) {
  require(B.rows() == A.rows(), ErrorKind::DimensionMismatch, "B rows must match A");
  return solve_lyapunov_w(A, B * B.transpose(), tol);
}

}  // namespace hh2
