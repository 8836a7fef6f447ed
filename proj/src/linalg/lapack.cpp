#include "linalg/lapack.hpp"

#include <lapacke.h>

#include <string>

#include "hh2/error.hpp"

namespace hh2::lapack {

namespace {

void check_info(lapack_int info, const char* routine) {
  if (info != 0)
    fail(ErrorKind::DegenerateData, std::string(routine) + " failed with info = " + std::to_string(info));
}

}  // namespace

Schur real_schur(const Mat& A) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  Schur s;
  s.T = A;
  s.Z.resize(n, n);
  s.wr.resize(n);
  s.wi.resize(n);
  if (n == 0) return s;
  lapack_int sdim = 0;
  const lapack_int info = LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, n, s.T.data(), n, &sdim, s.wr.data(),
                                        s.wi.data(), s.Z.data(), n);
  check_info(info, "dgees");
  return s;
}

void reorder_schur(Schur& s, const std::vector<int>& select) {
  const lapack_int n = static_cast<lapack_int>(s.T.rows());
  if (n == 0) return;
  std::vector<lapack_logical> sel(select.begin(), select.end());
  lapack_int m = 0;
  double sep_s = 0.0, sep = 0.0;
  // Explicit workspace: the LAPACKE size query crashes some reference builds.
  std::vector<double> work(static_cast<std::size_t>(n) * n + 1);
  std::vector<lapack_int> iwork(static_cast<std::size_t>(n) * n + 1);
  const lapack_int info = LAPACKE_dtrsen_work(LAPACK_COL_MAJOR, 'N', 'V', sel.data(), n, s.T.data(), n, s.Z.data(), n,
                                              s.wr.data(), s.wi.data(), &m, &sep_s, &sep, work.data(),
                                              static_cast<lapack_int>(work.size()), iwork.data(),
                                              static_cast<lapack_int>(iwork.size()));
  // info = 1 means the reordering failed because eigenvalues were too close;
  // the Schur form is still valid, so report it as a numerical failure.
  if (info == 1) fail(ErrorKind::SingularPencil, "dtrsen could not separate the selected eigenvalues");
  check_info(info, "dtrsen");
}

Eig eig(const Mat& A, bool want_right, bool want_left) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  Eig e;
  e.values.resize(n);
  if (n == 0) return e;
  Mat work = A;
  Vec wr(n), wi(n);
  Mat vl(want_left ? n : 1, want_left ? n : 1), vr(want_right ? n : 1, want_right ? n : 1);
  const lapack_int info =
      LAPACKE_dgeev(LAPACK_COL_MAJOR, want_left ? 'V' : 'N', want_right ? 'V' : 'N', n, work.data(), n, wr.data(),
                    wi.data(), vl.data(), want_left ? n : 1, vr.data(), want_right ? n : 1);
  check_info(info, "dgeev");
  auto unpack = [&](const Mat& v) {
    CMat out(n, n);
    for (lapack_int j = 0; j < n; ++j) {
      if (wi(j) == 0.0) {
        out.col(j) = v.col(j).cast<cplx>();
      } else if (wi(j) > 0.0 && j + 1 < n) {
        for (lapack_int i = 0; i < n; ++i) {
          out(i, j) = cplx(v(i, j), v(i, j + 1));
          out(i, j + 1) = cplx(v(i, j), -v(i, j + 1));
        }
        ++j;
      }
    }
    return out;
  };
  for (lapack_int j = 0; j < n; ++j) e.values(j) = cplx(wr(j), wi(j));
  if (want_right) e.right = unpack(vr);
  if (want_left) e.left = unpack(vl);
  return e;
}

Mat sylvester_quasi_triangular(const Mat& T1, const Mat& T2, const Mat& C) {
  const lapack_int m = static_cast<lapack_int>(T1.rows());
  const lapack_int n = static_cast<lapack_int>(T2.rows());
  Mat X = C;
  if (m == 0 || n == 0) return X;
  double scale = 1.0;
  const lapack_int info = LAPACKE_dtrsyl(LAPACK_COL_MAJOR, 'N', 'T', 1, m, n, T1.data(), m, T2.data(), n, X.data(),
                                         m, &scale);
  if (info < 0) check_info(info, "dtrsyl");
  // info = 1: close eigenvalues were perturbed; the result is still usable.
  return X / scale;
}

}  // namespace hh2::lapack
