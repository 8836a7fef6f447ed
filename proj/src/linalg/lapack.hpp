#pragma once

#include <vector>

#include "hh2/types.hpp"

namespace hh2::lapack {

struct Schur {
  Mat T, Z;  // A = Z T Z^T
  Vec wr, wi;
};

Schur real_schur(const Mat& A);

// Moves the flagged eigenvalues to the leading block; both members of a
// conjugate pair must carry the same flag.
void reorder_schur(Schur& s, const std::vector<int>& select);

struct Eig {
  CVec values;
  CMat right, left;
};

Eig eig(const Mat& A, bool want_right, bool want_left);

// Solves T1 X + X T2^T = C for quasi-triangular T1, T2; returns X.
Mat sylvester_quasi_triangular(const Mat& T1, const Mat& T2, const Mat& C);

}  // namespace hh2::lapack
