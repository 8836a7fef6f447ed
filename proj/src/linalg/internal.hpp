#pragma once

#include "hh2/linalg.hpp"

namespace hh2 {

// Picks the k smallest-magnitude stable eigenpairs (conjugate pairs kept
// whole) and returns them realified.
StableSubspace select_stable(const CMat& vectors, const CVec& values, Index n, Index k, double axis_tol,
                             const char* origin);

}  // namespace hh2
