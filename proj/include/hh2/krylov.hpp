#pragma once

#include <cstdint>
#include <functional>

#include "hh2/linalg.hpp"

namespace hh2 {

// y = op(x)
using LinearOperator = std::function<void(const Vec& x, Vec& y)>;

struct ArnoldiOptions {
  Index nev = 6;      // wanted eigenvalues, largest magnitude
  Index ncv = 0;      // basis size; 0 picks max(2 nev + 1, nev + 20)
  int max_restarts = 400;
  double tol = 1e-11;  // residual relative to |theta|
  std::uint64_t seed = 1;
};

struct ArnoldiResult {
  Mat basis;  // orthonormal, op(basis) ~= basis * T
  Mat T;      // quasi-triangular real Schur block of the wanted values
  CVec theta;
  int restarts = 0;
  Index operator_applications = 0;
  bool converged = false;
};

// Krylov-Schur restarted Arnoldi for the largest-magnitude eigenvalues of a
// real operator.
ArnoldiResult arnoldi_largest(const LinearOperator& op, Index dim, const ArnoldiOptions& options);

// `k` stable eigenvalues of smallest magnitude of a 2n x 2n Hamiltonian,
// given y = H^{-1} x. Throws ArnoldiNoConvergence when the restart budget
// runs out.
StableSubspace stable_eigenspace_shift_invert(const LinearOperator& apply_inverse, Index n, Index k,
                                              const Tolerances& tol = {});

}  // namespace hh2
