#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "hh2/linalg.hpp"

namespace hh2 {

using SpMat = Eigen::SparseMatrix<double>;

enum class ApproxMethod { Dense, Krylov };

const char* to_string(ApproxMethod m);

// H = [A, -M; -C1^T C1, -A^T] with M = Bt R1^{-1} Bt^T, where Bt = B2 Pu^T
// is the effective input. The sparse pieces are always present; the dense
// ones only when built with `build_hamiltonian`.
struct HamiltonianSystem {
  SpMat A_sparse, C1_sparse;
  Mat Bt, R1;
  Mat A, M, CtC, H;
  Mat B1;  // disturbance input for the error bound, may be empty

  Index n() const { return Bt.rows(); }
  bool has_dense() const { return H.size() > 0; }
};

HamiltonianSystem build_hamiltonian(const Mat& A, const Mat& Bt, const Mat& C1, const Mat& R1);

// Sparse-only variant for large instances; dense members stay empty.
HamiltonianSystem build_hamiltonian_structured(const SpMat& A, const Mat& Bt, const SpMat& C1, const Mat& R1);

struct ApproxAreSolution {
  SymmetricMatrix Xbar;
  Index kappa = 0;            // retained columns, after pair closure
  Index kappa_requested = 0;
  ApproxMethod method = ApproxMethod::Dense;
  CVec Lambda_kappa;
  Mat Lambda_b;               // realified block of the retained eigenvalues
  Mat Z1k, Z2k;
  std::optional<double> epsilon;
  std::optional<double> E_kappa_norm;
  Mat E_kappa;
  Mat residue_factor;         // C1bar, filled when the dense system is available
  bool stabilizing = false;   // sufficient test result
  std::optional<bool> closed_loop_hurwitz;  // direct check, run when the test fails
  double psd_min = 0.0;       // lambda_min(C1^T C1 - C1bar^T C1bar)
  std::shared_ptr<const StableSubspace> full;  // dense method only
  std::vector<std::string> diagnostics;

  bool accepted() const { return stabilizing || closed_loop_hurwitz.value_or(false); }
};

struct ApproxOptions {
  Tolerances tol{};
  // Imaginary-axis modes of A for the observability part of the test;
  // computed on demand when null.
  const std::vector<ModeGroup>* imaginary_modes = nullptr;
  bool direct_check_on_failure = true;
};

ApproxAreSolution approx_are(const HamiltonianSystem& Hs, Index kappa, ApproxMethod method,
                             const ApproxOptions& options = {});

// Cauchy matrix C with Lambda C + C Lambda^T + Z1^{-1} B1 B1^T Z1^{-T} = 0.
Mat cauchy_matrix(const Mat& Z1, const Mat& Lambda_b, const Mat& B1, const Tolerances& tol = {});

struct ErrorBound {
  double epsilon = 0.0;
  double bound = 0.0;
  Mat cauchy;
  int clipped = 0;  // negative diagonal entries clipped to zero
};

ErrorBound error_bound(const ApproxAreSolution& sol, const Mat& Z1_full, const Mat& Lambda_full, const Mat& B1,
                       const Tolerances& tol = {});

// |(X - Xbar) Phi^{1/2}|_F with Phi = LYAP(A - M X, B1).
double exact_error_norm(const Mat& X, const Mat& Xbar, const Mat& A, const Mat& M, const Mat& B1,
                        const Tolerances& tol = {});

struct StabilityTest {
  bool passed = false;
  double psd_min = 0.0;
  bool observable = true;
};

// Sufficient test: C1^T C1 - C1bar^T C1bar is PSD and keeps every
// imaginary-axis mode of A observable.
StabilityTest stability_test(const ApproxAreSolution& sol, const SpMat& A, const SpMat& C1,
                             const std::vector<ModeGroup>& imaginary_modes, const Tolerances& tol = {});
bool stability_test(const ApproxAreSolution& sol, const Mat& A, const Mat& C1, const Tolerances& tol = {});

// A^T X + X A + C1^T C1 - X M X.
Mat riccati_residual(const Mat& X, const Mat& A, const Mat& M, const Mat& CtC);

}  // namespace hh2
