#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hh2/state_space.hpp"
#include "hh2/tolerances.hpp"
#include "hh2/types.hpp"

namespace hh2 {

// Square matrix checked for symmetry on construction and stored exactly
// symmetric, (M + M^T) / 2.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(const Mat& m, double tolerance = Tolerances{}.symmetry);

  const Mat& matrix() const { return m_; }
  operator const Mat&() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  Mat m_;
};

// Realified stable invariant subspace of a Hamiltonian matrix:
// H [Z1; Z2] = [Z1; Z2] Lambda_b, Lambda_b block diagonal with 2x2 blocks
// [a b; -b a] for each conjugate pair a +- ib (the +ib member is listed in
// `lambda` first).
struct StableSubspace {
  Mat Z1, Z2;
  CVec lambda;
  Mat Lambda_b;
  std::vector<std::string> diagnostics;

  Index size() const { return Z1.cols(); }
};

struct Spectrum {
  CVec eigenvalues;
  CMat left;   // columns v with v^H A = lambda v^H
  CMat right;  // columns v with A v = lambda v
};

struct AreSolution {
  SymmetricMatrix X;
  Mat closed_loop;     // A - M X
  CVec closed_loop_eigenvalues;
  double residual = 0.0;  // Frobenius norm of the Riccati residual
  double z1_condition = 0.0;
};

// A Phi + Phi A^T + B B^T = 0
SymmetricMatrix solve_lyapunov(const Mat& A, const Mat& B, const Tolerances& tol = {});

// Same equation with the constant term given directly: A Phi + Phi A^T + W = 0.
SymmetricMatrix solve_lyapunov_w(const Mat& A, const Mat& W, const Tolerances& tol = {});

// A^T X + X A + C^T C - X B R^{-1} B^T X = 0, stabilizing solution.
AreSolution solve_are(const Mat& A, const Mat& B, const Mat& C, const Mat& R, const Tolerances& tol = {});

// A^T X + X A + Q - X M X = 0 with M, Q symmetric PSD. No stabilizability
// check is done here; callers that know B run PBH themselves.
AreSolution solve_are_m(const Mat& A, const Mat& M, const Mat& Q, const Tolerances& tol = {});

// Hamiltonian [A, -M; -Q, -A^T].
Mat hamiltonian_matrix(const Mat& A, const Mat& M, const Mat& Q);

double h2_norm(const StateSpace& sys, const Tolerances& tol = {});
double hinf_norm(const StateSpace& sys, const Tolerances& tol = {});

// Largest singular value of g(j omega).
double sigma_max(const StateSpace& sys, double omega);

// Stable eigenvalues of smallest magnitude and their realified invariant
// subspace. `k` empty means all n of them from a dense decomposition;
// otherwise shift-invert Arnoldi at 0 is used.
StableSubspace stable_eigenspace(const Mat& H, std::optional<Index> k, const Tolerances& tol = {});

// Dense path, all n stable eigenvalues, magnitude ordered.
StableSubspace full_stable_eigenspace(const Mat& H, const Tolerances& tol = {});

Spectrum unstable_spectrum(const Mat& A, const Tolerances& tol = {});

// S with S S^T = M, symmetric square root with eigenvalues clipped at 0.
Mat sqrt_psd(const SymmetricMatrix& M, const Tolerances& tol = {});

double spectral_abscissa(const Mat& A);
bool is_hurwitz(const Mat& A, double margin = Tolerances{}.hurwitz_margin);
CVec eigenvalues(const Mat& A);

// Eigenvalue groups of A with Re >= -threshold, with an orthonormal basis of
// the associated right eigenvectors.
struct ModeGroup {
  cplx lambda;
  CMat basis;
};
std::vector<ModeGroup> marginal_modes(const Mat& A, double threshold, bool imaginary_only);

// True if C V has full column rank for every group basis V.
bool modes_observed(const std::vector<ModeGroup>& groups, const Mat& C, const Tolerances& tol = {});

// PBH rank tests.
bool is_stabilizable(const Mat& A, const Mat& B, const Tolerances& tol = {});
bool is_detectable(const Mat& A, const Mat& C, const Tolerances& tol = {});
// True if (C, A) has no unobservable mode on the imaginary axis.
bool no_unobservable_imaginary_modes(const Mat& A, const Mat& C, const Tolerances& tol = {});
// True if (A, B) has no uncontrollable mode on the imaginary axis.
bool no_uncontrollable_imaginary_modes(const Mat& A, const Mat& B, const Tolerances& tol = {});

// Ordering used for stable eigenvalues: magnitude, then real part, then
// imaginary part.
bool magnitude_less(cplx a, cplx b);

// Orders realified eigen-decomposition pieces; shared by the dense and
// Krylov paths. `vectors` are right eigenvectors of H in C^{2n}.
StableSubspace realify_subspace(const CMat& vectors, const CVec& values, Index n);

// Condition number in the 2-norm.
double condition_number(const Mat& M);

}  // namespace hh2
