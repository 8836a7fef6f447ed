#include "hh2/hamiltonian.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "hh2/error.hpp"
#include "hh2/kernels.hpp"
#include "hh2/krylov.hpp"

namespace hh2 {

const char* to_string(ApproxMethod m) { return m == ApproxMethod::Krylov ? "krylov" : "dense"; }

namespace {

Mat spd_inverse_times(const Mat& R, const Mat& rhs, const Tolerances& tol) {
  Eigen::LLT<Mat> llt(0.5 * (R + R.transpose()));
  if (llt.info() != Eigen::Success) fail(ErrorKind::SingularR, "R1 is not positive definite");
  if (condition_number(R) > tol.r_condition) fail(ErrorKind::IllConditionedR, "R1 is ill conditioned");
  return llt.solve(rhs);
}

}  // namespace

HamiltonianSystem build_hamiltonian(const Mat& A, const Mat& Bt, const Mat& C1, const Mat& R1) {
  const Index n = A.rows();
  require(A.cols() == n && Bt.rows() == n && C1.cols() == n && R1.rows() == Bt.cols() && R1.cols() == Bt.cols(),
          ErrorKind::DimensionMismatch, "Hamiltonian data dimensions disagree");
  HamiltonianSystem hs;
  hs.A = A;
  hs.Bt = Bt;
  hs.R1 = R1;
  hs.A_sparse = A.sparseView();
  hs.C1_sparse = C1.sparseView();
  const Mat M = Bt * spd_inverse_times(R1, Bt.transpose(), Tolerances{});
  hs.M = 0.5 * (M + M.transpose());
  hs.CtC = C1.transpose() * C1;
  hs.H = hamiltonian_matrix(A, hs.M, hs.CtC);
  return hs;
}

HamiltonianSystem build_hamiltonian_structured(const SpMat& A, const Mat& Bt, const SpMat& C1, const Mat& R1) {
  const Index n = A.rows();
  require(A.cols() == n && Bt.rows() == n && C1.cols() == n && R1.rows() == Bt.cols() && R1.cols() == Bt.cols(),
          ErrorKind::DimensionMismatch, "Hamiltonian data dimensions disagree");
  Eigen::LLT<Mat> llt(0.5 * (R1 + R1.transpose()));
  if (llt.info() != Eigen::Success) fail(ErrorKind::SingularR, "R1 is not positive definite");
  HamiltonianSystem hs;
  hs.A_sparse = A;
  hs.C1_sparse = C1;
  hs.Bt = Bt;
  hs.R1 = R1;
  return hs;
}

namespace {

using Triplet = Eigen::Triplet<double>;

void append(std::vector<Triplet>& t, const SpMat& m, Index r0, Index c0, double s) {
  for (Index k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it) t.emplace_back(r0 + it.row(), c0 + it.col(), s * it.value());
}

void append_dense(std::vector<Triplet>& t, const Mat& m, Index r0, Index c0, double s) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0.0) t.emplace_back(r0 + i, c0 + j, s * m(i, j));
}

// Solves H [x; y] = [f; g] through the sparse augmented system
//   [A   0    -Bt  0  ] [x]   [f]
//   [0  -A^T   0  -C1^T] [y] = [g]
//   [0   Bt^T -R   0  ] [w]   [0]
//   [C1  0     0  -I  ] [z]   [0]
class HamiltonianInverse {
 public:
  explicit HamiltonianInverse(const HamiltonianSystem& hs) : n_(hs.n()) {
    const Index r = hs.Bt.cols(), p = hs.C1_sparse.rows();
    dim_ = 2 * n_ + r + p;
    std::vector<Triplet> t;
    t.reserve(2 * hs.A_sparse.nonZeros() + 2 * hs.C1_sparse.nonZeros() + 2 * n_ * r + r * r + p);
    append(t, hs.A_sparse, 0, 0, 1.0);
    append_dense(t, hs.Bt, 0, 2 * n_, -1.0);
    const SpMat At = hs.A_sparse.transpose();
    append(t, At, n_, n_, -1.0);
    const SpMat Ct = hs.C1_sparse.transpose();
    append(t, Ct, n_, 2 * n_ + r, -1.0);
    append_dense(t, hs.Bt.transpose(), 2 * n_, n_, 1.0);
    append_dense(t, hs.R1, 2 * n_, 2 * n_, -1.0);
    append(t, hs.C1_sparse, 2 * n_ + r, 0, 1.0);
    for (Index i = 0; i < p; ++i) t.emplace_back(2 * n_ + r + i, 2 * n_ + r + i, -1.0);
    SpMat K(dim_, dim_);
    K.setFromTriplets(t.begin(), t.end());
    K.makeCompressed();
    lu_.analyzePattern(K);
    lu_.factorize(K);
    if (lu_.info() != Eigen::Success) fail(ErrorKind::ImaginaryAxisEigenvalue, "Hamiltonian is singular");
    rhs_ = Vec::Zero(dim_);
  }

  void apply(const Vec& x, Vec& y) {
    rhs_.head(2 * n_) = x;
    rhs_.tail(dim_ - 2 * n_).setZero();
    const Vec sol = lu_.solve(rhs_);
    y = sol.head(2 * n_);
  }

 private:
  Index n_, dim_ = 0;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
  Vec rhs_;
};

}  // namespace

Mat riccati_residual(const Mat& X, const Mat& A, const Mat& M, const Mat& CtC) {
  return A.transpose() * X + X * A + CtC - X * M * X;
}

Mat cauchy_matrix(const Mat& Z1, const Mat& Lambda_b, const Mat& B1, const Tolerances& tol) {
  require(Z1.rows() == Z1.cols() && Lambda_b.rows() == Z1.rows() && B1.rows() == Z1.rows(),
          ErrorKind::DimensionMismatch, "Cauchy matrix data dimensions disagree");
  Eigen::PartialPivLU<Mat> lu(Z1);
  if (1.0 / std::max(lu.rcond(), 1e-300) > tol.z1_condition) fail(ErrorKind::SingularZ1, "Z1 is singular");
  const Mat Zb = lu.solve(B1);
  return kernels::cauchy_blocks(Lambda_b, Zb * Zb.transpose());
}

ErrorBound error_bound(const ApproxAreSolution& sol, const Mat& Z1_full, const Mat& Lambda_full, const Mat& B1,
                       const Tolerances& tol) {
  require(sol.E_kappa_norm.has_value(), ErrorKind::InvalidArgument, "error bound needs the full stable subspace");
  ErrorBound eb;
  eb.cauchy = cauchy_matrix(Z1_full, Lambda_full, B1, tol);
  double sum = 0.0;
  for (Index i = sol.kappa; i < eb.cauchy.rows(); ++i) {
    double c = eb.cauchy(i, i);
    if (c < 0.0) {
      if (c < -1e-10) ++eb.clipped;
      c = 0.0;
    }
    sum += c;
  }
  eb.epsilon = std::sqrt(sum);
  eb.bound = eb.epsilon * *sol.E_kappa_norm;
  return eb;
}

double exact_error_norm(const Mat& X, const Mat& Xbar, const Mat& A, const Mat& M, const Mat& B1,
                        const Tolerances& tol) {
  const SymmetricMatrix phi = solve_lyapunov(A - M * X, B1, tol);
  return ((X - Xbar) * sqrt_psd(phi, tol)).norm();
}

StabilityTest stability_test(const ApproxAreSolution& sol, const SpMat& A, const SpMat& C1,
                             const std::vector<ModeGroup>& imaginary_modes, const Tolerances& tol) {
  const Index n = A.rows(), k = sol.Z1k.cols();
  StabilityTest st;
  const SpMat Q = SpMat(C1.transpose()) * C1;
  const double scale = std::max(1.0, Q.norm());
  if (k == 0) {
    // Nothing retained: the difference is C1^T C1 itself.
    st.psd_min = 0.0;
    Mat Cd = Mat(C1);
    st.observable = modes_observed(imaginary_modes, Cd, tol);
    st.passed = st.observable;
    return st;
  }
  // C1^T C1 - C1bar^T C1bar = W N W^T with W = [Z2k, Q Z1k].
  const Mat& U = sol.Z2k;
  const Mat a = Q * sol.Z1k;
  const Mat S = sol.Z2k.transpose() * sol.Z1k;
  Eigen::PartialPivLU<Mat> Slu(S);
  const Mat Sinv = Slu.inverse();
  Mat N = Mat::Zero(2 * k, 2 * k);
  N.topLeftCorner(k, k) = -Sinv * (sol.Z1k.transpose() * a) * Sinv.transpose();
  N.topRightCorner(k, k) = Sinv;
  N.bottomLeftCorner(k, k) = Sinv.transpose();
  Mat W(n, 2 * k);
  W << U, a;
  Eigen::HouseholderQR<Mat> qr(W);
  const Index rk = std::min<Index>(n, 2 * k);
  const Mat Rw = qr.matrixQR().topRows(rk).triangularView<Eigen::Upper>();
  const Mat core = Rw * N * Rw.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (core + core.transpose()));
  double lmin = es.eigenvalues()(0);
  if (n > rk) lmin = std::min(lmin, 0.0);
  st.psd_min = lmin;
  const bool psd = lmin >= -tol.stability_test_psd * scale;

  // D v for every imaginary-axis mode basis V.
  st.observable = true;
  for (const auto& g : imaginary_modes) {
    const CMat WtV = W.transpose().cast<cplx>() * g.basis;
    const CMat DV = W.cast<cplx>() * (N.cast<cplx>() * WtV);
    const Index dim = g.basis.cols();
    if (dim > DV.cols() || dim > n) {
      st.observable = false;
      break;
    }
    Eigen::JacobiSVD<CMat> svd(DV);
    if (svd.singularValues()(dim - 1) <= tol.pbh_rank * scale) {
      st.observable = false;
      break;
    }
  }
  st.passed = psd && st.observable;
  return st;
}

bool stability_test(const ApproxAreSolution& sol, const Mat& A, const Mat& C1, const Tolerances& tol) {
  const auto modes = marginal_modes(A, tol.unstable_threshold * std::max(1.0, A.norm()), true);
  return stability_test(sol, SpMat(A.sparseView()), SpMat(C1.sparseView()), modes, tol).passed;
}

ApproxAreSolution approx_are(const HamiltonianSystem& Hs, Index kappa, ApproxMethod method,
                             const ApproxOptions& options) {
  const Tolerances& tol = options.tol;
  const Index n = Hs.n();
  require(kappa >= 1 && kappa <= n, ErrorKind::InvalidArgument, "kappa must lie in [1, n]");
  ApproxAreSolution sol;
  sol.kappa_requested = kappa;
  sol.method = method;

  StableSubspace sub;
  if (method == ApproxMethod::Dense) {
    require(Hs.has_dense(), ErrorKind::InvalidArgument, "dense method needs the dense Hamiltonian");
    auto full = std::make_shared<StableSubspace>(full_stable_eigenspace(Hs.H, tol));
    Index k = kappa;
    if (k < n && full->lambda(k - 1).imag() > 0.0) {
      ++k;
      sol.diagnostics.push_back("kappa raised from " + std::to_string(kappa) + " to " + std::to_string(k) +
                                " to keep a conjugate pair together");
    }
    sub.Z1 = full->Z1.leftCols(k);
    sub.Z2 = full->Z2.leftCols(k);
    sub.lambda = full->lambda.head(k);
    sub.Lambda_b = full->Lambda_b.topLeftCorner(k, k);
    sol.full = full;
  } else {
    HamiltonianInverse inv(Hs);
    LinearOperator op = [&inv](const Vec& x, Vec& y) { inv.apply(x, y); };
    sub = stable_eigenspace_shift_invert(op, n, kappa, tol);
    for (auto& d : sub.diagnostics) sol.diagnostics.push_back(d);
  }
  const Index k = sub.Z1.cols();
  sol.kappa = k;
  sol.Z1k = sub.Z1;
  sol.Z2k = sub.Z2;
  sol.Lambda_kappa = sub.lambda;
  sol.Lambda_b = sub.Lambda_b;

  Mat S = sol.Z2k.transpose() * sol.Z1k;
  S = 0.5 * (S + S.transpose());
  if (condition_number(S) > tol.pencil_condition)
    fail(ErrorKind::SingularPencil, "Z2k^T Z1k is singular to working precision");
  Eigen::LDLT<Mat> ldlt(S);
  const Mat Xb = sol.Z2k * ldlt.solve(sol.Z2k.transpose());
  sol.Xbar = SymmetricMatrix(0.5 * (Xb + Xb.transpose()), 1.0);

  if (sol.full) {
    const Mat Z1c = sol.full->Z1.rightCols(n - k);
    const Mat Z2c = sol.full->Z2.rightCols(n - k);
    sol.E_kappa = Z2c - sol.Xbar.matrix() * Z1c;
    sol.E_kappa_norm = sol.E_kappa.norm();
    if (Hs.B1.size() > 0) {
      const ErrorBound eb = error_bound(sol, sol.full->Z1, sol.full->Lambda_b, Hs.B1, tol);
      sol.epsilon = eb.epsilon;
      if (eb.clipped > 0)
        sol.diagnostics.push_back(std::to_string(eb.clipped) + " Cauchy diagonal entries clipped at zero");
    }
  }
  if (Hs.has_dense()) {
    // C1bar^T = (I - Z2k S^{-1} Z1k^T) C1^T
    const Mat C1t = Mat(Hs.C1_sparse.transpose());
    const Mat C1bar_t = C1t - sol.Z2k * Eigen::PartialPivLU<Mat>(sol.Z2k.transpose() * sol.Z1k).solve(
                                            sol.Z1k.transpose() * C1t);
    sol.residue_factor = C1bar_t.transpose();
  }

  std::vector<ModeGroup> own_modes;
  const std::vector<ModeGroup>* modes = options.imaginary_modes;
  if (!modes) {
    const Mat Ad = Hs.has_dense() ? Hs.A : Mat(Hs.A_sparse);
    own_modes = marginal_modes(Ad, tol.unstable_threshold * std::max(1.0, Ad.norm()), true);
    modes = &own_modes;
  }
  const StabilityTest st = stability_test(sol, Hs.A_sparse, Hs.C1_sparse, *modes, tol);
  sol.stabilizing = st.passed;
  sol.psd_min = st.psd_min;
  if (!st.passed && options.direct_check_on_failure) {
    Mat Ad = Hs.has_dense() ? Hs.A : Mat(Hs.A_sparse);
    Mat closed = Ad - Hs.Bt * spd_inverse_times(Hs.R1, Hs.Bt.transpose() * sol.Xbar.matrix(), tol);
    sol.closed_loop_hurwitz = is_hurwitz(closed, tol.hurwitz_margin);
  }
  return sol;
}

}  // namespace hh2
