#include <gtest/gtest.h>

#include "hh2/error.hpp"
#include "hh2/krylov.hpp"
#include "hh2/linalg.hpp"
#include "support.hpp"

using namespace hh2;
using hh2::test::rel;

namespace {

struct AreCase {
  Mat A, B, C, R;
};

AreCase random_are(Index n, Rng& rng) {
  AreCase c;
  c.A = rng.normal_matrix(n, n);  // typically unstable
  c.B = rng.normal_matrix(n, 1 + rng.below(n));
  c.C = rng.normal_matrix(1 + rng.below(n), n);
  const Mat S = rng.normal_matrix(c.B.cols(), c.B.cols());
  c.R = S * S.transpose() + Mat::Identity(c.B.cols(), c.B.cols());
  return c;
}

}  // namespace

TEST(Riccati, MatchesSignFunctionOracle) {
  Rng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const AreCase c = random_are(2 + rng.below(7), rng);
    const AreSolution s = solve_are(c.A, c.B, c.C, c.R);
    const Mat M = c.B * c.R.inverse() * c.B.transpose();
    const Mat X = test::are_sign_oracle(c.A, M, c.C.transpose() * c.C);
    EXPECT_LT((s.X.matrix() - X).norm() / X.norm(), 1e-7) << "trial " << trial;
    EXPECT_TRUE(is_hurwitz(c.A - M * s.X.matrix()));
    EXPECT_GE(test::min_eig(s.X.matrix()), -1e-9 * X.norm());
  }
}

TEST(Riccati, ScalarClosedForm) {
  // 2 a x + c^2 - x^2 b^2 / r = 0
  const double a = 1.5, b = 2.0, c = 3.0, r = 0.5;
  const double x = (a + std::sqrt(a * a + b * b * c * c / r)) * r / (b * b);
  const AreSolution s = solve_are(Mat::Constant(1, 1, a), Mat::Constant(1, 1, b), Mat::Constant(1, 1, c),
                                  Mat::Constant(1, 1, r));
  EXPECT_NEAR(s.X.matrix()(0, 0), x, 1e-12);
}

TEST(Riccati, RejectsUnstabilizablePair) {
  Mat A(2, 2);
  A << 1, 0, 0, -1;
  Mat B(2, 1);
  B << 0, 1;
  try {
    solve_are(A, B, Mat::Identity(2, 2), Mat::Identity(1, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotStabilizable);
  }
}

TEST(Riccati, RejectsIndefiniteWeight) {
  try {
    solve_are(-Mat::Identity(2, 2), Mat::Identity(2, 2), Mat::Identity(2, 2), -Mat::Identity(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularR);
  }
}

TEST(Riccati, ImaginaryAxisHamiltonianIsReported) {
  // Undamped oscillator that the weight cannot see.
  Mat A(2, 2);
  A << 0, 1, -1, 0;
  try {
    solve_are(A, Mat::Identity(2, 2), Mat::Zero(1, 2), Mat::Identity(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HamiltonianImaginaryAxis);
  }
}

TEST(Lyapunov, MatchesKroneckerOracle) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 1 + rng.below(9);
    const Mat A = rng.normal_matrix(n, n) / std::sqrt(double(n)) - 2.0 * Mat::Identity(n, n);
    const Mat B = rng.normal_matrix(n, 2);
    const Mat P = solve_lyapunov(A, B).matrix();
    const Mat Po = test::lyapunov_kron_oracle(A, B * B.transpose());
    EXPECT_LT((P - Po).norm() / Po.norm(), 1e-10);
    EXPECT_LT((A * P + P * A.transpose() + B * B.transpose()).norm(), 1e-10 * std::max(1.0, P.norm()));
  }
}

TEST(Lyapunov, RejectsUnstableA) {
  try {
    solve_lyapunov(Mat::Identity(2, 2), Mat::Identity(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHurwitz);
  }
}

TEST(Norms, H2FirstOrderClosedForm) {
  // 1/(s + a) has H2 norm 1/sqrt(2a).
  const StateSpace g(Mat::Constant(1, 1, -3.0), Mat::Ones(1, 1), Mat::Ones(1, 1), Mat::Zero(1, 1));
  EXPECT_NEAR(h2_norm(g), 1.0 / std::sqrt(6.0), 1e-14);
}

TEST(Norms, H2MatchesQuadrature) {
  Rng rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const StateSpace g = random_stable_system(4, 2, 3, rng, false);
    EXPECT_LT(rel(h2_norm(g), test::h2_quadrature_oracle(g)), 1e-6);
  }
}

TEST(Norms, H2OfProperSystemFails) {
  const StateSpace g(Mat::Constant(1, 1, -1.0), Mat::Ones(1, 1), Mat::Ones(1, 1), Mat::Ones(1, 1));
  try {
    h2_norm(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotStrictlyProper);
  }
}

TEST(Norms, HinfMatchesGrid) {
  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const StateSpace g = random_stable_system(5, 2, 2, rng, true);
    EXPECT_LT(rel(hinf_norm(g), test::hinf_grid_oracle(g)), 1e-5);
  }
  // Lightly damped resonance: peak 1 / (2 zeta sqrt(1 - zeta^2)).
  const double zeta = 0.01;
  Mat A(2, 2);
  A << 0, 1, -1, -2 * zeta;
  const StateSpace g(A, Mat(Eigen::Vector2d(0, 1)), Mat(Eigen::RowVector2d(1, 0)), Mat::Zero(1, 1));
  EXPECT_LT(rel(hinf_norm(g), 1.0 / (2 * zeta * std::sqrt(1 - zeta * zeta))), 1e-6);
}

TEST(Pbh, DetectsUncontrollableUnstableMode) {
  Mat A = Mat::Zero(3, 3);
  A.diagonal() << 1.0, -1.0, 2.0;
  Mat B(3, 1);
  B << 1, 1, 0;
  EXPECT_FALSE(is_stabilizable(A, B));
  B(2, 0) = 1;
  EXPECT_TRUE(is_stabilizable(A, B));
  EXPECT_TRUE(is_detectable(A, B.transpose()));
}

TEST(Pbh, RepeatedEigenvalueNeedsEnoughInputs) {
  // Two unstable modes at the same eigenvalue and a single input.
  const Mat A = Mat::Identity(2, 2);
  EXPECT_FALSE(is_stabilizable(A, Mat::Ones(2, 1)));
  EXPECT_TRUE(is_stabilizable(A, Mat::Identity(2, 2)));
}

TEST(Eigenspace, DenseSubspaceSpansStableEigenvectors) {
  Rng rng(21);
  const AreCase c = random_are(6, rng);
  const Mat M = c.B * c.R.inverse() * c.B.transpose();
  const Mat H = hamiltonian_matrix(c.A, M, c.C.transpose() * c.C);
  const StableSubspace s = full_stable_eigenspace(H);
  ASSERT_EQ(s.size(), 6);
  Mat Z(12, 6);
  Z << s.Z1, s.Z2;
  EXPECT_LT((H * Z - Z * s.Lambda_b).norm(), 1e-9 * H.norm() * Z.norm());
  for (Index i = 1; i < s.lambda.size(); ++i) EXPECT_LE(std::abs(s.lambda(i - 1)), std::abs(s.lambda(i)) * (1 + 1e-12));
}

TEST(Eigenspace, ShiftInvertAgreesWithDense) {
  Rng rng(22);
  const Index n = 40;
  const Mat A = rng.normal_matrix(n, n) / std::sqrt(double(n)) - 0.2 * Mat::Identity(n, n);
  const Mat B = rng.normal_matrix(n, 3), C = rng.normal_matrix(4, n);
  const Mat H = hamiltonian_matrix(A, B * B.transpose(), C.transpose() * C);
  const StableSubspace dense = full_stable_eigenspace(H);
  Eigen::PartialPivLU<Mat> lu(H);
  const StableSubspace kry =
      stable_eigenspace_shift_invert([&](const Vec& x, Vec& y) { y = lu.solve(x); }, n, 6);
  ASSERT_GE(kry.size(), 6);
  for (Index i = 0; i < 6; ++i) EXPECT_LT(std::abs(kry.lambda(i) - dense.lambda(i)), 1e-8 * std::abs(dense.lambda(i)));
}

TEST(Arnoldi, LargestEigenvaluesOfDiagonalOperator) {
  const Index n = 200;
  Vec d(n);
  for (Index i = 0; i < n; ++i) d(i) = 1.0 + i;
  ArnoldiOptions o;
  o.nev = 5;
  const ArnoldiResult r = arnoldi_largest([&](const Vec& x, Vec& y) { y = d.cwiseProduct(x); }, n, o);
  ASSERT_TRUE(r.converged);
  std::vector<double> got;
  for (Index i = 0; i < r.theta.size(); ++i) got.push_back(r.theta(i).real());
  std::sort(got.rbegin(), got.rend());
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(got[i], n - i, 1e-8);
}

TEST(SymmetricMatrix, RejectsAsymmetricInput) {
  Mat m(2, 2);
  m << 1, 2, 3, 4;
  EXPECT_THROW(SymmetricMatrix{m}, Error);
}
