#include <gtest/gtest.h>

#include <algorithm>

#include "hh2/error.hpp"
#include "hh2/hamiltonian.hpp"
#include "hh2/network.hpp"
#include "support.hpp"

using namespace hh2;

namespace {

struct Instance {
  Mat A, Bt, C1, R1, B1;
  HamiltonianSystem hs;
};

Instance random_instance(Index n, Rng& rng) {
  Instance in;
  in.A = rng.normal_matrix(n, n) / std::sqrt(double(n));
  in.Bt = rng.normal_matrix(n, 1 + rng.below(3));
  in.C1 = rng.normal_matrix(1 + rng.below(n), n);
  in.R1 = Mat::Identity(in.Bt.cols(), in.Bt.cols());
  in.B1 = rng.normal_matrix(n, 2);
  in.hs = build_hamiltonian(in.A, in.Bt, in.C1, in.R1);
  in.hs.B1 = in.B1;
  return in;
}

}  // namespace

TEST(Approx, FullKappaRecoversExactSolution) {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 3 + rng.below(8);
    const Instance in = random_instance(n, rng);
    const AreSolution ex = solve_are(in.A, in.Bt, in.C1, in.R1);
    const ApproxAreSolution ap = approx_are(in.hs, n, ApproxMethod::Dense);
    EXPECT_EQ(ap.kappa, n);
    EXPECT_LT((ap.Xbar.matrix() - ex.X.matrix()).norm(), 1e-8 * ex.X.matrix().norm());
    EXPECT_TRUE(ap.stabilizing);
  }
}

TEST(Approx, ErrorBoundHolds) {
  Rng rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 3 + rng.below(10);
    const Instance in = random_instance(n, rng);
    const AreSolution ex = solve_are(in.A, in.Bt, in.C1, in.R1);
    for (Index k = 1; k <= n; ++k) {
      const ApproxAreSolution ap = approx_are(in.hs, k, ApproxMethod::Dense);
      ASSERT_TRUE(ap.epsilon && ap.E_kappa_norm);
      const double err = exact_error_norm(ex.X.matrix(), ap.Xbar.matrix(), in.A, in.hs.M, in.B1);
      const double bound = *ap.epsilon * *ap.E_kappa_norm;
      EXPECT_LE(err, bound + 1e-8 * std::max({1.0, bound, ex.X.matrix().norm()})) << "n " << n << " kappa " << k;
    }
  }
}

TEST(Approx, CauchyMatrixGivesClosedLoopGramian) {
  Rng rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const Instance in = random_instance(3 + rng.below(8), rng);
    const AreSolution ex = solve_are(in.A, in.Bt, in.C1, in.R1);
    const StableSubspace full = full_stable_eigenspace(in.hs.H);
    const Mat C = cauchy_matrix(full.Z1, full.Lambda_b, in.B1);
    const Mat gram = solve_lyapunov(in.A - in.hs.M * ex.X.matrix(), in.B1).matrix();
    EXPECT_LT((full.Z1 * C * full.Z1.transpose() - gram).norm(), 1e-8 * std::max(1.0, gram.norm()));
  }
}

TEST(Approx, LowRankSolutionIsBelowExactAndResidueFactors) {
  Rng rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 3 + rng.below(8);
    const Instance in = random_instance(n, rng);
    const AreSolution ex = solve_are(in.A, in.Bt, in.C1, in.R1);
    const double scale = std::max(1.0, in.hs.CtC.norm());
    for (Index k = 1; k <= n; ++k) {
      const ApproxAreSolution ap = approx_are(in.hs, k, ApproxMethod::Dense);
      const double xs = std::max(1.0, ex.X.matrix().norm());
      EXPECT_GE(test::min_eig(ex.X.matrix() - ap.Xbar.matrix()), -1e-8 * xs);
      EXPECT_GE(test::min_eig(ap.Xbar.matrix()), -1e-8 * xs);
      const Mat res = riccati_residual(ap.Xbar.matrix(), in.A, in.hs.M, in.hs.CtC);
      const Mat& Cb = ap.residue_factor;
      EXPECT_LE((res - Cb.transpose() * Cb).norm(), 1e-7 * scale);
      if (ap.stabilizing) EXPECT_TRUE(is_hurwitz(in.A - in.hs.M * ap.Xbar.matrix()));
    }
  }
}

TEST(Approx, PairClosureBumpsKappa) {
  // Complex pair at the front of the ordering: kappa = 1 keeps both members.
  Mat A(3, 3);
  A << 0.0, 2.0, 0.0, -2.0, 0.0, 0.0, 0.0, 0.0, -30.0;
  const HamiltonianSystem hs = build_hamiltonian(A, Mat::Identity(3, 3), Mat::Identity(3, 3) * 0.1, Mat::Identity(3, 3));
  const ApproxAreSolution ap = approx_are(hs, 1, ApproxMethod::Dense);
  EXPECT_EQ(ap.kappa_requested, 1);
  EXPECT_EQ(ap.kappa, 2);
  EXPECT_LT((ap.Xbar.matrix() - ap.Xbar.matrix().transpose()).norm(), 1e-14);
}

TEST(Approx, KrylovMatchesDenseOnNetwork) {
  const ConsensusNetwork net = generate_consensus_network(NetworkSpec::equal_blocks(80, 4), 10.0, 10.0);
  const GeneralizedPlant& G = net.plant;
  const Mat Bt = G.B2 * Mat::Ones(80, 1) / std::sqrt(80.0);
  const Mat R1 = Mat::Identity(1, 1);
  const HamiltonianSystem dense = build_hamiltonian(G.A, Bt, G.C1, R1);
  const HamiltonianSystem sparse = build_hamiltonian_structured(G.A.sparseView(), Bt, G.C1.sparseView(), R1);
  for (Index k : {2, 4, 6}) {
    const ApproxAreSolution d = approx_are(dense, k, ApproxMethod::Dense);
    const ApproxAreSolution s = approx_are(sparse, k, ApproxMethod::Krylov);
    EXPECT_EQ(d.kappa, s.kappa);
    EXPECT_LT((d.Xbar.matrix() - s.Xbar.matrix()).norm(), 1e-7 * std::max(1.0, d.Xbar.matrix().norm())) << k;
    EXPECT_FALSE(s.epsilon.has_value());
  }
}

TEST(Approx, KappaOutOfRangeIsRejected) {
  Rng rng(35);
  const Instance in = random_instance(4, rng);
  EXPECT_THROW(approx_are(in.hs, 0, ApproxMethod::Dense), Error);
  EXPECT_THROW(approx_are(in.hs, 5, ApproxMethod::Dense), Error);
}

TEST(Approx, StabilityTestIsSufficient) {
  Rng rng(36);
  int passed = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 3 + rng.below(6);
    const Instance in = random_instance(n, rng);
    for (Index k = 1; k <= n; ++k) {
      const ApproxAreSolution ap = approx_are(in.hs, k, ApproxMethod::Dense);
      if (stability_test(ap, in.A, in.C1)) {
        ++passed;
        EXPECT_TRUE(is_hurwitz(in.A - in.hs.M * ap.Xbar.matrix()));
      }
    }
  }
  EXPECT_GT(passed, 0);
}

TEST(Hamiltonian, RejectsSingularWeight) {
  try {
    build_hamiltonian(-Mat::Identity(2, 2), Mat::Identity(2, 2), Mat::Identity(2, 2), Mat::Zero(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularR);
  }
}
