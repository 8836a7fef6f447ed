#include <gtest/gtest.h>

#include "hh2/error.hpp"
#include "hh2/network.hpp"
#include "hh2/plant.hpp"
#include "support.hpp"

using namespace hh2;

namespace {

CMat lft_at(const GeneralizedPlant& G, const StateSpace& K, double w) {
  const CMat g11 = G.G11().at_frequency(w), g12 = G.G12().at_frequency(w), g21 = G.G21().at_frequency(w),
             g22 = G.G22().at_frequency(w), k = K.at_frequency(w);
  const CMat I = CMat::Identity(G.ny(), G.ny());
  return g11 + g12 * k * (I - g22 * k).inverse() * g21;
}

}  // namespace

TEST(StateSpace, SeriesAndAddMatchFrequencyProducts) {
  Rng rng(3);
  const StateSpace g = random_stable_system(3, 2, 4, rng, true), h = random_stable_system(2, 4, 2, rng, true);
  const StateSpace f = random_stable_system(4, 2, 4, rng, true);
  for (double w : {0.0, 0.3, 2.0, 50.0}) {
    EXPECT_LT((series(g, h).at_frequency(w) - h.at_frequency(w) * g.at_frequency(w)).norm(), 1e-12);
    EXPECT_LT((add(g, f).at_frequency(w) - g.at_frequency(w) - f.at_frequency(w)).norm(), 1e-12);
    EXPECT_LT((transpose_dual(g).at_frequency(w) - g.at_frequency(w).transpose()).norm(), 1e-12);
  }
}

TEST(StateSpace, SeriesRejectsMismatch) {
  Rng rng(3);
  const StateSpace g = random_stable_system(3, 2, 4, rng, true), h = random_stable_system(2, 3, 2, rng, true);
  EXPECT_THROW(series(g, h), Error);
}

TEST(Lft, MatchesFrequencyFormula) {
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const GeneralizedPlant G = test::random_plant(5, 2, 3, rng);
    const StateSpace K = random_stable_system(3, 3, 2, rng, true);
    const StateSpace T = lft_lower(G, K);
    EXPECT_EQ(T.states(), G.n() + K.states());
    for (double w : {0.0, 0.7, 5.0}) EXPECT_LT((T.at_frequency(w) - lft_at(G, K, w)).norm(), 1e-10);
  }
}

TEST(Assumptions, RandomPlantPasses) {
  Rng rng(8);
  const GeneralizedPlant G = test::random_plant(6, 2, 3, rng);
  const AssumptionReport r = validate_assumptions(G);
  EXPECT_TRUE(r.all());
}

TEST(Assumptions, CrossTermBreaksA4) {
  Rng rng(8);
  GeneralizedPlant G = test::random_plant(6, 2, 3, rng);
  G.C1.bottomRows(2) = rng.normal_matrix(2, 6);
  const AssumptionReport r = validate_assumptions(G);
  EXPECT_FALSE(r.a4);
  EXPECT_FALSE(r.all());
}

TEST(Assumptions, SingularD12BreaksA2) {
  Rng rng(8);
  GeneralizedPlant G = test::random_plant(6, 2, 3, rng);
  G.D12.setZero();
  EXPECT_FALSE(validate_assumptions(G).a2);
}

TEST(Network, DeterministicForSeed) {
  NetworkSpec spec;
  const ConsensusNetwork a = generate_consensus_network(spec, 10.0, 10.0);
  const ConsensusNetwork b = generate_consensus_network(spec, 10.0, 10.0);
  EXPECT_EQ(a.plant.A, b.plant.A);
  EXPECT_EQ(a.block_of, b.block_of);
  spec.seed = 8;
  EXPECT_NE(generate_consensus_network(spec, 10.0, 10.0).plant.A, a.plant.A);
}

TEST(Network, LaplacianProperties) {
  for (Topology t : {Topology::StochasticBlock, Topology::RingLattice}) {
    NetworkSpec spec = NetworkSpec::equal_blocks(60, 3);
    spec.topology = t;
    const ConsensusNetwork net = generate_consensus_network(spec, 10.0, 10.0);
    const Mat& L = net.laplacian;
    EXPECT_LT((L - L.transpose()).norm(), 1e-14);
    EXPECT_LT((L * Vec::Ones(60)).norm(), 1e-10);
    for (Index i = 0; i < 60; ++i)
      for (Index j = 0; j < 60; ++j)
        if (i != j && L(i, j) != 0.0) {
          EXPECT_LE(-L(i, j), spec.a_hi);
          EXPECT_GE(-L(i, j), spec.a_lo);
        }
    EXPECT_EQ(net.plant.A, -L);
    EXPECT_TRUE(validate_assumptions(net.plant).all());
    EXPECT_EQ(net.plant.ns(), 60);
  }
}

TEST(Network, BlocksAreDenserInside) {
  const ConsensusNetwork net = generate_consensus_network(NetworkSpec{}, 10.0, 10.0);
  Index inside = 0, across = 0;
  for (Index i = 0; i < 100; ++i)
    for (Index j = i + 1; j < 100; ++j)
      if (net.laplacian(i, j) != 0.0) (net.block_of[i] == net.block_of[j] ? inside : across)++;
  EXPECT_GT(inside, 10 * across);
  EXPECT_EQ(inside + across, net.edges);
}

TEST(Network, RejectsBadProbabilities) {
  NetworkSpec spec;
  spec.p_in = 1.5;
  EXPECT_THROW(generate_consensus_network(spec, 1.0, 1.0), Error);
}

TEST(Plant, PermutationPreservesTransferFunction) {
  Rng rng(2);
  const GeneralizedPlant G = test::random_plant(5, 2, 2, rng);
  const GeneralizedPlant P = permute_states(G, {4, 2, 0, 1, 3});
  for (double w : {0.0, 1.0}) EXPECT_LT((G.G21().at_frequency(w) - P.G21().at_frequency(w)).norm(), 1e-12);
}

TEST(Plant, CheckRejectsNonBlockDiagonalB2) {
  const ConsensusNetwork net = generate_consensus_network(NetworkSpec::equal_blocks(8, 2), 1.0, 1.0);
  GeneralizedPlant G = net.plant;
  EXPECT_NO_THROW(G.check());
  G.B2(0, 1) = 1.0;
  EXPECT_THROW(G.check(), Error);
}
