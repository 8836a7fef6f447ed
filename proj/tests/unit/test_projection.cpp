#include <gtest/gtest.h>

#include "hh2/error.hpp"
#include "hh2/projection.hpp"
#include "hh2/synthesis.hpp"
#include "support.hpp"

using namespace hh2;

namespace {

// Four subsystems on a line, inputs on the first three, clusters {1,2},{3,4}.
ProjectionPair example_pair() {
  ClusterPartition p;
  p.inputs = {{0, 1}, {2}};
  p.outputs = {{0, 1}, {2, 3}};
  return build_projection(p, WeightVectors::ones(3, 4));
}

}  // namespace

TEST(Projection, ExampleMatrices) {
  const ProjectionPair P = example_pair();
  const double h = 1.0 / std::sqrt(2.0);
  Mat Pu(2, 3), Py(2, 4);
  Pu << h, h, 0, 0, 0, 1;
  Py << h, h, 0, 0, 0, 0, h, h;
  EXPECT_LT((P.Pu - Pu).norm(), 1e-15);
  EXPECT_LT((P.Py - Py).norm(), 1e-15);
}

TEST(Projection, RowsAreOrthonormal) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Index nu = 3 + rng.below(8), ny = 3 + rng.below(8), r = 1 + rng.below(3);
    const ClusterPartition p = test::partition_from(test::random_labels(nu, r, rng), test::random_labels(ny, r, rng));
    WeightVectors w{Vec(nu), Vec(ny)};
    for (Index j = 0; j < nu; ++j) w.w_u(j) = rng.uniform(0.1, 1.0);
    for (Index j = 0; j < ny; ++j) w.w_y(j) = rng.uniform(0.1, 1.0);
    const ProjectionPair P = build_projection(p, w);
    EXPECT_LT((P.Pu * P.Pu.transpose() - Mat::Identity(r, r)).norm(), 1e-13);
    EXPECT_LT((P.Py * P.Py.transpose() - Mat::Identity(r, r)).norm(), 1e-13);
    // Each row is supported on its own cluster.
    for (Index c = 0; c < r; ++c)
      for (Index j = 0; j < nu; ++j)
        if (std::find(p.inputs[c].begin(), p.inputs[c].end(), j) == p.inputs[c].end()) EXPECT_EQ(P.Pu(c, j), 0.0);
  }
}

TEST(Projection, SingletonsGiveIdentity) {
  const ProjectionPair P = build_projection(ClusterPartition::singletons(5), WeightVectors::ones(5, 5));
  EXPECT_EQ(P.Pu, Mat::Identity(5, 5));
  EXPECT_EQ(P.Py, Mat::Identity(5, 5));
}

TEST(Projection, ZeroClusterWeightIsRejected) {
  ClusterPartition p;
  p.inputs = {{0, 1}, {2}};
  p.outputs = {{0, 1}, {2}};
  WeightVectors w = WeightVectors::ones(3, 3);
  w.w_u(2) = 0.0;
  try {
    build_projection(p, w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroClusterWeight);
  }
}

TEST(Projection, OverlappingClustersAreRejected) {
  ClusterPartition p;
  p.inputs = {{0, 1}, {1, 2}};
  p.outputs = {{0}, {1}};
  EXPECT_THROW(build_projection(p, WeightVectors::ones(3, 2)), Error);
}

TEST(Membership, ExamplePatternRecoversGain) {
  const ProjectionPair P = example_pair();
  const double s1 = 1.3, s2 = -0.7, s3 = 2.1, s4 = 0.4, a = 0.5, b = 1.0 / std::sqrt(2.0);
  // The pattern as an n_u x n_y gain: inputs index rows, outputs index columns.
  Mat displayed(4, 3);
  displayed << s1 * a, s1 * a, s2 * b, s1 * a, s1 * a, s2 * b, s3 * a, s3 * a, s4 * b, s3 * a, s3 * a, s4 * b;
  const Membership m = subspace_member(StateSpace::static_gain(displayed.transpose()), P);
  ASSERT_TRUE(m.member);
  ASSERT_TRUE(m.reduced.has_value());
  Mat expected(2, 2);
  expected << s1, s3, s2, s4;
  EXPECT_LT((m.reduced->D - expected).norm(), 1e-14);
}

TEST(Membership, ProjectedGainIsRecovered) {
  Rng rng(2);
  const ProjectionPair P = example_pair();
  const StateSpace Kt = random_stable_system(3, 2, 2, rng, true);
  const StateSpace K = pre_multiply(P.Pu.transpose(), post_multiply(Kt, P.Py));
  const Membership m = subspace_member(K, P);
  ASSERT_TRUE(m.member);
  EXPECT_LT(max_response_error(*m.reduced, Kt, log_grid(1e-2, 1e2, 20)), 1e-12);
}

TEST(Membership, DenseGainIsNotMember) {
  Rng rng(3);
  const ProjectionPair P = example_pair();
  const Membership m = subspace_member(StateSpace::static_gain(rng.normal_matrix(3, 4)), P);
  EXPECT_FALSE(m.member);
  EXPECT_GT(m.residual, 1e-3);
}

TEST(Qi, HoldsForRandomPlants) {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const GeneralizedPlant G = test::random_plant(4, 4, 5, rng);
    const ClusterPartition p = test::partition_from(test::random_labels(4, 2, rng), test::random_labels(5, 2, rng));
    EXPECT_TRUE(verify_qi(G.G22(), build_projection(p, WeightVectors::ones(4, 5)), 3, rng));
  }
}

TEST(Qi, QuadraticProductMatchesFrequencyProduct) {
  Rng rng(5);
  const StateSpace K = random_stable_system(2, 3, 2, rng, true), G22 = random_stable_system(3, 2, 3, rng, true);
  const double w = 0.8;
  const CMat k = K.at_frequency(w);
  EXPECT_LT((quadratic_product(K, G22).at_frequency(w) - k * G22.at_frequency(w) * k).norm(), 1e-12);
}

TEST(Links, CountFormula) {
  ClusterPartition p;
  p.inputs = {{0, 1}, {2, 3}};
  p.outputs = p.inputs;
  EXPECT_EQ(communication_links(p, 4).hierarchical, 5);
  EXPECT_EQ(communication_links(p, 4).dense, 6);
  ClusterPartition one;
  one.inputs = {{0, 1, 2}};
  one.outputs = one.inputs;
  EXPECT_EQ(communication_links(one, 3).hierarchical, 3);
  Rng rng(1);
  const ClusterPartition big = ClusterPartition::from_labels(test::random_labels(500, 4, rng));
  EXPECT_EQ(communication_links(big, 500).hierarchical, 506);
  EXPECT_EQ(communication_links(big, 500).dense, 124750);
}

TEST(Partition, SamePartitionIgnoresLabels) {
  EXPECT_TRUE(same_partition({0, 0, 1, 2}, {2, 2, 0, 1}));
  EXPECT_FALSE(same_partition({0, 0, 1, 2}, {0, 1, 1, 2}));
}

TEST(Weights, FeasibleWeightsStabilizeAggregate) {
  Rng rng(6);
  const GeneralizedPlant G = test::random_plant(5, 5, 5, rng, -0.5);
  const ClusterPartition p = test::partition_from({0, 0, 1, 1, 1}, {0, 0, 1, 1, 1});
  const FeasibleWeights fw = feasible_weights(G, p, 50, rng);
  const ProjectionPair P = build_projection(p, fw.weights);
  EXPECT_TRUE(is_stabilizable(G.A, G.B2 * P.Pu.transpose()));
  EXPECT_TRUE(is_detectable(G.A, P.Py * G.C2));
}
