#include <gtest/gtest.h>

#include "hh2/error.hpp"
#include "hh2/gapdesign.hpp"
#include "hh2/network.hpp"
#include "hh2/sweeps.hpp"
#include "support.hpp"

using namespace hh2;
using hh2::test::rel;

namespace {

ProjectionPair random_pair(Index nu, Index ny, Index r, Rng& rng) {
  const ClusterPartition p = test::partition_from(test::random_labels(nu, r, rng), test::random_labels(ny, r, rng));
  return build_projection(p, WeightVectors::ones(nu, ny));
}

}  // namespace

TEST(SpectralFactors, OptimalParameterAttainsUnconstrainedCost) {
  Rng rng(51);
  for (int trial = 0; trial < 5; ++trial) {
    const GeneralizedPlant G = test::random_plant(4, 2, 3, rng);
    // Youla data around a stabilizing but suboptimal pair.
    const SynthesisResult u = synthesize_unconstrained(G);
    const YoulaData yd = youla_data(G, 1.3 * u.F2, 1.2 * u.L2);
    const SpectralFactors sf = spectral_factors(yd);
    const double j = h2_norm(model_matching(yd, sf.Q_star));
    EXPECT_LT(rel(j, u.h2_value), 1e-7);
  }
}

TEST(SpectralFactors, BothFactorizationsOfOptimalParameterAgree) {
  Rng rng(52);
  for (int trial = 0; trial < 5; ++trial) {
    const GeneralizedPlant G = test::random_plant(4, 2, 3, rng);
    const SynthesisResult u = synthesize_unconstrained(G);
    const SpectralFactors sf = spectral_factors(youla_data(G, 1.1 * u.F2, 1.2 * u.L2));
    for (double w : {0.0, 0.5, 3.0, 40.0}) {
      const CMat a = sf.W_L.at_frequency(w) * sf.Wbar_R.at_frequency(w);
      const CMat b = sf.Wbar_L.at_frequency(w) * sf.W_R.at_frequency(w);
      EXPECT_LT((a - b).norm(), 1e-7 * std::max(1.0, a.norm())) << "w " << w;
    }
  }
}

TEST(Gap, SingletonsCloseTheGap) {
  Rng rng(53);
  const GeneralizedPlant G = test::random_plant(5, 3, 3, rng);
  const GapReport g = gap_report(G, build_projection(ClusterPartition::singletons(3), WeightVectors::ones(3, 3)));
  EXPECT_NEAR(g.xi_u, 0.0, 1e-10);
  EXPECT_NEAR(g.xi_y, 0.0, 1e-10);
  EXPECT_NEAR(g.ratio(), 1.0, 1e-6);
}

TEST(Gap, BoundHoldsOnRandomInstances) {
  Rng rng(54);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 3 + rng.below(6), nu = 2 + rng.below(3), ny = 2 + rng.below(3);
    const GeneralizedPlant G = test::random_plant(n, nu, ny, rng);
    const GapReport g = gap_report(G, random_pair(nu, ny, 1 + rng.below(2), rng));
    EXPECT_TRUE(g.bound_holds()) << g.J2_star << " vs " << g.bound_rhs;
    EXPECT_GE(g.J2_star, g.J1_star * (1 - 1e-9));
  }
}

TEST(Gap, SymmetricFormulaIsSelectable) {
  Rng rng(55);
  const GeneralizedPlant G = test::random_plant(4, 3, 3, rng);
  const ProjectionPair P = random_pair(3, 3, 2, rng);
  GapOptions o;
  o.xi_formula = XiFormula::Symmetric;
  const GapReport s = gap_report(G, P, o);
  EXPECT_NEAR(s.xi, s.eps1 * s.xi_u + s.eps2 * s.xi_y + std::min(s.eps1, s.eps2) * std::sqrt(s.xi_u * s.xi_y), 1e-12);
  const GapReport p = gap_report(G, P);
  EXPECT_NEAR(p.xi, p.eps1 * p.xi_u + 2.0 * p.eps2 * p.xi_y, 1e-12);
  EXPECT_EQ(xi_formula_from_string(to_string(XiFormula::Symmetric)), XiFormula::Symmetric);
}

TEST(DoublyProjected, DoublyProjectedDesignEqualsHierarchical) {
  Rng rng(56);
  for (int trial = 0; trial < 5; ++trial) {
    const GeneralizedPlant G = test::random_plant(5, 4, 4, rng);
    const ProjectionPair P = random_pair(4, 4, 2, rng);
    const StateSpace Kd = doubly_projected_controller(G, P);
    const StateSpace Kh = synthesize_hierarchical(G, P).controller.full();
    EXPECT_LT(max_response_error(Kd, Kh, log_grid(1e-2, 1e2, 20)), 1e-7);
  }
}

TEST(KMeans, SeparatedBlobs) {
  Rng rng(57);
  Mat pts(60, 2);
  for (Index i = 0; i < 60; ++i) {
    const double cx = (i % 3) * 10.0;
    pts(i, 0) = cx + 0.1 * rng.normal();
    pts(i, 1) = 0.1 * rng.normal();
  }
  const KMeansResult km = weighted_kmeans(pts, Vec::Ones(60), 3, rng);
  std::vector<int> truth(60);
  for (Index i = 0; i < 60; ++i) truth[i] = static_cast<int>(i % 3);
  EXPECT_TRUE(same_partition(km.labels, truth));
  for (std::size_t i = 1; i < km.history.size(); ++i) EXPECT_LE(km.history[i], km.history[i - 1] * (1 + 1e-12));
}

TEST(KMeans, DeterministicForSeed) {
  Rng data(58);
  const Mat pts = data.normal_matrix(40, 3);
  Rng a(1), b(1);
  const KMeansResult x = weighted_kmeans(pts, Vec::Ones(40), 4, a), y = weighted_kmeans(pts, Vec::Ones(40), 4, b);
  EXPECT_EQ(x.labels, y.labels);
  EXPECT_EQ(x.objective, y.objective);
}

TEST(KMeans, MassPullsCenters) {
  Mat pts(2, 1);
  pts << 0.0, 1.0;
  Vec mass(2);
  mass << 3.0, 1.0;
  Rng rng(1);
  const KMeansResult km = weighted_kmeans(pts, mass, 1, rng);
  EXPECT_NEAR(km.centers(0, 0), 0.25, 1e-14);
  EXPECT_NEAR(km.objective, 3 * 0.0625 + 0.5625, 1e-14);
}

TEST(KMeans, TooFewDistinctPoints) {
  Rng rng(1);
  try {
    weighted_kmeans(Mat::Ones(5, 2), Vec::Ones(5), 2, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateData);
  }
}

TEST(Design, RecoversPlantedBlocks) {
  const ConsensusNetwork net = generate_consensus_network(NetworkSpec{}, 10.0, 10.0);
  const SpectralFactors sf = canonical_factors(net.plant, Tolerances{});
  Rng rng(7);
  const ClusterPartition p = design_clusters(sf, WeightVectors::ones(100, 100), 4, rng);
  EXPECT_TRUE(same_partition(p.input_labels(100), net.block_of));
  EXPECT_TRUE(same_partition(p.output_labels(100), net.block_of));
  EXPECT_EQ(p.subsystems.size(), 4u);
}
