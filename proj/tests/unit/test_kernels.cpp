#include <gtest/gtest.h>

#include "hh2/kernels.hpp"
#include "support.hpp"

using namespace hh2;

TEST(Kernels, FrequencyResponsesMatchSerial) {
  Rng rng(71);
  const StateSpace g = random_stable_system(12, 3, 4, rng, true);
  const std::vector<double> w = log_grid(1e-3, 1e3, 64);
  const auto par = kernels::frequency_responses(g, w), ser = kernels::frequency_responses_serial(g, w);
  ASSERT_EQ(par.size(), ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    EXPECT_EQ(par[i], ser[i]);
    EXPECT_LT((par[i] - g.at_frequency(w[i])).norm(), 1e-12 * std::max(1.0, par[i].norm()));
  }
}

TEST(Kernels, AssignNearestMatchesSerial) {
  Rng rng(72);
  const Mat pts = rng.normal_matrix(500, 3), centers = rng.normal_matrix(5, 3);
  Vec mass(500);
  for (Index i = 0; i < 500; ++i) mass(i) = rng.uniform(0.5, 2.0);
  std::vector<int> a, b;
  const double oa = kernels::assign_nearest(pts, mass, centers, a);
  const double ob = kernels::assign_nearest_serial(pts, mass, centers, b);
  EXPECT_EQ(a, b);
  EXPECT_EQ(oa, ob);
  for (Index i = 0; i < 500; ++i)
    for (Index c = 0; c < 5; ++c)
      EXPECT_LE((pts.row(i) - centers.row(a[i])).squaredNorm(), (pts.row(i) - centers.row(c)).squaredNorm());
}

TEST(Kernels, CauchyBlocksSolveSylvester) {
  Rng rng(73);
  Mat L = Mat::Zero(5, 5);
  L(0, 0) = -1.0;
  L.block(1, 1, 2, 2) << -0.5, 2.0, -2.0, -0.5;
  L(3, 3) = -3.0;
  L(4, 4) = -0.1;
  const Mat R = rng.normal_matrix(5, 5);
  const Mat G = R * R.transpose();
  const Mat C = kernels::cauchy_blocks(L, G);
  EXPECT_LT((L * C + C * L.transpose() + G).norm(), 1e-12 * G.norm());
  EXPECT_EQ(C, kernels::cauchy_blocks_serial(L, G));
}

TEST(Kernels, ThreadCountIsAdjustable) {
  const int before = kernels::max_threads();
  kernels::set_threads(1);
  EXPECT_EQ(kernels::max_threads(), 1);
  kernels::set_threads(before);
}
