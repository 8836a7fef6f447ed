#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "hh2/error.hpp"
#include "hh2/gapdesign.hpp"
#include "hh2/kernels.hpp"

namespace hh2 {

namespace {

Index distinct_rows(const Mat& points) {
  std::vector<std::vector<double>> rows(points.rows());
  for (Index i = 0; i < points.rows(); ++i) {
    rows[i].resize(points.cols());
    for (Index j = 0; j < points.cols(); ++j) rows[i][j] = points(i, j);
  }
  std::sort(rows.begin(), rows.end());
  return std::unique(rows.begin(), rows.end()) - rows.begin();
}

Index draw(const Vec& weights, Rng& rng) {
  const double total = weights.sum();
  if (!(total > 0.0)) return static_cast<Index>(rng.below(weights.size()));
  double u = rng.uniform() * total;
  for (Index i = 0; i < weights.size(); ++i) {
    u -= weights(i);
    if (u < 0.0 && weights(i) > 0.0) return i;
  }
  for (Index i = weights.size() - 1; i >= 0; --i)
    if (weights(i) > 0.0) return i;
  return 0;
}

Mat seed_plus_plus(const Mat& X, const Vec& mass, Index r, Rng& rng) {
  Mat centers(r, X.cols());
  centers.row(0) = X.row(draw(mass, rng));
  Vec d2 = (X.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (Index c = 1; c < r; ++c) {
    centers.row(c) = X.row(draw(mass.cwiseProduct(d2), rng));
    d2 = d2.cwiseMin((X.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

KMeansResult lloyd(const Mat& X, const Vec& mass, Index r, Rng& rng, const KMeansOptions& opt) {
  KMeansResult res;
  res.centers = seed_plus_plus(X, mass, r, rng);
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opt.max_iterations; ++it) {
    res.objective = kernels::assign_nearest(X, mass, res.centers, res.labels);
    res.history.push_back(res.objective);
    res.iterations = it + 1;
    if (it > 0 && prev - res.objective <= opt.relative_tolerance * prev) break;
    prev = res.objective;

    Mat sums = Mat::Zero(r, X.cols());
    Vec w = Vec::Zero(r);
    for (Index i = 0; i < X.rows(); ++i) {
      sums.row(res.labels[i]) += mass(i) * X.row(i);
      w(res.labels[i]) += mass(i);
    }
    for (Index c = 0; c < r; ++c)
      if (w(c) > 0.0) res.centers.row(c) = sums.row(c) / w(c);
    // Empty cluster: move its center onto the worst point of the cluster
    // with the largest inertia.
    for (Index c = 0; c < r; ++c) {
      if (w(c) > 0.0) continue;
      Vec inertia = Vec::Zero(r);
      for (Index i = 0; i < X.rows(); ++i)
        inertia(res.labels[i]) += mass(i) * (X.row(i) - res.centers.row(res.labels[i])).squaredNorm();
      Index big;
      inertia.maxCoeff(&big);
      Index worst = -1;
      double far = -1.0;
      for (Index i = 0; i < X.rows(); ++i) {
        if (res.labels[i] != big) continue;
        const double d = (X.row(i) - res.centers.row(big)).squaredNorm();
        if (d > far) {
          far = d;
          worst = i;
        }
      }
      if (worst >= 0) {
        res.centers.row(c) = X.row(worst);
        res.labels[worst] = static_cast<int>(c);
        w(c) = mass(worst);
      }
    }
  }
  return res;
}

// Labels renumbered in order of first appearance.
std::vector<int> canonical(const std::vector<int>& labels) {
  std::map<int, int> map;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = map.emplace(labels[i], static_cast<int>(map.size())).first;
    out[i] = it->second;
  }
  return out;
}

std::vector<std::vector<Index>> sets_of(const std::vector<int>& labels, Index r) {
  std::vector<std::vector<Index>> sets(r);
  for (std::size_t i = 0; i < labels.size(); ++i) sets[labels[i]].push_back(static_cast<Index>(i));
  return sets;
}

}  // namespace

KMeansResult weighted_kmeans(const Mat& points, const Vec& mass, Index r, Rng& rng, const KMeansOptions& options) {
  require(mass.size() == points.rows(), ErrorKind::DimensionMismatch, "one mass per point");
  require(r >= 1 && options.restarts >= 1, ErrorKind::InvalidArgument, "need r >= 1 and at least one start");
  require(points.allFinite() && mass.allFinite(), ErrorKind::InvalidArgument, "k-means data must be finite");
  if (distinct_rows(points) < r)
    fail(ErrorKind::DegenerateData, "fewer than " + std::to_string(r) + " distinct points");

  std::vector<Rng> streams;
  for (int s = 0; s < options.restarts; ++s) streams.push_back(rng.split());
  std::vector<KMeansResult> runs(options.restarts);
#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < options.restarts; ++s) runs[s] = lloyd(points, mass, r, streams[s], options);
  std::size_t best = 0;
  for (std::size_t s = 1; s < runs.size(); ++s)
    if (runs[s].objective < runs[best].objective) best = s;
  std::vector<char> used(r, 0);
  for (int l : runs[best].labels) used[l] = 1;
  if (std::count(used.begin(), used.end(), 1) < r) fail(ErrorKind::DegenerateData, "k-means left a cluster empty");
  return runs[best];
}

Mat input_cluster_data(const SpectralFactors& sf, const Tolerances& tol) {
  const Index n2 = sf.W_L.states();
  const SymmetricMatrix Phi = solve_lyapunov(sf.W_L.A, Mat::Identity(n2, n2), tol);
  return sf.Fhat * sqrt_psd(Phi, tol);
}

Mat output_cluster_data(const SpectralFactors& sf, const Tolerances& tol) {
  const Index n2 = sf.W_R.states();
  const SymmetricMatrix Phi = solve_lyapunov(sf.W_R.A.transpose(), Mat::Identity(n2, n2), tol);
  return sf.Lhat.transpose() * sqrt_psd(Phi, tol);
}

ClusterPartition design_clusters(const SpectralFactors& sf, const WeightVectors& weights, Index r, Rng& rng,
                                 const KMeansOptions& options, const Tolerances& tol) {
  const Mat U = input_cluster_data(sf, tol);
  const Mat Y = output_cluster_data(sf, tol);
  require(weights.w_u.size() == U.rows() && weights.w_y.size() == Y.rows(), ErrorKind::DimensionMismatch,
          "weights do not match the factors");
  require(r >= 1 && r <= std::min(U.rows(), Y.rows()), ErrorKind::InvalidArgument, "need 1 <= r <= min(nu, ny)");
  const std::vector<int> lu = canonical(weighted_kmeans(U, weights.w_u.cwiseAbs2(), r, rng, options).labels);
  std::vector<int> ly = canonical(weighted_kmeans(Y, weights.w_y.cwiseAbs2(), r, rng, options).labels);

  // Pair output clusters with input clusters by largest index overlap.
  if (lu.size() == ly.size()) {
    Mat overlap = Mat::Zero(r, r);
    for (std::size_t i = 0; i < lu.size(); ++i) overlap(lu[i], ly[i]) += 1.0;
    std::vector<int> map(r, -1);
    for (Index k = 0; k < r; ++k) {
      Index bi, bj;
      overlap.maxCoeff(&bi, &bj);
      map[bj] = static_cast<int>(bi);
      overlap.row(bi).setConstant(-1.0);
      overlap.col(bj).setConstant(-1.0);
    }
    for (int& l : ly) l = map[l];
  }
  ClusterPartition p;
  p.inputs = sets_of(lu, r);
  p.outputs = sets_of(ly, r);
  if (lu == ly) p.subsystems = p.inputs;
  return p;
}

std::vector<GapSweepRow> monotone_gap_sweep(const GeneralizedPlant& G, const SpectralFactors& sf,
                                            const WeightVectors& weights, const std::vector<Index>& r_list,
                                            Rng& rng, const KMeansOptions& kmeans, const GapOptions& options) {
  require(std::is_sorted(r_list.begin(), r_list.end()), ErrorKind::InvalidArgument, "r list must be ascending");
  SynthesisOptions so;
  so.tol = options.tol;
  const SynthesisResult unc = synthesize_unconstrained(G, so);
  std::vector<GapSweepRow> rows;
  for (Index r : r_list) {
    GapSweepRow row;
    row.r = r;
    row.partition = design_clusters(sf, weights, r, rng, kmeans, options.tol);
    row.report = gap_report(G, build_projection(row.partition, weights), options, &unc);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace hh2
