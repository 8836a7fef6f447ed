#pragma once

#include <optional>
#include <vector>

#include "hh2/plant.hpp"
#include "hh2/random.hpp"
#include "hh2/tolerances.hpp"

namespace hh2 {

// Index sets are 0-based.
struct ClusterPartition {
  std::vector<std::vector<Index>> inputs, outputs, subsystems;

  Index r() const { return static_cast<Index>(inputs.size()); }
  // ns = 0 skips the subsystem check.
  void validate(Index nu, Index ny, Index ns) const;

  // Cluster of every index, -1 when absent.
  std::vector<int> input_labels(Index nu) const;
  std::vector<int> output_labels(Index ny) const;

  // One input and one output per subsystem, subsystem i in cluster labels[i].
  static ClusterPartition from_labels(const std::vector<int>& labels);
  static ClusterPartition singletons(Index count);
};

// True if two label vectors describe the same partition up to relabeling.
bool same_partition(const std::vector<int>& a, const std::vector<int>& b);

struct WeightVectors {
  Vec w_u, w_y;

  static WeightVectors ones(Index nu, Index ny);
};

struct ProjectionPair {
  Mat Pu, Py;  // r x nu, r x ny

  Index r() const { return Pu.rows(); }
};

ProjectionPair build_projection(const ClusterPartition& partition, const WeightVectors& weights);

struct Membership {
  bool member = false;
  double residual = 0.0;  // worst relative residual over the test frequencies
  std::optional<StateSpace> reduced;  // K~ with Pu^T K~ Py = K
};

// Tests K = Pu^T K~ Py at log-spaced frequencies and at infinity.
Membership subspace_member(const StateSpace& K, const ProjectionPair& P, const Tolerances& tol = {});

// Draws `samples` random K = Pu^T K~ Py and checks K G22 K stays in the subspace.
bool verify_qi(const StateSpace& G22, const ProjectionPair& P, int samples, Rng& rng, const Tolerances& tol = {});

// K G22 K as a realization (used by verify_qi).
StateSpace quadratic_product(const StateSpace& K, const StateSpace& G22);

// Random stable realization with the given dimensions.
StateSpace random_stable_system(Index states, Index inputs, Index outputs, Rng& rng, bool proper = true);

struct FeasibleWeights {
  WeightVectors weights;
  int tries = 0;
  // Set when the aggregate nonzero-product test passed for some draw whose
  // direct PBH check then failed.
  bool aggregate_passed_pbh_failed = false;
};

FeasibleWeights feasible_weights(const GeneralizedPlant& G, const ClusterPartition& partition, int max_tries,
                                 Rng& rng, const Tolerances& tol = {});

}  // namespace hh2
