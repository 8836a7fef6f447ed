#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hh2/plant.hpp"

namespace hh2 {

enum class Topology {
  StochasticBlock,  // edge (i, j) with probability p_in inside a block, p_out across
  RingLattice,      // ring of degree `lattice_degree` inside each block, sparse links across
};

struct NetworkSpec {
  Index n_s = 100;
  std::vector<Index> block_sizes{25, 25, 25, 25};
  double p_in = 0.5;
  double p_out = 0.01;
  double a_lo = 5.0;
  double a_hi = 10.0;
  std::uint64_t seed = 7;
  Topology topology = Topology::StochasticBlock;
  Index lattice_degree = 4;
  // Ring lattice only: expected number of edges between each pair of blocks.
  double inter_block_edges = 2.0;

  // Splits n_s nodes into `blocks` nearly equal consecutive blocks.
  static NetworkSpec equal_blocks(Index n_s, Index blocks);
  void validate() const;
};

struct ConsensusNetwork {
  GeneralizedPlant plant;
  Mat laplacian;
  std::vector<int> block_of;  // planted block label per node
  Index edges = 0;
  std::vector<std::string> warnings;
};

// A = -L for a random weighted graph; B2 = C2 = I. The performance channels
// are stacked so that D12^T C1 = 0 and B1 D21^T = 0 hold exactly:
//   C1 = [c I; 0], D12 = [0; I], B1 = [b I, 0], D21 = [0, I].
ConsensusNetwork generate_consensus_network(const NetworkSpec& spec, double c1_scale, double b1_scale);

// Same construction from a given weighted Laplacian.
GeneralizedPlant consensus_plant(const Mat& laplacian, double c1_scale, double b1_scale);

const char* to_string(Topology t);
Topology topology_from_string(const std::string& name);

}  // namespace hh2
