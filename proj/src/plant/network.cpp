#include "hh2/network.hpp"

#include <numeric>
#include <queue>

#include "hh2/error.hpp"
#include "hh2/random.hpp"

namespace hh2 {

NetworkSpec NetworkSpec::equal_blocks(Index n_s, Index blocks) {
  require(blocks >= 1 && blocks <= n_s, ErrorKind::InvalidArgument, "need 1 <= blocks <= n_s");
  NetworkSpec spec;
  spec.n_s = n_s;
  spec.block_sizes.assign(blocks, n_s / blocks);
  for (Index i = 0; i < n_s % blocks; ++i) ++spec.block_sizes[i];
  return spec;
}

void NetworkSpec::validate() const {
  require(n_s >= 1, ErrorKind::InvalidArgument, "n_s must be positive");
  require(std::accumulate(block_sizes.begin(), block_sizes.end(), Index{0}) == n_s, ErrorKind::InvalidArgument,
          "block sizes must sum to n_s");
  for (Index s : block_sizes) require(s >= 1, ErrorKind::InvalidArgument, "blocks must be non-empty");
  require(p_in > 0.0 && p_in <= 1.0, ErrorKind::InvalidArgument, "p_in must lie in (0, 1]");
  require(p_out >= 0.0 && p_out < 1.0, ErrorKind::InvalidArgument, "p_out must lie in [0, 1)");
  require(p_out < p_in, ErrorKind::InvalidArgument, "p_out must be below p_in");
  require(a_lo >= 0.0 && a_lo <= a_hi, ErrorKind::InvalidArgument, "need 0 <= a_lo <= a_hi");
  require(lattice_degree >= 2 && lattice_degree % 2 == 0, ErrorKind::InvalidArgument,
          "lattice degree must be even and at least 2");
  require(inter_block_edges >= 0.0, ErrorKind::InvalidArgument, "inter_block_edges must be non-negative");
}

const char* to_string(Topology t) { return t == Topology::RingLattice ? "ring_lattice" : "sbm"; }

Topology topology_from_string(const std::string& name) {
  if (name == "sbm") return Topology::StochasticBlock;
  if (name == "ring_lattice") return Topology::RingLattice;
  fail(ErrorKind::InvalidArgument, "unknown topology '" + name + "'");
}

GeneralizedPlant consensus_plant(const Mat& laplacian, double c1_scale, double b1_scale) {
  const Index n = laplacian.rows();
  GeneralizedPlant G;
  G.A = -laplacian;
  G.B2 = Mat::Identity(n, n);
  G.C2 = Mat::Identity(n, n);
  G.C1 = Mat::Zero(2 * n, n);
  G.C1.topRows(n) = c1_scale * Mat::Identity(n, n);
  G.D12 = Mat::Zero(2 * n, n);
  G.D12.bottomRows(n) = Mat::Identity(n, n);
  G.B1 = Mat::Zero(n, 2 * n);
  G.B1.leftCols(n) = b1_scale * Mat::Identity(n, n);
  G.D21 = Mat::Zero(n, 2 * n);
  G.D21.rightCols(n) = Mat::Identity(n, n);
  G.subsystems = singleton_subsystems(n);
  return G;
}

namespace {

bool connected(const Mat& L, const std::vector<Index>& nodes) {
  if (nodes.size() <= 1) return true;
  std::vector<char> in(L.rows(), 0), seen(L.rows(), 0);
  for (Index v : nodes) in[v] = 1;
  std::queue<Index> q;
  q.push(nodes.front());
  seen[nodes.front()] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    const Index v = q.front();
    q.pop();
    for (Index u : nodes)
      if (!seen[u] && in[u] && L(v, u) != 0.0) {
        seen[u] = 1;
        ++count;
        q.push(u);
      }
  }
  return count == nodes.size();
}

}  // namespace

ConsensusNetwork generate_consensus_network(const NetworkSpec& spec, double c1_scale, double b1_scale) {
  spec.validate();
  const Index n = spec.n_s;
  ConsensusNetwork net;
  net.block_of.resize(n);
  std::vector<Index> start;
  {
    Index pos = 0;
    for (std::size_t b = 0; b < spec.block_sizes.size(); ++b) {
      start.push_back(pos);
      for (Index i = 0; i < spec.block_sizes[b]; ++i) net.block_of[pos++] = static_cast<int>(b);
    }
  }
  Rng rng(spec.seed);
  Mat W = Mat::Zero(n, n);
  auto connect = [&](Index i, Index j) {
    if (i == j || W(i, j) != 0.0) return;
    const double a = rng.uniform(spec.a_lo, spec.a_hi);
    W(i, j) = W(j, i) = a;
    ++net.edges;
  };

  if (spec.topology == Topology::StochasticBlock) {
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) {
        const double p = net.block_of[i] == net.block_of[j] ? spec.p_in : spec.p_out;
        if (rng.uniform() < p) connect(i, j);
      }
  } else {
    const Index half = spec.lattice_degree / 2;
    for (std::size_t b = 0; b < spec.block_sizes.size(); ++b) {
      const Index size = spec.block_sizes[b];
      for (Index i = 0; i < size; ++i)
        for (Index d = 1; d <= half && d < size; ++d) connect(start[b] + i, start[b] + (i + d) % size);
    }
    for (std::size_t a = 0; a < spec.block_sizes.size(); ++a)
      for (std::size_t b = a + 1; b < spec.block_sizes.size(); ++b) {
        const double pairs = static_cast<double>(spec.block_sizes[a] * spec.block_sizes[b]);
        const double p = std::min(1.0, spec.inter_block_edges / pairs);
        for (Index i = 0; i < spec.block_sizes[a]; ++i)
          for (Index j = 0; j < spec.block_sizes[b]; ++j)
            if (rng.uniform() < p) connect(start[a] + i, start[b] + j);
      }
  }

  net.laplacian = -W;
  net.laplacian.diagonal() = W.rowwise().sum();
  for (std::size_t b = 0; b < spec.block_sizes.size(); ++b) {
    std::vector<Index> nodes(spec.block_sizes[b]);
    std::iota(nodes.begin(), nodes.end(), start[b]);
    if (!connected(net.laplacian, nodes))
      net.warnings.push_back("DisconnectedIntraBlock: block " + std::to_string(b) + " is not connected");
  }
  net.plant = consensus_plant(net.laplacian, c1_scale, b1_scale);
  return net;
}

}  // namespace hh2
