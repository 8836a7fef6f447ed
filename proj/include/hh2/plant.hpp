#pragma once

#include <string>
#include <vector>

#include "hh2/state_space.hpp"
#include "hh2/tolerances.hpp"

namespace hh2 {

struct IndexRange {
  Index begin = 0;
  Index size = 0;
  Index end() const { return begin + size; }
};

struct Subsystem {
  IndexRange states, inputs, outputs;
};

// Four-block plant with D11 = 0 and D22 = 0:
//   dx = A x + B1 w + B2 u,  z = C1 x + D12 u,  y = C2 x + D21 w.
struct GeneralizedPlant {
  Mat A, B1, B2, C1, C2, D12, D21;
  std::vector<Subsystem> subsystems;  // empty means a single subsystem

  Index n() const { return A.rows(); }
  Index m1() const { return B1.cols(); }
  Index nu() const { return B2.cols(); }
  Index p1() const { return C1.rows(); }
  Index ny() const { return C2.rows(); }
  Index ns() const { return subsystems.empty() ? 1 : static_cast<Index>(subsystems.size()); }

  // Dimensions, finiteness, subsystem ranges and block-diagonal B2, C2.
  void check() const;

  StateSpace G11() const;
  StateSpace G12() const;
  StateSpace G21() const;
  StateSpace G22() const;
};

// One scalar state, input and output per subsystem.
std::vector<Subsystem> singleton_subsystems(Index count);

// f(G, K) = G11 + G12 K (I - G22 K)^{-1} G21 with state [x; x_K].
StateSpace lft_lower(const GeneralizedPlant& G, const StateSpace& K);

struct AssumptionReport {
  bool a1 = false;  // (A, B2) stabilizable and (C2, A) detectable
  bool a2 = false;  // D21 D21^T > 0 and D12^T D12 > 0
  bool a3 = false;  // no imaginary-axis modes lost by (A, B1) or (C1, A)
  bool a4 = false;  // D12^T C1 = 0 and B1 D21^T = 0
  std::vector<std::string> notes;

  bool all() const { return a1 && a2 && a3 && a4; }
};

AssumptionReport validate_assumptions(const GeneralizedPlant& G, const Tolerances& tol = {});

// x -> x[perm]; state i of the result is state perm[i] of G.
GeneralizedPlant permute_states(const GeneralizedPlant& G, const std::vector<Index>& perm);

}  // namespace hh2
