#pragma once

#include <functional>
#include <optional>
#include <string>

#include "hh2/hamiltonian.hpp"
#include "hh2/linalg.hpp"
#include "hh2/plant.hpp"
#include "hh2/projection.hpp"

namespace hh2 {

// K = Pu^T K~ Py.
struct HierarchicalController {
  Mat Pu, Py;
  StateSpace Kt;

  StateSpace full() const;
};

// Youla data for a stabilizing pair (F, L). T has inputs [w; q_in] and
// outputs [z; q_out]; T22 is identically zero.
struct YoulaData {
  Mat F, L;
  StateSpace K_nom;  // inputs [y; q_out], outputs [u; q_in]
  StateSpace T;
  Mat Ahat, B1hat, B2hat, C1hat, C2hat;
  Mat D12, D21;

  StateSpace T11() const;
  StateSpace T12() const;
  StateSpace T21() const;
  StateSpace T22() const;
};

YoulaData youla_data(const GeneralizedPlant& G, const Mat& F, const Mat& L, const Tolerances& tol = {});

// f(K_nom, Q): the controller parameterized by Q (n_u x n_y).
StateSpace youla_controller(const YoulaData& yd, const StateSpace& Q);

// T11 + T12 Q T21.
StateSpace model_matching(const YoulaData& yd, const StateSpace& Q);

enum class AreBackend { Exact, Approx };

struct SynthesisOptions {
  AreBackend backend = AreBackend::Exact;
  Index kappa = 0;                  // approx backend only
  ApproxMethod method = ApproxMethod::Dense;
  bool compute_h2 = true;
  bool check_closed_loop = true;    // dense eigencheck of the closed loop
  bool check_hypotheses = true;     // PBH on (A, B2 Pu^T), (Py C2, A)
  Tolerances tol{};
  std::function<void(const std::string&)> progress;
};

struct SynthesisResult {
  HierarchicalController controller;
  SymmetricMatrix X, Y;
  Mat F2, L2, R1, R2;
  StateSpace closed_loop;
  double h2_value = 0.0;  // NaN when not computed
  double solve_time = 0.0;  // seconds spent in the two Riccati solves
  std::optional<ApproxAreSolution> approx_x, approx_y;
};

SynthesisResult synthesize_hierarchical(const GeneralizedPlant& G, const ProjectionPair& P,
                                        const SynthesisOptions& options = {});

SynthesisResult synthesize_unconstrained(const GeneralizedPlant& G, const SynthesisOptions& options = {});

// The plant seen by the reduced design: (A, B1, B2 Pu^T, C1, Py C2, D12 Pu^T, Py D21).
GeneralizedPlant projected_plant(const GeneralizedPlant& G, const ProjectionPair& P);

struct LinkCount {
  Index hierarchical = 0;  // n_s + r (r - 1) / 2
  Index dense = 0;         // n_s (n_s - 1) / 2
};

LinkCount communication_links(const ClusterPartition& partition, Index n_s);

}  // namespace hh2
