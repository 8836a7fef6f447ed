#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hh2/linalg.hpp"
#include "hh2/projection.hpp"
#include "hh2/random.hpp"
#include "hh2/synthesis.hpp"

namespace hh2 {

// Factors of the optimal Youla parameter for the model-matching problem
// min |T11 + T12 Q T21|_H2.
struct SpectralFactors {
  StateSpace W_L, Wbar_L, W_R, Wbar_R;
  Mat Fhat, Lhat;  // nu x 2n, 2n x ny
  SymmetricMatrix Xhat, Yhat;
  StateSpace Q_star;
};

// The hat-Riccati equations carry the cross terms C1hat^T D12 and
// B1hat D21^T, which do not vanish even when D12^T C1 = 0 and B1 D21^T = 0.
SpectralFactors spectral_factors(const YoulaData& yd, const Tolerances& tol = {});

enum class XiFormula {
  Printed,    // eps1 xi_u + 2 eps2 xi_y
  Symmetric,  // eps1 xi_u + eps2 xi_y + min(eps1, eps2) sqrt(xi_u xi_y), experimental
};

const char* to_string(XiFormula f);
XiFormula xi_formula_from_string(const std::string& name);

struct GapReport {
  double J1_star = 0.0, J2_star = 0.0;
  double xi_u = 0.0, xi_y = 0.0, xi = 0.0;
  double eps1 = 0.0, eps2 = 0.0;
  double bound_rhs = 0.0;  // sqrt(J1^2 + 2 xi J1 + xi^2)
  SymmetricMatrix Phi_u, Phi_y;
  std::optional<double> doubly_projected_error;  // relative frequency-response mismatch

  double ratio() const { return J2_star / J1_star; }
  bool bound_holds(double slack = 1e-6) const {
    return J2_star * J2_star <= J1_star * J1_star + 2.0 * xi * J1_star + xi * xi + slack;
  }
};

struct GapOptions {
  XiFormula xi_formula = XiFormula::Printed;
  bool doubly_projected_check = false;
  Tolerances tol{};
};

// xi terms from a set of factors and a projection pair.
void xi_terms(const YoulaData& yd, const SpectralFactors& sf, const ProjectionPair& P, GapReport& report,
              const Tolerances& tol = {});

// J1* from the unconstrained design (pass it to reuse a previous solve), J2*
// from the hierarchical design on P, and the xi terms from the Youla data of
// the hierarchical gains F = Pu^T F2, L = L2 Py.
GapReport gap_report(const GeneralizedPlant& G, const ProjectionPair& P, const GapOptions& options = {},
                     const SynthesisResult* unconstrained = nullptr);

// Controller of the unconstrained design for the doubly projected plant
// (A, B1, B2 Pu^T Pu, C1, Py^T Py C2, D12 Pu^T Pu, Py^T Py D21), using
// pseudo-inverses of the rank-deficient weights.
StateSpace doubly_projected_controller(const GeneralizedPlant& G, const ProjectionPair& P, const Tolerances& tol = {});

struct KMeansOptions {
  int restarts = 10;
  int max_iterations = 300;
  double relative_tolerance = 1e-9;
};

struct KMeansResult {
  std::vector<int> labels;
  Mat centers;                     // r x d
  double objective = 0.0;          // weighted within-cluster sum of squares
  std::vector<double> history;     // objective per Lloyd iteration of the kept start
  int iterations = 0;
};

// Weighted Lloyd iteration on the rows of `points` with k-means++ seeding.
KMeansResult weighted_kmeans(const Mat& points, const Vec& mass, Index r, Rng& rng, const KMeansOptions& options = {});

// Rows of Fhat Phi_u^{1/2} (inputs) and Lhat^T Phi_y^{1/2} (outputs).
Mat input_cluster_data(const SpectralFactors& sf, const Tolerances& tol = {});
Mat output_cluster_data(const SpectralFactors& sf, const Tolerances& tol = {});

// Inputs and outputs are clustered separately, point masses w^2. Output
// clusters are relabeled to best overlap the input clusters; the subsystem
// sets are filled when both coincide.
ClusterPartition design_clusters(const SpectralFactors& sf, const WeightVectors& weights, Index r, Rng& rng,
                                 const KMeansOptions& options = {}, const Tolerances& tol = {});

struct GapSweepRow {
  Index r = 0;
  ClusterPartition partition;
  GapReport report;
};

// design_clusters followed by gap_report for each r.
std::vector<GapSweepRow> monotone_gap_sweep(const GeneralizedPlant& G, const SpectralFactors& sf,
                                            const WeightVectors& weights, const std::vector<Index>& r_list,
                                            Rng& rng, const KMeansOptions& kmeans = {},
                                            const GapOptions& options = {});

}  // namespace hh2
