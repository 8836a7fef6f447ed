#include "hh2/synthesis.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "hh2/error.hpp"

namespace hh2 {

StateSpace HierarchicalController::full() const { return pre_multiply(Pu.transpose(), post_multiply(Kt, Py)); }

GeneralizedPlant projected_plant(const GeneralizedPlant& G, const ProjectionPair& P) {
  require(P.Pu.cols() == G.nu() && P.Py.cols() == G.ny(), ErrorKind::DimensionMismatch,
          "projection does not match the plant");
  GeneralizedPlant g;
  g.A = G.A;
  g.B1 = G.B1;
  g.B2 = G.B2 * P.Pu.transpose();
  g.C1 = G.C1;
  g.C2 = P.Py * G.C2;
  g.D12 = G.D12 * P.Pu.transpose();
  g.D21 = P.Py * G.D21;
  return g;
}

LinkCount communication_links(const ClusterPartition& partition, Index n_s) {
  const Index r = partition.r();
  return {n_s + r * (r - 1) / 2, n_s * (n_s - 1) / 2};
}

namespace {

Eigen::LLT<Mat> spd_factor(const Mat& R, const char* name, const Tolerances& tol) {
  Eigen::LLT<Mat> llt(0.5 * (R + R.transpose()));
  if (llt.info() != Eigen::Success) fail(ErrorKind::SingularR, std::string(name) + " is not positive definite");
  if (condition_number(R) > tol.r_condition)
    fail(ErrorKind::IllConditionedR, std::string(name) + " condition number exceeds the limit");
  return llt;
}

SymmetricMatrix approx_solve(const Mat& A, const Mat& Bt, const Mat& C, const Mat& R, const Mat& B1,
                             const std::vector<ModeGroup>& modes, const SynthesisOptions& o,
                             std::optional<ApproxAreSolution>& out) {
  HamiltonianSystem hs;
  if (o.method == ApproxMethod::Dense) {
    hs = build_hamiltonian(A, Bt, C, R);
    hs.B1 = B1;
  } else {
    hs = build_hamiltonian_structured(SpMat(A.sparseView()), Bt, SpMat(C.sparseView()), R);
  }
  ApproxOptions ao;
  ao.tol = o.tol;
  ao.imaginary_modes = &modes;
  out = approx_are(hs, o.kappa, o.method, ao);
  if (!out->accepted())
    fail(ErrorKind::ApproxNotStabilizing,
         "truncated Riccati solution with kappa = " + std::to_string(out->kappa) + " is not stabilizing");
  return out->Xbar;
}

}  // namespace

SynthesisResult synthesize_hierarchical(const GeneralizedPlant& G, const ProjectionPair& P,
                                        const SynthesisOptions& options) {
  G.check();
  const Tolerances& tol = options.tol;
  require(P.Pu.cols() == G.nu() && P.Py.cols() == G.ny(),
          ErrorKind::DimensionMismatch, "projection does not match the plant");
  auto progress = [&](const std::string& s) {
    if (options.progress) options.progress(s);
  };
  const Mat Bt = G.B2 * P.Pu.transpose();
  const Mat Ct = P.Py * G.C2;
  if (options.check_hypotheses) {
    progress("checking hypotheses");
    if (!is_stabilizable(G.A, Bt, tol)) fail(ErrorKind::HypothesisFailure, "(A, B2 Pu^T) is not stabilizable");
    if (!is_detectable(G.A, Ct, tol)) fail(ErrorKind::HypothesisFailure, "(Py C2, A) is not detectable");
  }

  SynthesisResult res;
  res.R1 = P.Pu * G.D12.transpose() * G.D12 * P.Pu.transpose();
  res.R2 = P.Py * G.D21 * G.D21.transpose() * P.Py.transpose();
  const auto R1f = spd_factor(res.R1, "R1", tol);
  const auto R2f = spd_factor(res.R2, "R2", tol);

  const Mat At = G.A.transpose();
  const Mat B1t = G.B1.transpose();
  if (options.backend == AreBackend::Exact) {
    progress("solving Riccati equations");
    const auto t0 = std::chrono::steady_clock::now();
    res.X = solve_are(G.A, Bt, G.C1, res.R1, tol).X;
    res.Y = solve_are(At, Ct.transpose(), B1t, res.R2, tol).X;
    res.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  } else {
    require(options.kappa >= 1 && options.kappa <= G.n(), ErrorKind::InvalidArgument, "kappa must lie in [1, n]");
    const double thr = tol.unstable_threshold;
    const auto modes_x = marginal_modes(G.A, thr * std::max(1.0, G.A.norm()), true);
    const auto modes_y = marginal_modes(At, thr * std::max(1.0, G.A.norm()), true);
    progress("solving truncated Riccati equations");
    const auto t0 = std::chrono::steady_clock::now();
    res.X = approx_solve(G.A, Bt, G.C1, res.R1, G.B1, modes_x, options, res.approx_x);
    res.Y = approx_solve(At, Ct.transpose(), B1t, res.R2, G.C1.transpose(), modes_y, options, res.approx_y);
    res.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  res.F2 = -R1f.solve(Bt.transpose() * res.X.matrix());
  res.L2 = -R2f.solve(Ct * res.Y.matrix()).transpose();
  res.controller.Pu = P.Pu;
  res.controller.Py = P.Py;
  res.controller.Kt = StateSpace(G.A + Bt * res.F2 + res.L2 * Ct, -res.L2, res.F2, Mat::Zero(P.Pu.rows(), P.Py.rows()));

  progress("closing the loop");
  res.closed_loop = lft_lower(G, res.controller.full());
  if (options.check_closed_loop && !is_hurwitz(res.closed_loop.A, tol.hurwitz_margin)) {
    if (options.backend == AreBackend::Approx)
      fail(ErrorKind::ApproxNotStabilizing, "closed loop with the truncated solutions is not Hurwitz");
    fail(ErrorKind::UnstableClosedLoop, "closed loop is not Hurwitz");
  }
  res.h2_value = std::numeric_limits<double>::quiet_NaN();
  if (options.compute_h2) {
    progress("evaluating the H2 norm");
    res.h2_value = h2_norm(res.closed_loop, tol);
  }
  return res;
}

SynthesisResult synthesize_unconstrained(const GeneralizedPlant& G, const SynthesisOptions& options) {
  ProjectionPair P{Mat::Identity(G.nu(), G.nu()), Mat::Identity(G.ny(), G.ny())};
  return synthesize_hierarchical(G, P, options);
}

}  // namespace hh2
