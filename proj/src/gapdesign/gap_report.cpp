#include <algorithm>
#include <cmath>

#include "hh2/error.hpp"
#include "hh2/gapdesign.hpp"

namespace hh2 {

const char* to_string(XiFormula f) { return f == XiFormula::Symmetric ? "symmetric" : "printed"; }

XiFormula xi_formula_from_string(const std::string& name) {
  if (name == "printed") return XiFormula::Printed;
  if (name == "symmetric") return XiFormula::Symmetric;
  fail(ErrorKind::InvalidArgument, "unknown xi formula '" + name + "'");
}

void xi_terms(const YoulaData& yd, const SpectralFactors& sf, const ProjectionPair& P, GapReport& report,
              const Tolerances& tol) {
  const Index n2 = yd.Ahat.rows();
  const Mat I = Mat::Identity(n2, n2);
  report.Phi_u = solve_lyapunov(yd.Ahat + yd.B2hat * sf.Fhat, I, tol);
  report.Phi_y = solve_lyapunov((yd.Ahat + sf.Lhat * yd.C2hat).transpose(), I, tol);
  const Mat Nu = Mat::Identity(P.Pu.cols(), P.Pu.cols()) - P.Pu.transpose() * P.Pu;
  const Mat Ny = Mat::Identity(P.Py.cols(), P.Py.cols()) - P.Py.transpose() * P.Py;
  report.xi_u = (Nu * sf.Fhat * sqrt_psd(report.Phi_u, tol)).norm();
  report.xi_y = (Ny * sf.Lhat.transpose() * sqrt_psd(report.Phi_y, tol)).norm();
  const double t = hinf_norm(yd.T12(), tol) * hinf_norm(yd.T21(), tol);
  report.eps1 = t * hinf_norm(sf.Wbar_R, tol);
  report.eps2 = t * hinf_norm(sf.Wbar_L, tol);
}

namespace {

double combine_xi(const GapReport& r, XiFormula f) {
  if (f == XiFormula::Symmetric)
    return r.eps1 * r.xi_u + r.eps2 * r.xi_y + std::min(r.eps1, r.eps2) * std::sqrt(r.xi_u * r.xi_y);
  return r.eps1 * r.xi_u + 2.0 * r.eps2 * r.xi_y;
}

}  // namespace

GapReport gap_report(const GeneralizedPlant& G, const ProjectionPair& P, const GapOptions& options,
                     const SynthesisResult* unconstrained) {
  SynthesisOptions so;
  so.tol = options.tol;
  std::optional<SynthesisResult> own;
  if (!unconstrained) {
    own = synthesize_unconstrained(G, so);
    unconstrained = &*own;
  }
  const SynthesisResult hier = synthesize_hierarchical(G, P, so);

  GapReport rep;
  rep.J1_star = unconstrained->h2_value;
  rep.J2_star = hier.h2_value;
  const YoulaData yd = youla_data(G, P.Pu.transpose() * hier.F2, hier.L2 * P.Py, options.tol);
  const SpectralFactors sf = spectral_factors(yd, options.tol);
  xi_terms(yd, sf, P, rep, options.tol);
  rep.xi = combine_xi(rep, options.xi_formula);
  rep.bound_rhs = std::sqrt(rep.J1_star * rep.J1_star + 2.0 * rep.xi * rep.J1_star + rep.xi * rep.xi);

  if (options.doubly_projected_check) {
    const StateSpace Kd = doubly_projected_controller(G, P, options.tol);
    rep.doubly_projected_error = max_response_error(Kd, hier.controller.full(), log_grid(1e-3, 1e3, 20), 1e-12);
  }
  return rep;
}

StateSpace doubly_projected_controller(const GeneralizedPlant& G, const ProjectionPair& P, const Tolerances& tol) {
  const Mat Pu2 = P.Pu.transpose() * P.Pu;
  const Mat Py2 = P.Py.transpose() * P.Py;
  const Mat B2 = G.B2 * Pu2;
  const Mat C2 = Py2 * G.C2;
  const Mat D12 = G.D12 * Pu2;
  const Mat D21 = Py2 * G.D21;
  const Mat R1 = D12.transpose() * D12;
  const Mat R2 = D21 * D21.transpose();
  const Mat R1p = Eigen::CompleteOrthogonalDecomposition<Mat>(R1).pseudoInverse();
  const Mat R2p = Eigen::CompleteOrthogonalDecomposition<Mat>(R2).pseudoInverse();
  const Mat M = B2 * R1p * B2.transpose();
  const Mat N = C2.transpose() * R2p * C2;
  const Mat X = solve_are_m(G.A, 0.5 * (M + M.transpose()), G.C1.transpose() * G.C1, tol).X;
  const Mat Y = solve_are_m(G.A.transpose(), 0.5 * (N + N.transpose()), G.B1 * G.B1.transpose(), tol).X;
  const Mat F = -R1p * B2.transpose() * X;
  const Mat L = -Y * C2.transpose() * R2p;
  return StateSpace(G.A + B2 * F + L * C2, -L, F, Mat::Zero(G.nu(), G.ny()));
}

}  // namespace hh2
