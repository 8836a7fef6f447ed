#include "hh2/error.hpp"
#include "hh2/synthesis.hpp"

namespace hh2 {

StateSpace YoulaData::T11() const { return StateSpace(Ahat, B1hat, C1hat, Mat::Zero(C1hat.rows(), B1hat.cols())); }
StateSpace YoulaData::T12() const { return StateSpace(Ahat, B2hat, C1hat, D12); }
StateSpace YoulaData::T21() const { return StateSpace(Ahat, B1hat, C2hat, D21); }
StateSpace YoulaData::T22() const { return StateSpace(Ahat, B2hat, C2hat, Mat::Zero(C2hat.rows(), B2hat.cols())); }

YoulaData youla_data(const GeneralizedPlant& G, const Mat& F, const Mat& L, const Tolerances& tol) {
  const Index n = G.n(), nu = G.nu(), ny = G.ny();
  require(F.rows() == nu && F.cols() == n && L.rows() == n && L.cols() == ny, ErrorKind::DimensionMismatch,
          "F must be nu x n and L must be n x ny");
  const Mat AF = G.A + G.B2 * F;
  const Mat AL = G.A + L * G.C2;
  if (!is_hurwitz(AF, tol.hurwitz_margin)) fail(ErrorKind::NotStabilizingGains, "A + B2 F is not Hurwitz");
  if (!is_hurwitz(AL, tol.hurwitz_margin)) fail(ErrorKind::NotStabilizingGains, "A + L C2 is not Hurwitz");

  YoulaData yd;
  yd.F = F;
  yd.L = L;
  yd.D12 = G.D12;
  yd.D21 = G.D21;

  Mat Bk(n, ny + nu), Ck(nu + ny, n), Dk = Mat::Zero(nu + ny, ny + nu);
  Bk << -L, G.B2;
  Ck << F, -G.C2;
  Dk.topRightCorner(nu, nu).setIdentity();
  Dk.bottomLeftCorner(ny, ny).setIdentity();
  yd.K_nom = StateSpace(G.A + G.B2 * F + L * G.C2, Bk, Ck, Dk);

  yd.Ahat = Mat::Zero(2 * n, 2 * n);
  yd.Ahat.topLeftCorner(n, n) = AF;
  yd.Ahat.topRightCorner(n, n) = -G.B2 * F;
  yd.Ahat.bottomRightCorner(n, n) = AL;
  yd.B1hat.resize(2 * n, G.m1());
  yd.B1hat << G.B1, G.B1 + L * G.D21;
  yd.B2hat = Mat::Zero(2 * n, nu);
  yd.B2hat.topRows(n) = G.B2;
  yd.C1hat.resize(G.p1(), 2 * n);
  yd.C1hat << G.C1 + G.D12 * F, -G.D12 * F;
  yd.C2hat = Mat::Zero(ny, 2 * n);
  yd.C2hat.rightCols(n) = G.C2;

  Mat B(2 * n, G.m1() + nu), C(G.p1() + ny, 2 * n), D = Mat::Zero(G.p1() + ny, G.m1() + nu);
  B << yd.B1hat, yd.B2hat;
  C << yd.C1hat, yd.C2hat;
  D.topRightCorner(G.p1(), nu) = G.D12;
  D.bottomLeftCorner(ny, G.m1()) = G.D21;
  yd.T = StateSpace(yd.Ahat, B, C, D);
  return yd;
}

StateSpace youla_controller(const YoulaData& yd, const StateSpace& Q) {
  const Index nu = yd.F.rows(), ny = yd.L.cols();
  require(Q.inputs() == ny && Q.outputs() == nu, ErrorKind::DimensionMismatch, "Q must map ny inputs to nu outputs");
  // K_nom read as a generalized plant: exogenous y, control q_in, measured q_out.
  GeneralizedPlant kn;
  kn.A = yd.K_nom.A;
  kn.B1 = yd.K_nom.B.leftCols(ny);
  kn.B2 = yd.K_nom.B.rightCols(nu);
  kn.C1 = yd.K_nom.C.topRows(nu);
  kn.C2 = yd.K_nom.C.bottomRows(ny);
  kn.D12 = Mat::Identity(nu, nu);
  kn.D21 = Mat::Identity(ny, ny);
  return lft_lower(kn, Q);
}

StateSpace model_matching(const YoulaData& yd, const StateSpace& Q) {
  return add(yd.T11(), series(series(yd.T21(), Q), yd.T12()));
}

}  // namespace hh2
