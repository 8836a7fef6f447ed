#include "hh2/error.hpp"
#include "hh2/gapdesign.hpp"

namespace hh2 {

SpectralFactors spectral_factors(const YoulaData& yd, const Tolerances& tol) {
  const Index n2 = yd.Ahat.rows();
  const Mat& A = yd.Ahat;
  SpectralFactors sf;

  // Control side: weight R = D12^T D12 with cross term S = C1hat^T D12.
  const Mat R = yd.D12.transpose() * yd.D12;
  Eigen::LLT<Mat> Rf(R);
  if (Rf.info() != Eigen::Success) fail(ErrorKind::SingularR, "D12^T D12 is not positive definite");
  const Mat St = yd.D12.transpose() * yd.C1hat;
  const Mat Au = A - yd.B2hat * Rf.solve(St);
  const Mat Pz = Mat::Identity(yd.D12.rows(), yd.D12.rows()) - yd.D12 * Rf.solve(yd.D12.transpose());
  sf.Xhat = solve_are(Au, yd.B2hat, Pz * yd.C1hat, R, tol).X;
  sf.Fhat = -Rf.solve(yd.B2hat.transpose() * sf.Xhat.matrix() + St);

  // Filter side: weight D21 D21^T with cross term B1hat D21^T.
  const Mat R2 = yd.D21 * yd.D21.transpose();
  Eigen::LLT<Mat> R2f(R2);
  if (R2f.info() != Eigen::Success) fail(ErrorKind::SingularR, "D21 D21^T is not positive definite");
  const Mat Tt = yd.D21 * yd.B1hat.transpose();
  const Mat Ay = A - Tt.transpose() * R2f.solve(yd.C2hat);
  const Mat Pw = Mat::Identity(yd.D21.cols(), yd.D21.cols()) - yd.D21.transpose() * R2f.solve(yd.D21);
  sf.Yhat = solve_are(Ay.transpose(), yd.C2hat.transpose(), (yd.B1hat * Pw).transpose(), R2, tol).X;
  sf.Lhat = -R2f.solve(yd.C2hat * sf.Yhat.matrix() + Tt).transpose();

  const Mat AF = A + yd.B2hat * sf.Fhat;
  const Mat AL = A + sf.Lhat * yd.C2hat;
  const Index nu = sf.Fhat.rows(), ny = sf.Lhat.cols();
  sf.W_L = StateSpace(AF, Mat::Identity(n2, n2), sf.Fhat, Mat::Zero(nu, n2));
  sf.Wbar_L = StateSpace(AF, yd.B2hat * sf.Fhat, sf.Fhat, sf.Fhat);
  sf.W_R = StateSpace(AL, sf.Lhat, Mat::Identity(n2, n2), Mat::Zero(n2, ny));
  sf.Wbar_R = StateSpace(AL, sf.Lhat, sf.Lhat * yd.C2hat, sf.Lhat);
  sf.Q_star = negate(series(sf.Wbar_R, sf.W_L));
  return sf;
}

}  // namespace hh2
