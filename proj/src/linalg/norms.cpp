#include <algorithm>
#include <cmath>
#include <vector>

#include "hh2/error.hpp"
#include "hh2/linalg.hpp"
#include "linalg/lapack.hpp"

namespace hh2 {

double h2_norm(const StateSpace& sys, const Tolerances& tol) {
  sys.check();
  if (sys.D.size() > 0 && sys.D.cwiseAbs().maxCoeff() > 0.0)
    fail(ErrorKind::NotStrictlyProper, "H2 norm needs D = 0");
  if (sys.states() == 0) return 0.0;
  // Use the smaller of the two Gramians.
  double value;
  if (sys.outputs() < sys.inputs()) {
    const Mat phi = solve_lyapunov(sys.A, sys.B, tol);
    value = (sys.C * phi * sys.C.transpose()).trace();
  } else {
    const Mat psi = solve_lyapunov(sys.A.transpose(), sys.C.transpose(), tol);
    value = (sys.B.transpose() * psi * sys.B).trace();
  }
  return std::sqrt(std::max(value, 0.0));
}

double sigma_max(const StateSpace& sys, double omega) {
  const CMat g = sys.at_frequency(omega);
  if (g.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(g);
  return svd.singularValues()(0);
}

namespace {

double sigma_max_real(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

// Frequencies where g(j omega) has singular value gamma, from the
// imaginary-axis eigenvalues of the associated Hamiltonian.
std::vector<double> crossings(const StateSpace& sys, double gamma) {
  const Index m = sys.inputs(), p = sys.outputs();
  const Mat& A = sys.A;
  const Mat& B = sys.B;
  const Mat& C = sys.C;
  const Mat& D = sys.D;
  const Mat R = gamma * gamma * Mat::Identity(m, m) - D.transpose() * D;
  Eigen::LDLT<Mat> ldlt(R);
  const Mat Ac = A + B * ldlt.solve(D.transpose() * C);
  Mat H(2 * A.rows(), 2 * A.rows());
  H << Ac, B * ldlt.solve(B.transpose()),
      -C.transpose() * (Mat::Identity(p, p) + D * ldlt.solve(D.transpose())) * C, -Ac.transpose();
  const CVec ev = eigenvalues(H);
  const double scale = std::max(1.0, H.norm());
  std::vector<double> omegas;
  for (Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i).real()) <= 1e-8 * scale && ev(i).imag() >= 0) omegas.push_back(ev(i).imag());
  std::sort(omegas.begin(), omegas.end());
  return omegas;
}

}  // namespace

// Boyd-Balakrishnan level-set iteration.
double hinf_norm(const StateSpace& sys, const Tolerances& tol) {
  sys.check();
  const double sd = sigma_max_real(sys.D);
  if (sys.states() == 0 || sys.inputs() == 0 || sys.outputs() == 0) return sd;
  const CVec poles = eigenvalues(sys.A);
  for (Index i = 0; i < poles.size(); ++i)
    if (poles(i).real() >= -tol.hurwitz_margin) fail(ErrorKind::NotHurwitz, "H-infinity norm needs a stable system");

  // Initial lower bound from DC, infinity and the most lightly damped pole.
  double lb = std::max(sd, sigma_max(sys, 0.0));
  double best_ratio = -1.0;
  double w_peak = 0.0;
  for (Index i = 0; i < poles.size(); ++i) {
    const double ratio = std::abs(poles(i).imag() / poles(i).real());
    if (ratio > best_ratio) {
      best_ratio = ratio;
      w_peak = std::abs(poles(i));
    }
  }
  lb = std::max(lb, sigma_max(sys, w_peak));
  if (lb == 0.0) {
    const double lo = poles.cwiseAbs().minCoeff(), hi = poles.cwiseAbs().maxCoeff();
    for (double w : log_grid(std::max(lo, 1e-8) / 10, hi * 10, 32)) lb = std::max(lb, sigma_max(sys, w));
    if (lb == 0.0) return 0.0;
  }

  const double eps = 0.5 * tol.hinf_relative;
  for (int iter = 0; iter < 100; ++iter) {
    const double gamma = (1.0 + 2.0 * eps) * lb;
    const auto omegas = crossings(sys, gamma);
    if (omegas.empty()) return lb;
    double next = lb;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      next = std::max(next, sigma_max(sys, omegas[i]));
      if (i + 1 < omegas.size()) next = std::max(next, sigma_max(sys, 0.5 * (omegas[i] + omegas[i + 1])));
    }
    if (next <= gamma) return gamma;
    lb = next;
  }
  return lb;
}

}  // namespace hh2
