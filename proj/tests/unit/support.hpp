#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "hh2/linalg.hpp"
#include "hh2/plant.hpp"
#include "hh2/projection.hpp"
#include "hh2/random.hpp"
#include "hh2/state_space.hpp"

namespace hh2::test {

// Random plant satisfying the standing assumptions: C1 = [C; 0], D12 = [0; I],
// B1 = [B, 0], D21 = [0, I]. `shift` moves the spectrum of A to the left.
inline GeneralizedPlant random_plant(Index n, Index nu, Index ny, Rng& rng, double shift = 0.5) {
  GeneralizedPlant G;
  const Index p = std::max<Index>(1, n / 2), m = std::max<Index>(1, n / 2);
  G.A = rng.normal_matrix(n, n) / std::sqrt(double(n));
  G.A -= shift * Mat::Identity(n, n);
  G.B2 = rng.normal_matrix(n, nu);
  G.C2 = rng.normal_matrix(ny, n);
  G.C1 = Mat::Zero(p + nu, n);
  G.C1.topRows(p) = rng.normal_matrix(p, n);
  G.D12 = Mat::Zero(p + nu, nu);
  G.D12.bottomRows(nu).setIdentity();
  G.B1 = Mat::Zero(n, m + ny);
  G.B1.leftCols(m) = rng.normal_matrix(n, m);
  G.D21 = Mat::Zero(ny, m + ny);
  G.D21.rightCols(ny).setIdentity();
  return G;
}

// Random partition of `count` indices into r nonempty clusters.
inline std::vector<int> random_labels(Index count, Index r, Rng& rng) {
  std::vector<int> labels(count);
  for (Index i = 0; i < count; ++i) labels[i] = static_cast<int>(i < r ? i : rng.below(r));
  for (Index i = count - 1; i > 0; --i) std::swap(labels[i], labels[rng.below(i + 1)]);
  return labels;
}

inline ClusterPartition partition_from(const std::vector<int>& in, const std::vector<int>& out) {
  ClusterPartition a = ClusterPartition::from_labels(in), b = ClusterPartition::from_labels(out);
  ClusterPartition p;
  p.inputs = a.inputs;
  p.outputs = b.inputs;
  return p;
}

// Stabilizing ARE solution through the matrix sign function of the
// Hamiltonian (Newton iteration with determinant scaling).
inline Mat are_sign_oracle(const Mat& A, const Mat& M, const Mat& Q) {
  const Index n = A.rows();
  Mat H(2 * n, 2 * n);
  H << A, -M, -Q, -A.transpose();
  Mat S = H;
  for (int it = 0; it < 200; ++it) {
    Eigen::PartialPivLU<Mat> lu(S);
    const double c = std::pow(std::abs(lu.determinant()), -1.0 / (2.0 * n));
    const Mat next = 0.5 * (c * S + lu.inverse() / c);
    const double change = (next - S).norm() / next.norm();
    S = next;
    if (change < 1e-14) break;
  }
  // X solves [S12; S22 + I] X = -[S11 + I; S21].
  Mat lhs(2 * n, n), rhs(2 * n, n);
  lhs << S.topRightCorner(n, n), S.bottomRightCorner(n, n) + Mat::Identity(n, n);
  rhs << S.topLeftCorner(n, n) + Mat::Identity(n, n), S.bottomLeftCorner(n, n);
  const Mat X = -lhs.colPivHouseholderQr().solve(rhs);
  return 0.5 * (X + X.transpose());
}

// A P + P A^T + W = 0 through the Kronecker form.
inline Mat lyapunov_kron_oracle(const Mat& A, const Mat& W) {
  const Index n = A.rows();
  const Mat I = Mat::Identity(n, n);
  // vec(A P + P A^T) = (I kron A + A kron I) vec(P)
  Mat K = Mat::Zero(n * n, n * n);
  for (Index c = 0; c < n; ++c) K.block(c * n, c * n, n, n) += A;
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) K.block(r * n, c * n, n, n) += A(r, c) * I;
  const Eigen::Map<const Vec> w(W.data(), n * n);
  const Vec p = K.fullPivLu().solve(-w);
  return Eigen::Map<const Mat>(p.data(), n, n);
}

// H2 norm by trapezoidal quadrature of |G(jw)|_F^2 on w = tan(theta).
inline double h2_quadrature_oracle(const StateSpace& sys, int points = 20000) {
  // Trapezoid in theta; as w -> inf the integrand tends to |C B|^2.
  const double h = (M_PI / 2) / points;
  double sum = 0.5 * (sys.at_frequency(0.0).squaredNorm() + (sys.C * sys.B).squaredNorm());
  for (int k = 1; k < points; ++k) {
    const double th = k * h, w = std::tan(th);
    sum += sys.at_frequency(w).squaredNorm() / (std::cos(th) * std::cos(th));
  }
  return std::sqrt(sum * h / M_PI);
}

// Peak singular value over a dense log grid refined around the maximum.
inline double hinf_grid_oracle(const StateSpace& sys) {
  auto sv = [&](double w) {
    Eigen::JacobiSVD<CMat> svd(sys.at_frequency(w));
    return svd.singularValues()(0);
  };
  double best = sv(0.0), best_w = 0.0;
  for (int k = 0; k <= 4000; ++k) {
    const double w = std::pow(10.0, -4.0 + 8.0 * k / 4000.0);
    const double v = sv(w);
    if (v > best) best = v, best_w = w;
  }
  double lo = best_w / 1.01, hi = best_w * 1.01;
  for (int it = 0; it < 200; ++it) {
    const double a = lo + (hi - lo) / 3, b = hi - (hi - lo) / 3;
    if (sv(a) < sv(b)) lo = a;
    else hi = b;
  }
  return std::max(best, sv(0.5 * (lo + hi)));
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

inline double min_eig(const Mat& S) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace hh2::test

namespace hh2::test {

// Four subsystems on a line; the first three have inputs. Clusters {1,2} and
// {3,4} for outputs, {1,2} and {3} for inputs.
inline GeneralizedPlant line_plant() {
  Mat L = Mat::Zero(4, 4);
  for (Index i = 0; i < 3; ++i) {
    L(i, i + 1) = L(i + 1, i) = -1.0;
    L(i, i) += 1.0;
    L(i + 1, i + 1) += 1.0;
  }
  GeneralizedPlant G;
  G.A = -L;
  G.B2 = Mat::Zero(4, 3);
  G.B2.topRows(3).setIdentity();
  G.C2 = Mat::Identity(4, 4);
  G.C1 = Mat::Zero(7, 4);
  G.C1.topRows(4) = 2.0 * Mat::Identity(4, 4);
  G.D12 = Mat::Zero(7, 3);
  G.D12.bottomRows(3).setIdentity();
  G.B1 = Mat::Zero(4, 8);
  G.B1.leftCols(4) = Mat::Identity(4, 4);
  G.D21 = Mat::Zero(4, 8);
  G.D21.rightCols(4).setIdentity();
  for (Index i = 0; i < 4; ++i) G.subsystems.push_back({{i, 1}, {std::min<Index>(i, 3), i < 3 ? 1 : 0}, {i, 1}});
  return G;
}

inline ClusterPartition line_partition() {
  ClusterPartition p;
  p.inputs = {{0, 1}, {2}};
  p.outputs = {{0, 1}, {2, 3}};
  p.subsystems = {{0, 1}, {2, 3}};
  return p;
}

}  // namespace hh2::test
