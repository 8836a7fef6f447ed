#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hh2/error.hpp"
#include "hh2/krylov.hpp"
#include "hh2/linalg.hpp"
#include "linalg/internal.hpp"
#include "linalg/lapack.hpp"

namespace hh2 {

SymmetricMatrix::SymmetricMatrix(const Mat& m, double tolerance) {
  require(m.rows() == m.cols(), ErrorKind::DimensionMismatch, "SymmetricMatrix needs a square matrix");
  require(m.allFinite(), ErrorKind::InvalidArgument, "SymmetricMatrix entries must be finite");
  const double scale = std::max(1.0, m.norm());
  require((m - m.transpose()).norm() <= tolerance * scale, ErrorKind::InvalidArgument,
          "matrix is not symmetric within tolerance");
  m_ = 0.5 * (m + m.transpose());
}

CVec eigenvalues(const Mat& A) { return lapack::eig(A, false, false).values; }

double spectral_abscissa(const Mat& A) {
  if (A.rows() == 0) return -std::numeric_limits<double>::infinity();
  return eigenvalues(A).real().maxCoeff();
}

bool is_hurwitz(const Mat& A, double margin) { return spectral_abscissa(A) < -margin; }

bool magnitude_less(cplx a, cplx b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma < mb;
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

double condition_number(const Mat& M) {
  if (M.size() == 0) return 1.0;
  Eigen::BDCSVD<Mat> svd(M);
  const Vec& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

namespace {

// Sign or phase convention so that results are reproducible: the largest
// entry of a real vector is positive; a complex vector is rotated so that
// its real and imaginary parts are orthogonal with |Re| >= |Im|.
void canonical_real(Eigen::Ref<Vec> v) {
  Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0) v = -v;
}

void canonical_pair(Vec& a, Vec& b) {
  // v = a + ib, rotate by exp(i phi) so that a'.b' = 0.
  const double aa = a.squaredNorm(), bb = b.squaredNorm(), ab = a.dot(b);
  const double phi = 0.5 * std::atan2(-2.0 * ab, aa - bb);
  const double c = std::cos(phi), s = std::sin(phi);
  Vec a2 = c * a - s * b;
  Vec b2 = s * a + c * b;
  if (b2.squaredNorm() > a2.squaredNorm()) {
    // multiply by -i: a + ib -> b - ia
    Vec t = a2;
    a2 = b2;
    b2 = -t;
  }
  Index imax = 0;
  a2.cwiseAbs().maxCoeff(&imax);
  if (a2(imax) < 0) {
    a2 = -a2;
    b2 = -b2;
  }
  a = a2;
  b = b2;
}

}  // namespace

StableSubspace realify_subspace(const CMat& vectors, const CVec& values, Index n) {
  const Index k = values.size();
  StableSubspace out;
  Mat Z(2 * n, k);
  out.Lambda_b = Mat::Zero(k, k);
  out.lambda = values;
  for (Index j = 0; j < k; ++j) {
    const cplx lam = values(j);
    if (lam.imag() == 0.0) {
      Vec v = vectors.col(j).real();
      v /= v.norm();
      canonical_real(v);
      Z.col(j) = v;
      out.Lambda_b(j, j) = lam.real();
      continue;
    }
    require(j + 1 < k && std::abs(values(j + 1) - std::conj(lam)) <= 1e-8 * std::abs(lam), ErrorKind::DegenerateData,
            "conjugate pair is not stored adjacently");
    Vec a = vectors.col(j).real(), b = vectors.col(j).imag();
    if (lam.imag() < 0) b = -b;  // use the +i member
    canonical_pair(a, b);
    const double na = a.norm(), nb = b.norm();
    Z.col(j) = a / na;
    Z.col(j + 1) = b / nb;
    const double alpha = lam.real(), beta = std::abs(lam.imag());
    // H [a b] = [a b] [alpha beta; -beta alpha]; rescaled by diag(na, nb).
    out.Lambda_b(j, j) = alpha;
    out.Lambda_b(j, j + 1) = beta * na / nb;
    out.Lambda_b(j + 1, j) = -beta * nb / na;
    out.Lambda_b(j + 1, j + 1) = alpha;
    out.lambda(j) = cplx(alpha, beta);
    out.lambda(j + 1) = cplx(alpha, -beta);
    ++j;
  }
  out.Z1 = Z.topRows(n);
  out.Z2 = Z.bottomRows(n);
  return out;
}

namespace {

// Groups eigen-indices into conjugate-closed units ordered by magnitude.
std::vector<std::vector<Index>> ordered_units(const CVec& values, const std::vector<Index>& members) {
  std::vector<std::vector<Index>> units;
  std::vector<char> used(values.size(), 0);
  for (Index i : members) {
    if (used[i]) continue;
    used[i] = 1;
    if (values(i).imag() == 0.0) {
      units.push_back({i});
      continue;
    }
    // partner: closest to the conjugate among unused members
    Index partner = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Index j : members) {
      if (used[j]) continue;
      const double d = std::abs(values(j) - std::conj(values(i)));
      if (d < best) {
        best = d;
        partner = j;
      }
    }
    require(partner >= 0, ErrorKind::DegenerateData, "complex eigenvalue without conjugate partner");
    used[partner] = 1;
    if (values(i).imag() > 0)
      units.push_back({i, partner});
    else
      units.push_back({partner, i});
  }
  std::sort(units.begin(), units.end(), [&](const auto& u, const auto& v) {
    return magnitude_less(values(u.front()), values(v.front()));
  });
  return units;
}

}  // namespace

StableSubspace select_stable(const CMat& vectors, const CVec& values, Index n, Index k, double axis_tol,
                             const char* origin) {
  std::vector<Index> stable;
  for (Index i = 0; i < values.size(); ++i) {
    if (std::abs(values(i).real()) <= axis_tol)
      fail(ErrorKind::ImaginaryAxisEigenvalue, std::string(origin) + ": eigenvalue on the imaginary axis");
    if (values(i).real() < 0) stable.push_back(i);
  }
  const auto units = ordered_units(values, stable);
  std::vector<Index> cols;
  std::vector<std::string> notes;
  for (const auto& u : units) {
    if (static_cast<Index>(cols.size()) >= k) break;
    for (Index i : u) cols.push_back(i);
  }
  if (static_cast<Index>(cols.size()) < k)
    fail(ErrorKind::DegenerateData, std::string(origin) + ": fewer stable eigenvalues than requested");
  if (static_cast<Index>(cols.size()) > k)
    notes.push_back("kappa raised from " + std::to_string(k) + " to " + std::to_string(cols.size()) +
                    " to keep a conjugate pair together");
  CMat v(vectors.rows(), cols.size());
  CVec lam(cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    v.col(j) = vectors.col(cols[j]);
    lam(j) = values(cols[j]);
  }
  StableSubspace out = realify_subspace(v, lam, n);
  out.diagnostics = std::move(notes);
  return out;
}

StableSubspace full_stable_eigenspace(const Mat& H, const Tolerances& tol) {
  require(H.rows() == H.cols() && H.rows() % 2 == 0, ErrorKind::DimensionMismatch,
          "Hamiltonian must be square with even dimension");
  const Index n = H.rows() / 2;
  const auto e = lapack::eig(H, true, false);
  const double axis_tol = tol.imaginary_axis * std::max(1.0, H.norm());
  StableSubspace out = select_stable(e.right, e.values, n, n, axis_tol, "stable_eigenspace");
  Mat Z(2 * n, n);
  Z << out.Z1, out.Z2;
  if (condition_number(Z) > tol.z1_condition)
    fail(ErrorKind::DefectiveHamiltonian, "stable eigenvectors are numerically dependent");
  return out;
}

StableSubspace stable_eigenspace(const Mat& H, std::optional<Index> k, const Tolerances& tol) {
  require(H.rows() == H.cols() && H.rows() % 2 == 0, ErrorKind::DimensionMismatch,
          "Hamiltonian must be square with even dimension");
  const Index n = H.rows() / 2;
  if (!k) return full_stable_eigenspace(H, tol);
  require(*k >= 1 && *k <= n, ErrorKind::InvalidArgument, "k must lie in [1, n]");
  Eigen::PartialPivLU<Mat> lu(H);
  LinearOperator op = [&lu](const Vec& x, Vec& y) { y = lu.solve(x); };
  return stable_eigenspace_shift_invert(op, n, *k, tol);
}

Spectrum unstable_spectrum(const Mat& A, const Tolerances& tol) {
  require(A.rows() == A.cols(), ErrorKind::DimensionMismatch, "A must be square");
  const auto e = lapack::eig(A, true, true);
  std::vector<Index> idx;
  for (Index i = 0; i < e.values.size(); ++i)
    if (e.values(i).real() >= -tol.unstable_threshold) idx.push_back(i);
  std::sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    if (e.values(a).real() != e.values(b).real()) return e.values(a).real() > e.values(b).real();
    return e.values(a).imag() > e.values(b).imag();
  });
  Spectrum s;
  const Index k = static_cast<Index>(idx.size());
  s.eigenvalues.resize(k);
  s.left.resize(A.rows(), k);
  s.right.resize(A.rows(), k);
  auto canonical = [](CVec v) {
    v /= v.norm();
    Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const cplx phase = std::abs(v(imax)) > 0 ? std::conj(v(imax)) / std::abs(v(imax)) : cplx(1.0);
    return CVec(v * phase);
  };
  for (Index j = 0; j < k; ++j) {
    s.eigenvalues(j) = e.values(idx[j]);
    s.right.col(j) = canonical(e.right.col(idx[j]));
    s.left.col(j) = canonical(e.left.col(idx[j]));
  }
  return s;
}

Mat sqrt_psd(const SymmetricMatrix& M, const Tolerances& tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(M.matrix());
  const Vec& lam = es.eigenvalues();
  if (lam.size() == 0) return Mat(0, 0);
  const double norm2 = lam.cwiseAbs().maxCoeff();
  if (lam(0) < -tol.psd_floor * norm2)
    fail(ErrorKind::NotPSD, "matrix has eigenvalue " + std::to_string(lam(0)));
  const Vec root = lam.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace hh2
