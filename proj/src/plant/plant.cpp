#include "hh2/plant.hpp"

#include <string>

#include "hh2/error.hpp"
#include "hh2/linalg.hpp"

namespace hh2 {

namespace {

void check_cover(const std::vector<Subsystem>& subs, IndexRange Subsystem::*field, Index total, const char* what) {
  Index next = 0;
  for (const auto& s : subs) {
    const IndexRange& r = s.*field;
    require(r.begin == next && r.size >= 0, ErrorKind::InvalidArgument,
            std::string("subsystem ") + what + " ranges must be consecutive and cover all indices");
    next = r.end();
  }
  require(next == total, ErrorKind::InvalidArgument,
          std::string("subsystem ") + what + " ranges do not cover all indices");
}

// Entries of M outside the diagonal blocks rows_i x cols_i must vanish.
bool block_diagonal(const Mat& M, const std::vector<Subsystem>& subs, IndexRange Subsystem::*rows,
                    IndexRange Subsystem::*cols) {
  Mat masked = M;
  for (const auto& s : subs) {
    const IndexRange& r = s.*rows;
    const IndexRange& c = s.*cols;
    masked.block(r.begin, c.begin, r.size, c.size).setZero();
  }
  return masked.size() == 0 || masked.cwiseAbs().maxCoeff() == 0.0;
}

}  // namespace

void GeneralizedPlant::check() const {
  const Index n_ = n();
  require(A.cols() == n_, ErrorKind::DimensionMismatch, "A must be square");
  require(B1.rows() == n_ && B2.rows() == n_, ErrorKind::DimensionMismatch, "B1, B2 rows must equal n");
  require(C1.cols() == n_ && C2.cols() == n_, ErrorKind::DimensionMismatch, "C1, C2 columns must equal n");
  require(D12.rows() == p1() && D12.cols() == nu(), ErrorKind::DimensionMismatch, "D12 must be p1 x nu");
  require(D21.rows() == ny() && D21.cols() == m1(), ErrorKind::DimensionMismatch, "D21 must be ny x m1");
  for (const Mat* m : {&A, &B1, &B2, &C1, &C2, &D12, &D21})
    require(m->allFinite(), ErrorKind::InvalidArgument, "plant matrices must be finite");
  if (subsystems.empty()) return;
  check_cover(subsystems, &Subsystem::states, n_, "state");
  check_cover(subsystems, &Subsystem::inputs, nu(), "input");
  check_cover(subsystems, &Subsystem::outputs, ny(), "output");
  require(block_diagonal(B2, subsystems, &Subsystem::states, &Subsystem::inputs), ErrorKind::InvalidArgument,
          "B2 is not block diagonal over the subsystems");
  require(block_diagonal(C2, subsystems, &Subsystem::outputs, &Subsystem::states), ErrorKind::InvalidArgument,
          "C2 is not block diagonal over the subsystems");
}

StateSpace GeneralizedPlant::G11() const { return StateSpace(A, B1, C1, Mat::Zero(p1(), m1())); }
StateSpace GeneralizedPlant::G12() const { return StateSpace(A, B2, C1, D12); }
StateSpace GeneralizedPlant::G21() const { return StateSpace(A, B1, C2, D21); }
StateSpace GeneralizedPlant::G22() const { return StateSpace(A, B2, C2, Mat::Zero(ny(), nu())); }

std::vector<Subsystem> singleton_subsystems(Index count) {
  std::vector<Subsystem> subs(count);
  for (Index i = 0; i < count; ++i) subs[i] = {{i, 1}, {i, 1}, {i, 1}};
  return subs;
}

StateSpace lft_lower(const GeneralizedPlant& G, const StateSpace& K) {
  require(K.inputs() == G.ny() && K.outputs() == G.nu(), ErrorKind::DimensionMismatch,
          "controller must map ny measurements to nu inputs");
  const Index n = G.n(), nk = K.states();
  Mat A(n + nk, n + nk);
  A << G.A + G.B2 * K.D * G.C2, G.B2 * K.C, K.B * G.C2, K.A;
  Mat B(n + nk, G.m1());
  B << G.B1 + G.B2 * K.D * G.D21, K.B * G.D21;
  Mat C(G.p1(), n + nk);
  C << G.C1 + G.D12 * K.D * G.C2, G.D12 * K.C;
  return StateSpace(A, B, C, G.D12 * K.D * G.D21);
}

AssumptionReport validate_assumptions(const GeneralizedPlant& G, const Tolerances& tol) {
  G.check();
  AssumptionReport r;
  const bool stab = is_stabilizable(G.A, G.B2, tol);
  const bool det = is_detectable(G.A, G.C2, tol);
  r.a1 = stab && det;
  if (!stab) r.notes.push_back("A1: (A, B2) is not stabilizable");
  if (!det) r.notes.push_back("A1: (C2, A) is not detectable");

  auto min_eig = [](const Mat& S) {
    if (S.size() == 0) return 0.0;
    return Eigen::SelfAdjointEigenSolver<Mat>(S).eigenvalues()(0);
  };
  const double l21 = min_eig(G.D21 * G.D21.transpose());
  const double l12 = min_eig(G.D12.transpose() * G.D12);
  r.a2 = l21 > 0 && l12 > 0;
  if (!r.a2)
    r.notes.push_back("A2: lambda_min(D21 D21^T) = " + std::to_string(l21) +
                      ", lambda_min(D12^T D12) = " + std::to_string(l12));

  const bool ctrl = no_uncontrollable_imaginary_modes(G.A, G.B1, tol);
  const bool obs = no_unobservable_imaginary_modes(G.A, G.C1, tol);
  r.a3 = ctrl && obs;
  if (!ctrl) r.notes.push_back("A3: (A, B1) has an uncontrollable imaginary-axis mode");
  if (!obs) r.notes.push_back("A3: (C1, A) has an unobservable imaginary-axis mode");

  const double c = (G.D12.transpose() * G.C1).norm();
  const double b = (G.B1 * G.D21.transpose()).norm();
  r.a4 = c <= tol.a4 && b <= tol.a4;
  if (!r.a4) r.notes.push_back("A4: |D12^T C1| = " + std::to_string(c) + ", |B1 D21^T| = " + std::to_string(b));
  return r;
}

GeneralizedPlant permute_states(const GeneralizedPlant& G, const std::vector<Index>& perm) {
  const Index n = G.n();
  require(static_cast<Index>(perm.size()) == n, ErrorKind::DimensionMismatch, "permutation length must equal n");
  Mat P = Mat::Zero(n, n);
  for (Index i = 0; i < n; ++i) P(i, perm[i]) = 1.0;
  GeneralizedPlant out = G;
  out.A = P * G.A * P.transpose();
  out.B1 = P * G.B1;
  out.B2 = P * G.B2;
  out.C1 = G.C1 * P.transpose();
  out.C2 = G.C2 * P.transpose();
  out.subsystems.clear();
  return out;
}

}  // namespace hh2
