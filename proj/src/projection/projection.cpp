#include "hh2/projection.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hh2/error.hpp"
#include "hh2/kernels.hpp"
#include "hh2/linalg.hpp"

namespace hh2 {

namespace {

void check_sets(const std::vector<std::vector<Index>>& sets, Index total, const char* what) {
  std::vector<char> seen(total, 0);
  for (const auto& s : sets) {
    require(!s.empty(), ErrorKind::InvalidArgument, std::string(what) + " cluster is empty");
    for (Index i : s) {
      require(i >= 0 && i < total, ErrorKind::InvalidArgument, std::string(what) + " index out of range");
      require(!seen[i], ErrorKind::InvalidArgument, std::string(what) + " clusters overlap");
      seen[i] = 1;
    }
  }
  for (Index i = 0; i < total; ++i)
    require(seen[i], ErrorKind::InvalidArgument, std::string(what) + " clusters do not cover index " + std::to_string(i));
}

std::vector<int> labels_of(const std::vector<std::vector<Index>>& sets, Index total) {
  std::vector<int> labels(total, -1);
  for (std::size_t c = 0; c < sets.size(); ++c)
    for (Index i : sets[c])
      if (i >= 0 && i < total) labels[i] = static_cast<int>(c);
  return labels;
}

Mat projection_rows(const std::vector<std::vector<Index>>& sets, const Vec& w, const char* what) {
  Mat P = Mat::Zero(static_cast<Index>(sets.size()), w.size());
  for (std::size_t c = 0; c < sets.size(); ++c) {
    double norm2 = 0.0;
    for (Index j : sets[c]) norm2 += w(j) * w(j);
    if (!(norm2 > 0.0))
      fail(ErrorKind::ZeroClusterWeight, std::string(what) + " weights vanish on cluster " + std::to_string(c));
    const double norm = std::sqrt(norm2);
    for (Index j : sets[c]) P(static_cast<Index>(c), j) = w(j) / norm;
  }
  return P;
}

}  // namespace

void ClusterPartition::validate(Index nu, Index ny, Index ns) const {
  require(r() >= 1, ErrorKind::InvalidArgument, "partition needs at least one cluster");
  require(static_cast<Index>(outputs.size()) == r(), ErrorKind::InvalidArgument,
          "input and output partitions must have the same number of clusters");
  check_sets(inputs, nu, "input");
  check_sets(outputs, ny, "output");
  if (!subsystems.empty() && ns > 0) {
    require(static_cast<Index>(subsystems.size()) == r(), ErrorKind::InvalidArgument,
            "subsystem partition must have r clusters");
    check_sets(subsystems, ns, "subsystem");
  }
}

std::vector<int> ClusterPartition::input_labels(Index nu) const { return labels_of(inputs, nu); }
std::vector<int> ClusterPartition::output_labels(Index ny) const { return labels_of(outputs, ny); }

ClusterPartition ClusterPartition::from_labels(const std::vector<int>& labels) {
  int r = 0;
  for (int l : labels) {
    require(l >= 0, ErrorKind::InvalidArgument, "cluster labels must be non-negative");
    r = std::max(r, l + 1);
  }
  ClusterPartition p;
  p.inputs.resize(r);
  for (std::size_t i = 0; i < labels.size(); ++i) p.inputs[labels[i]].push_back(static_cast<Index>(i));
  p.outputs = p.inputs;
  p.subsystems = p.inputs;
  return p;
}

ClusterPartition ClusterPartition::singletons(Index count) {
  std::vector<int> labels(count);
  for (Index i = 0; i < count; ++i) labels[i] = static_cast<int>(i);
  return from_labels(labels);
}

bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  std::map<int, int> fwd, bwd;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto f = fwd.emplace(a[i], b[i]);
    auto g = bwd.emplace(b[i], a[i]);
    if (f.first->second != b[i] || g.first->second != a[i]) return false;
  }
  return true;
}

WeightVectors WeightVectors::ones(Index nu, Index ny) { return {Vec::Ones(nu), Vec::Ones(ny)}; }

ProjectionPair build_projection(const ClusterPartition& partition, const WeightVectors& weights) {
  partition.validate(weights.w_u.size(), weights.w_y.size(), 0);
  return {projection_rows(partition.inputs, weights.w_u, "input"),
          projection_rows(partition.outputs, weights.w_y, "output")};
}

Membership subspace_member(const StateSpace& K, const ProjectionPair& P, const Tolerances& tol) {
  require(K.inputs() == P.Py.cols() && K.outputs() == P.Pu.cols(), ErrorKind::DimensionMismatch,
          "K must have ny inputs and nu outputs");
  const Mat Nu = Mat::Identity(P.Pu.cols(), P.Pu.cols()) - P.Pu.transpose() * P.Pu;
  const Mat Ny = Mat::Identity(P.Py.cols(), P.Py.cols()) - P.Py.transpose() * P.Py;
  const CMat Nuc = Nu.cast<cplx>(), Nyc = Ny.cast<cplx>();
  Membership m;
  auto residual = [&](const CMat& k) {
    const double scale = k.norm();
    if (scale == 0.0) return 0.0;
    return std::max((Nuc * k).norm(), (k * Nyc).norm()) / scale;
  };
  for (const CMat& k : kernels::frequency_responses(K, log_grid(1e-3, 1e3, 20)))
    m.residual = std::max(m.residual, residual(k));
  m.residual = std::max(m.residual, residual(K.D.cast<cplx>()));
  m.member = m.residual <= tol.membership;
  if (m.member)
    m.reduced = StateSpace(K.A, K.B * P.Py.transpose(), P.Pu * K.C, P.Pu * K.D * P.Py.transpose());
  return m;
}

StateSpace quadratic_product(const StateSpace& K, const StateSpace& G22) { return series(series(K, G22), K); }

StateSpace random_stable_system(Index states, Index inputs, Index outputs, Rng& rng, bool proper) {
  Mat A = rng.normal_matrix(states, states);
  if (states > 0) {
    const double shift = spectral_abscissa(A) + 0.5 + rng.uniform();
    A -= shift * Mat::Identity(states, states);
  }
  const Mat B = rng.normal_matrix(states, inputs);
  const Mat C = rng.normal_matrix(outputs, states);
  const Mat D = proper ? rng.normal_matrix(outputs, inputs) : Mat::Zero(outputs, inputs);
  return StateSpace(A, B, C, D);
}

bool verify_qi(const StateSpace& G22, const ProjectionPair& P, int samples, Rng& rng, const Tolerances& tol) {
  require(G22.inputs() == P.Pu.cols() && G22.outputs() == P.Py.cols(), ErrorKind::DimensionMismatch,
          "G22 must map nu inputs to ny outputs");
  bool ok = true;
  for (int s = 0; s < samples; ++s) {
    const Index r = P.r();
    const StateSpace Kt = random_stable_system(1 + static_cast<Index>(rng.below(3)), r, r, rng);
    const StateSpace K = pre_multiply(P.Pu.transpose(), post_multiply(Kt, P.Py));
    ok = ok && subspace_member(quadratic_product(K, G22), P, tol).member;
  }
  return ok;
}

namespace {

// Complex eigenvector columns -> real columns, one (Re, Im) pair per
// conjugate pair.
Mat realify_columns(const CMat& V, const CVec& values) {
  std::vector<Vec> cols;
  for (Index j = 0; j < values.size(); ++j) {
    if (values(j).imag() == 0.0) {
      cols.push_back(V.col(j).real());
    } else if (values(j).imag() > 0.0) {
      cols.push_back(V.col(j).real());
      cols.push_back(V.col(j).imag());
    }
  }
  Mat out(V.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = cols[j];
  return out;
}

bool clusters_nonzero(const std::vector<std::vector<Index>>& sets, const Vec& w) {
  const double floor = 1e-12 * std::max(1e-300, w.norm());
  for (const auto& s : sets) {
    double n2 = 0.0;
    for (Index i : s) n2 += w(i) * w(i);
    if (!(std::sqrt(n2) > floor)) return false;
  }
  return true;
}

}  // namespace

FeasibleWeights feasible_weights(const GeneralizedPlant& G, const ClusterPartition& partition, int max_tries,
                                 Rng& rng, const Tolerances& tol) {
  partition.validate(G.nu(), G.ny(), G.ns());
  FeasibleWeights out;
  const Spectrum spec = unstable_spectrum(G.A, tol);
  if (spec.eigenvalues.size() == 0) {
    out.weights = WeightVectors::ones(G.nu(), G.ny());
    return out;
  }
  const Mat Vl = realify_columns(spec.left, spec.eigenvalues);
  const Mat Vr = realify_columns(spec.right, spec.eigenvalues);
  const Mat Wu = G.B2.transpose() * Vl;  // w_u = B2^T V_l v_u
  const Mat Wy = G.C2 * Vr;              // w_y = C2 V_r v_y
  const Index k = Vl.cols();
  for (int t = 0; t < max_tries; ++t) {
    out.tries = t + 1;
    Vec vu = Vec::Ones(k), vy = Vec::Ones(k);
    if (t > 0) {
      const double spread = 0.1 * t;
      for (Index i = 0; i < k; ++i) {
        vu(i) += spread * rng.normal();
        vy(i) += spread * rng.normal();
      }
    }
    WeightVectors w{Wu * vu, Wy * vy};
    // Aggregate condition V_l^T B2 B2^T V_l v_u != 0 (and the dual).
    const Vec cu = Wu.transpose() * w.w_u;
    const Vec cy = Wy.transpose() * w.w_y;
    const bool aggregate = cu.norm() > 1e-12 * std::max(1.0, Wu.norm() * Wu.norm() * vu.norm()) &&
                           cy.norm() > 1e-12 * std::max(1.0, Wy.norm() * Wy.norm() * vy.norm());
    if (!aggregate) continue;
    if (!clusters_nonzero(partition.inputs, w.w_u) || !clusters_nonzero(partition.outputs, w.w_y)) continue;
    const ProjectionPair P = build_projection(partition, w);
    if (is_stabilizable(G.A, G.B2 * P.Pu.transpose(), tol) && is_detectable(G.A, P.Py * G.C2, tol)) {
      out.weights = std::move(w);
      return out;
    }
    out.aggregate_passed_pbh_failed = true;
  }
  fail(ErrorKind::NoFeasibleWeights,
       "no weights passed the stabilizability and detectability checks in " + std::to_string(max_tries) + " tries");
}

}  // namespace hh2
