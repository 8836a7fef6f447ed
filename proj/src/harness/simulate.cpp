#include "hh2/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "hh2/error.hpp"
#include "hh2/io.hpp"
#include "hh2/random.hpp"

namespace hh2 {

namespace {

std::vector<std::vector<Index>> supports(const Mat& P) {
  std::vector<std::vector<Index>> sets(P.rows());
  for (Index i = 0; i < P.rows(); ++i)
    for (Index j = 0; j < P.cols(); ++j)
      if (P(i, j) != 0.0) sets[i].push_back(j);
  return sets;
}

std::vector<Index> owner(Index count, const std::vector<Subsystem>& subs, bool outputs) {
  std::vector<Index> own(count, 0);
  for (std::size_t s = 0; s < subs.size(); ++s) {
    const IndexRange& r = outputs ? subs[s].outputs : subs[s].inputs;
    for (Index j = r.begin; j < r.end(); ++j) own[j] = static_cast<Index>(s);
  }
  return own;
}

// The three-step protocol for one evaluation of the controller.
class Coordinators {
 public:
  Coordinators(const GeneralizedPlant& G, const HierarchicalController& K)
      : K_(K), out_(supports(K.Py)), in_(supports(K.Pu)) {
    out_owner_ = owner(G.ny(), G.subsystems, true);
    in_owner_ = owner(G.nu(), G.subsystems, false);
  }

  // Returns u and the derivative of the reduced controller state; fills the
  // step record and, when `trace` is given, the logs and link sets.
  void evaluate(const Vec& y, const Vec& xk, Vec& u, Vec& dxk, StepRecord* rec, SimTrace* trace) {
    const Index r = K_.Pu.rows();
    // Step 1: each coordinator averages the raw outputs of its own cluster.
    Vec ybar = Vec::Zero(r);
    for (Index i = 0; i < r; ++i)
      for (Index j : out_[i]) {
        ybar(i) += K_.Py(i, j) * y(j);
        if (trace) {
          trace->logs[i].push_back({Observation::RawOutput, j});
          sub_links_.insert({out_owner_[j], i});
        }
      }
    // Step 2: averages are exchanged and the reduced controller is advanced.
    if (trace)
      for (Index i = 0; i < r; ++i)
        for (Index k = 0; k < r; ++k) {
          if (k == i) continue;
          trace->logs[i].push_back({Observation::Average, k});
          coord_links_.insert({std::min(i, k), std::max(i, k)});
        }
    const Vec ubar = K_.Kt.C * xk + K_.Kt.D * ybar;
    dxk = K_.Kt.A * xk + K_.Kt.B * ybar;
    // Step 3: each coordinator broadcasts its component to its inputs.
    u = Vec::Zero(K_.Pu.cols());
    for (Index i = 0; i < r; ++i)
      for (Index j : in_[i]) {
        u(j) += K_.Pu(i, j) * ubar(i);
        if (trace) sub_links_.insert({in_owner_[j], i});
      }
    if (rec) {
      rec->ybar = ybar;
      rec->ubar = ubar;
      rec->u = u;
    }
  }

  void finish(SimTrace& trace) const {
    trace.output_sets = out_;
    trace.input_sets = in_;
    trace.subsystem_links = static_cast<Index>(sub_links_.size());
    trace.coordinator_links = static_cast<Index>(coord_links_.size());
  }

 private:
  const HierarchicalController& K_;
  std::vector<std::vector<Index>> out_, in_;
  std::vector<Index> out_owner_, in_owner_;
  std::set<std::pair<Index, Index>> sub_links_, coord_links_;
};

}  // namespace

SimResult run_hier_simulation(const GeneralizedPlant& G, const HierarchicalController& K, const SimOptions& o) {
  G.check();
  require(K.Pu.cols() == G.nu() && K.Py.cols() == G.ny() && K.Kt.inputs() == K.Py.rows() &&
              K.Kt.outputs() == K.Pu.rows(),
          ErrorKind::DimensionMismatch, "controller does not match the plant");
  require(o.horizon > 0.0 && o.dt >= 0.0, ErrorKind::InvalidArgument, "horizon must be positive");
  const StateSpace cl = lft_lower(G, K.full());
  const Index n = G.n(), nk = K.Kt.states(), N = n + nk;

  const CVec eig = eigenvalues(cl.A);
  const double fastest = eig.size() ? eig.cwiseAbs().maxCoeff() : 0.0;
  const double dt_max = fastest > 0.0 ? 0.1 / fastest : o.horizon;
  double dt = o.dt > 0.0 ? o.dt : dt_max;
  require(dt <= dt_max * (1.0 + 1e-12), ErrorKind::InvalidArgument,
          "dt does not resolve the fastest closed-loop mode");
  const Index steps = static_cast<Index>(std::ceil(o.horizon / dt - 1e-9));
  dt = o.horizon / static_cast<double>(steps);

  Vec s0 = Vec::Zero(N);
  if (o.disturbance == DisturbanceKind::Impulse) {
    require(o.impulse_channel >= 0 && o.impulse_channel < G.m1(), ErrorKind::InvalidArgument,
            "impulse channel out of range");
    s0.head(n) = G.B1.col(o.impulse_channel);
  }
  Rng rng(o.seed);
  auto disturbance = [&]() -> Vec {
    if (o.disturbance != DisturbanceKind::Noise) return Vec::Zero(G.m1());
    Vec w(G.m1());
    const double scale = std::sqrt(o.noise_intensity / dt);
    for (Index i = 0; i < w.size(); ++i) w(i) = scale * rng.normal();
    return w;
  };

  Coordinators coord(G, K);
  SimResult res;
  res.dt = dt;
  res.trace.logs.resize(K.Pu.rows());
  res.t.resize(steps + 1);
  res.x_staged.resize(N, steps + 1);
  res.x_monolithic.resize(N, steps + 1);
  res.z.resize(G.p1(), steps + 1);

  auto staged_rhs = [&](const Vec& s, const Vec& w, StepRecord* rec, SimTrace* tr, Vec* zout) {
    const Vec x = s.head(n), xk = s.tail(nk);
    const Vec y = G.C2 * x + G.D21 * w;
    Vec u, dxk;
    coord.evaluate(y, xk, u, dxk, rec, tr);
    if (zout) *zout = G.C1 * x + G.D12 * u;
    Vec ds(N);
    ds.head(n) = G.A * x + G.B1 * w + G.B2 * u;
    ds.tail(nk) = dxk;
    return ds;
  };
  auto mono_rhs = [&](const Vec& s, const Vec& w) -> Vec { return cl.A * s + cl.B * w; };

  Vec ss = s0, sm = s0;
  const double limit = 1e6 * std::max(1.0, s0.norm());
  for (Index k = 0; k <= steps; ++k) {
    const double t = dt * static_cast<double>(k);
    res.t[k] = t;
    res.x_staged.col(k) = ss;
    res.x_monolithic.col(k) = sm;
    const double ref = sm.norm();
    if (ref > 0.0 || ss.norm() > 0.0)
      res.max_relative_error = std::max(res.max_relative_error, (ss - sm).norm() / std::max(ref, 1e-300));
    if (!std::isfinite(ss.norm()) || ss.norm() > limit)
      fail(ErrorKind::UnstableClosedLoop, "trajectory grew beyond 1e6 times its initial size");

    const Vec w = disturbance();
    StepRecord rec;
    rec.t = t;
    Vec z;
    const Vec k1 = staged_rhs(ss, w, &rec, (k == 0 && o.record_logs) ? &res.trace : nullptr, &z);
    res.z.col(k) = z;
    res.trace.steps.push_back(std::move(rec));
    if (k == steps) break;
    const Vec k2 = staged_rhs(ss + 0.5 * dt * k1, w, nullptr, nullptr, nullptr);
    const Vec k3 = staged_rhs(ss + 0.5 * dt * k2, w, nullptr, nullptr, nullptr);
    const Vec k4 = staged_rhs(ss + dt * k3, w, nullptr, nullptr, nullptr);
    ss += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const Vec m1 = mono_rhs(sm, w);
    const Vec m2 = mono_rhs(sm + 0.5 * dt * m1, w);
    const Vec m3 = mono_rhs(sm + 0.5 * dt * m2, w);
    const Vec m4 = mono_rhs(sm + dt * m3, w);
    sm += dt / 6.0 * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
  }
  coord.finish(res.trace);
  res.privacy_ok = privacy_audit(res.trace);
  return res;
}

bool privacy_audit(const SimTrace& trace) {
  for (std::size_t i = 0; i < trace.logs.size(); ++i) {
    const auto& own = trace.output_sets[i];
    for (const Observation& ob : trace.logs[i]) {
      if (ob.kind == Observation::Average) continue;
      if (std::find(own.begin(), own.end(), ob.index) == own.end()) return false;
    }
  }
  return true;
}

void write_trace_jsonl(const std::filesystem::path& path, const SimTrace& trace) {
  std::string text;
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const StepRecord& r = trace.steps[k];
    io::json j{{"step", k},
               {"t", r.t},
               {"ybar", io::vector_to_json(r.ybar)},
               {"ubar", io::vector_to_json(r.ubar)},
               {"u", io::vector_to_json(r.u)}};
    text += j.dump();
    text += '\n';
  }
  io::write_text(path, text);
}

}  // namespace hh2
