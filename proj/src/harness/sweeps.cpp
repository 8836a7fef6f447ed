#include "hh2/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hh2/error.hpp"
#include "hh2/io.hpp"

namespace hh2 {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_timing(const std::string& column) {
  return column.size() > 2 && column.compare(column.size() - 2, 2, "_s") == 0;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string status_of(const Error& e) { return to_string(e.kind()); }

// Runs the synthesis `repeats` times and keeps the median solve time.
SynthesisResult timed(const GeneralizedPlant& G, const ProjectionPair& P, const SynthesisOptions& o, int repeats) {
  std::vector<double> times;
  SynthesisResult res;
  for (int i = 0; i < repeats; ++i) {
    SynthesisOptions oi = o;
    if (i > 0) {
      oi.compute_h2 = false;
      oi.check_closed_loop = false;
      oi.check_hypotheses = false;
    }
    SynthesisResult r = synthesize_hierarchical(G, P, oi);
    times.push_back(r.solve_time);
    if (i == 0) res = std::move(r);
  }
  res.solve_time = median(times);
  return res;
}

}  // namespace

std::string Csv::num(double x) {
  if (!std::isfinite(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string Csv::str(bool include_timing) const {
  std::vector<bool> keep(header.size(), true);
  if (!include_timing)
    for (std::size_t c = 0; c < header.size(); ++c) keep[c] = !is_timing(header[c]);
  auto line = [&](const std::vector<std::string>& cells) {
    std::string s;
    bool first = true;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!keep[c]) continue;
      if (!first) s += ',';
      s += cells[c];
      first = false;
    }
    return s + '\n';
  };
  std::string out = line(header);
  for (const auto& r : rows) out += line(r);
  return out;
}

void Csv::write(const std::filesystem::path& path) const { io::write_text(path, str(true)); }

ClusterPartition planted_partition(const std::vector<int>& block_of) { return ClusterPartition::from_labels(block_of); }

SpectralFactors canonical_factors(const GeneralizedPlant& G, const Tolerances& tol, SynthesisResult* unconstrained) {
  SynthesisOptions so;
  so.tol = tol;
  SynthesisResult unc = synthesize_unconstrained(G, so);
  const YoulaData yd = youla_data(G, unc.F2, unc.L2, tol);
  if (unconstrained) *unconstrained = std::move(unc);
  return spectral_factors(yd, tol);
}

Experiment prepare_experiment(const ExperimentConfig& config) {
  Experiment ex;
  if (config.plant_file) {
    ex.plant = io::plant_from_json(io::read_json(*config.plant_file), config.plant_file->parent_path());
  } else {
    ConsensusNetwork net = generate_consensus_network(config.network, config.c1_scale, config.b1_scale);
    ex.plant = std::move(net.plant);
    ex.planted = std::move(net.block_of);
    ex.warnings = std::move(net.warnings);
  }
  const GeneralizedPlant& G = ex.plant;
  Rng rng(config.seed);
  switch (config.partition_source) {
    case PartitionSource::Planted:
      require(!ex.planted.empty(), ErrorKind::InvalidArgument, "a planted partition needs a generated network");
      ex.partition = planted_partition(ex.planted);
      break;
    case PartitionSource::Explicit:
      ex.partition = io::partition_from_json(io::read_json(*config.partition_file));
      break;
    case PartitionSource::Designed: {
      KMeansOptions km;
      km.restarts = config.sweep.kmeans_restarts;
      km.max_iterations = config.tol.kmeans_max_iterations;
      km.relative_tolerance = config.tol.kmeans_relative_tolerance;
      ex.partition = design_clusters(canonical_factors(G, config.tol), WeightVectors::ones(G.nu(), G.ny()),
                                     config.partition_r, rng, km, config.tol);
      break;
    }
  }
  if (ex.partition.subsystems.empty() && G.nu() == G.ns() && G.ny() == G.ns() &&
      ex.partition.inputs == ex.partition.outputs)
    ex.partition.subsystems = ex.partition.inputs;
  ex.partition.validate(G.nu(), G.ny(), ex.partition.subsystems.empty() ? 0 : G.ns());
  ex.weights = config.weights == WeightPolicy::Feasible ? feasible_weights(G, ex.partition, 50, rng, config.tol).weights
                                                      : WeightVectors::ones(G.nu(), G.ny());
  ex.projection = build_projection(ex.partition, ex.weights);
  return ex;
}

std::vector<KappaRow> sweep_kappa(const GeneralizedPlant& G, const ProjectionPair& P, const std::vector<Index>& kappas,
                                  ApproxMethod method, int timing_repeats, const Tolerances& tol) {
  std::vector<KappaRow> rows(kappas.size() + 1);
  SynthesisOptions so;
  so.tol = tol;
  KappaRow& ex = rows[0];
  ex.backend = "exact";
  ex.kappa = ex.kappa_used = G.n();
  double h2_exact = kNaN;
  try {
    const SynthesisResult r = timed(G, P, so, timing_repeats);
    h2_exact = ex.h2 = r.h2_value;
    ex.h2_ratio = 1.0;
    ex.stabilizing = true;
    ex.solve_time_s = r.solve_time;
  } catch (const Error& e) {
    ex.status = status_of(e);
    ex.h2 = ex.h2_ratio = kNaN;
  }

#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(kappas.size()); ++i) {
    KappaRow& row = rows[i + 1];
    row.backend = "approx";
    row.kappa = kappas[i];
    SynthesisOptions o = so;
    o.backend = AreBackend::Approx;
    o.kappa = kappas[i];
    o.method = method;
    try {
      const SynthesisResult r = timed(G, P, o, timing_repeats);
      row.kappa_used = r.approx_x->kappa;
      row.h2 = r.h2_value;
      row.h2_ratio = r.h2_value / h2_exact;
      row.epsilon = r.approx_x->epsilon;
      if (r.approx_x->epsilon && r.approx_x->E_kappa_norm)
        row.epsilon_bound = *r.approx_x->epsilon * *r.approx_x->E_kappa_norm;
      row.stabilizing = r.approx_x->stabilizing && r.approx_y->stabilizing;
      row.solve_time_s = r.solve_time;
    } catch (const Error& e) {
      row.status = status_of(e);
      row.h2 = row.h2_ratio = kNaN;
      row.solve_time_s = kNaN;
    }
  }
  return rows;
}

Csv kappa_csv(const std::vector<KappaRow>& rows) {
  Csv csv;
  csv.header = {"backend", "kappa",         "kappa_used",  "h2_norm", "h2_ratio",
                "epsilon", "epsilon_bound", "stabilizing", "status",  "solve_time_s"};
  for (const auto& r : rows)
    csv.rows.push_back({r.backend, std::to_string(r.kappa), std::to_string(r.kappa_used), Csv::num(r.h2),
                        Csv::num(r.h2_ratio), Csv::num(r.epsilon), Csv::num(r.epsilon_bound),
                        r.stabilizing ? "1" : "0", r.status, Csv::num(r.solve_time_s)});
  return csv;
}

std::vector<SizeRow> sweep_size(const ExperimentConfig& config) {
  const SweepConfig& sw = config.sweep;
  std::vector<SizeRow> rows;
  // Timing rows run one after another so that they do not compete for cores.
  for (Index n : sw.n) {
    SizeRow row;
    row.n = n;
    NetworkSpec spec = NetworkSpec::equal_blocks(n, sw.size_blocks);
    spec.topology = sw.size_topology;
    const double b = static_cast<double>(n) / sw.size_blocks;
    spec.p_in = std::min(1.0, sw.size_degree / std::max(1.0, b - 1.0));
    spec.p_out = std::min(1.0, sw.size_inter_edges / (b * b));
    spec.a_lo = config.network.a_lo;
    spec.a_hi = config.network.a_hi;
    spec.lattice_degree = static_cast<Index>(sw.size_degree);
    spec.inter_block_edges = sw.size_inter_edges;
    spec.seed = config.network.seed;
    const ConsensusNetwork net = generate_consensus_network(spec, sw.size_c1_scale, sw.size_b1_scale);
    const ProjectionPair P =
        build_projection(planted_partition(net.block_of), WeightVectors::ones(net.plant.nu(), net.plant.ny()));
    const bool small = n <= sw.h2_cap_n;

    SynthesisOptions o;
    o.tol = config.tol;
    o.compute_h2 = small;
    o.check_closed_loop = small;
    o.backend = AreBackend::Approx;
    o.kappa = sw.size_kappa;
    o.method = sw.size_method;
    try {
      const SynthesisResult r = timed(net.plant, P, o, sw.timing_repeats);
      if (small) row.h2_approx = r.h2_value;
      row.time_approx_s = r.solve_time;
    } catch (const Error& e) {
      row.status_approx = status_of(e);
    }
    if (n <= sw.exact_time_cap_n) {
      SynthesisOptions oe;
      oe.tol = config.tol;
      oe.compute_h2 = small;
      oe.check_closed_loop = small;
      try {
        const SynthesisResult r = timed(net.plant, P, oe, sw.exact_size_repeats);
        if (small) row.h2_exact = r.h2_value;
        row.time_exact_s = r.solve_time;
      } catch (const Error& e) {
        row.status_exact = status_of(e);
      }
    } else {
      row.status_exact = "skipped";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Csv size_csv(const std::vector<SizeRow>& rows) {
  Csv csv;
  csv.header = {"n", "h2_exact", "h2_approx", "status_exact", "status_approx", "time_exact_s", "time_approx_s"};
  for (const auto& r : rows)
    csv.rows.push_back({std::to_string(r.n), Csv::num(r.h2_exact), Csv::num(r.h2_approx), r.status_exact,
                        r.status_approx, Csv::num(r.time_exact_s), Csv::num(r.time_approx_s)});
  return csv;
}

std::optional<double> loglog_slope(const std::vector<SizeRow>& rows, bool exact) {
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    const auto& t = exact ? r.time_exact_s : r.time_approx_s;
    if (t && *t > 0.0) {
      xs.push_back(std::log(static_cast<double>(r.n)));
      ys.push_back(std::log(*t));
    }
  }
  if (xs.size() < 2) return std::nullopt;
  const double k = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

std::vector<RRow> sweep_r(const GeneralizedPlant& G, const std::vector<int>& planted, const WeightVectors& weights,
                          const std::vector<Index>& r_list, std::uint64_t seed, const KMeansOptions& kmeans,
                          const GapOptions& options) {
  SynthesisResult unc;
  const SpectralFactors sf = canonical_factors(G, options.tol, &unc);
  std::vector<RRow> rows(r_list.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(r_list.size()); ++i) {
    RRow& row = rows[i];
    row.r = r_list[i];
    try {
      Rng rng(seed + static_cast<std::uint64_t>(row.r));
      const ClusterPartition part = design_clusters(sf, weights, row.r, rng, kmeans, options.tol);
      row.report = gap_report(G, build_projection(part, weights), options, &unc);
      if (!planted.empty())
        row.recovered = same_partition(part.input_labels(G.nu()), planted) &&
                        same_partition(part.output_labels(G.ny()), planted);
    } catch (const Error& e) {
      row.status = status_of(e);
      row.report.J1_star = row.report.J2_star = kNaN;
    }
  }
  return rows;
}

Csv r_csv(const std::vector<RRow>& rows) {
  Csv csv;
  csv.header = {"r",  "J1", "J2",        "ratio",       "xi_u",     "xi_y",          "xi",
                "eps1", "eps2", "bound_rhs", "bound_holds", "partition_recovery", "status"};
  for (const auto& r : rows) {
    const GapReport& g = r.report;
    const bool ok = r.status == "ok";
    csv.rows.push_back({std::to_string(r.r), Csv::num(g.J1_star), Csv::num(g.J2_star),
                        ok ? Csv::num(g.ratio()) : "", ok ? Csv::num(g.xi_u) : "", ok ? Csv::num(g.xi_y) : "",
                        ok ? Csv::num(g.xi) : "", ok ? Csv::num(g.eps1) : "", ok ? Csv::num(g.eps2) : "",
                        ok ? Csv::num(g.bound_rhs) : "", ok ? (g.bound_holds() ? "1" : "0") : "",
                        r.recovered ? (*r.recovered ? "1" : "0") : "", r.status});
  }
  return csv;
}

double recovery_rate(const NetworkSpec& spec, double c1_scale, double b1_scale, int seeds, const KMeansOptions& kmeans,
                     const Tolerances& tol) {
  require(seeds >= 1, ErrorKind::InvalidArgument, "need at least one seed");
  std::vector<char> hit(seeds, 0);
#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < seeds; ++s) {
    NetworkSpec sp = spec;
    sp.seed = spec.seed + static_cast<std::uint64_t>(s);
    try {
      const ConsensusNetwork net = generate_consensus_network(sp, c1_scale, b1_scale);
      const SpectralFactors sf = canonical_factors(net.plant, tol);
      Rng rng(sp.seed);
      const Index r = static_cast<Index>(spec.block_sizes.size());
      const ClusterPartition p =
          design_clusters(sf, WeightVectors::ones(net.plant.nu(), net.plant.ny()), r, rng, kmeans, tol);
      hit[s] = same_partition(p.input_labels(net.plant.nu()), net.block_of) &&
               same_partition(p.output_labels(net.plant.ny()), net.block_of);
    } catch (const Error&) {
      hit[s] = 0;
    }
  }
  return static_cast<double>(std::count(hit.begin(), hit.end(), 1)) / seeds;
}

}  // namespace hh2
