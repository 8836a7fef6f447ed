// Command line front end. Every run writes manifest.json into the output
// directory, also when the command fails.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "hh2/config.hpp"
#include "hh2/error.hpp"
#include "hh2/gapdesign.hpp"
#include "hh2/hamiltonian.hpp"
#include "hh2/io.hpp"
#include "hh2/kernels.hpp"
#include "hh2/network.hpp"
#include "hh2/simulate.hpp"
#include "hh2/sweeps.hpp"
#include "hh2/synthesis.hpp"

#ifndef HH2_VERSION
#define HH2_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using hh2::io::json;

namespace {

struct Global {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string tol_profile;
  int threads = 0;
  std::string plant;
};

struct Run {
  hh2::ExperimentConfig config;
  fs::path out;
  json outputs = json::array();
  json summary = json::object();

  fs::path file(const std::string& name) {
    outputs.push_back(name);
    return out / name;
  }
};

hh2::ExperimentConfig resolve_config(const Global& g) {
  hh2::ExperimentConfig c = g.config.empty() ? hh2::ExperimentConfig{} : hh2::load_config(g.config);
  if (g.seed) {
    c.seed = *g.seed;
    c.network.seed = *g.seed;
  }
  if (!g.tol_profile.empty()) {
    c.tol = hh2::Tolerances::profile(g.tol_profile);
    c.tolerance_profile = g.tol_profile;
  }
  if (!g.out.empty()) c.output_dir = g.out;
  if (!g.plant.empty()) c.plant_file = fs::path(g.plant);
  c.validate();
  return c;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

json versions() {
  return {{"hh2", HH2_VERSION},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"cli11", CLI11_VERSION},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"compiler", __VERSION__},
          {"openmp_threads", hh2::kernels::max_threads()}};
}

hh2::SynthesisOptions synthesis_options(const hh2::ExperimentConfig& c) {
  hh2::SynthesisOptions o;
  o.tol = c.tol;
  o.backend = c.backend;
  o.kappa = c.kappa;
  o.method = c.method;
  return o;
}

hh2::KMeansOptions kmeans_options(const hh2::ExperimentConfig& c) {
  hh2::KMeansOptions k;
  k.restarts = c.sweep.kmeans_restarts;
  k.max_iterations = c.tol.kmeans_max_iterations;
  k.relative_tolerance = c.tol.kmeans_relative_tolerance;
  return k;
}

}  // namespace

namespace cmd {

struct GenNetwork {
  hh2::Index nodes = 100, blocks = 4;
  double p_in = 0.5, p_out = 0.01, a_lo = 5.0, a_hi = 10.0;
  std::string topology;
  bool market = false;
};

void gen_network(Run& run, const GenNetwork& a, const CLI::App& sub) {
  hh2::ExperimentConfig& c = run.config;
  hh2::NetworkSpec spec = c.network;
  if (sub.count("--nodes") || sub.count("--blocks")) {
    const auto eq = hh2::NetworkSpec::equal_blocks(a.nodes, a.blocks);
    spec.n_s = eq.n_s;
    spec.block_sizes = eq.block_sizes;
  }
  if (sub.count("--p-in")) spec.p_in = a.p_in;
  if (sub.count("--p-out")) spec.p_out = a.p_out;
  if (sub.count("--weight-lo")) spec.a_lo = a.a_lo;
  if (sub.count("--weight-hi")) spec.a_hi = a.a_hi;
  if (!a.topology.empty()) spec.topology = hh2::topology_from_string(a.topology);
  const hh2::ConsensusNetwork net = hh2::generate_consensus_network(spec, c.c1_scale, c.b1_scale);
  hh2::io::write_json(run.file("plant.json"), hh2::io::plant_to_json(net.plant, a.market ? run.out : fs::path{}));
  hh2::io::write_json(run.file("partition_planted.json"), {{"labels", net.block_of}});
  run.summary = {{"nodes", spec.n_s}, {"edges", net.edges}, {"topology", hh2::to_string(spec.topology)},
                 {"warnings", net.warnings}};
  for (const auto& w : net.warnings) std::cerr << "warning: " << w << "\n";
}

void validate(Run& run) {
  const hh2::Experiment ex = hh2::prepare_experiment(run.config);
  const hh2::AssumptionReport rep = hh2::validate_assumptions(ex.plant, run.config.tol);
  hh2::io::write_json(run.file("assumptions.json"), hh2::io::assumptions_to_json(rep));
  run.summary = hh2::io::assumptions_to_json(rep);
  if (!rep.all()) hh2::fail(hh2::ErrorKind::HypothesisFailure, "plant violates the standing assumptions");
}

void synth(Run& run) {
  const hh2::Experiment ex = hh2::prepare_experiment(run.config);
  const hh2::SynthesisResult res = hh2::synthesize_hierarchical(ex.plant, ex.projection, synthesis_options(run.config));
  hh2::io::write_json(run.file("controller.json"), hh2::io::controller_to_json(res.controller));
  hh2::io::write_json(run.file("partition.json"), hh2::io::partition_to_json(ex.partition));
  hh2::io::write_json(run.file("weights.json"), hh2::io::weights_to_json(ex.weights));
  json s = hh2::io::synthesis_to_json(res);
  s["links"] = {{"hierarchical", hh2::communication_links(ex.partition, ex.plant.ns()).hierarchical},
                {"dense", hh2::communication_links(ex.partition, ex.plant.ns()).dense}};
  hh2::io::write_json(run.file("synth.json"), s);
  run.summary = s;
}

void approx(Run& run, bool compare) {
  const hh2::ExperimentConfig& c = run.config;
  const hh2::Experiment ex = hh2::prepare_experiment(c);
  const hh2::GeneralizedPlant& G = ex.plant;
  const hh2::ProjectionPair& P = ex.projection;
  const hh2::Mat Bt = G.B2 * P.Pu.transpose();
  const hh2::Mat R1 = P.Pu * G.D12.transpose() * G.D12 * P.Pu.transpose();
  hh2::HamiltonianSystem hs = c.method == hh2::ApproxMethod::Dense
                                  ? hh2::build_hamiltonian(G.A, Bt, G.C1, R1)
                                  : hh2::build_hamiltonian_structured(G.A.sparseView(), Bt, G.C1.sparseView(), R1);
  hs.B1 = G.B1;
  hh2::ApproxOptions ao;
  ao.tol = c.tol;
  const hh2::ApproxAreSolution sol = hh2::approx_are(hs, c.kappa, c.method, ao);
  json s = hh2::io::approx_to_json(sol);
  if (sol.epsilon && sol.E_kappa_norm) s["error_bound"] = *sol.epsilon * *sol.E_kappa_norm;
  if (compare) {
    const hh2::AreSolution ex_sol = hh2::solve_are(G.A, Bt, G.C1, R1, c.tol);
    const hh2::Mat M = Bt * R1.llt().solve(Bt.transpose());
    s["exact_error_norm"] = hh2::exact_error_norm(ex_sol.X, sol.Xbar, G.A, M, G.B1, c.tol);
    s["frobenius_error"] = (ex_sol.X.matrix() - sol.Xbar.matrix()).norm();
  }
  hh2::io::write_json(run.file("approx.json"), s);
  run.summary = s;
}

void gap(Run& run, bool doubly_projected) {
  const hh2::Experiment ex = hh2::prepare_experiment(run.config);
  hh2::GapOptions go;
  go.tol = run.config.tol;
  go.xi_formula = run.config.xi_formula;
  go.doubly_projected_check = doubly_projected;
  const hh2::GapReport rep = hh2::gap_report(ex.plant, ex.projection, go);
  hh2::io::write_json(run.file("gap.json"), hh2::io::gap_to_json(rep));
  run.summary = hh2::io::gap_to_json(rep);
}

void design_clusters(Run& run, hh2::Index r) {
  hh2::ExperimentConfig c = run.config;
  c.partition_source = hh2::PartitionSource::Designed;
  if (r > 0) c.partition_r = r;
  const hh2::Experiment ex = hh2::prepare_experiment(c);
  hh2::io::write_json(run.file("partition.json"), hh2::io::partition_to_json(ex.partition));
  run.summary = {{"r", ex.partition.r()}};
  if (!ex.planted.empty())
    run.summary["recovered_planted"] = hh2::same_partition(ex.partition.input_labels(ex.plant.nu()), ex.planted);
}

void simulate(Run& run, const std::string& controller_file) {
  const hh2::ExperimentConfig& c = run.config;
  const hh2::Experiment ex = hh2::prepare_experiment(c);
  hh2::HierarchicalController K;
  if (!controller_file.empty()) {
    K = hh2::io::controller_from_json(hh2::io::read_json(controller_file));
  } else {
    K = hh2::synthesize_hierarchical(ex.plant, ex.projection, synthesis_options(c)).controller;
    hh2::io::write_json(run.file("controller.json"), hh2::io::controller_to_json(K));
  }
  const hh2::SimResult sim = hh2::run_hier_simulation(ex.plant, K, c.simulation);
  hh2::write_trace_jsonl(run.file("trace.jsonl"), sim.trace);
  double energy = 0.0;
  for (hh2::Index k = 0; k + 1 < sim.z.cols(); ++k) energy += sim.z.col(k).squaredNorm() * sim.dt;
  const hh2::Index ns = ex.plant.ns(), r = K.Pu.rows();
  run.summary = {{"steps", sim.t.size() - 1},
                 {"dt", sim.dt},
                 {"max_relative_error", sim.max_relative_error},
                 {"privacy_ok", sim.privacy_ok},
                 {"links_used", sim.trace.links_used()},
                 {"links_formula", ns + r * (r - 1) / 2},
                 {"z_energy", energy}};
  hh2::io::write_json(run.file("sim.json"), run.summary);
  if (!sim.privacy_ok) hh2::fail(hh2::ErrorKind::UnstableClosedLoop, "privacy audit failed");
  if (sim.max_relative_error > 1e-9)
    hh2::fail(hh2::ErrorKind::UnstableClosedLoop, "staged and monolithic simulations disagree");
}

void sweep_kappa(Run& run) {
  const hh2::ExperimentConfig& c = run.config;
  const hh2::Experiment ex = hh2::prepare_experiment(c);
  const auto rows =
      hh2::sweep_kappa(ex.plant, ex.projection, c.sweep.kappa, c.sweep.kappa_method, c.sweep.timing_repeats, c.tol);
  hh2::kappa_csv(rows).write(run.file("kappa_sweep.csv"));
  run.summary = {{"rows", rows.size()}};
}

void sweep_size(Run& run) {
  const auto rows = hh2::sweep_size(run.config);
  hh2::size_csv(rows).write(run.file("size_sweep.csv"));
  const auto sa = hh2::loglog_slope(rows, false), se = hh2::loglog_slope(rows, true);
  run.summary = {{"rows", rows.size()},
                 {"slope_approx", sa ? json(*sa) : json(nullptr)},
                 {"slope_exact", se ? json(*se) : json(nullptr)}};
}

void sweep_r(Run& run, bool recovery) {
  const hh2::ExperimentConfig& c = run.config;
  const hh2::Experiment ex = hh2::prepare_experiment(c);
  hh2::GapOptions go;
  go.tol = c.tol;
  go.xi_formula = c.xi_formula;
  const auto rows = hh2::sweep_r(ex.plant, ex.planted, ex.weights, c.sweep.r, c.seed, kmeans_options(c), go);
  hh2::r_csv(rows).write(run.file("r_sweep.csv"));
  run.summary = {{"rows", rows.size()}};
  if (recovery && !ex.planted.empty())
    run.summary["recovery_rate"] =
        hh2::recovery_rate(c.network, c.c1_scale, c.b1_scale, c.sweep.recovery_seeds, kmeans_options(c), c.tol);
}

}  // namespace cmd

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical H2 control toolkit"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--config", g.config, "experiment configuration (JSON)")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "output directory");
  app.add_option("--seed", g.seed, "random seed for generated data");
  app.add_option("--tol-profile", g.tol_profile, "tolerance profile")->check(CLI::IsMember({"default", "strict"}));
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--plant", g.plant, "plant file instead of a generated network")->check(CLI::ExistingFile);

  cmd::GenNetwork gn;
  auto* gen = app.add_subcommand("gen-network", "generate a clustered consensus network");
  gen->add_option("--nodes", gn.nodes, "number of nodes");
  gen->add_option("--blocks", gn.blocks, "number of planted blocks");
  gen->add_option("--p-in", gn.p_in, "edge probability inside a block");
  gen->add_option("--p-out", gn.p_out, "edge probability across blocks");
  gen->add_option("--weight-lo", gn.a_lo, "lowest edge weight");
  gen->add_option("--weight-hi", gn.a_hi, "highest edge weight");
  gen->add_option("--topology", gn.topology, "sbm or ring_lattice");
  gen->add_flag("--market", gn.market, "write the matrices as Matrix Market files");

  auto* val = app.add_subcommand("validate", "check the standing assumptions on the plant");
  auto* syn = app.add_subcommand("synth", "synthesize the hierarchical controller");
  std::string backend;
  hh2::Index kappa = 0;
  std::string method;
  for (auto* s : {syn}) {
    s->add_option("--backend", backend, "exact or approx")->check(CLI::IsMember({"exact", "approx"}));
    s->add_option("--kappa", kappa, "retained eigenvalues for the approx backend");
    s->add_option("--method", method, "dense or krylov")->check(CLI::IsMember({"dense", "krylov"}));
  }
  auto* apx = app.add_subcommand("approx", "truncated Riccati solution and its diagnostics");
  bool compare = false;
  apx->add_option("--kappa", kappa, "retained eigenvalues");
  apx->add_option("--method", method, "dense or krylov")->check(CLI::IsMember({"dense", "krylov"}));
  apx->add_flag("--compare", compare, "also solve exactly and report the errors");
  auto* gp = app.add_subcommand("gap", "optimality gap report");
  bool doubly_projected = false;
  gp->add_flag("--doubly-projected", doubly_projected, "also check the doubly projected design");
  auto* dc = app.add_subcommand("design-clusters", "k-means design of the clusters");
  hh2::Index r = 0;
  dc->add_option("--r", r, "number of clusters");
  auto* sim = app.add_subcommand("simulate", "run the three-step hierarchical schedule");
  std::string controller_file;
  sim->add_option("--controller", controller_file, "controller file from synth")->check(CLI::ExistingFile);
  auto* sk = app.add_subcommand("sweep-kappa", "h2 and timing against kappa");
  auto* ss = app.add_subcommand("sweep-size", "timing against network size");
  auto* sr = app.add_subcommand("sweep-r", "optimality gap against the number of clusters");
  bool recovery = false;
  sr->add_flag("--recovery", recovery, "also measure planted-partition recovery over seeds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  hh2::kernels::set_threads(g.threads);

  const auto start = std::chrono::steady_clock::now();
  Run run;
  std::string command = app.get_subcommands().front()->get_name();
  int code = 0;
  json error = nullptr;
  try {
    run.config = resolve_config(g);
    if (!backend.empty()) run.config.backend = backend == "approx" ? hh2::AreBackend::Approx : hh2::AreBackend::Exact;
    if (kappa > 0) run.config.kappa = kappa;
    if (!method.empty()) run.config.method = method == "krylov" ? hh2::ApproxMethod::Krylov : hh2::ApproxMethod::Dense;
    run.out = run.config.output_dir;
    fs::create_directories(run.out);
    if (*gen) cmd::gen_network(run, gn, *gen);
    else if (*val) cmd::validate(run);
    else if (*syn) cmd::synth(run);
    else if (*apx) cmd::approx(run, compare);
    else if (*gp) cmd::gap(run, doubly_projected);
    else if (*dc) cmd::design_clusters(run, r);
    else if (*sim) cmd::simulate(run, controller_file);
    else if (*sk) cmd::sweep_kappa(run);
    else if (*ss) cmd::sweep_size(run);
    else if (*sr) cmd::sweep_r(run, recovery);
  } catch (const hh2::Error& e) {
    code = hh2::is_precondition(e.kind()) ? 2 : 3;
    error = {{"kind", hh2::to_string(e.kind())}, {"message", e.what()}};
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    code = 3;
    error = {{"kind", "Internal"}, {"message", e.what()}};
    std::cerr << "error: " << e.what() << "\n";
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (run.out.empty()) run.out = g.out.empty() ? fs::path("out") : fs::path(g.out);
  json manifest{{"command", command},
                {"config_hash", run.config.hash()},
                {"config", run.config.to_json()},
                {"seed", run.config.seed},
                {"versions", versions()},
                {"started_at", utc_now()},
                {"wall_clock_s", wall},
                {"exit_code", code},
                {"outputs", run.outputs},
                {"summary", run.summary},
                {"error", error}};
  try {
    hh2::io::write_json(run.out / "manifest.json", manifest);
  } catch (const std::exception& e) {
    std::cerr << "error: cannot write manifest: " << e.what() << "\n";
    if (code == 0) code = 3;
  }
  if (code == 0) std::cout << run.summary.dump(2) << "\n";
  return code;
}
