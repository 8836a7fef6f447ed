#include "hh2/config.hpp"

#include <map>

#include "hh2/error.hpp"

namespace hh2 {

namespace fs = std::filesystem;
using io::json;

const char* to_string(PartitionSource s) {
  switch (s) {
    case PartitionSource::Designed: return "designed";
    case PartitionSource::Explicit: return "explicit";
    default: return "planted";
  }
}

const char* to_string(WeightPolicy w) { return w == WeightPolicy::Feasible ? "feasible" : "ones"; }

namespace {

PartitionSource partition_source_from(const std::string& s) {
  if (s == "planted") return PartitionSource::Planted;
  if (s == "designed") return PartitionSource::Designed;
  if (s == "explicit") return PartitionSource::Explicit;
  fail(ErrorKind::InvalidArgument, "unknown partition source '" + s + "'");
}

WeightPolicy weight_policy_from(const std::string& s) {
  if (s == "ones") return WeightPolicy::Ones;
  // "lemma7" is an older name for the same policy.
  if (s == "feasible" || s == "lemma7") return WeightPolicy::Feasible;
  fail(ErrorKind::InvalidArgument, "unknown weight policy '" + s + "'");
}

ApproxMethod method_from(const std::string& s) {
  if (s == "dense") return ApproxMethod::Dense;
  if (s == "krylov") return ApproxMethod::Krylov;
  fail(ErrorKind::InvalidArgument, "unknown approximation method '" + s + "'");
}

AreBackend backend_from(const std::string& s) {
  if (s == "exact") return AreBackend::Exact;
  if (s == "approx") return AreBackend::Approx;
  fail(ErrorKind::InvalidArgument, "unknown backend '" + s + "'");
}

DisturbanceKind disturbance_from(const std::string& s) {
  if (s == "none") return DisturbanceKind::None;
  if (s == "impulse") return DisturbanceKind::Impulse;
  if (s == "noise") return DisturbanceKind::Noise;
  fail(ErrorKind::InvalidArgument, "unknown disturbance '" + s + "'");
}

const char* to_string(DisturbanceKind d) {
  switch (d) {
    case DisturbanceKind::None: return "none";
    case DisturbanceKind::Noise: return "noise";
    default: return "impulse";
  }
}

template <class T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::map<std::string, double Tolerances::*> real_fields() {
  return {{"hurwitz_margin", &Tolerances::hurwitz_margin},
          {"unstable_threshold", &Tolerances::unstable_threshold},
          {"imaginary_axis", &Tolerances::imaginary_axis},
          {"z1_condition", &Tolerances::z1_condition},
          {"r_condition", &Tolerances::r_condition},
          {"pencil_condition", &Tolerances::pencil_condition},
          {"symmetry", &Tolerances::symmetry},
          {"psd_floor", &Tolerances::psd_floor},
          {"pbh_rank", &Tolerances::pbh_rank},
          {"hinf_relative", &Tolerances::hinf_relative},
          {"membership", &Tolerances::membership},
          {"a4", &Tolerances::a4},
          {"stability_test_psd", &Tolerances::stability_test_psd},
          {"krylov_residual", &Tolerances::krylov_residual},
          {"kmeans_relative_tolerance", &Tolerances::kmeans_relative_tolerance}};
}

std::map<std::string, int Tolerances::*> int_fields() {
  return {{"krylov_max_restarts", &Tolerances::krylov_max_restarts},
          {"kmeans_max_iterations", &Tolerances::kmeans_max_iterations}};
}

fs::path resolve(const fs::path& p, const fs::path& base) { return p.is_absolute() || base.empty() ? p : base / p; }

}  // namespace

Tolerances tolerances_from_json(const json& j) {
  Tolerances t = Tolerances::profile(j.value("profile", std::string("default")));
  const auto reals = real_fields();
  const auto ints = int_fields();
  for (const auto& [key, value] : j.items()) {
    if (key == "profile") continue;
    if (auto it = reals.find(key); it != reals.end())
      t.*(it->second) = value.get<double>();
    else if (auto jt = ints.find(key); jt != ints.end())
      t.*(jt->second) = value.get<int>();
    else
      fail(ErrorKind::InvalidArgument, "unknown tolerance '" + key + "'");
  }
  return t;
}

json tolerances_to_json(const Tolerances& t) {
  json j;
  for (const auto& [key, field] : real_fields()) j[key] = t.*field;
  for (const auto& [key, field] : int_fields()) j[key] = t.*field;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j, const fs::path& base) {
  require(j.is_object(), ErrorKind::InvalidArgument, "config must be a JSON object");
  for (const char* key : {"network", "partition", "backend", "sweep", "tolerances", "simulation"})
    require(!j.contains(key) || j.at(key).is_object(), ErrorKind::InvalidArgument,
            std::string("config section '") + key + "' must be an object");
  ExperimentConfig c;
  if (j.contains("network")) {
    const json& n = j.at("network");
    if (n.contains("nodes")) {
      const Index nodes = n.at("nodes").get<Index>();
      const Index blocks = n.value("blocks", Index{4});
      const NetworkSpec eq = NetworkSpec::equal_blocks(nodes, blocks);
      c.network.n_s = eq.n_s;
      c.network.block_sizes = eq.block_sizes;
    }
    if (n.contains("block_sizes")) {
      c.network.block_sizes = n.at("block_sizes").get<std::vector<Index>>();
      Index total = 0;
      for (Index s : c.network.block_sizes) total += s;
      c.network.n_s = total;
    }
    maybe(n, "p_in", c.network.p_in);
    maybe(n, "p_out", c.network.p_out);
    if (n.contains("weight_range")) {
      c.network.a_lo = n.at("weight_range").at(0).get<double>();
      c.network.a_hi = n.at("weight_range").at(1).get<double>();
    }
    if (n.contains("topology")) c.network.topology = topology_from_string(n.at("topology").get<std::string>());
    maybe(n, "lattice_degree", c.network.lattice_degree);
    maybe(n, "inter_block_edges", c.network.inter_block_edges);
    maybe(n, "c1_scale", c.c1_scale);
    maybe(n, "b1_scale", c.b1_scale);
  }
  maybe(j, "seed", c.seed);
  c.network.seed = c.seed;
  if (j.contains("network") && j.at("network").contains("seed")) c.network.seed = j["network"]["seed"].get<std::uint64_t>();
  if (j.contains("plant_file")) c.plant_file = resolve(j.at("plant_file").get<std::string>(), base);
  if (j.contains("partition")) {
    const json& p = j.at("partition");
    if (p.contains("source")) c.partition_source = partition_source_from(p.at("source").get<std::string>());
    if (p.contains("file")) c.partition_file = resolve(p.at("file").get<std::string>(), base);
    maybe(p, "r", c.partition_r);
  }
  if (j.contains("weights")) c.weights = weight_policy_from(j.at("weights").get<std::string>());
  if (j.contains("backend")) {
    const json& b = j.at("backend");
    if (b.contains("type")) c.backend = backend_from(b.at("type").get<std::string>());
    maybe(b, "kappa", c.kappa);
    if (b.contains("method")) c.method = method_from(b.at("method").get<std::string>());
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    maybe(s, "kappa", c.sweep.kappa);
    maybe(s, "r", c.sweep.r);
    maybe(s, "n", c.sweep.n);
    if (s.contains("kappa_method")) c.sweep.kappa_method = method_from(s.at("kappa_method").get<std::string>());
    maybe(s, "size_kappa", c.sweep.size_kappa);
    maybe(s, "size_blocks", c.sweep.size_blocks);
    maybe(s, "size_degree", c.sweep.size_degree);
    maybe(s, "size_inter_edges", c.sweep.size_inter_edges);
    maybe(s, "size_c1_scale", c.sweep.size_c1_scale);
    maybe(s, "size_b1_scale", c.sweep.size_b1_scale);
    if (s.contains("size_topology")) c.sweep.size_topology = topology_from_string(s.at("size_topology").get<std::string>());
    if (s.contains("size_method")) c.sweep.size_method = method_from(s.at("size_method").get<std::string>());
    maybe(s, "timing_repeats", c.sweep.timing_repeats);
    maybe(s, "exact_size_repeats", c.sweep.exact_size_repeats);
    maybe(s, "exact_time_cap_n", c.sweep.exact_time_cap_n);
    maybe(s, "h2_cap_n", c.sweep.h2_cap_n);
    maybe(s, "recovery_seeds", c.sweep.recovery_seeds);
    maybe(s, "kmeans_restarts", c.sweep.kmeans_restarts);
  }
  if (j.contains("tolerances")) {
    c.tol = tolerances_from_json(j.at("tolerances"));
    c.tolerance_profile = j.at("tolerances").value("profile", std::string("default"));
  }
  if (j.contains("gap") && j.at("gap").contains("xi_formula"))
    c.xi_formula = xi_formula_from_string(j.at("gap").at("xi_formula").get<std::string>());
  if (j.contains("simulation")) {
    const json& s = j.at("simulation");
    maybe(s, "horizon", c.simulation.horizon);
    maybe(s, "dt", c.simulation.dt);
    if (s.contains("disturbance")) c.simulation.disturbance = disturbance_from(s.at("disturbance").get<std::string>());
    maybe(s, "channel", c.simulation.impulse_channel);
    maybe(s, "noise_intensity", c.simulation.noise_intensity);
    maybe(s, "seed", c.simulation.seed);
  }
  if (j.contains("output_dir")) c.output_dir = resolve(j.at("output_dir").get<std::string>(), base);
  c.validate();
  return c;
}

json ExperimentConfig::to_json() const {
  json j;
  j["network"] = {{"block_sizes", network.block_sizes},
                  {"p_in", network.p_in},
                  {"p_out", network.p_out},
                  {"weight_range", {network.a_lo, network.a_hi}},
                  {"topology", hh2::to_string(network.topology)},
                  {"lattice_degree", network.lattice_degree},
                  {"inter_block_edges", network.inter_block_edges},
                  {"c1_scale", c1_scale},
                  {"b1_scale", b1_scale},
                  {"seed", network.seed}};
  if (plant_file) j["plant_file"] = plant_file->string();
  j["partition"] = {{"source", hh2::to_string(partition_source)}, {"r", partition_r}};
  if (partition_file) j["partition"]["file"] = partition_file->string();
  j["weights"] = hh2::to_string(weights);
  j["backend"] = {{"type", backend == AreBackend::Approx ? "approx" : "exact"},
                  {"kappa", kappa},
                  {"method", hh2::to_string(method)}};
  j["sweep"] = {{"kappa", sweep.kappa},
                {"r", sweep.r},
                {"n", sweep.n},
                {"kappa_method", hh2::to_string(sweep.kappa_method)},
                {"size_kappa", sweep.size_kappa},
                {"size_blocks", sweep.size_blocks},
                {"size_degree", sweep.size_degree},
                {"size_inter_edges", sweep.size_inter_edges},
                {"size_c1_scale", sweep.size_c1_scale},
                {"size_b1_scale", sweep.size_b1_scale},
                {"size_topology", hh2::to_string(sweep.size_topology)},
                {"size_method", hh2::to_string(sweep.size_method)},
                {"timing_repeats", sweep.timing_repeats},
                {"exact_size_repeats", sweep.exact_size_repeats},
                {"exact_time_cap_n", sweep.exact_time_cap_n},
                {"h2_cap_n", sweep.h2_cap_n},
                {"recovery_seeds", sweep.recovery_seeds},
                {"kmeans_restarts", sweep.kmeans_restarts}};
  j["tolerances"] = tolerances_to_json(tol);
  j["tolerances"]["profile"] = tolerance_profile;
  j["gap"] = {{"xi_formula", hh2::to_string(xi_formula)}};
  j["simulation"] = {{"horizon", simulation.horizon},
                     {"dt", simulation.dt},
                     {"disturbance", to_string(simulation.disturbance)},
                     {"channel", simulation.impulse_channel},
                     {"noise_intensity", simulation.noise_intensity},
                     {"seed", simulation.seed}};
  j["output_dir"] = output_dir.string();
  j["seed"] = seed;
  return j;
}

std::string ExperimentConfig::hash() const { return io::fnv1a_hex(to_json().dump()); }

void ExperimentConfig::validate() const {
  network.validate();
  require(c1_scale >= 0.0 && b1_scale >= 0.0, ErrorKind::InvalidArgument, "scales must be non-negative");
  if (plant_file) require(fs::exists(*plant_file), ErrorKind::Io, "plant file " + plant_file->string() + " not found");
  if (partition_source == PartitionSource::Explicit) {
    require(partition_file.has_value(), ErrorKind::InvalidArgument, "explicit partition needs a file");
    require(fs::exists(*partition_file), ErrorKind::Io, "partition file " + partition_file->string() + " not found");
  }
  require(partition_r >= 1, ErrorKind::InvalidArgument, "partition r must be positive");
  require(kappa >= 1, ErrorKind::InvalidArgument, "kappa must be positive");
  require(sweep.timing_repeats >= 1 && sweep.exact_size_repeats >= 1, ErrorKind::InvalidArgument,
          "timing repeats must be positive");
  require(sweep.kmeans_restarts >= 1, ErrorKind::InvalidArgument, "kmeans_restarts must be positive");
  for (std::size_t i = 1; i < sweep.n.size(); ++i)
    require(sweep.n[i] > sweep.n[i - 1], ErrorKind::InvalidArgument, "size sweep n list must be ascending");
  for (std::size_t i = 1; i < sweep.r.size(); ++i)
    require(sweep.r[i] > sweep.r[i - 1], ErrorKind::InvalidArgument, "r list must be ascending");
}

ExperimentConfig load_config(const fs::path& path) {
  return ExperimentConfig::from_json(io::read_json(path), path.parent_path());
}

}  // namespace hh2
