#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hh2/gapdesign.hpp"
#include "hh2/io.hpp"
#include "hh2/network.hpp"
#include "hh2/simulate.hpp"
#include "hh2/synthesis.hpp"

namespace hh2 {

enum class PartitionSource { Planted, Designed, Explicit };
enum class WeightPolicy { Ones, Feasible };

struct SweepConfig {
  std::vector<Index> kappa{1, 2, 3, 4, 5, 6};
  std::vector<Index> r{1, 2, 3, 4, 5, 6};
  std::vector<Index> n{100, 200, 400, 800, 1600};
  ApproxMethod kappa_method = ApproxMethod::Dense;
  // Size sweep: Krylov path on block networks whose expected in-block degree
  // and expected edge count between two blocks stay fixed as n grows.
  Index size_kappa = 4;
  Index size_blocks = 4;
  Topology size_topology = Topology::StochasticBlock;
  double size_degree = 12.0;
  double size_inter_edges = 2.0;
  // At larger scales the sufficient stability test fails and the dense
  // fallback check would dominate the timing.
  double size_c1_scale = 1.0;
  double size_b1_scale = 1.0;
  ApproxMethod size_method = ApproxMethod::Krylov;
  int timing_repeats = 3;
  int exact_size_repeats = 1;    // size sweep, exact path
  Index exact_time_cap_n = 800;  // exact column left blank above this n
  Index h2_cap_n = 400;          // h2 columns left blank above this n
  int recovery_seeds = 20;
  int kmeans_restarts = 10;
};

struct ExperimentConfig {
  NetworkSpec network;
  double c1_scale = 10.0;
  double b1_scale = 10.0;
  std::optional<std::filesystem::path> plant_file;
  PartitionSource partition_source = PartitionSource::Planted;
  std::optional<std::filesystem::path> partition_file;
  Index partition_r = 4;  // designed partitions
  WeightPolicy weights = WeightPolicy::Ones;
  AreBackend backend = AreBackend::Exact;
  Index kappa = 4;
  ApproxMethod method = ApproxMethod::Dense;
  SweepConfig sweep;
  std::string tolerance_profile = "default";
  Tolerances tol{};
  XiFormula xi_formula = XiFormula::Printed;
  SimOptions simulation;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 7;

  // Relative paths in the document are resolved against `base_dir`.
  static ExperimentConfig from_json(const io::json& j, const std::filesystem::path& base_dir = {});
  io::json to_json() const;
  // FNV-1a of the normalized document.
  std::string hash() const;
  // Referenced files exist; numeric fields are in range.
  void validate() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);

const char* to_string(PartitionSource s);
const char* to_string(WeightPolicy w);

// Applies a named profile and then per-field overrides from a JSON object.
Tolerances tolerances_from_json(const io::json& j);
io::json tolerances_to_json(const Tolerances& t);

}  // namespace hh2
