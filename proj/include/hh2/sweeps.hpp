#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hh2/config.hpp"

namespace hh2 {

// Column-ordered table. Columns whose name ends in "_s" hold timings; they
// are the only ones allowed to differ between identical runs.
struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str(bool include_timing = true) const;
  void write(const std::filesystem::path& path) const;

  static std::string num(double x);  // %.12g, empty for NaN
  static std::string num(std::optional<double> x) { return x ? num(*x) : std::string(); }
};

// Plant, partition and weights resolved from a configuration.
struct Experiment {
  GeneralizedPlant plant;
  std::vector<int> planted;  // block label per node; empty for file plants
  ClusterPartition partition;
  WeightVectors weights;
  ProjectionPair projection;
  std::vector<std::string> warnings;
};

Experiment prepare_experiment(const ExperimentConfig& config);

// Factors of the model-matching problem built from the unconstrained gains.
SpectralFactors canonical_factors(const GeneralizedPlant& G, const Tolerances& tol,
                                  SynthesisResult* unconstrained = nullptr);

// Planted blocks as a partition with one input and output per node.
ClusterPartition planted_partition(const std::vector<int>& block_of);

struct KappaRow {
  std::string backend;  // "exact" or "approx"
  Index kappa = 0, kappa_used = 0;
  double h2 = 0.0, h2_ratio = 0.0;
  std::optional<double> epsilon, epsilon_bound;
  bool stabilizing = false;
  std::string status = "ok";
  double solve_time_s = 0.0;
};

std::vector<KappaRow> sweep_kappa(const GeneralizedPlant& G, const ProjectionPair& P, const std::vector<Index>& kappas,
                                  ApproxMethod method, int timing_repeats, const Tolerances& tol = {});
Csv kappa_csv(const std::vector<KappaRow>& rows);

struct SizeRow {
  Index n = 0;
  std::optional<double> h2_exact, h2_approx;
  std::string status_exact = "ok", status_approx = "ok";
  std::optional<double> time_exact_s, time_approx_s;
};

std::vector<SizeRow> sweep_size(const ExperimentConfig& config);
Csv size_csv(const std::vector<SizeRow>& rows);

// Least-squares slope of log(time) against log(n) over the rows with a value.
std::optional<double> loglog_slope(const std::vector<SizeRow>& rows, bool exact);

struct RRow {
  Index r = 0;
  GapReport report;
  std::optional<bool> recovered;  // planted instances only
  std::string status = "ok";
};

std::vector<RRow> sweep_r(const GeneralizedPlant& G, const std::vector<int>& planted, const WeightVectors& weights,
                          const std::vector<Index>& r_list, std::uint64_t seed, const KMeansOptions& kmeans,
                          const GapOptions& options);
Csv r_csv(const std::vector<RRow>& rows);

// Fraction of network seeds seed0, seed0 + 1, ... for which design_clusters
// with r = number of blocks returns the planted partition.
double recovery_rate(const NetworkSpec& spec, double c1_scale, double b1_scale, int seeds,
                     const KMeansOptions& kmeans, const Tolerances& tol = {});

}  // namespace hh2
