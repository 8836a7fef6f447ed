#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "hh2/plant.hpp"
#include "hh2/synthesis.hpp"

namespace hh2 {

enum class DisturbanceKind { None, Impulse, Noise };

struct SimOptions {
  double horizon = 1.0;
  double dt = 0.0;  // 0 picks 0.1 / max |eigenvalue| of the closed loop
  DisturbanceKind disturbance = DisturbanceKind::Impulse;
  Index impulse_channel = 0;      // x(0) = B1 e_channel
  double noise_intensity = 1.0;   // piecewise-constant w, variance intensity / dt
  std::uint64_t seed = 1;
  bool record_logs = true;        // coordinator observation logs
};

// One entry of a coordinator's observation log.
struct Observation {
  enum Kind { RawOutput, Average } kind;
  Index index;  // output index for RawOutput, coordinator index for Average
};

struct StepRecord {
  double t = 0.0;
  Vec ybar;  // Step 1: Py y
  Vec ubar;  // Step 2: output of the reduced controller
  Vec u;     // Step 3: Pu^T ubar
};

struct SimTrace {
  std::vector<StepRecord> steps;
  std::vector<std::vector<Observation>> logs;  // one per coordinator, first step only
  std::vector<std::vector<Index>> output_sets;  // raw outputs owned by each coordinator
  std::vector<std::vector<Index>> input_sets;
  Index subsystem_links = 0;    // distinct subsystem-coordinator links used
  Index coordinator_links = 0;  // distinct coordinator-coordinator links used

  Index links_used() const { return subsystem_links + coordinator_links; }
};

struct SimResult {
  std::vector<double> t;
  Mat x_staged, x_monolithic;  // closed-loop state [x; xK] per column
  Mat z;                       // regulated output per column (staged)
  SimTrace trace;
  double max_relative_error = 0.0;  // staged vs monolithic, worst sample
  double dt = 0.0;
  bool privacy_ok = false;
};

// Runs the controller as the three-step message schedule (average, exchange,
// broadcast) next to an RK4 simulation of the lft closed loop.
SimResult run_hier_simulation(const GeneralizedPlant& G, const HierarchicalController& K, const SimOptions& options);

// Each coordinator saw only its own raw outputs and the averages.
bool privacy_audit(const SimTrace& trace);

// trace.jsonl: one JSON record per step.
void write_trace_jsonl(const std::filesystem::path& path, const SimTrace& trace);

}  // namespace hh2
