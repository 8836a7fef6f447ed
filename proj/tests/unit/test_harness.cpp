#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "hh2/config.hpp"
#include "hh2/error.hpp"
#include "hh2/io.hpp"
#include "hh2/simulate.hpp"
#include "hh2/sweeps.hpp"
#include "support.hpp"

using namespace hh2;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hh2_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

HierarchicalController static_controller(const ProjectionPair& P, const Mat& S) {
  HierarchicalController K;
  K.Pu = P.Pu;
  K.Py = P.Py;
  K.Kt = StateSpace::static_gain(S);
  return K;
}

}  // namespace

TEST(Io, MatrixRoundTrip) {
  Rng rng(61);
  const Mat m = rng.normal_matrix(3, 4);
  EXPECT_EQ(io::matrix_from_json(io::matrix_to_json(m)), m);
  const Mat e(0, 5);
  const Mat back = io::matrix_from_json(io::matrix_to_json(e));
  EXPECT_EQ(back.rows(), 0);
  EXPECT_EQ(back.cols(), 5);
}

TEST(Io, PlantRoundTripThroughMarket) {
  const fs::path dir = temp_dir("market");
  const GeneralizedPlant G = test::line_plant();
  const io::json j = io::plant_to_json(G, dir);
  io::write_json(dir / "plant.json", j);
  const GeneralizedPlant H = io::plant_from_json(io::read_json(dir / "plant.json"), dir);
  EXPECT_EQ(G.A, H.A);
  EXPECT_EQ(G.B2, H.B2);
  EXPECT_EQ(G.D21, H.D21);
  EXPECT_EQ(H.subsystems.size(), 4u);
}

TEST(Io, ControllerRoundTrip) {
  Rng rng(62);
  const ProjectionPair P = build_projection(test::line_partition(), WeightVectors::ones(3, 4));
  HierarchicalController K = static_controller(P, rng.normal_matrix(2, 2));
  K.Kt = random_stable_system(2, 2, 2, rng, true);
  const HierarchicalController back = io::controller_from_json(io::controller_to_json(K));
  EXPECT_EQ(back.Pu, K.Pu);
  EXPECT_EQ(back.Kt.A, K.Kt.A);
  EXPECT_EQ(back.Kt.D, K.Kt.D);
}

TEST(Io, MissingFileIsIoError) {
  try {
    io::read_json("/nonexistent/file.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
}

TEST(Config, RoundTripAndHash) {
  ExperimentConfig c;
  c.seed = 11;
  c.sweep.kappa = {2, 3};
  c.xi_formula = XiFormula::Symmetric;
  const ExperimentConfig d = ExperimentConfig::from_json(c.to_json());
  EXPECT_EQ(d.to_json(), c.to_json());
  EXPECT_EQ(d.hash(), c.hash());
  d.validate();
  ExperimentConfig e = c;
  e.seed = 12;
  EXPECT_NE(e.hash(), c.hash());
}

TEST(Config, RejectsUnknownValues) {
  io::json j = ExperimentConfig{}.to_json();
  j["backend"] = "quantum";
  EXPECT_THROW(ExperimentConfig::from_json(j), Error);
}

TEST(Config, ToleranceOverrides) {
  io::json j = {{"profile", "strict"}, {"z1_condition", 1e8}};
  const Tolerances t = tolerances_from_json(j);
  EXPECT_EQ(t.z1_condition, 1e8);
  EXPECT_EQ(t.hurwitz_margin, Tolerances::strict().hurwitz_margin);
}

TEST(Csv, FormatsNumbersAndDropsTimings) {
  EXPECT_EQ(Csv::num(0.1), "0.1");
  EXPECT_EQ(Csv::num(std::nan("")), "");
  EXPECT_EQ(Csv::num(1.0 / 3.0), "0.333333333333");
  Csv c;
  c.header = {"n", "time_s", "value"};
  c.rows = {{"1", "0.5", "2"}};
  EXPECT_EQ(c.str(), "n,time_s,value\n1,0.5,2\n");
  EXPECT_EQ(c.str(false), "n,value\n1,2\n");
}

TEST(Simulation, StaticGainFollowsThreeSteps) {
  const GeneralizedPlant G = test::line_plant();
  const ProjectionPair P = build_projection(test::line_partition(), WeightVectors::ones(3, 4));
  Mat S(2, 2);
  S << -1.0, 0.2, 0.1, -0.8;
  SimOptions o;
  o.horizon = 0.5;
  const SimResult r = run_hier_simulation(G, static_controller(P, S), o);
  const Mat K = P.Pu.transpose() * S * P.Py;
  for (std::size_t k = 0; k < r.trace.steps.size(); ++k) {
    const Vec y = G.C2 * r.x_staged.col(static_cast<Index>(k)).head(4);
    EXPECT_LT((r.trace.steps[k].u - K * y).norm(), 1e-14 * std::max(1.0, y.norm()));
  }
  EXPECT_LT(r.max_relative_error, 1e-9);
  EXPECT_TRUE(r.privacy_ok);
  EXPECT_EQ(r.trace.links_used(), 4 + 1);
}

TEST(Simulation, ZeroDisturbanceStaysAtRest) {
  const GeneralizedPlant G = test::line_plant();
  const ProjectionPair P = build_projection(test::line_partition(), WeightVectors::ones(3, 4));
  const SynthesisResult s = synthesize_hierarchical(G, P);
  SimOptions o;
  o.disturbance = DisturbanceKind::None;
  const SimResult r = run_hier_simulation(G, s.controller, o);
  EXPECT_EQ(r.x_staged.norm(), 0.0);
  EXPECT_EQ(r.z.norm(), 0.0);
}

TEST(Simulation, SynthesizedControllerMatchesMonolithic) {
  const GeneralizedPlant G = test::line_plant();
  const ProjectionPair P = build_projection(test::line_partition(), WeightVectors::ones(3, 4));
  const SynthesisResult s = synthesize_hierarchical(G, P);
  for (DisturbanceKind d : {DisturbanceKind::Impulse, DisturbanceKind::Noise}) {
    SimOptions o;
    o.disturbance = d;
    o.horizon = 2.0;
    const SimResult r = run_hier_simulation(G, s.controller, o);
    EXPECT_LT(r.max_relative_error, 1e-9);
    EXPECT_TRUE(r.privacy_ok);
  }
}

TEST(Simulation, PrivacyAuditFlagsForeignOutput) {
  const GeneralizedPlant G = test::line_plant();
  const ProjectionPair P = build_projection(test::line_partition(), WeightVectors::ones(3, 4));
  SimOptions o;
  o.horizon = 0.1;
  SimResult r = run_hier_simulation(G, static_controller(P, Mat::Identity(2, 2)), o);
  ASSERT_TRUE(privacy_audit(r.trace));
  r.trace.logs[0].push_back({Observation::RawOutput, 3});
  EXPECT_FALSE(privacy_audit(r.trace));
}

TEST(Simulation, TraceIsWritten) {
  const fs::path dir = temp_dir("trace");
  const GeneralizedPlant G = test::line_plant();
  const ProjectionPair P = build_projection(test::line_partition(), WeightVectors::ones(3, 4));
  SimOptions o;
  o.horizon = 0.1;
  const SimResult r = run_hier_simulation(G, static_controller(P, Mat::Identity(2, 2)), o);
  write_trace_jsonl(dir / "trace.jsonl", r.trace);
  std::ifstream in(dir / "trace.jsonl");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    EXPECT_NO_THROW((void)io::json::parse(line));
    ++lines;
  }
  EXPECT_EQ(lines, r.trace.steps.size());
}

TEST(Sweeps, KappaSweepIsDeterministic) {
  ExperimentConfig c;
  c.network = NetworkSpec::equal_blocks(40, 4);
  const Experiment ex = prepare_experiment(c);
  const auto a = sweep_kappa(ex.plant, ex.projection, {1, 2, 4}, ApproxMethod::Dense, 1);
  const auto b = sweep_kappa(ex.plant, ex.projection, {1, 2, 4}, ApproxMethod::Dense, 1);
  EXPECT_EQ(kappa_csv(a).str(false), kappa_csv(b).str(false));
  EXPECT_EQ(a.size(), 4u);
  EXPECT_EQ(a[0].backend, "exact");
}

TEST(Sweeps, LogLogSlope) {
  std::vector<SizeRow> rows(3);
  for (int i = 0; i < 3; ++i) {
    rows[i].n = 100 << i;
    rows[i].time_approx_s = 1e-3 * std::pow(double(rows[i].n), 1.5);
  }
  EXPECT_NEAR(*loglog_slope(rows, false), 1.5, 1e-12);
  EXPECT_FALSE(loglog_slope(rows, true).has_value());
}

TEST(Experiment, DesignedPartitionRecoversPlanted) {
  ExperimentConfig c;
  c.partition_source = PartitionSource::Designed;
  const Experiment ex = prepare_experiment(c);
  EXPECT_TRUE(same_partition(ex.partition.input_labels(100), ex.planted));
}
