#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "hh2/gapdesign.hpp"
#include "hh2/hamiltonian.hpp"
#include "hh2/plant.hpp"
#include "hh2/projection.hpp"
#include "hh2/synthesis.hpp"

namespace hh2::io {

using json = nlohmann::json;

// Dense matrices are nested row-major arrays; an empty matrix is written as
// {"rows": r, "cols": c} so its shape survives.
json matrix_to_json(const Mat& m);
Mat matrix_from_json(const json& j);
json vector_to_json(const Vec& v);
Vec vector_from_json(const json& j);

json statespace_to_json(const StateSpace& s);
StateSpace statespace_from_json(const json& j);

// With a non-empty `market_dir`, the matrices are written to Matrix Market
// files there and the document holds {"market": "<file>"} references,
// resolved relative to the document's directory on read.
json plant_to_json(const GeneralizedPlant& G, const std::filesystem::path& market_dir = {});
GeneralizedPlant plant_from_json(const json& j, const std::filesystem::path& base_dir = {});

json partition_to_json(const ClusterPartition& p);
ClusterPartition partition_from_json(const json& j);
json weights_to_json(const WeightVectors& w);
WeightVectors weights_from_json(const json& j);

json controller_to_json(const HierarchicalController& k);
HierarchicalController controller_from_json(const json& j);

json synthesis_to_json(const SynthesisResult& r);
json approx_to_json(const ApproxAreSolution& s);
json gap_to_json(const GapReport& g);
json assumptions_to_json(const AssumptionReport& a);

json read_json(const std::filesystem::path& path);
// Pretty printed with a trailing newline.
void write_json(const std::filesystem::path& path, const json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

void save_market(const std::filesystem::path& path, const Mat& m);
Mat load_market(const std::filesystem::path& path);

// FNV-1a 64 of a string, as 16 hex digits.
std::string fnv1a_hex(const std::string& s);

}  // namespace hh2::io
