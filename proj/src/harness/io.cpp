#include "hh2/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/SparseCore>
#include <unsupported/Eigen/SparseExtra>

#include "hh2/error.hpp"

namespace hh2::io {

namespace fs = std::filesystem;

namespace {

// JSON has no NaN or infinity; they are written as null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json ranges_to_json(const std::vector<Subsystem>& subs) {
  json a = json::array();
  for (const auto& s : subs)
    a.push_back({{"states", {s.states.begin, s.states.size}},
                 {"inputs", {s.inputs.begin, s.inputs.size}},
                 {"outputs", {s.outputs.begin, s.outputs.size}}});
  return a;
}

IndexRange range_from(const json& j) { return {j.at(0).get<Index>(), j.at(1).get<Index>()}; }

json sets_to_json(const std::vector<std::vector<Index>>& sets) {
  json a = json::array();
  for (const auto& s : sets) a.push_back(s);
  return a;
}

std::vector<std::vector<Index>> sets_from(const json& j) {
  std::vector<std::vector<Index>> out;
  for (const auto& s : j) out.push_back(s.get<std::vector<Index>>());
  return out;
}

}  // namespace

json matrix_to_json(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return {{"rows", m.rows()}, {"cols", m.cols()}};
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_json(const json& j) {
  if (j.is_object()) return Mat::Zero(j.at("rows").get<Index>(), j.at("cols").get<Index>());
  require(j.is_array(), ErrorKind::Io, "matrix must be an array of rows");
  const Index r = static_cast<Index>(j.size());
  const Index c = r ? static_cast<Index>(j.at(0).size()) : 0;
  Mat m(r, c);
  for (Index i = 0; i < r; ++i) {
    require(static_cast<Index>(j[i].size()) == c, ErrorKind::Io, "ragged matrix rows");
    for (Index k = 0; k < c; ++k) m(i, k) = number_from(j[i][k]);
  }
  return m;
}

json vector_to_json(const Vec& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

Vec vector_from_json(const json& j) {
  Vec v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = number_from(j[i]);
  return v;
}

json statespace_to_json(const StateSpace& s) {
  return {{"A", matrix_to_json(s.A)}, {"B", matrix_to_json(s.B)}, {"C", matrix_to_json(s.C)},
          {"D", matrix_to_json(s.D)}};
}

StateSpace statespace_from_json(const json& j) {
  return StateSpace(matrix_from_json(j.at("A")), matrix_from_json(j.at("B")), matrix_from_json(j.at("C")),
                    matrix_from_json(j.at("D")));
}

json plant_to_json(const GeneralizedPlant& G, const fs::path& market_dir) {
  json j;
  j["format"] = "hh2-plant";
  j["version"] = 1;
  auto put = [&](const char* name, const Mat& m) {
    if (market_dir.empty()) {
      j[name] = matrix_to_json(m);
    } else {
      const std::string file = std::string(name) + ".mtx";
      save_market(market_dir / file, m);
      j[name] = {{"market", file}, {"rows", m.rows()}, {"cols", m.cols()}};
    }
  };
  put("A", G.A);
  put("B1", G.B1);
  put("B2", G.B2);
  put("C1", G.C1);
  put("C2", G.C2);
  put("D12", G.D12);
  put("D21", G.D21);
  j["subsystems"] = ranges_to_json(G.subsystems);
  return j;
}

GeneralizedPlant plant_from_json(const json& j, const fs::path& base_dir) {
  auto get = [&](const char* name) -> Mat {
    require(j.contains(name), ErrorKind::Io, std::string("plant document lacks ") + name);
    const json& m = j.at(name);
    if (m.is_object() && m.contains("market")) {
      Mat out = load_market(base_dir / m.at("market").get<std::string>());
      require(out.rows() == m.at("rows").get<Index>() && out.cols() == m.at("cols").get<Index>(), ErrorKind::Io,
              std::string("Matrix Market shape mismatch for ") + name);
      return out;
    }
    return matrix_from_json(m);
  };
  GeneralizedPlant G;
  G.A = get("A");
  G.B1 = get("B1");
  G.B2 = get("B2");
  G.C1 = get("C1");
  G.C2 = get("C2");
  G.D12 = get("D12");
  G.D21 = get("D21");
  if (j.contains("subsystems"))
    for (const auto& s : j.at("subsystems"))
      G.subsystems.push_back({range_from(s.at("states")), range_from(s.at("inputs")), range_from(s.at("outputs"))});
  G.check();
  return G;
}

json partition_to_json(const ClusterPartition& p) {
  json j{{"r", p.r()}, {"inputs", sets_to_json(p.inputs)}, {"outputs", sets_to_json(p.outputs)}};
  if (!p.subsystems.empty()) j["subsystems"] = sets_to_json(p.subsystems);
  return j;
}

ClusterPartition partition_from_json(const json& j) {
  ClusterPartition p;
  if (j.contains("labels")) return ClusterPartition::from_labels(j.at("labels").get<std::vector<int>>());
  p.inputs = sets_from(j.at("inputs"));
  p.outputs = sets_from(j.at("outputs"));
  if (j.contains("subsystems")) p.subsystems = sets_from(j.at("subsystems"));
  return p;
}

json weights_to_json(const WeightVectors& w) { return {{"w_u", vector_to_json(w.w_u)}, {"w_y", vector_to_json(w.w_y)}}; }

WeightVectors weights_from_json(const json& j) { return {vector_from_json(j.at("w_u")), vector_from_json(j.at("w_y"))}; }

json controller_to_json(const HierarchicalController& k) {
  return {{"format", "hh2-controller"},
          {"Pu", matrix_to_json(k.Pu)},
          {"Py", matrix_to_json(k.Py)},
          {"Kt", statespace_to_json(k.Kt)}};
}

HierarchicalController controller_from_json(const json& j) {
  HierarchicalController k;
  k.Pu = matrix_from_json(j.at("Pu"));
  k.Py = matrix_from_json(j.at("Py"));
  k.Kt = statespace_from_json(j.at("Kt"));
  return k;
}

json approx_to_json(const ApproxAreSolution& s) {
  json j{{"kappa", s.kappa},
         {"kappa_requested", s.kappa_requested},
         {"method", to_string(s.method)},
         {"stabilizing", s.stabilizing},
         {"psd_min", number(s.psd_min)},
         {"diagnostics", s.diagnostics}};
  j["epsilon"] = s.epsilon ? number(*s.epsilon) : json(nullptr);
  j["E_kappa_norm"] = s.E_kappa_norm ? number(*s.E_kappa_norm) : json(nullptr);
  j["closed_loop_hurwitz"] = s.closed_loop_hurwitz ? json(*s.closed_loop_hurwitz) : json(nullptr);
  json lam = json::array();
  for (Index i = 0; i < s.Lambda_kappa.size(); ++i) lam.push_back({s.Lambda_kappa(i).real(), s.Lambda_kappa(i).imag()});
  j["eigenvalues"] = lam;
  return j;
}

json synthesis_to_json(const SynthesisResult& r) {
  json j{{"h2_value", number(r.h2_value)},
         {"r", r.controller.Pu.rows()},
         {"controller_states", r.controller.Kt.states()},
         {"closed_loop_states", r.closed_loop.states()}};
  if (r.approx_x) j["approx_x"] = approx_to_json(*r.approx_x);
  if (r.approx_y) j["approx_y"] = approx_to_json(*r.approx_y);
  return j;
}

json gap_to_json(const GapReport& g) {
  json j{{"J1_star", number(g.J1_star)}, {"J2_star", number(g.J2_star)}, {"ratio", number(g.ratio())},
         {"xi_u", number(g.xi_u)},       {"xi_y", number(g.xi_y)},       {"xi", number(g.xi)},
         {"eps1", number(g.eps1)},       {"eps2", number(g.eps2)},       {"bound_rhs", number(g.bound_rhs)},
         {"bound_holds", g.bound_holds()}};
  j["doubly_projected_error"] = g.doubly_projected_error ? number(*g.doubly_projected_error) : json(nullptr);
  return j;
}

json assumptions_to_json(const AssumptionReport& a) {
  return {{"A1", a.a1}, {"A2", a.a2}, {"A3", a.a3}, {"A4", a.a4}, {"all", a.all()}, {"notes", a.notes}};
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void save_market(const fs::path& path, const Mat& m) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  // Written by hand: Eigen's writer drops the size line for empty matrices
  // and prints with default stream precision.
  std::ostringstream os;
  os.precision(17);
  Index nnz = 0;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) nnz += m(i, j) != 0.0;
  os << "%%MatrixMarket matrix coordinate real general\n" << m.rows() << " " << m.cols() << " " << nnz << "\n";
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0.0) os << i + 1 << " " << j + 1 << " " << m(i, j) << "\n";
  write_text(path, os.str());
}

Mat load_market(const fs::path& path) {
  Eigen::SparseMatrix<double> s;
  if (!Eigen::loadMarket(s, path.string())) fail(ErrorKind::Io, "cannot read Matrix Market file " + path.string());
  return Mat(s);
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hh2::io
