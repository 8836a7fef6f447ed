#include "hh2/tolerances.hpp"

#include <string>

#include "hh2/error.hpp"

namespace hh2 {

Tolerances Tolerances::strict() {
  Tolerances t;
  t.hurwitz_margin = 1e-10;
  t.pbh_rank = 1e-8;
  t.hinf_relative = 1e-8;
  t.membership = 1e-10;
  t.krylov_residual = 1e-12;
  t.kmeans_relative_tolerance = 1e-12;
  return t;
}

Tolerances Tolerances::profile(std::string_view name) {
  if (name == "default") return Tolerances{};
  if (name == "strict") return strict();
  fail(ErrorKind::InvalidArgument, "unknown tolerance profile '" + std::string(name) + "'");
}

}  // namespace hh2
