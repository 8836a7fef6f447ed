#pragma once

#include <string_view>

namespace hh2 {

/// Numerical thresholds shared by every module. Defaults are the documented
/// contract values; `strict()` tightens the checks used by diagnostics.
struct Tolerances {
  double hurwitz_margin = 1e-12;       // Re(lambda) >= -margin is not Hurwitz
  double unstable_threshold = 1e-10;   // Re(lambda) >= -threshold counts as unstable
  double imaginary_axis = 1e-10;       // Hamiltonian eigenvalue distance to the axis (relative to max(1,|H|))
  double z1_condition = 1e12;
  double r_condition = 1e12;
  double pencil_condition = 1e12;
  double symmetry = 1e-12;             // relative Frobenius asymmetry accepted by SymmetricMatrix
  double psd_floor = 1e-6;             // sqrt_psd rejects lambda_min < -psd_floor*|M|_2
  double pbh_rank = 1e-9;              // relative singular value floor in PBH tests
  double hinf_relative = 1e-6;
  double membership = 1e-8;            // subspace membership residual relative to |K(jw)|_F
  double a4 = 1e-12;
  double stability_test_psd = 1e-8;
  double krylov_residual = 1e-11;
  int krylov_max_restarts = 400;
  int kmeans_max_iterations = 300;
  double kmeans_relative_tolerance = 1e-9;

  static Tolerances strict();
  static Tolerances profile(std::string_view name);
};

}  // namespace hh2
