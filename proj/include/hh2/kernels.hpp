#pragma once

#include <vector>

#include "hh2/state_space.hpp"
#include "hh2/types.hpp"

// Hot loops with an OpenMP version and a serial reference. Both produce
// bitwise identical results; the serial one is kept for tests and benches.
namespace hh2::kernels {

std::vector<CMat> frequency_responses(const StateSpace& sys, const std::vector<double>& omegas);
std::vector<CMat> frequency_responses_serial(const StateSpace& sys, const std::vector<double>& omegas);

// Nearest-center assignment for the rows of `points`. Returns the
// mass-weighted sum of squared distances.
double assign_nearest(const Mat& points, const Vec& mass, const Mat& centers, std::vector<int>& labels);
double assign_nearest_serial(const Mat& points, const Vec& mass, const Mat& centers, std::vector<int>& labels);

// Solves L C + C L^T + G = 0 for block-diagonal L with 1x1 and 2x2 blocks.
Mat cauchy_blocks(const Mat& L, const Mat& G);
Mat cauchy_blocks_serial(const Mat& L, const Mat& G);

int max_threads();
void set_threads(int n);

}  // namespace hh2::kernels
