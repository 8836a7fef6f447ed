#pragma once

#include <vector>

#include "hh2/types.hpp"

namespace hh2 {

// Realization (A, B, C, D) of a proper real-rational transfer matrix.
struct StateSpace {
  Mat A, B, C, D;

  StateSpace() = default;
  StateSpace(Mat a, Mat b, Mat c, Mat d);

  static StateSpace static_gain(const Mat& d);

  Index states() const { return A.rows(); }
  Index inputs() const { return D.cols(); }
  Index outputs() const { return D.rows(); }

  // g(s) = C (sI - A)^{-1} B + D
  CMat evaluate(cplx s) const;
  CMat at_frequency(double omega) const { return evaluate(cplx(0.0, omega)); }

  void check() const;
};

StateSpace series(const StateSpace& first, const StateSpace& second);  // second * first
StateSpace add(const StateSpace& g, const StateSpace& h);
StateSpace negate(const StateSpace& g);
StateSpace scale(const StateSpace& g, double factor);
StateSpace transpose_dual(const StateSpace& g);
StateSpace pre_multiply(const Mat& left, const StateSpace& g);
StateSpace post_multiply(const StateSpace& g, const Mat& right);

// Outputs [g; h] driven by a common input.
StateSpace stack_outputs(const StateSpace& g, const StateSpace& h);

// Log-spaced frequencies in [lo, hi].
std::vector<double> log_grid(double lo, double hi, int count);

// Largest Frobenius mismatch of two systems over a frequency list, relative
// to max(|g|_F, |h|_F, floor) at each frequency.
double max_response_error(const StateSpace& g, const StateSpace& h, const std::vector<double>& omegas,
                          double floor = 0.0);

}  // namespace hh2
