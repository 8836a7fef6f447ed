#include "hh2/state_space.hpp"

#include <cmath>

#include "hh2/error.hpp"
#include "hh2/kernels.hpp"

namespace hh2 {

StateSpace::StateSpace(Mat a, Mat b, Mat c, Mat d)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
  check();
}

StateSpace StateSpace::static_gain(const Mat& d) {
  return StateSpace(Mat(0, 0), Mat(0, d.cols()), Mat(d.rows(), 0), d);
}

void StateSpace::check() const {
  const Index n = A.rows();
  require(A.cols() == n, ErrorKind::DimensionMismatch, "A must be square");
  require(B.rows() == n && C.cols() == n, ErrorKind::DimensionMismatch, "B rows and C columns must match A");
  require(D.rows() == C.rows() && D.cols() == B.cols(), ErrorKind::DimensionMismatch, "D must be outputs x inputs");
  require(A.allFinite() && B.allFinite() && C.allFinite() && D.allFinite(), ErrorKind::InvalidArgument,
          "realization has non-finite entries");
}

CMat StateSpace::evaluate(cplx s) const {
  if (states() == 0) return D.cast<cplx>();
  CMat M = -A.cast<cplx>();
  M.diagonal().array() += s;
  return C.cast<cplx>() * M.partialPivLu().solve(B.cast<cplx>()) + D.cast<cplx>();
}

StateSpace series(const StateSpace& first, const StateSpace& second) {
  require(second.inputs() == first.outputs(), ErrorKind::DimensionMismatch, "series: inner dimensions differ");
  const Index n1 = first.states(), n2 = second.states();
  Mat A = Mat::Zero(n1 + n2, n1 + n2);
  A.topLeftCorner(n1, n1) = first.A;
  A.bottomLeftCorner(n2, n1) = second.B * first.C;
  A.bottomRightCorner(n2, n2) = second.A;
  Mat B(n1 + n2, first.inputs());
  B << first.B, second.B * first.D;
  Mat C(second.outputs(), n1 + n2);
  C << second.D * first.C, second.C;
  return StateSpace(A, B, C, second.D * first.D);
}

StateSpace add(const StateSpace& g, const StateSpace& h) {
  require(g.inputs() == h.inputs() && g.outputs() == h.outputs(), ErrorKind::DimensionMismatch,
          "add: dimensions differ");
  const Index n1 = g.states(), n2 = h.states();
  Mat A = Mat::Zero(n1 + n2, n1 + n2);
  A.topLeftCorner(n1, n1) = g.A;
  A.bottomRightCorner(n2, n2) = h.A;
  Mat B(n1 + n2, g.inputs());
  B << g.B, h.B;
  Mat C(g.outputs(), n1 + n2);
  C << g.C, h.C;
  return StateSpace(A, B, C, g.D + h.D);
}

StateSpace negate(const StateSpace& g) { return StateSpace(g.A, g.B, -g.C, -g.D); }

StateSpace scale(const StateSpace& g, double factor) { return StateSpace(g.A, g.B, factor * g.C, factor * g.D); }

StateSpace transpose_dual(const StateSpace& g) {
  return StateSpace(g.A.transpose(), g.C.transpose(), g.B.transpose(), g.D.transpose());
}

StateSpace pre_multiply(const Mat& left, const StateSpace& g) {
  require(left.cols() == g.outputs(), ErrorKind::DimensionMismatch, "pre_multiply dimensions");
  return StateSpace(g.A, g.B, left * g.C, left * g.D);
}

StateSpace post_multiply(const StateSpace& g, const Mat& right) {
  require(right.rows() == g.inputs(), ErrorKind::DimensionMismatch, "post_multiply dimensions");
  return StateSpace(g.A, g.B * right, g.C, g.D * right);
}

StateSpace stack_outputs(const StateSpace& g, const StateSpace& h) {
  require(g.inputs() == h.inputs(), ErrorKind::DimensionMismatch, "stack_outputs: inputs differ");
  const Index n1 = g.states(), n2 = h.states();
  Mat A = Mat::Zero(n1 + n2, n1 + n2);
  A.topLeftCorner(n1, n1) = g.A;
  A.bottomRightCorner(n2, n2) = h.A;
  Mat B(n1 + n2, g.inputs());
  B << g.B, h.B;
  Mat C = Mat::Zero(g.outputs() + h.outputs(), n1 + n2);
  C.topLeftCorner(g.outputs(), n1) = g.C;
  C.bottomRightCorner(h.outputs(), n2) = h.C;
  Mat D(g.outputs() + h.outputs(), g.inputs());
  D << g.D, h.D;
  return StateSpace(A, B, C, D);
}

std::vector<double> log_grid(double lo, double hi, int count) {
  require(lo > 0 && hi >= lo && count >= 1, ErrorKind::InvalidArgument, "log_grid needs 0 < lo <= hi");
  std::vector<double> w(count);
  if (count == 1) {
    w[0] = lo;
    return w;
  }
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < count; ++i) w[i] = std::pow(10.0, a + (b - a) * i / (count - 1));
  return w;
}

double max_response_error(const StateSpace& g, const StateSpace& h, const std::vector<double>& omegas,
                          double floor) {
  require(g.inputs() == h.inputs() && g.outputs() == h.outputs(), ErrorKind::DimensionMismatch,
          "max_response_error: dimensions differ");
  const auto rg = kernels::frequency_responses(g, omegas);
  const auto rh = kernels::frequency_responses(h, omegas);
  double worst = 0.0;
  for (std::size_t k = 0; k < omegas.size(); ++k) {
    const double denom = std::max({rg[k].norm(), rh[k].norm(), floor});
    if (denom == 0.0) continue;
    worst = std::max(worst, (rg[k] - rh[k]).norm() / denom);
  }
  return worst;
}

}  // namespace hh2
