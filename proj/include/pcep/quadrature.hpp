#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace pcep {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  /// Accepted relative error when abs_tol is not reached within the cap.
  double rel_fallback = 1e-3;
  int max_subdivisions = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  bool converged = false;
  bool used_fallback = false;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod nodes on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo, hi, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename F>
Segment gauss_kronrod(F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive G7-K15 quadrature of f over [lo, hi]. The interval with
/// the largest error estimate is bisected until the summed error is below
/// abs_tol. Endpoints are never evaluated.
template <typename F>
QuadratureResult integrate_adaptive(F&& f, double lo, double hi,
                                    const QuadratureOptions& opts = {}) {
  std::priority_queue<detail::Segment> heap;
  heap.push(detail::gauss_kronrod(f, lo, hi));
  double value = heap.top().value;
  double error = heap.top().error;
  int subdivisions = 0;
  auto done = [&] {
    return error <= opts.abs_tol || error <= 1e-14 * std::abs(value);
  };
  while (!done() && subdivisions < opts.max_subdivisions) {
    const detail::Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const detail::Segment left = detail::gauss_kronrod(f, worst.lo, mid);
    const detail::Segment right = detail::gauss_kronrod(f, mid, worst.hi);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  // Re-sum to shed accumulated cancellation from the running updates.
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  QuadratureResult out{value, error, subdivisions, false, false};
  if (error <= opts.abs_tol || error <= 1e-14 * std::abs(value)) {
    out.converged = true;
  } else if (error <= opts.rel_fallback * std::abs(value)) {
    out.converged = true;
    out.used_fallback = true;
  }
  return out;
}

}  // namespace pcep
