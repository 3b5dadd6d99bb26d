// Globally adaptive Gauss-Kronrod (7/15) quadrature for real- or
// complex-valued integrands, plus a semi-infinite variant.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <type_traits>
#include <vector>

#include "wgqed/types.hpp"

namespace wgqed::quad {

struct Options {
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  int max_intervals = 4000;
};

template <typename T>
struct Result {
  T value{};
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

// Kronrod nodes on [0,1] (symmetric), odd indices are the Gauss-7 nodes.
inline constexpr std::array<double, 8> kNodes = {
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

template <typename T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename T, typename F>
Segment<T> kronrod15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T kronrod = fc * kKronrodWeights[7];
  T gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kNodes[i];
    const T s = f(c - dx) + f(c + dx);
    kronrod += s * kKronrodWeights[i];
    if (i % 2 == 1) gauss += s * kGaussWeights[i / 2];
  }
  kronrod *= h;
  gauss *= h;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Integrates f over [a,b], optionally split at interior breakpoints.
template <typename F>
auto integrate(F&& f, double a, double b, const Options& opt = {},
               const std::vector<double>& breakpoints = {}) {
  using T = std::decay_t<decltype(f(a))>;
  using Seg = detail::Segment<T>;
  Result<T> out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::vector<double> cuts{a};
  for (double p : breakpoints)
    if (p > std::min(a, b) && p < std::max(a, b)) cuts.push_back(p);
  cuts.push_back(b);
  if (a < b)
    std::sort(cuts.begin(), cuts.end());
  else
    std::sort(cuts.begin(), cuts.end(), std::greater<>());

  std::priority_queue<Seg> heap;
  T total{};
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i] == cuts[i + 1]) continue;
    Seg s = detail::kronrod15<T>(f, cuts[i], cuts[i + 1]);
    out.evaluations += 15;
    total += s.value;
    err += s.error;
    heap.push(s);
  }
  while (!heap.empty()) {
    const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    if (err <= target) {
      out.converged = true;
      break;
    }
    if (static_cast<int>(heap.size()) >= opt.max_intervals) break;
    Seg worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid == worst.a || mid == worst.b) break;  // interval exhausted
    heap.pop();
    Seg left = detail::kronrod15<T>(f, worst.a, mid);
    Seg right = detail::kronrod15<T>(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Recompute the sum from the leaves to shed accumulated round-off.
  T sum{};
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  out.value = sum;
  out.error = esum;
  if (!out.converged)
    out.converged = esum <= std::max(opt.abs_tol, opt.rel_tol * std::abs(sum));
  return out;
}

/// Integrates f over [a, inf) through x = a + scale * t / (1 - t).
template <typename F>
auto integrate_to_infinity(F&& f, double a, double scale = 1.0, const Options& opt = {}) {
  auto mapped = [&](double t) {
    using T = std::decay_t<decltype(f(a))>;
    if (t >= 1.0) return T{};
    const double u = 1.0 - t;
    const double x = a + scale * t / u;
    const T v = f(x);
    if (v == T{}) return T{};
    return v * (scale / (u * u));
  };
  return integrate(mapped, 0.0, 1.0, opt);
}

}  // namespace wgqed::quad
