// Numerical Legendre transforms in the convention chi*(x) = inf_y (x y + chi(y)),
// one-sided derivatives, and (alpha, value) spectrum curve production.
#ifndef MFHS_LEGENDRE_HPP
#define MFHS_LEGENDRE_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "mfhs/analytic.hpp"
#include "mfhs/common.hpp"

namespace mfhs {

struct TransformCurve {
  std::vector<double> alpha_grid;
  std::vector<double> values;  // -inf marks alpha outside the finite support
  std::string source_label;
};

// min over the grid of alpha*q + fn(q), refined by golden-section on the
// bracketing cell when the minimizer is interior. Returns -inf when the
// infimum escapes through a grid boundary; throws UnboundedBelowError when
// the probe decreases through both boundaries.
inline double legendre_at(const SpectrumCurve& fn, double alpha) {
  const auto& qs = fn.q_grid;
  std::size_t n = qs.size();
  if (n < 3) throw Error("legendre_at: grid too small");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = alpha * qs[i] + fn.values[i];

  std::size_t imin = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (g[i] < g[imin]) imin = i;

  bool dec_left = g[0] < g[1] - 1e-13;
  bool dec_right = g[n - 1] < g[n - 2] - 1e-13;
  if (dec_left && dec_right)
    throw UnboundedBelowError("legendre_at: probe decreases at both grid ends");
  if (imin == 0 && dec_left) return kNegInf;
  if (imin == n - 1 && dec_right) return kNegInf;
  if (imin == 0 || imin == n - 1) return g[imin];

  if (!fn.eval) return g[imin];
  auto probe = [&](double q) { return alpha * q + fn.eval(q); };
  double q_star = golden_section_min(probe, qs[imin - 1], qs[imin + 1]);
  return std::min(g[imin], probe(q_star));
}

// Richardson-extrapolated one-sided difference quotients. Uses the curve's
// evaluator at shrinking steps; falls back to raw grid slopes without one.
inline std::pair<double, double> one_sided_derivatives(const SpectrumCurve& fn, double q) {
  const auto& qs = fn.q_grid;
  if (qs.size() < 2) throw Error("one_sided_derivatives: grid too small");
  double step = qs[1] - qs[0];
  if (!fn.eval) {
    auto it = std::lower_bound(qs.begin(), qs.end(), q - 1e-12);
    std::size_t i = static_cast<std::size_t>(it - qs.begin());
    if (i == 0 || i + 1 >= qs.size())
      throw Error("one_sided_derivatives: q not interior to the grid");
    double left = (fn.values[i] - fn.values[i - 1]) / (qs[i] - qs[i - 1]);
    double right = (fn.values[i + 1] - fn.values[i]) / (qs[i + 1] - qs[i]);
    return {left, right};
  }
  double h0 = std::min(step, 1e-3);
  auto side = [&](double sgn) {
    double f0 = fn.eval(q);
    double d1 = (fn.eval(q + sgn * h0) - f0) / (sgn * h0);
    double d2 = (fn.eval(q + sgn * h0 / 2) - f0) / (sgn * h0 / 2);
    double d4 = (fn.eval(q + sgn * h0 / 4) - f0) / (sgn * h0 / 4);
    double r1 = 2 * d2 - d1;
    double r2 = 2 * d4 - d2;
    return (4 * r2 - r1) / 3;
  };
  return {side(-1.0), side(+1.0)};
}

// Transform of fn over alpha in the negated-slope range of the grid.
inline TransformCurve spectrum_curve(const SpectrumCurve& fn, int points = 201) {
  const auto& qs = fn.q_grid;
  std::size_t n = qs.size();
  if (n < 3) throw Error("spectrum_curve: grid too small");
  // boundary slopes bound the slope range of a convex-ish decreasing curve
  double slope_left = (fn.values[1] - fn.values[0]) / (qs[1] - qs[0]);
  double slope_right = (fn.values[n - 1] - fn.values[n - 2]) / (qs[n - 1] - qs[n - 2]);
  double alpha_lo = -slope_right;
  double alpha_hi = -slope_left;
  if (alpha_lo > alpha_hi) std::swap(alpha_lo, alpha_hi);

  TransformCurve out;
  out.source_label = fn.label;
  for (int i = 0; i < points; ++i) {
    double a = alpha_lo + (alpha_hi - alpha_lo) * i / (points - 1);
    out.alpha_grid.push_back(a);
    out.values.push_back(legendre_at(fn, a));
  }
  return out;
}

// alpha window (alpha_low, alpha_high) of a decreasing curve with b(1) = 0:
// alpha_low = sup_{q>0} -b(q)/q, alpha_high = inf_{q<0} -b(q)/q.
inline std::pair<double, double> alpha_bounds(const SpectrumCurve& fn) {
  double lo = kNegInf, hi = -kNegInf;
  for (std::size_t i = 0; i < fn.q_grid.size(); ++i) {
    double q = fn.q_grid[i];
    if (q > 1e-9) lo = std::max(lo, -fn.values[i] / q);
    if (q < -1e-9) hi = std::min(hi, -fn.values[i] / q);
  }
  return {lo, hi};
}

}  // namespace mfhs

#endif  // MFHS_LEGENDRE_HPP
