// Closed-form dimension functions per family, the entropy helpers, and the
// bisection solver for the depth-k implicit exponent equation.
#ifndef MFHS_ANALYTIC_HPP
#define MFHS_ANALYTIC_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mfhs/common.hpp"
#include "mfhs/measures.hpp"

namespace mfhs {

// log(sum_i w_i^q), stable for q of either sign.
inline double log_weight_sum(const std::vector<double>& w, double q) {
  std::vector<double> terms;
  terms.reserve(w.size());
  for (double x : w) terms.push_back(q * std::log(x));
  return log_sum_exp(terms);
}

inline double log2_weight_sum(const std::vector<double>& w, double q) {
  return log_weight_sum(w, q) / std::log(2.0);
}

struct SpectrumCurve {
  std::vector<double> q_grid;
  std::vector<double> values;
  std::string label;
  // Closed-form evaluator backing the grid; used for derivative and
  // transform refinement off grid points.
  std::function<double(double)> eval;
};

inline SpectrumCurve sample_curve(std::function<double(double)> f, std::string label,
                                  double q_min = -5.0, double q_max = 5.0,
                                  double step = 0.05) {
  SpectrumCurve c;
  c.label = std::move(label);
  c.eval = std::move(f);
  int steps = static_cast<int>(std::round((q_max - q_min) / step));
  for (int i = 0; i <= steps; ++i) {
    double q = q_min + i * step;
    c.q_grid.push_back(q);
    c.values.push_back(c.eval(q));
  }
  return c;
}

// ---- golden-mean substitution family ----------------------------------------------------------------

inline double beta_k_fibonacci(double q, long long k, const MeasureSpec& spec) {
  if (spec.family != Family::FibonacciMoran) throw Error("beta_k_fibonacci: wrong family");
  if (k < 1) throw Error("beta_k_fibonacci: k >= 1 required");
  double na = static_cast<double>(spec.fib().count_a(static_cast<std::size_t>(k)));
  double rho = (static_cast<double>(k) - na) / na;  // |w_k|_b / |w_k|_a
  double La = log_weight_sum(spec.P_a, q);
  double Lb = log_weight_sum(spec.P_b, q);
  return (-La - rho * Lb) / (std::log(spec.r_a) + rho * std::log(spec.r_b));
}

inline double beta_fibonacci(double q, const MeasureSpec& spec) {
  if (spec.family != Family::FibonacciMoran) throw Error("beta_fibonacci: wrong family");
  double eta = fibonacci_eta();
  double La = log_weight_sum(spec.P_a, q);
  double Lb = log_weight_sum(spec.P_b, q);
  return (-La - eta * Lb) / (std::log(spec.r_a) + eta * std::log(spec.r_b));
}

// ---- implicit depth-k exponent, any family -------------------------------------

// Solves log sum_sigma mu(J_sigma)^q + beta log|J_sigma| = 0 by bisection.
// The sum is level-factorized, so F is affine in beta; bisection is kept as
// the cross-check oracle the callers expect.
inline double beta_k_bisection(const MeasureSpec& spec, double q, long long k) {
  if (k < 1) throw Error("beta_k_bisection: k >= 1 required");
  double lmoment = 0.0;  // log sum mu^q over D_k
  double ldiam = 0.0;
  for (long long j = 1; j <= k; ++j) {
    LevelParams lp = spec.level_params(j);
    lmoment += log_weight_sum(lp.weights, q);
    ldiam += std::log(lp.ratio);
  }
  if (q == 1.0) return 0.0;  // sum mu = 1 exactly
  auto F = [&](double beta) { return lmoment + beta * ldiam; };
  double lo = -64.0, hi = 64.0;
  while (F(lo) * F(hi) > 0.0) {
    lo *= 2.0;
    hi *= 2.0;
    if (hi > 1e3)
      throw BracketFailureError("beta_k_bisection: no sign change within |beta| <= 1e3");
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = F(mid);
    if (std::fabs(fm) <= 1e-12) return mid;
    if (F(lo) * fm <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// ---- alternating two-ratio family ----------------------------------------------------------------

// The two limit points of beta_k along the doubling schedule: mixture weights
// (1/3, 2/3) and (2/3, 1/3) on the (a, b) level types.
inline std::pair<double, double> beta_bounds_alternating(double q, const MeasureSpec& spec) {
  if (spec.family != Family::NonRegularMoran) throw Error("beta_bounds_alternating: wrong family");
  double La = log_weight_sum(spec.P_a, q);
  double Lb = log_weight_sum(spec.P_b, q);
  double la = std::log(spec.r_a), lb = std::log(spec.r_b);
  auto mix = [&](double wa) {
    return -(wa * La + (1.0 - wa) * Lb) / (wa * la + (1.0 - wa) * lb);
  };
  double v1 = mix(1.0 / 3.0);
  double v2 = mix(2.0 / 3.0);
  return {std::min(v1, v2), std::max(v1, v2)};
}

// ---- switched two-branch family ----------------------------------------------------------------

enum class TauBranch { Lower, Upper };

inline double tau_switched(double q, TauBranch which, const MeasureSpec& spec) {
  if (spec.family != Family::SwitchedBernoulli) throw Error("tau_switched: wrong family");
  double w = (which == TauBranch::Lower) ? spec.p : spec.p_hat;
  return log2_weight_sum({w, 1.0 - w}, q);
}

inline std::pair<double, double> b_B_switched(double q, const MeasureSpec& spec) {
  double lo = tau_switched(q, TauBranch::Lower, spec);
  double hi = tau_switched(q, TauBranch::Upper, spec);
  return {std::min(lo, hi), std::max(lo, hi)};
}

// Derivative of q -> log2(w^q + (1-w)^q), closed form.
inline double tau_prime(double w, double q) {
  // (w^q log2 w + (1-w)^q log2(1-w)) / (w^q + (1-w)^q), computed via the
  // ratio t = ((1-w)/w)^q for stability
  double t = std::exp(q * (std::log1p(-w) - std::log(w)));
  return (std::log2(w) + t * std::log2(1.0 - w)) / (1.0 + t);
}

// ---- four-symbol switched family ----------------------------------------------------------------

inline std::pair<double, double> b_B_four_letter(double q, const MeasureSpec& spec) {
  if (spec.family != Family::FourLetter) throw Error("b_B_four_letter: wrong family");
  double va = log_weight_sum(spec.a, q) / std::log(4.0);
  double vb = log_weight_sum(spec.b, q) / std::log(4.0);
  return {std::min(va, vb), std::max(va, vb)};
}

// ---- YuanSwitching -------------------------------------------------------------

inline std::pair<double, double> yuan_betas(double q, const MeasureSpec& spec) {
  if (spec.family != Family::YuanSwitching) throw Error("yuan_betas: wrong family");
  double b1 = log_weight_sum({spec.p, 1.0 - spec.p}, q) / std::log(spec.A);
  double b2 = log_weight_sum({spec.p_tilde, 1.0 - spec.p_tilde}, q) / std::log(spec.B);
  return {b1, b2};
}

// ---- entropies -----------------------------------------------------------------

inline double entropy_H(double s) {
  if (!(s > 0.0 && s < 1.0)) throw Error("entropy_H: s in (0,1) required");
  return -s * std::log2(s) + (s - 1.0) * std::log2(1.0 - s);
}

// h(ph, p) = -ph log2 p - (1 - ph) log2(1 - p); h(p, p) = H(p).
inline double mixed_entropy_h(double ph, double p) {
  if (!(p > 0.0 && p < 1.0) || !(ph >= 0.0 && ph <= 1.0))
    throw Error("mixed_entropy_h: need p in (0,1), ph in [0,1]");
  return -ph * std::log2(p) - (1.0 - ph) * std::log2(1.0 - p);
}

// ---- curve bundles per family ----------------------------------------------------

struct NamedCurve {
  std::string label;
  std::function<double(double)> eval;
  // pointwise minima of convex curves are generally not convex
  bool convex = true;
};

// The analytic curves applicable to a family, in plot order.
inline std::vector<NamedCurve> family_curves(const MeasureSpec& spec) {
  std::vector<NamedCurve> out;
  switch (spec.family) {
    case Family::FibonacciMoran:
      out.push_back({"beta", [spec](double q) { return beta_fibonacci(q, spec); }});
      break;
    case Family::NonRegularMoran:
      out.push_back({"beta_lower",
                     [spec](double q) { return beta_bounds_alternating(q, spec).first; },
                     false});
      out.push_back({"beta_upper",
                     [spec](double q) { return beta_bounds_alternating(q, spec).second; }});
      break;
    case Family::SwitchedBernoulli:
      out.push_back({"tau_lower",
                     [spec](double q) { return tau_switched(q, TauBranch::Lower, spec); }});
      out.push_back({"tau_upper",
                     [spec](double q) { return tau_switched(q, TauBranch::Upper, spec); }});
      out.push_back({"b", [spec](double q) { return b_B_switched(q, spec).first; }, false});
      out.push_back({"B", [spec](double q) { return b_B_switched(q, spec).second; }});
      out.push_back({"Delta", [spec](double q) { return b_B_switched(q, spec).second; }});
      break;
    case Family::FourLetter:
      out.push_back({"b", [spec](double q) { return b_B_four_letter(q, spec).first; }, false});
      out.push_back({"B", [spec](double q) { return b_B_four_letter(q, spec).second; }});
      break;
    case Family::YuanSwitching:
      out.push_back({"beta1", [spec](double q) { return yuan_betas(q, spec).first; }});
      out.push_back({"beta2", [spec](double q) { return yuan_betas(q, spec).second; }});
      out.push_back({"b",
                     [spec](double q) {
                       auto bb = yuan_betas(q, spec);
                       return std::min(bb.first, bb.second);
                     },
                     false});
      out.push_back({"B", [spec](double q) {
                       auto bb = yuan_betas(q, spec);
                       return std::max(bb.first, bb.second);
                     }});
      break;
  }
  return out;
}

// The family's b and B evaluators (b = B where only one curve exists).
inline std::pair<std::function<double(double)>, std::function<double(double)>>
b_B_functions(const MeasureSpec& spec) {
  switch (spec.family) {
    case Family::FibonacciMoran: {
      auto f = [spec](double q) { return beta_fibonacci(q, spec); };
      return {f, f};
    }
    case Family::NonRegularMoran:
      return {[spec](double q) { return beta_bounds_alternating(q, spec).first; },
              [spec](double q) { return beta_bounds_alternating(q, spec).second; }};
    case Family::SwitchedBernoulli:
      return {[spec](double q) { return b_B_switched(q, spec).first; },
              [spec](double q) { return b_B_switched(q, spec).second; }};
    case Family::FourLetter:
      return {[spec](double q) { return b_B_four_letter(q, spec).first; },
              [spec](double q) { return b_B_four_letter(q, spec).second; }};
    case Family::YuanSwitching:
      return {[spec](double q) {
                auto bb = yuan_betas(q, spec);
                return std::min(bb.first, bb.second);
              },
              [spec](double q) {
                auto bb = yuan_betas(q, spec);
                return std::max(bb.first, bb.second);
              }};
  }
  throw Error("b_B_functions: bad family");
}

}  // namespace mfhs

#endif  // MFHS_ANALYTIC_HPP
