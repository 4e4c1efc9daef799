// Fixed-scale covering/packing counts, q-moment partition sums, scaling
// exponents along regime-flip subsequences, and coarse level-set spectra.
#ifndef MFHS_ESTIMATOR_HPP
#define MFHS_ESTIMATOR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mfhs/common.hpp"
#include "mfhs/measures.hpp"
#include "mfhs/symbolic.hpp"

namespace mfhs {

struct ScaleEntry {
  long long n = 0;
  double log_scale = 0.0;     // log r_n
  double log_quantity = 0.0;  // log of the count / moment sum
};

struct ScaleSeries {
  std::vector<ScaleEntry> entries;
  std::string quantity_label;
};

struct DimEstimate {
  ScaleSeries series;
  double liminf_est = 0.0;
  double limsup_est = 0.0;
  std::vector<long long> subsequence_used;
};

// ---- q-moment partition sums ------------------------------------------------

// duplicate of the analytic helper, kept local so this header stands alone
inline double log_weight_sum_est(const std::vector<double>& w, double q) {
  std::vector<double> terms;
  terms.reserve(w.size());
  for (double x : w) terms.push_back(q * std::log(x));
  return log_sum_exp(terms);
}

// log sum_{sigma in D_n} mu(J_sigma)^q. Level-factorized (exact for all five
// families); with oracle=true, brute-force enumeration instead (n <= cap).
inline double partition_sum(const MeasureSpec& spec, long long n, double q,
                            bool oracle = false) {
  if (n < 1) throw Error("partition_sum: n >= 1 required");
  if (oracle) {
    // two-pass max-shifted Kahan sum: flat memory at 2^26 terms, error O(eps)
    double mx = kNegInf;
    for_each_cylinder(spec, static_cast<int>(n), [&](const WeightedCylinder& c) {
      mx = std::max(mx, q * c.log_measure);
    });
    double sum = 0.0, comp = 0.0;
    for_each_cylinder(spec, static_cast<int>(n), [&](const WeightedCylinder& c) {
      double y = std::exp(q * c.log_measure - mx) - comp;
      double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    });
    return mx + std::log(sum);
  }
  if (q == 1.0) return 0.0;  // the weights sum to 1 level by level
  double s = 0.0;
  for (long long j = 1; j <= n; ++j)
    s += log_weight_sum_est(spec.level_params(j).weights, q);
  return s;
}

// Exponent series log S_n(q) / (-log r_n) with liminf/limsup taken as the
// min/max over the family's regime-flip subsequence, warm-up depths dropped.
inline DimEstimate moment_scaling(const MeasureSpec& spec, double q,
                                  const std::vector<long long>& depths,
                                  long long warmup = 1) {
  if (depths.empty()) throw Error("moment_scaling: depths required");
  std::vector<long long> sorted = depths;
  std::sort(sorted.begin(), sorted.end());
  long long max_depth = sorted.back();

  DimEstimate est;
  est.series.quantity_label = "moment_q=" + format_double(q);

  // one incremental sweep over levels; record at each requested depth
  double lmoment = 0.0, ldiam = 0.0;
  std::size_t next = 0;
  std::map<long long, double> ratio_at;
  for (long long j = 1; j <= max_depth && next < sorted.size(); ++j) {
    LevelParams lp = spec.level_params(j);
    lmoment += log_weight_sum_est(lp.weights, q);
    ldiam += std::log(lp.ratio);
    while (next < sorted.size() && sorted[next] == j) {
      double lq = (q == 1.0) ? 0.0 : lmoment;
      double ratio = (q == 1.0) ? 0.0 : lq / (-ldiam);
      est.series.entries.push_back({j, ldiam, lq});
      ratio_at[j] = ratio;
      ++next;
    }
  }

  std::vector<long long> flips = spec.subsequence_depths(max_depth);
  double lo = -kNegInf, hi = kNegInf;
  for (long long d : flips) {
    auto it = ratio_at.find(d);
    if (it == ratio_at.end() || d < warmup) continue;
    est.subsequence_used.push_back(d);
    lo = std::min(lo, it->second);
    hi = std::max(hi, it->second);
  }
  if (est.subsequence_used.size() < 4)
    throw InsufficientDepthsError(
        "moment_scaling: fewer than 4 subsequence depths past warm-up (" +
        std::to_string(est.subsequence_used.size()) + ")");
  est.liminf_est = lo;
  est.limsup_est = hi;
  return est;
}

// ---- covering / packing counts ------------------------------------------------

namespace detail {

// First depth whose cylinder length is <= r (0 when r >= 1).
inline int resolution_depth(const MeasureSpec& spec, double r) {
  if (r >= 1.0) return 0;
  double len = 1.0;
  for (int k = 1;; ++k) {
    len *= spec.level_params(k).ratio;
    if (len <= r) return k;
    if (k > 4000) throw CapExceededError("resolution_depth: runaway depth");
  }
}

// Streams the embedded depth-n intervals left to right. Degenerate gaps are
// allowed here: the estimator treats contiguous siblings as touching.
template <typename Fn>
inline void stream_intervals(const MeasureSpec& spec, int n, Fn&& fn) {
  std::vector<LevelParams> lp;
  double count_log = 0.0;
  for (int k = 1; k <= n; ++k) {
    lp.push_back(spec.level_params(k));
    count_log += std::log2(static_cast<double>(lp.back().weights.size()));
    if (count_log > 26.0 + 1e-9)
      throw CapExceededError("covering/packing: depth-cap exceeded at depth " +
                             std::to_string(n));
  }
  std::function<void(int, double, double)> rec = [&](int depth, double left, double len) {
    if (depth == n) {
      fn(left, left + len);
      return;
    }
    int nk = static_cast<int>(lp[static_cast<std::size_t>(depth)].weights.size());
    double c = lp[static_cast<std::size_t>(depth)].ratio;
    double gap = (1.0 - nk * c) / (nk - 1);
    for (int j = 0; j < nk; ++j) rec(depth + 1, left + j * (c + gap) * len, len * c);
  };
  rec(0, 0.0, 1.0);
}

}  // namespace detail

// Greedy covering of the embedded set by closed balls of radius r with
// centers at resolution-cylinder endpoints; each ball is centered at the
// rightmost endpoint within reach of the first uncovered point.
inline long long covering_count(const MeasureSpec& spec, double r) {
  if (!(r > 0.0 && r <= 1.0)) throw Error("covering_count: r in (0,1] required");
  if (2.0 * r >= 1.0) return 1;  // a single ball spans the root interval
  if (spec.family == Family::FourLetter) {
    // ultra-metric: cylinders of generation n(r) are exactly the r-balls
    int n = detail::resolution_depth(spec, r);
    return 1ll << (2 * n);
  }
  int n = detail::resolution_depth(spec, r);
  long long count = 0;
  double covered = -1.0;
  bool pending = false;
  double u = 0.0, best = 0.0;
  auto place = [&]() {
    covered = best + r;
    ++count;
    pending = false;
  };
  detail::stream_intervals(spec, n, [&](double l, double R) {
    for (;;) {
      if (!pending) {
        if (R <= covered + 1e-15) return;
        u = std::max(l, covered);
        best = R;  // R - u <= cylinder length <= r, so R is always in reach
        pending = true;
      }
      if (l <= u + r && l > best) best = l;
      if (R <= u + r) {
        if (R > best) best = R;
        return;  // later cylinders may still extend the reach
      }
      place();  // this cylinder starts beyond reach; close out the ball
      if (R <= covered + 1e-15) return;
      u = std::max(l, covered);
      best = R;
      pending = true;
      return;
    }
  });
  if (pending) place();
  return count;
}

// Greedy packing by disjoint closed balls of radius r centered at
// resolution-cylinder endpoints (consecutive centers > 2r apart).
inline long long packing_count(const MeasureSpec& spec, double r) {
  if (!(r > 0.0 && r <= 1.0)) throw Error("packing_count: r in (0,1] required");
  if (2.0 * r >= 1.0) return 1;
  if (spec.family == Family::FourLetter) {
    int n = detail::resolution_depth(spec, r);
    return 1ll << (2 * n);
  }
  int n = detail::resolution_depth(spec, r);
  long long count = 0;
  double prev = -10.0;
  bool first = true;
  detail::stream_intervals(spec, n, [&](double l, double R) {
    for (double c : {l, R}) {
      if (first || c > prev + 2.0 * r + 1e-15) {
        prev = c;
        first = false;
        ++count;
      }
    }
  });
  return count;
}

// Box-dimension estimate from covering counts over a decreasing r schedule.
inline DimEstimate box_dimensions(const MeasureSpec& spec, const std::vector<double>& r_schedule) {
  if (r_schedule.empty()) throw Error("box_dimensions: r schedule required");
  DimEstimate est;
  est.series.quantity_label = "covering_count";
  double lo = -kNegInf, hi = kNegInf;
  long long idx = 0;
  for (double r : r_schedule) {
    long long N = covering_count(spec, r);
    double ratio = std::log(static_cast<double>(N)) / (-std::log(r));
    est.series.entries.push_back({++idx, std::log(r), std::log(static_cast<double>(N))});
    est.subsequence_used.push_back(idx);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  est.liminf_est = lo;
  est.limsup_est = hi;
  return est;
}

// ---- coarse level sets ----------------------------------------------------------

struct CoarseLevelSet {
  double log_count = kNegInf;  // natural log of the cylinder count, -inf if empty
  double exponent = kNegInf;   // log count / (-log r_n)
};

namespace detail {

struct BinHist {
  double width = 1.0;                    // bin width in log-measure units
  std::map<long long, double> log_mass;  // bin index -> log count
};

// Distinct weight values of one level class with their multiplicities.
struct LevelClass {
  std::vector<double> log_values;
  std::vector<double> log_group;  // log of identical-weight branch counts
  long long repeats = 0;
};

// Exact log-count histogram of log mu over all assignments of `m` levels of
// one class: compositions over distinct weight values, multinomially counted.
inline BinHist class_histogram(const LevelClass& cls, double width) {
  BinHist h;
  h.width = width;
  int d = static_cast<int>(cls.log_values.size());
  long long m = cls.repeats;

  // cells = C(m + d - 1, d - 1); guard the enumeration
  double cells = 1.0;
  for (int i = 1; i < d; ++i) cells *= static_cast<double>(m + i) / i;
  if (cells > 8e7)
    throw CapExceededError("coarse_level_set: class enumeration needs " +
                           format_double(cells) + " cells");

  std::vector<long long> k(static_cast<std::size_t>(d), 0);
  std::function<void(int, long long, double, double)> rec =
      [&](int i, long long left, double L, double lmult) {
        if (i == d - 1) {
          double Lf = L + static_cast<double>(left) * cls.log_values[static_cast<std::size_t>(i)];
          double lm = lmult - std::lgamma(static_cast<double>(left) + 1.0) +
                      static_cast<double>(left) * cls.log_group[static_cast<std::size_t>(i)];
          long long bin = std::llround(Lf / width);
          auto it = h.log_mass.find(bin);
          if (it == h.log_mass.end())
            h.log_mass[bin] = lm;
          else
            it->second = log_add(it->second, lm);
          return;
        }
        for (long long ki = 0; ki <= left; ++ki) {
          rec(i + 1, left - ki,
              L + static_cast<double>(ki) * cls.log_values[static_cast<std::size_t>(i)],
              lmult - std::lgamma(static_cast<double>(ki) + 1.0) +
                  static_cast<double>(ki) * cls.log_group[static_cast<std::size_t>(i)]);
        }
      };
  rec(0, m, 0.0, std::lgamma(static_cast<double>(m) + 1.0));
  return h;
}

inline BinHist convolve(const BinHist& x, const BinHist& y) {
  BinHist out;
  out.width = x.width;
  for (const auto& [bx, lx] : x.log_mass)
    for (const auto& [by, ly] : y.log_mass) {
      long long b = bx + by;
      double v = lx + ly;
      auto it = out.log_mass.find(b);
      if (it == out.log_mass.end())
        out.log_mass[b] = v;
      else
        it->second = log_add(it->second, v);
    }
  return out;
}

inline BinHist level_histogram_uncached(const MeasureSpec& spec, long long n, double width) {
  // group the n levels into classes of identical weight vectors
  std::vector<std::pair<std::vector<double>, LevelClass>> classes;
  for (long long j = 1; j <= n; ++j) {
    std::vector<double> w = spec.level_params(j).weights;
    auto it = std::find_if(classes.begin(), classes.end(),
                           [&](const auto& c) { return c.first == w; });
    if (it == classes.end()) {
      LevelClass cls;
      std::vector<double> sorted = w;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < sorted.size();) {
        std::size_t g = 1;
        while (i + g < sorted.size() && sorted[i + g] == sorted[i]) ++g;
        cls.log_values.push_back(std::log(sorted[i]));
        cls.log_group.push_back(std::log(static_cast<double>(g)));
        i += g;
      }
      cls.repeats = 1;
      classes.emplace_back(std::move(w), std::move(cls));
    } else {
      ++it->second.repeats;
    }
  }
  BinHist acc;
  acc.width = width;
  acc.log_mass[0] = 0.0;  // empty product
  for (const auto& [w, cls] : classes) acc = convolve(acc, class_histogram(cls, width));
  return acc;
}

// Fingerprint of everything the depth-n histogram depends on, so repeated
// queries at different alpha/eps values reuse one enumeration.
inline std::string histogram_key(const MeasureSpec& spec, long long n, double width) {
  std::string key = std::string(family_name(spec.family)) + "|";
  auto add = [&](double v) { key += format_double(v); key += ','; };
  add(spec.r_a); add(spec.r_b);
  for (double v : spec.P_a) add(v);
  for (double v : spec.P_b) add(v);
  add(spec.p); add(spec.p_hat); add(spec.p_tilde);
  add(static_cast<double>(spec.A)); add(static_cast<double>(spec.B));
  for (double v : spec.a) add(v);
  for (double v : spec.b) add(v);
  key += std::to_string(static_cast<int>(spec.schedule.kind)) + "|";
  for (long long t : spec.schedule.custom) key += std::to_string(t) + ",";
  key += "|" + std::to_string(n) + "|" + format_double(width);
  return key;
}

inline const BinHist& level_histogram(const MeasureSpec& spec, long long n, double width) {
  static thread_local std::map<std::string, BinHist> cache;
  std::string key = histogram_key(spec, n, width);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (cache.size() >= 64) cache.clear();  // bound the footprint
  return cache.emplace(std::move(key), level_histogram_uncached(spec, n, width))
      .first->second;
}

}  // namespace detail

// Count of depth-n cylinders whose local exponent lies in [alpha-eps, alpha+eps],
// computed exactly per weight-class and binned at exponent resolution
// min(eps, 0.02)/10 (fixed floor keeps counts monotone across the canonical
// eps schedule).
inline CoarseLevelSet coarse_level_set(const MeasureSpec& spec, double alpha, double eps,
                                       long long n) {
  if (!(eps > 0.0)) throw Error("coarse_level_set: eps > 0 required");
  if (n < 1) throw Error("coarse_level_set: n >= 1 required");
  double ld = log_diameter(spec, n);  // < 0
  double width = (std::min(eps, 0.02) / 10.0) * (-ld);
  const detail::BinHist& hist = detail::level_histogram(spec, n, width);

  double L_lo = (alpha + eps) * ld;  // ld < 0 flips the window
  double L_hi = (alpha - eps) * ld;
  std::vector<double> terms;
  for (const auto& [bin, lm] : hist.log_mass) {
    double L = static_cast<double>(bin) * width;
    if (L >= L_lo && L <= L_hi) terms.push_back(lm);
  }
  CoarseLevelSet out;
  if (terms.empty()) return out;
  out.log_count = log_sum_exp(terms);
  out.exponent = out.log_count / (-ld);
  return out;
}

struct LevelSetEstimate {
  double lower_est = kNegInf;
  double upper_est = kNegInf;
  double eps_used = 0.0;
  bool stable = false;
  // (eps, (lower, upper)) per schedule entry, largest eps first
  std::vector<std::pair<double, std::pair<double, double>>> per_eps;
};

// Double-limit approximation: per eps, min/max coarse exponent over the depth
// schedule; stability = both readings moving < 0.02 across the last two eps.
inline LevelSetEstimate level_set_spectrum(const MeasureSpec& spec, double alpha,
                                           std::vector<double> eps_schedule,
                                           const std::vector<long long>& depth_schedule) {
  if (eps_schedule.empty() || depth_schedule.empty())
    throw Error("level_set_spectrum: schedules required");
  std::sort(eps_schedule.begin(), eps_schedule.end(), std::greater<double>());
  LevelSetEstimate est;
  for (double eps : eps_schedule) {
    double lo = -kNegInf, hi = kNegInf;
    for (long long d : depth_schedule) {
      double e = coarse_level_set(spec, alpha, eps, d).exponent;
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    est.per_eps.push_back({eps, {lo, hi}});
  }
  auto last = est.per_eps.back().second;
  est.lower_est = last.first;
  est.upper_est = last.second;
  est.eps_used = est.per_eps.back().first;
  if (est.per_eps.size() >= 2) {
    auto prev = est.per_eps[est.per_eps.size() - 2].second;
    auto close = [](double x, double y) {
      if (x == kNegInf || y == kNegInf) return x == y;
      return std::fabs(x - y) <= 0.02;
    };
    est.stable = close(prev.first, last.first) && close(prev.second, last.second);
  }
  return est;
}

inline std::vector<double> default_eps_schedule() { return {0.2, 0.1, 0.05, 0.02}; }

}  // namespace mfhs

#endif  // MFHS_ESTIMATOR_HPP
