// The five measure families as log-space evaluators: per-level weights and
// ratios, cylinder measures, exhaustive level enumeration, local exponents
// and measure-distributed sampling.
#ifndef MFHS_MEASURES_HPP
#define MFHS_MEASURES_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "mfhs/common.hpp"
#include "mfhs/symbolic.hpp"

namespace mfhs {

enum class Family {
  FibonacciMoran,
  NonRegularMoran,
  SwitchedBernoulli,
  FourLetter,
  YuanSwitching,
};

inline const char* family_name(Family f) {
  switch (f) {
    case Family::FibonacciMoran: return "FibonacciMoran";
    case Family::NonRegularMoran: return "NonRegularMoran";
    case Family::SwitchedBernoulli: return "SwitchedBernoulli";
    case Family::FourLetter: return "FourLetter";
    case Family::YuanSwitching: return "YuanSwitching";
  }
  return "?";
}

// Weights and contraction ratio of one construction level.
struct LevelParams {
  std::vector<double> weights;
  double ratio = 0.5;
};

struct MeasureSpec {
  Family family = Family::SwitchedBernoulli;

  // FibonacciMoran / NonRegularMoran
  double r_a = 0.4;
  double r_b = 0.3;
  std::vector<double> P_a{0.3, 0.7};        // also p_a for NonRegularMoran
  std::vector<double> P_b{0.2, 0.3, 0.5};   // also p_b

  // SwitchedBernoulli
  double p = 0.2;
  double p_hat = 0.4;

  // FourLetter
  std::vector<double> a{0.1, 0.2, 0.3, 0.4};
  std::vector<double> b{0.25, 0.25, 0.25, 0.25};

  // YuanSwitching; the schedule below doubles as the block sequence N_k
  double A = 4.0;
  double B = 3.0;
  double p_tilde = 0.4;

  Schedule schedule = Schedule::factorial();

  // Test hook: permits A == B in YuanSwitching reduction tests only.
  bool relax_constraints = false;

  static MeasureSpec fibonacci(double ra, double rb, std::vector<double> Pa,
                               std::vector<double> Pb) {
    MeasureSpec s;
    s.family = Family::FibonacciMoran;
    s.r_a = ra;
    s.r_b = rb;
    s.P_a = std::move(Pa);
    s.P_b = std::move(Pb);
    s.validate();
    return s;
  }
  static MeasureSpec non_regular(double ra, double rb, std::vector<double> pa,
                                 std::vector<double> pb) {
    MeasureSpec s;
    s.family = Family::NonRegularMoran;
    s.r_a = ra;
    s.r_b = rb;
    s.P_a = std::move(pa);
    s.P_b = std::move(pb);
    s.schedule = Schedule::doubling();
    s.validate();
    return s;
  }
  static MeasureSpec switched(double p_, double p_hat_,
                              Schedule sched = Schedule::factorial()) {
    MeasureSpec s;
    s.family = Family::SwitchedBernoulli;
    s.p = p_;
    s.p_hat = p_hat_;
    s.schedule = std::move(sched);
    s.validate();
    return s;
  }
  static MeasureSpec four_letter(std::vector<double> a_, std::vector<double> b_,
                                 Schedule sched = Schedule::factorial()) {
    MeasureSpec s;
    s.family = Family::FourLetter;
    s.a = std::move(a_);
    s.b = std::move(b_);
    s.schedule = std::move(sched);
    s.validate();
    return s;
  }
  static MeasureSpec yuan(double A_, double B_, double p_, double p_tilde_,
                          Schedule blocks = Schedule::factorial()) {
    MeasureSpec s;
    s.family = Family::YuanSwitching;
    s.A = A_;
    s.B = B_;
    s.p = p_;
    s.p_tilde = p_tilde_;
    s.schedule = std::move(blocks);
    s.validate();
    return s;
  }

  void validate() const {
    switch (family) {
      case Family::FibonacciMoran:
      case Family::NonRegularMoran:
        if (!(r_a > 0.0 && r_a < 0.5))
          throw Error(std::string(family_name(family)) + ": r_a must satisfy 0 < r_a < 1/2");
        if (!(r_b > 0.0 && r_b < 1.0 / 3.0))
          throw Error(std::string(family_name(family)) + ": r_b must satisfy 0 < r_b < 1/3");
        check_prob(P_a, 2, "P_a");
        check_prob(P_b, 3, "P_b");
        break;
      case Family::SwitchedBernoulli:
        if (!(p > 0.0 && p < p_hat && p_hat <= 0.5))
          throw Error("SwitchedBernoulli: need 0 < p < p_hat <= 1/2");
        break;
      case Family::FourLetter:
        check_prob(a, 4, "a");
        check_prob(b, 4, "b");
        break;
      case Family::YuanSwitching:
        if (!relax_constraints && !(A > B && B > 2.0))
          throw Error("YuanSwitching: need A > B > 2");
        if (relax_constraints && !(A >= B && B >= 2.0))
          throw Error("YuanSwitching: need A >= B >= 2");
        if (!(p > 0.0 && p <= 0.5)) throw Error("YuanSwitching: need 0 < p <= 1/2");
        if (!(p_tilde > 0.0 && p_tilde <= 0.5))
          throw Error("YuanSwitching: need 0 < p_tilde <= 1/2");
        break;
    }
  }

  // Parameter regime of construction level j >= 1.
  // Phase-odd levels ('b') carry the alternating family's b-params, the
  // switched family's p, and the four-symbol family's a-params.
  LevelParams level_params(long long j) const {
    switch (family) {
      case Family::FibonacciMoran: {
        char s = fib().at(static_cast<std::size_t>(j));
        return s == 'a' ? LevelParams{P_a, r_a} : LevelParams{P_b, r_b};
      }
      case Family::NonRegularMoran: {
        if (j == 1) return {P_a, r_a};  // explicit level-1 override of the phase rule
        char s = schedule.regime_letter(j);
        return s == 'b' ? LevelParams{P_b, r_b} : LevelParams{P_a, r_a};
      }
      case Family::SwitchedBernoulli: {
        double w = (schedule.regime_letter(j) == 'b') ? p : p_hat;
        return {{w, 1.0 - w}, 0.5};
      }
      case Family::FourLetter: {
        char s = schedule.regime_letter(j);
        return s == 'b' ? LevelParams{a, 0.25} : LevelParams{b, 0.25};
      }
      case Family::YuanSwitching: {
        // block k holds levels N_k < i <= N_{k+1}, N_0 = 0; even k is the A block
        int k = schedule.phase_count(j - 1);
        if (k % 2 == 0) return {{p, 1.0 - p}, 1.0 / A};
        return {{p_tilde, 1.0 - p_tilde}, 1.0 / B};
      }
    }
    throw Error("level_params: bad family");
  }

  MoranSpec moran() const {
    return MoranSpec{
        [this](int k) { return static_cast<int>(level_params(k).weights.size()); },
        [this](int k) { return level_params(k).ratio; }};
  }

  // Depths just before a regime flip, the designated liminf/limsup
  // subsequence of this family, clipped to [1, max_depth].
  std::vector<long long> subsequence_depths(long long max_depth) const {
    if (family == Family::FibonacciMoran) {
      std::vector<long long> out;
      for (long long d = 1; d <= max_depth; ++d) out.push_back(d);
      return out;
    }
    if (family == Family::YuanSwitching) {
      std::vector<long long> out;
      for (int k = 1;; ++k) {
        long long nk;
        try {
          nk = schedule.value(k);
        } catch (...) {
          break;
        }
        if (nk > max_depth) break;
        if (nk >= 1) out.push_back(nk);
      }
      if (out.empty() || out.back() != max_depth) out.push_back(max_depth);
      return out;
    }
    return schedule.flip_depths(max_depth);
  }

  FibWord& fib() const {
    if (!fib_) fib_ = std::make_shared<FibWord>();
    return *fib_;
  }

 private:
  mutable std::shared_ptr<FibWord> fib_;

  static void check_prob(const std::vector<double>& v, std::size_t len, const char* name) {
    if (v.size() != len)
      throw Error(std::string(name) + " must have " + std::to_string(len) + " entries");
    double s = 0.0;
    for (double x : v) {
      if (!(x > 0.0)) throw Error(std::string(name) + " entries must be strictly positive");
      s += x;
    }
    if (std::fabs(s - 1.0) > 1e-12)
      throw Error(std::string(name) + " sums to " + format_double(s) + ", expected 1");
  }
};

struct WeightedCylinder {
  Word word;
  double log_measure = 0.0;
  double log_diameter = 0.0;
};

inline double cylinder_measure(const MeasureSpec& spec, const Word& word) {
  double lm = 0.0;
  for (int k = 1; k <= word.depth(); ++k) {
    LevelParams lp = spec.level_params(k);
    int j = word.indices[static_cast<std::size_t>(k - 1)];
    if (j < 1 || j > static_cast<int>(lp.weights.size()))
      throw Error("cylinder_measure: branch index " + std::to_string(j) +
                  " invalid at level " + std::to_string(k));
    lm += std::log(lp.weights[static_cast<std::size_t>(j - 1)]);
  }
  return lm;
}

// log |J_sigma| at depth n (uniform across sigma: homogeneous construction).
inline double log_diameter(const MeasureSpec& spec, long long n) {
  double ld = 0.0;
  for (long long k = 1; k <= n; ++k) ld += std::log(spec.level_params(k).ratio);
  return ld;
}

inline constexpr std::uint64_t kEnumerationCap = 1ull << 26;

// Streams every depth-n cylinder in index order. Throws CapExceededError when
// |D_n| would exceed the enumeration cap.
template <typename Fn>
inline void for_each_cylinder(const MeasureSpec& spec, int n, Fn&& fn) {
  std::vector<LevelParams> lp;
  lp.reserve(static_cast<std::size_t>(n));
  double count_log = 0.0;
  for (int k = 1; k <= n; ++k) {
    lp.push_back(spec.level_params(k));
    count_log += std::log2(static_cast<double>(lp.back().weights.size()));
    if (count_log > 26.0 + 1e-9)
      throw CapExceededError("level: |D_n| exceeds enumeration cap at depth " +
                             std::to_string(n));
  }
  double ld = 0.0;
  for (const auto& l : lp) ld += std::log(l.ratio);

  Word w;
  w.indices.reserve(static_cast<std::size_t>(n));
  double lm = 0.0;
  std::function<void()> rec = [&]() {
    int depth = w.depth();
    if (depth == n) {
      fn(WeightedCylinder{w, lm, ld});
      return;
    }
    const auto& weights = lp[static_cast<std::size_t>(depth)].weights;
    for (int j = 1; j <= static_cast<int>(weights.size()); ++j) {
      w.indices.push_back(j);
      double lw = std::log(weights[static_cast<std::size_t>(j - 1)]);
      // save/restore instead of += / -=: the latter drifts over the traversal
      double saved = lm;
      lm = saved + lw;
      rec();
      lm = saved;
      w.indices.pop_back();
    }
  };
  rec();
}

inline std::vector<WeightedCylinder> level(const MeasureSpec& spec, int n) {
  std::vector<WeightedCylinder> out;
  for_each_cylinder(spec, n, [&](const WeightedCylinder& c) { out.push_back(c); });
  return out;
}

inline double local_exponent(const MeasureSpec& spec, const Word& word) {
  if (word.depth() < 1) throw Error("local_exponent: depth >= 1 required");
  return cylinder_measure(spec, word) / log_diameter(spec, word.depth());
}

// Word drawn with probability mu(J_sigma), deterministic in the seed.
inline Word sample_word(const MeasureSpec& spec, int n, std::uint64_t seed) {
  if (n < 1) throw Error("sample_word: n >= 1 required");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Word w;
  w.indices.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    const auto weights = spec.level_params(k).weights;
    double u = unif(rng);
    double acc = 0.0;
    int pick = static_cast<int>(weights.size());
    for (int j = 1; j <= static_cast<int>(weights.size()); ++j) {
      acc += weights[static_cast<std::size_t>(j - 1)];
      if (u < acc) {
        pick = j;
        break;
      }
    }
    w.indices.push_back(pick);
  }
  return w;
}

}  // namespace mfhs

#endif  // MFHS_MEASURES_HPP
