// Words, Moran interval geometry, Fibonacci substitution words and the
// regime-switching schedules that drive every measure family.
#ifndef MFHS_SYMBOLIC_HPP
#define MFHS_SYMBOLIC_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mfhs/common.hpp"

namespace mfhs {

// ---- words ------------------------------------------------------------------

// A finite branch-index sequence addressing a cylinder. Indices are 1-based;
// index j at level k must satisfy 1 <= j <= n_k.
struct Word {
  std::vector<int> indices;

  int depth() const { return static_cast<int>(indices.size()); }

  Word child(int j) const {
    Word w = *this;
    w.indices.push_back(j);
    return w;
  }

  bool operator==(const Word& o) const { return indices == o.indices; }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (i) s += '.';
      s += std::to_string(indices[i]);
    }
    return s;
  }
};

// ---- Moran structure --------------------------------------------------------

// Level-wise branching n_k >= 2 and uniform contraction c_k in (0,1) with
// n_k c_k <= 1. Children are placed flush-left/flush-right with equal
// interior gaps, so the relative gap is (1 - n_k c_k) / (n_k - 1).
struct MoranSpec {
  std::function<int(int)> branching;    // level k >= 1 -> n_k
  std::function<double(int)> ratio;     // level k >= 1 -> c_k

  void validate_level(int k) const {
    int n = branching(k);
    double c = ratio(k);
    if (n < 2) throw Error("MoranSpec: n_k >= 2 violated at level " + std::to_string(k));
    if (!(c > 0.0 && c < 1.0))
      throw Error("MoranSpec: c_k in (0,1) violated at level " + std::to_string(k));
    if (n * c > 1.0 + 1e-15)
      throw Error("MoranSpec: n_k * c_k <= 1 violated at level " + std::to_string(k));
  }

  double relative_gap(int k) const {
    int n = branching(k);
    double c = ratio(k);
    return (1.0 - n * c) / (n - 1);
  }
};

struct CylinderGeom {
  double left = 0.0;
  double length = 1.0;
};

inline std::vector<Word> children(const Word& word, const MoranSpec& spec) {
  int k = word.depth() + 1;
  spec.validate_level(k);
  int n = spec.branching(k);
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) out.push_back(word.child(j));
  return out;
}

namespace detail {
inline CylinderGeom embed_impl(const Word& word, const MoranSpec& spec, bool allow_degenerate) {
  CylinderGeom g;  // root J = [0,1]
  for (int k = 1; k <= word.depth(); ++k) {
    spec.validate_level(k);
    int n = spec.branching(k);
    double c = spec.ratio(k);
    double gap = (1.0 - n * c) / (n - 1);
    if (!allow_degenerate && gap <= 0.0)
      throw DegenerateGapError("embed: n_k * c_k = 1 at level " + std::to_string(k) +
                               " leaves no gap (SSC violated)");
    int j = word.indices[static_cast<std::size_t>(k - 1)];
    if (j < 1 || j > n) throw Error("embed: branch index out of range at level " + std::to_string(k));
    g.left += (j - 1) * (c + gap) * g.length;
    g.length *= c;
  }
  return g;
}
}  // namespace detail

inline CylinderGeom embed(const Word& word, const MoranSpec& spec) {
  return detail::embed_impl(word, spec, /*allow_degenerate=*/false);
}

// ---- Fibonacci substitution word ---------------------------------------------

// Prefix machinery for the fixed point of F(a)=ab, F(b)=a. Grown on demand
// via F^n(a) = F^{n-1}(a) F^{n-2}(a); prefix counts of 'a' are cached so
// letter-frequency scans are O(1) per query after a linear build.
class FibWord {
 public:
  explicit FibWord(std::size_t cap = 10'000'000) : cap_(cap) {}

  void ensure(std::size_t n) {
    if (n > cap_)
      throw CapExceededError("fibonacci_word: requested length " + std::to_string(n) +
                             " exceeds cap " + std::to_string(cap_));
    while (word_.size() < n) {
      // word_ holds F^m(a); append F^{m-1}(a), its own prefix of length prev_.
      std::size_t prev = prev_;
      prev_ = word_.size();
      word_ += word_.substr(0, prev);
    }
    if (counts_.size() < word_.size() + 1) {
      std::size_t start = counts_.size();
      counts_.resize(word_.size() + 1);
      for (std::size_t i = start; i <= word_.size(); ++i)
        counts_[i] = counts_[i - 1] + (word_[i - 1] == 'a' ? 1u : 0u);
    }
  }

  char at(std::size_t j) {  // 1-based
    ensure(j);
    return word_[j - 1];
  }

  std::size_t count_a(std::size_t n) {
    ensure(n);
    return counts_[n];
  }

  std::string prefix(std::size_t n) {
    ensure(n);
    return word_.substr(0, n);
  }

 private:
  std::size_t cap_;
  std::string word_ = "ab";     // F^1(a)
  std::size_t prev_ = 1;        // |F^0(a)|
  std::vector<std::size_t> counts_{0};
};

inline std::string fibonacci_word(std::size_t n, std::size_t cap = 10'000'000) {
  if (n == 0) return "";
  FibWord w(cap);
  return w.prefix(n);
}

// Count of letter 'a' in the length-n prefix, and its ratio.
inline std::pair<std::size_t, double> letter_frequency(std::size_t n) {
  FibWord w;
  std::size_t c = w.count_a(n);
  return {c, static_cast<double>(c) / static_cast<double>(n)};
}

// Positive root of eta^2 + eta = 1, the limit frequency of 'a'.
inline double fibonacci_eta() { return (std::sqrt(5.0) - 1.0) / 2.0; }

// ---- switching schedules -----------------------------------------------------

// Strictly increasing integer sequence t_k marking the regime flips of the
// switched constructions. Doubling: 1, 3, 6, 12, ... Factorial: k!.
struct Schedule {
  enum class Kind { Doubling, Factorial, Custom };

  Kind kind = Kind::Factorial;
  std::vector<long long> custom;

  static Schedule doubling() { return Schedule{Kind::Doubling, {}}; }
  static Schedule factorial() { return Schedule{Kind::Factorial, {}}; }
  static Schedule custom_list(std::vector<long long> v) {
    Schedule s{Kind::Custom, std::move(v)};
    for (std::size_t i = 1; i < s.custom.size(); ++i)
      if (s.custom[i] <= s.custom[i - 1]) throw Error("Schedule: custom list not strictly increasing");
    return s;
  }

  long long value(int k) const {  // t_k, 1-based
    if (k < 1) throw Error("Schedule: k >= 1 required");
    switch (kind) {
      case Kind::Doubling: {
        // t_1 = 1, t_2 = 3, t_{k+1} = 2 t_k from k = 2 upward.
        if (k == 1) return 1;
        long long t = 3;
        for (int i = 3; i <= k; ++i) {
          if (t > (1ll << 62)) throw std::overflow_error("Schedule: doubling t_k overflows");
          t *= 2;
        }
        return t;
      }
      case Kind::Factorial: {
        if (k > 20) throw std::overflow_error("Schedule: k! overflows 64-bit at k > 20");
        long long t = 1;
        for (int i = 2; i <= k; ++i) t *= i;
        return t;
      }
      case Kind::Custom:
        if (static_cast<std::size_t>(k) > custom.size())
          throw Error("Schedule: custom list has no t_" + std::to_string(k));
        return custom[static_cast<std::size_t>(k - 1)];
    }
    throw Error("Schedule: bad kind");
  }

  // Number of flip points t_k <= j.
  int phase_count(long long j) const {
    int m = 0;
    for (int k = 1;; ++k) {
      long long t;
      try {
        t = value(k);
      } catch (const Error&) {
        break;  // custom list exhausted: stay in the last phase
      } catch (const std::overflow_error&) {
        break;
      }
      if (t > j) break;
      m = k;
    }
    return m;
  }

  // Phase label of index j: 'b' inside [t_{2k-1}, t_{2k}), 'a' inside
  // [t_{2k}, t_{2k+1}).
  char regime_letter(long long j) const {
    if (j < 1) throw Error("Schedule: j >= 1 required");
    return (phase_count(j) % 2 == 1) ? 'b' : 'a';
  }

  // Flip depths t_k - 1 inside [1, max_depth], the designated liminf/limsup
  // subsequence for switched families.
  std::vector<long long> flip_depths(long long max_depth) const {
    std::vector<long long> out;
    for (int k = 1;; ++k) {
      long long t;
      try {
        t = value(k);
      } catch (const Error&) {
        break;
      } catch (const std::overflow_error&) {
        break;
      }
      if (t - 1 > max_depth) break;
      if (t - 1 >= 1) out.push_back(t - 1);
    }
    if (out.empty() || out.back() != max_depth) out.push_back(max_depth);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

inline long long schedule_value(const Schedule& s, int k) { return s.value(k); }
inline char regime_letter(const Schedule& s, long long j) { return s.regime_letter(j); }

}  // namespace mfhs

#endif  // MFHS_SYMBOLIC_HPP
