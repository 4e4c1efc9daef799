// Shared numeric and error utilities for the mfhs library.
#ifndef MFHS_COMMON_HPP
#define MFHS_COMMON_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfhs {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ---- error types -----------------------------------------------------------

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateGapError : Error {
  explicit DegenerateGapError(const std::string& what) : Error(what) {}
};

struct CapExceededError : Error {
  explicit CapExceededError(const std::string& what) : Error(what) {}
};

struct BracketFailureError : Error {
  explicit BracketFailureError(const std::string& what) : Error(what) {}
};

struct UnboundedBelowError : Error {
  explicit UnboundedBelowError(const std::string& what) : Error(what) {}
};

struct InsufficientDepthsError : Error {
  explicit InsufficientDepthsError(const std::string& what) : Error(what) {}
};

struct ConfigError : Error {
  int line = 0;
  ConfigError(int line_no, const std::string& what)
      : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
  ConfigError(const std::string& what, int line_no) : ConfigError(line_no, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(what) {}
};

// ---- log-space arithmetic ---------------------------------------------------

// log(exp(a) + exp(b)) without leaving log space.
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

inline double log_sum_exp(const std::vector<double>& xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

// ---- formatting -------------------------------------------------------------

// Shortest decimal that round-trips to the same double. Keeps CSV output
// byte-stable across runs.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// ---- hashing ----------------------------------------------------------------

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

// ---- 1-d minimization -------------------------------------------------------

// Golden-section search for the minimum of f on [lo, hi].
template <class F>
double golden_section_min(F&& f, double lo, double hi, int iters = 120) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters && (b - a) > 1e-14 * (1.0 + std::abs(a)); ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  double xm = 0.5 * (a + b);
  double fm = f(xm);
  if (f1 < fm) { fm = f1; xm = x1; }
  if (f2 < fm) { fm = f2; xm = x2; }
  return xm;
}

}  // namespace mfhs

#endif  // MFHS_COMMON_HPP
