// Line-oriented run configuration: `section.key = value` with # comments.
#ifndef MFHS_CONFIG_HPP
#define MFHS_CONFIG_HPP

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mfhs/common.hpp"
#include "mfhs/measures.hpp"

namespace mfhs {

struct GridSpec {
  double lo = 0.0, hi = 0.0, step = 1.0;
  bool operator==(const GridSpec& o) const {
    return lo == o.lo && hi == o.hi && step == o.step;
  }
  std::vector<double> points() const {
    std::vector<double> out;
    int n = static_cast<int>(std::round((hi - lo) / step));
    for (int i = 0; i <= n; ++i) out.push_back(lo + i * step);
    return out;
  }
};

struct RunConfig {
  MeasureSpec measure;
  GridSpec q_grid{-5.0, 5.0, 0.05};
  GridSpec alpha_grid{0.7, 1.3, 0.05};
  std::vector<long long> depth_schedule;  // empty: derived from the measure's flips
  std::vector<double> eps_schedule{0.2, 0.1, 0.05, 0.02};
  std::string out_dir = "out";
  bool cache = true;
  std::uint64_t seed = 1;

  std::vector<long long> depths_or_default(long long fallback_max = 719) const {
    if (!depth_schedule.empty()) return depth_schedule;
    std::vector<long long> out;
    for (long long d : measure.subsequence_depths(fallback_max))
      if (d >= 20) out.push_back(d);
    if (out.empty()) out.push_back(fallback_max);
    return out;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<double> parse_vec(const std::string& s, int line) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty vector entry", line);
    try {
      out.push_back(std::stod(item));
    } catch (...) {
      throw ConfigError("bad number '" + item + "'", line);
    }
  }
  if (out.empty()) throw ConfigError("empty vector", line);
  return out;
}

inline double parse_num(const std::string& s, int line) {
  try {
    return std::stod(trim(s));
  } catch (...) {
    throw ConfigError("bad number '" + trim(s) + "'", line);
  }
}

inline GridSpec parse_grid(const std::string& s, int line) {
  auto v = parse_vec(s, line);
  if (v.size() != 3 || v[2] <= 0.0 || v[1] < v[0])
    throw ConfigError("grid needs 'min,max,step' with step > 0", line);
  return {v[0], v[1], v[2]};
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, int> seen_line;
  bool schedule_set = false;

  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  int measure_line = 1;
  while (std::getline(ss, raw)) {
    ++line;
    std::string s = raw;
    std::size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = detail::trim(s);
    if (s.empty()) continue;
    std::size_t eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'section.key = value'", line);
    std::string key = detail::trim(s.substr(0, eq));
    std::string val = detail::trim(s.substr(eq + 1));
    if (val.empty()) throw ConfigError("missing value for '" + key + "'", line);
    if (seen_line.count(key)) throw ConfigError("duplicate key '" + key + "'", line);
    seen_line[key] = line;

    if (key == "measure.family") {
      measure_line = line;
      if (val == "FibonacciMoran")
        cfg.measure.family = Family::FibonacciMoran;
      else if (val == "NonRegularMoran") {
        cfg.measure.family = Family::NonRegularMoran;
        if (!schedule_set) cfg.measure.schedule = Schedule::doubling();
      } else if (val == "SwitchedBernoulli")
        cfg.measure.family = Family::SwitchedBernoulli;
      else if (val == "FourLetter")
        cfg.measure.family = Family::FourLetter;
      else if (val == "YuanSwitching")
        cfg.measure.family = Family::YuanSwitching;
      else
        throw ConfigError("unknown family '" + val + "'", line);
    } else if (key == "measure.r_a") {
      cfg.measure.r_a = detail::parse_num(val, line);
      if (!(cfg.measure.r_a > 0.0 && cfg.measure.r_a < 0.5))
        throw ConfigError("measure.r_a = " + val + " violates 0 < r_a < 1/2", line);
    } else if (key == "measure.r_b") {
      cfg.measure.r_b = detail::parse_num(val, line);
      if (!(cfg.measure.r_b > 0.0 && cfg.measure.r_b < 1.0 / 3.0))
        throw ConfigError("measure.r_b = " + val + " violates 0 < r_b < 1/3", line);
    } else if (key == "measure.P_a") {
      cfg.measure.P_a = detail::parse_vec(val, line);
    } else if (key == "measure.P_b") {
      cfg.measure.P_b = detail::parse_vec(val, line);
    } else if (key == "measure.p") {
      cfg.measure.p = detail::parse_num(val, line);
    } else if (key == "measure.p_hat") {
      cfg.measure.p_hat = detail::parse_num(val, line);
      if (!(cfg.measure.p_hat <= 0.5))
        throw ConfigError("measure.p_hat = " + val + " violates 0 < p < p_hat <= 1/2",
                          line);
    } else if (key == "measure.a") {
      cfg.measure.a = detail::parse_vec(val, line);
    } else if (key == "measure.b") {
      cfg.measure.b = detail::parse_vec(val, line);
    } else if (key == "measure.A") {
      cfg.measure.A = detail::parse_num(val, line);
    } else if (key == "measure.B") {
      cfg.measure.B = detail::parse_num(val, line);
    } else if (key == "measure.p_tilde") {
      cfg.measure.p_tilde = detail::parse_num(val, line);
    } else if (key == "schedules.kind") {
      schedule_set = true;
      if (val == "doubling")
        cfg.measure.schedule = Schedule::doubling();
      else if (val == "factorial")
        cfg.measure.schedule = Schedule::factorial();
      else if (val != "custom")
        throw ConfigError("schedules.kind must be doubling|factorial|custom", line);
    } else if (key == "schedules.custom") {
      schedule_set = true;
      std::vector<long long> v;
      for (double x : detail::parse_vec(val, line)) v.push_back(std::llround(x));
      try {
        cfg.measure.schedule = Schedule::custom_list(v);
      } catch (const Error& e) {
        throw ConfigError(e.what(), line);
      }
    } else if (key == "schedules.depths") {
      cfg.depth_schedule.clear();
      for (double x : detail::parse_vec(val, line))
        cfg.depth_schedule.push_back(std::llround(x));
    } else if (key == "schedules.eps") {
      cfg.eps_schedule = detail::parse_vec(val, line);
      for (double e : cfg.eps_schedule)
        if (!(e > 0.0)) throw ConfigError("schedules.eps entries must be > 0", line);
    } else if (key == "grids.q") {
      cfg.q_grid = detail::parse_grid(val, line);
    } else if (key == "grids.alpha") {
      cfg.alpha_grid = detail::parse_grid(val, line);
    } else if (key == "output.dir") {
      cfg.out_dir = val;
    } else if (key == "output.cache") {
      if (val == "true" || val == "1")
        cfg.cache = true;
      else if (val == "false" || val == "0")
        cfg.cache = false;
      else
        throw ConfigError("output.cache must be true|false", line);
    } else if (key == "output.seed") {
      cfg.seed = static_cast<std::uint64_t>(std::llround(detail::parse_num(val, line)));
    } else {
      throw ConfigError("unknown key '" + key + "'", line);
    }
  }

  try {
    cfg.measure.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what(), measure_line);
  }
  return cfg;
}

inline std::string serialize_vec(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format_double(v[i]);
  }
  return s;
}

inline std::string serialize_config(const RunConfig& cfg) {
  std::string s;
  s += "measure.family = " + std::string(family_name(cfg.measure.family)) + "\n";
  switch (cfg.measure.family) {
    case Family::FibonacciMoran:
    case Family::NonRegularMoran:
      s += "measure.r_a = " + format_double(cfg.measure.r_a) + "\n";
      s += "measure.r_b = " + format_double(cfg.measure.r_b) + "\n";
      s += "measure.P_a = " + serialize_vec(cfg.measure.P_a) + "\n";
      s += "measure.P_b = " + serialize_vec(cfg.measure.P_b) + "\n";
      break;
    case Family::SwitchedBernoulli:
      s += "measure.p = " + format_double(cfg.measure.p) + "\n";
      s += "measure.p_hat = " + format_double(cfg.measure.p_hat) + "\n";
      break;
    case Family::FourLetter:
      s += "measure.a = " + serialize_vec(cfg.measure.a) + "\n";
      s += "measure.b = " + serialize_vec(cfg.measure.b) + "\n";
      break;
    case Family::YuanSwitching:
      s += "measure.A = " + format_double(cfg.measure.A) + "\n";
      s += "measure.B = " + format_double(cfg.measure.B) + "\n";
      s += "measure.p = " + format_double(cfg.measure.p) + "\n";
      s += "measure.p_tilde = " + format_double(cfg.measure.p_tilde) + "\n";
      break;
  }
  switch (cfg.measure.schedule.kind) {
    case Schedule::Kind::Doubling: s += "schedules.kind = doubling\n"; break;
    case Schedule::Kind::Factorial: s += "schedules.kind = factorial\n"; break;
    case Schedule::Kind::Custom: {
      s += "schedules.kind = custom\n";
      s += "schedules.custom = ";
      for (std::size_t i = 0; i < cfg.measure.schedule.custom.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(cfg.measure.schedule.custom[i]);
      }
      s += "\n";
      break;
    }
  }
  if (!cfg.depth_schedule.empty()) {
    s += "schedules.depths = ";
    for (std::size_t i = 0; i < cfg.depth_schedule.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(cfg.depth_schedule[i]);
    }
    s += "\n";
  }
  s += "schedules.eps = " + serialize_vec(cfg.eps_schedule) + "\n";
  s += "grids.q = " + format_double(cfg.q_grid.lo) + "," + format_double(cfg.q_grid.hi) +
       "," + format_double(cfg.q_grid.step) + "\n";
  s += "grids.alpha = " + format_double(cfg.alpha_grid.lo) + "," +
       format_double(cfg.alpha_grid.hi) + "," + format_double(cfg.alpha_grid.step) + "\n";
  s += "output.dir = " + cfg.out_dir + "\n";
  s += std::string("output.cache = ") + (cfg.cache ? "true" : "false") + "\n";
  s += "output.seed = " + std::to_string(cfg.seed) + "\n";
  return s;
}

inline std::string config_hash(const RunConfig& cfg) {
  return hash_hex(fnv1a(serialize_config(cfg)));
}

}  // namespace mfhs

#endif  // MFHS_CONFIG_HPP
