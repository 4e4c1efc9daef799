// Curve cache keyed by (family, parameter hash, grid hash); corruption is
// detected by content hash and falls back to silent recompute.
#ifndef MFHS_CACHE_HPP
#define MFHS_CACHE_HPP

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "mfhs/analytic.hpp"
#include "mfhs/common.hpp"

namespace mfhs {

inline std::string cache_dir(const std::string& out_dir) {
  if (const char* env = std::getenv("MFHS_CACHE_DIR"); env && *env) return env;
  return out_dir + "/cache";
}

inline std::string cache_key(const std::string& family, const std::string& param_hash,
                             const std::string& grid_hash, const std::string& label) {
  return family + "-" + label + "-" + param_hash + "-" + grid_hash;
}

inline void cache_store(const std::string& dir, const std::string& key,
                        const SpectrumCurve& curve) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return;  // cache is best-effort
  std::string payload = curve.label + "\n";
  for (std::size_t i = 0; i < curve.q_grid.size(); ++i)
    payload += format_double(curve.q_grid[i]) + " " + format_double(curve.values[i]) + "\n";
  std::ofstream out(dir + "/" + key + ".curve");
  if (!out) return;
  out << hash_hex(fnv1a(payload)) << "\n" << payload;
}

// Returns the cached curve, or nothing on miss/corruption (silent recompute).
inline std::optional<SpectrumCurve> cache_load(const std::string& dir,
                                               const std::string& key) {
  std::ifstream in(dir + "/" + key + ".curve");
  if (!in) return std::nullopt;
  std::string stored_hash;
  if (!std::getline(in, stored_hash)) return std::nullopt;
  std::stringstream rest;
  rest << in.rdbuf();
  std::string payload = rest.str();
  if (hash_hex(fnv1a(payload)) != stored_hash) return std::nullopt;

  SpectrumCurve c;
  std::stringstream ss(payload);
  if (!std::getline(ss, c.label)) return std::nullopt;
  double q, v;
  while (ss >> q >> v) {
    c.q_grid.push_back(q);
    c.values.push_back(v);
  }
  if (c.q_grid.empty()) return std::nullopt;
  return c;
}

}  // namespace mfhs

#endif  // MFHS_CACHE_HPP
