// Command-line front end: spectra/dims/levelset/verify/fib commands with
// CSV outputs, a result cache, and line-oriented config files.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mfhs/analytic.hpp"
#include "mfhs/cache.hpp"
#include "mfhs/common.hpp"
#include "mfhs/config.hpp"
#include "mfhs/csv.hpp"
#include "mfhs/estimator.hpp"
#include "mfhs/legendre.hpp"
#include "mfhs/measures.hpp"
#include "mfhs/symbolic.hpp"
#include "mfhs/verify.hpp"

namespace {

using namespace mfhs;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitIoError = 3;

struct GlobalOpts {
  std::string config_path;
  std::string out_dir;  // overrides config when nonempty
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::vector<std::string> skip;
  bool oracle = false;
};

RunConfig load_config(const GlobalOpts& g) {
  RunConfig cfg;
  if (!g.config_path.empty()) {
    std::ifstream in(g.config_path);
    if (!in) throw IoError("cannot read config '" + g.config_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    cfg = parse_config(ss.str());
  }
  if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
  if (g.seed_set) cfg.seed = g.seed;
  std::filesystem::create_directories(cfg.out_dir);
  return cfg;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string measure_param_hash(const MeasureSpec& spec) {
  return hash_hex(fnv1a(detail::histogram_key(spec, 0, 0.0)));
}

std::string grid_hash(const GridSpec& g) {
  return hash_hex(fnv1a(format_double(g.lo) + "," + format_double(g.hi) + "," +
                        format_double(g.step)));
}

// Thin a long depth list to at most `keep` roughly log-spaced entries,
// always retaining the deepest one.
std::vector<long long> thin_depths(std::vector<long long> d, std::size_t keep) {
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  if (d.size() <= keep) return d;
  std::vector<long long> out;
  for (std::size_t i = 0; i < keep; ++i) {
    double f = static_cast<double>(i) / (keep - 1);
    std::size_t idx = static_cast<std::size_t>(std::llround(f * (d.size() - 1)));
    if (out.empty() || d[idx] != out.back()) out.push_back(d[idx]);
  }
  return out;
}

std::vector<long long> working_depths(const RunConfig& cfg) {
  return thin_depths(cfg.depths_or_default(5039), 6);
}

// Largest depth whose full cylinder enumeration stays under the cap.
long long max_enumerable_depth(const MeasureSpec& spec, long long limit) {
  double bits = 0.0;
  for (long long j = 1; j <= limit; ++j) {
    bits += std::log2(static_cast<double>(spec.level_params(j).weights.size()));
    if (bits > 26.0) return j - 1;
  }
  return limit;
}

SpectrumCurve cached_curve(const RunConfig& cfg, const NamedCurve& nc) {
  std::string dir = cache_dir(cfg.out_dir);
  std::string key = cache_key(family_name(cfg.measure.family),
                              measure_param_hash(cfg.measure), grid_hash(cfg.q_grid),
                              nc.label);
  if (cfg.cache) {
    if (auto hit = cache_load(dir, key)) {
      hit->eval = nc.eval;
      return *hit;
    }
  }
  SpectrumCurve c = sample_curve(nc.eval, nc.label, cfg.q_grid.lo, cfg.q_grid.hi,
                                 cfg.q_grid.step);
  if (cfg.cache) cache_store(dir, key, c);
  return c;
}

int command_spectra(const GlobalOpts& g) {
  RunConfig cfg = load_config(g);
  std::string h = config_hash(cfg);
  CsvWriter out(cfg.out_dir + "/spectra.csv", {"q", "value", "label"}, h);

  for (const NamedCurve& nc : family_curves(cfg.measure)) {
    SpectrumCurve c = cached_curve(cfg, nc);
    for (std::size_t i = 0; i < c.q_grid.size(); ++i)
      out.row({format_double(c.q_grid[i]), format_double(c.values[i]), c.label});
  }

  std::vector<long long> depths = cfg.depths_or_default(5039);
  long long oracle_depth =
      g.oracle ? max_enumerable_depth(cfg.measure, depths.back()) : 0;
  for (double q : cfg.q_grid.points()) {
    DimEstimate est = moment_scaling(cfg.measure, q, depths);
    out.row({format_double(q), format_double(est.liminf_est), "moment_liminf"});
    out.row({format_double(q), format_double(est.limsup_est), "moment_limsup"});
    if (g.oracle && oracle_depth >= 1) {
      double lq = partition_sum(cfg.measure, oracle_depth, q, /*oracle=*/true);
      double ld = log_diameter(cfg.measure, oracle_depth);
      double v = (q == 1.0) ? 0.0 : lq / (-ld);
      out.row({format_double(q), format_double(v),
               "oracle_moment_n=" + std::to_string(oracle_depth)});
    }
  }
  return kExitOk;
}

int command_dims(const GlobalOpts& g) {
  RunConfig cfg = load_config(g);
  std::string h = config_hash(cfg);

  long long max_depth = max_enumerable_depth(cfg.measure, 40);
  std::vector<double> r_schedule;
  // depth 1 is skipped: a single ball of that radius covers the whole set
  for (long long d = 2; d <= max_depth; ++d)
    r_schedule.push_back(std::exp(log_diameter(cfg.measure, d)));

  DimEstimate cover = box_dimensions(cfg.measure, r_schedule);
  DimEstimate pack;
  pack.series.quantity_label = "packing_count";
  {
    double lo = -kNegInf, hi = kNegInf;
    long long idx = 0;
    for (double r : r_schedule) {
      long long M = packing_count(cfg.measure, r);
      double lm = std::log(static_cast<double>(M));
      pack.series.entries.push_back({++idx, std::log(r), lm});
      double ratio = lm / (-std::log(r));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    pack.liminf_est = lo;
    pack.limsup_est = hi;
  }

  auto dump = [&](const char* path, const DimEstimate& est) {
    CsvWriter w(cfg.out_dir + "/" + path, {"n", "log_scale", "log_quantity"}, h);
    for (const ScaleEntry& e : est.series.entries)
      w.row({std::to_string(e.n), format_double(e.log_scale),
             format_double(e.log_quantity)});
  };
  dump("covering.csv", cover);
  dump("packing.csv", pack);

  CsvWriter sum(cfg.out_dir + "/dims.csv",
                {"quantity", "liminf_est", "limsup_est"}, h);
  sum.row({"covering_count", format_double(cover.liminf_est),
           format_double(cover.limsup_est)});
  sum.row({"packing_count", format_double(pack.liminf_est),
           format_double(pack.limsup_est)});
  return kExitOk;
}

int command_levelset(const GlobalOpts& g) {
  RunConfig cfg = load_config(g);
  std::string h = config_hash(cfg);
  const MeasureSpec& spec = cfg.measure;

  auto [b_fn, B_fn] = b_B_functions(spec);
  SpectrumCurve b_curve = sample_curve(b_fn, "b", -12.0, 12.0, 0.05);
  SpectrumCurve B_curve = sample_curve(B_fn, "B", -12.0, 12.0, 0.05);

  std::vector<double> alphas;
  if (spec.family == Family::SwitchedBernoulli) {
    // admissible window: slopes of the upper branch at its two ends
    double w_max = std::max(spec.p_hat, 1.0 - spec.p_hat);
    double w_min = std::min(spec.p_hat, 1.0 - spec.p_hat);
    double lo = -std::log2(w_max), hi = -std::log2(w_min);
    for (double a : cfg.alpha_grid.points())
      if (a > lo && a < hi) alphas.push_back(a);
  } else {
    alphas = cfg.alpha_grid.points();
  }

  std::vector<long long> depths = working_depths(cfg);
  CsvWriter out(cfg.out_dir + "/levelset.csv",
                {"alpha", "bstar", "Bstar", "lower_est", "upper_est", "stable"}, h);
  for (double a : alphas) {
    double bs = legendre_at(b_curve, a);
    double Bs = legendre_at(B_curve, a);
    LevelSetEstimate est = level_set_spectrum(spec, a, cfg.eps_schedule, depths);
    out.row({format_double(a), format_double(bs), format_double(Bs),
             format_double(est.lower_est), format_double(est.upper_est),
             est.stable ? "1" : "0"});
  }
  return kExitOk;
}

int command_verify(const GlobalOpts& g) {
  RunConfig cfg = load_config(g);
  std::string h = config_hash(cfg);

  HarnessOptions opt;
  opt.seed = cfg.seed;
  opt.skip = g.skip;
  VerificationReport rep = run_harness(cfg.measure, opt);

  {
    std::ofstream txt(cfg.out_dir + "/verify_report.txt");
    if (!txt) throw IoError("cannot open '" + cfg.out_dir + "/verify_report.txt'");
    txt << "family " << rep.spec_summary << " seed " << rep.seed << "\n";
    for (const CheckEntry& c : rep.checks) {
      txt << (c.pass ? "PASS" : (c.informative ? "INFO" : "FAIL")) << " " << c.id
          << " margin=" << format_double(c.margin)
          << " tol=" << format_double(c.tolerance);
      if (!c.params.empty()) txt << " [" << c.params << "]";
      if (!c.note.empty()) txt << " -- " << c.note;
      txt << "\n";
    }
    txt << "checks " << rep.checks.size() << " passed " << rep.passed()
        << " hard_failures " << rep.failed_hard() << "\n";
  }
  {
    CsvWriter csv(cfg.out_dir + "/verify_report.csv",
                  {"id", "claim", "margin", "tolerance", "pass", "informative",
                   "params", "note"},
                  h);
    for (const CheckEntry& c : rep.checks)
      csv.row({csv_quote(c.id), csv_quote(c.claim), format_double(c.margin),
               format_double(c.tolerance), c.pass ? "1" : "0",
               c.informative ? "1" : "0", csv_quote(c.params), csv_quote(c.note)});
  }

  std::cout << "verify: " << rep.checks.size() << " checks, " << rep.passed()
            << " passed, " << rep.failed_hard() << " hard failures\n";
  return rep.failed_hard() == 0 ? kExitOk : kExitCheckFailure;
}

int command_fib(const GlobalOpts& g) {
  RunConfig cfg = load_config(g);
  std::string h = config_hash(cfg);

  long long n_max = 1000;
  if (!cfg.depth_schedule.empty())
    n_max = *std::max_element(cfg.depth_schedule.begin(), cfg.depth_schedule.end());
  n_max = std::min<long long>(n_max, 100000);

  CsvWriter out(cfg.out_dir + "/fib.csv", {"n", "letter", "a_count", "a_frequency"},
                h);
  FibWord w;
  std::size_t a_count = 0;
  for (long long n = 1; n <= n_max; ++n) {
    char c = w.at(static_cast<std::size_t>(n));
    if (c == 'a') ++a_count;
    out.row({std::to_string(n), std::string(1, c), std::to_string(a_count),
             format_double(static_cast<double>(a_count) / static_cast<double>(n))});
  }
  std::cout << "fib: wrote " << n_max << " letters; a-frequency "
            << format_double(static_cast<double>(a_count) / static_cast<double>(n_max))
            << " (limit " << format_double(1.0 / (1.0 + fibonacci_eta())) << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hewitt-Stromberg multifractal toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "config file (section.key = value)");
  app.add_option("--out", g.out_dir, "output directory (overrides config)");
  auto* seed_opt = app.add_option("--seed", g.seed, "RNG seed (overrides config)");
  app.add_option("--skip", g.skip,
                 "verify sections to skip (ordering shape upperbound formalism "
                 "sampled levelset)");
  app.add_flag("--oracle", g.oracle, "force brute-force paths where available");

  auto* c_spectra = app.add_subcommand("spectra", "analytic curves + moment estimates");
  auto* c_dims = app.add_subcommand("dims", "covering/packing scaling series");
  auto* c_levelset = app.add_subcommand("levelset", "coarse level-set spectra");
  auto* c_verify = app.add_subcommand("verify", "run the claim harness");
  auto* c_fib = app.add_subcommand("fib", "Fibonacci word utilities");
  // let `mfhs verify --out DIR` resolve --out against the global options
  for (CLI::App* sub : {c_spectra, c_dims, c_levelset, c_verify, c_fib})
    sub->fallthrough(true);

  CLI11_PARSE(app, argc, argv);
  g.seed_set = seed_opt->count() > 0;

  try {
    if (c_spectra->parsed()) return command_spectra(g);
    if (c_dims->parsed()) return command_dims(g);
    if (c_levelset->parsed()) return command_levelset(g);
    if (c_verify->parsed()) return command_verify(g);
    if (c_fib->parsed()) return command_fib(g);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  return kExitOk;
}
