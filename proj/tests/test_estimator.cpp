#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "mfhs/analytic.hpp"
#include "mfhs/estimator.hpp"
#include "mfhs/measures.hpp"
#include "mfhs/symbolic.hpp"

using namespace mfhs;

namespace {

MeasureSpec make(Family f) {
  MeasureSpec s;
  s.family = f;
  if (f == Family::NonRegularMoran) s.schedule = Schedule::doubling();
  s.validate();
  return s;
}

// closed form for the depth-n moment sum of the switched two-branch family:
// N levels carry p, the remaining n-N carry p_hat.
double sb_log_sum(const MeasureSpec& s, long long n, double q) {
  long long np = 0;
  for (long long j = 1; j <= n; ++j)
    if (regime_letter(s.schedule, j) == 'b') ++np;
  double lp = std::log(std::pow(s.p, q) + std::pow(1.0 - s.p, q));
  double lh = std::log(std::pow(s.p_hat, q) + std::pow(1.0 - s.p_hat, q));
  return np * lp + (n - np) * lh;
}

}  // namespace

TEST_CASE("partition sums match the brute-force accumulation") {
  MeasureSpec sb = make(Family::SwitchedBernoulli);
  for (long long n : {1, 4, 10}) {
    for (double q : {-2.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0}) {
      double fast = partition_sum(sb, n, q);
      double slow = partition_sum(sb, n, q, /*oracle=*/true);
      CHECK(fast == doctest::Approx(slow).epsilon(1e-12));
      CHECK(fast == doctest::Approx(sb_log_sum(sb, n, q)).epsilon(1e-12));
    }
  }
  MeasureSpec nr = make(Family::NonRegularMoran);
  for (double q : {-1.0, 0.5, 2.0})
    CHECK(partition_sum(nr, 8, q) ==
          doctest::Approx(partition_sum(nr, 8, q, true)).epsilon(1e-12));
}

TEST_CASE("partition sum fixed points") {
  for (Family f : {Family::FibonacciMoran, Family::NonRegularMoran,
                   Family::SwitchedBernoulli, Family::FourLetter,
                   Family::YuanSwitching}) {
    MeasureSpec s = make(f);
    // q = 1: total mass is 1, so the log-sum is exactly 0
    CHECK(partition_sum(s, 6, 1.0) == 0.0);
    // q = 0: counts cylinders
    double expect = 0.0;
    for (long long j = 1; j <= 6; ++j)
      expect += std::log(static_cast<double>(s.level_params(j).weights.size()));
    CHECK(partition_sum(s, 6, 0.0) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("log moment sums are non-increasing in q") {
  MeasureSpec sb = make(Family::SwitchedBernoulli);
  std::vector<double> qs;
  for (double q = -4.0; q <= 4.0; q += 0.5) qs.push_back(q);
  double prev = partition_sum(sb, 12, qs[0]);
  for (std::size_t i = 1; i < qs.size(); ++i) {
    double cur = partition_sum(sb, 12, qs[i]);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("moment scaling estimates") {
  MeasureSpec sb = make(Family::SwitchedBernoulli);
  std::vector<long long> depths = {1, 5, 23, 119, 719, 5039};

  SUBCASE("exact zero series at q = 1") {
    DimEstimate e = moment_scaling(sb, 1.0, depths);
    for (const auto& pt : e.series.entries) CHECK(pt.log_quantity == 0.0);
    CHECK(e.liminf_est == 0.0);
    CHECK(e.limsup_est == 0.0);
  }

  SUBCASE("extremes approach the two switched branches") {
    double lo5 = tau_switched(0.5, TauBranch::Lower, sb);
    double hi5 = tau_switched(0.5, TauBranch::Upper, sb);
    DimEstimate e = moment_scaling(sb, 0.5, depths);
    CHECK(std::fabs(e.liminf_est - std::min(lo5, hi5)) < 0.02);
    CHECK(std::fabs(e.limsup_est - std::max(lo5, hi5)) < 0.02);

    double lo2 = tau_switched(2.0, TauBranch::Lower, sb);
    double hi2 = tau_switched(2.0, TauBranch::Upper, sb);
    DimEstimate e2 = moment_scaling(sb, 2.0, depths);
    CHECK(std::fabs(e2.limsup_est - std::max(lo2, hi2)) < 0.02);
    CHECK(e2.liminf_est >= std::min(lo2, hi2) - 0.02);
    CHECK(e2.liminf_est <= std::max(lo2, hi2) + 0.02);
  }

  SUBCASE("too few usable depths is an error") {
    std::vector<long long> few = {23, 119, 719};
    CHECK_THROWS_AS(moment_scaling(sb, 0.5, few), InsufficientDepthsError);
  }
}

TEST_CASE("ball counts") {
  MeasureSpec fl = make(Family::FourLetter);

  SUBCASE("radius at or above one half needs a single ball") {
    CHECK(covering_count(fl, 0.5) == 1);
    CHECK(covering_count(fl, 0.9) == 1);
    CHECK(packing_count(fl, 0.5) == 1);
  }

  SUBCASE("four-symbol counts are exact powers") {
    // resolution scale 4^-n: each depth-n cylinder needs its own ball
    CHECK(covering_count(fl, 1.0 / 16.0) == 16);
    CHECK(covering_count(fl, 1.0 / 64.0) == 64);
    CHECK(packing_count(fl, 1.0 / 64.0) == 64);
  }

  SUBCASE("packing never exceeds covering and covering is monotone") {
    MeasureSpec sb = make(Family::SwitchedBernoulli);
    long long prev = -1;
    for (int m = 1; m <= 14; ++m) {
      double r = std::pow(2.0, -m) * 0.7;
      long long nr = covering_count(sb, r);
      long long mr = packing_count(sb, r);
      CHECK(mr <= nr);
      if (prev >= 0) CHECK(nr >= prev);
      prev = nr;
    }
  }
}

TEST_CASE("box dimension estimates") {
  SUBCASE("uniform quarter-ratio binary construction gives one half") {
    MeasureSpec y;
    y.family = Family::YuanSwitching;
    y.A = 4;
    y.B = 4;
    y.relax_constraints = true;
    y.validate();
    std::vector<double> rs;
    for (int m = 2; m <= 11; ++m) rs.push_back(std::pow(4.0, -m));
    DimEstimate cov = box_dimensions(y, rs);
    CHECK(std::fabs(cov.limsup_est - 0.5) < 0.03);
    CHECK(std::fabs(cov.liminf_est - 0.5) < 0.03);
  }

  SUBCASE("touching pieces fill the interval") {
    MeasureSpec sb;
    sb.family = Family::SwitchedBernoulli;
    sb.validate();
    // dyadic pieces touch, so the attractor is all of [0,1]; at dyadic radii
    // each ball covers exactly two resolution cells, so the count is 1/(2r)
    for (double r : {0.25, 0.125, 1.0 / 64.0, 1.0 / 1024.0}) {
      long long expect = static_cast<long long>(std::llround(1.0 / (2.0 * r)));
      CHECK(covering_count(sb, r) == expect);
    }
    std::vector<double> rs;
    for (int m = 10; m <= 20; ++m) rs.push_back(std::pow(2.0, -m));
    DimEstimate cov = box_dimensions(sb, rs);
    CHECK(cov.limsup_est <= 1.0 + 1e-9);
    CHECK(cov.liminf_est > 0.89);  // ratio (m-1)/m climbs slowly toward 1
  }
}

TEST_CASE("coarse level-set counts") {
  MeasureSpec fl = make(Family::FourLetter);
  MeasureSpec uni = fl;
  uni.a = {0.25, 0.25, 0.25, 0.25};
  uni.validate();

  SUBCASE("uniform measure concentrates all cylinders at exponent one") {
    for (long long n : {4, 8, 12}) {
      CoarseLevelSet c = coarse_level_set(uni, 1.0, 0.05, n);
      CHECK(c.log_count == doctest::Approx(2 * n * std::log(2.0)).epsilon(1e-10));
      CHECK(c.exponent == doctest::Approx(1.0).epsilon(1e-10));
    }
    CoarseLevelSet far = coarse_level_set(uni, 2.0, 0.05, 8);
    CHECK(far.log_count == kNegInf);
  }

  SUBCASE("counts grow with the window width") {
    CoarseLevelSet narrow = coarse_level_set(fl, 1.0, 0.02, 10);
    CoarseLevelSet wide = coarse_level_set(fl, 1.0, 0.2, 10);
    CHECK(narrow.log_count <= wide.log_count + 1e-12);
  }

  SUBCASE("spectrum estimate at the uniform exponent") {
    LevelSetEstimate e =
        level_set_spectrum(uni, 1.0, default_eps_schedule(), {4, 6, 8, 10, 12});
    CHECK(std::fabs(e.lower_est - 1.0) < 1e-6);
    CHECK(std::fabs(e.upper_est - 1.0) < 1e-6);
    CHECK(e.stable);
  }
}
