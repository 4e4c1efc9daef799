#include <cmath>
#include <vector>

#include "doctest.h"
#include "mfhs/analytic.hpp"
#include "mfhs/measures.hpp"

using namespace mfhs;

namespace {

MeasureSpec fib_defaults() {
  MeasureSpec s;
  s.family = Family::FibonacciMoran;
  s.validate();
  return s;
}

MeasureSpec sb_defaults() {
  MeasureSpec s;
  s.family = Family::SwitchedBernoulli;
  s.validate();
  return s;
}

}  // namespace

TEST_CASE("fibonacci closed form: anchors and the bisection oracle") {
  MeasureSpec spec = fib_defaults();

  CHECK(std::fabs(beta_k_fibonacci(1.0, 7, spec)) < 1e-12);
  CHECK(beta_k_fibonacci(0.0, 1, spec) ==
        doctest::Approx(-std::log(2.0) / std::log(spec.r_a)).epsilon(1e-14));

  for (long long k = 1; k <= 20; ++k)
    for (double q : {-3.0, -1.0, 0.0, 0.5, 2.0, 3.0})
      CHECK(std::fabs(beta_k_bisection(spec, q, k) - beta_k_fibonacci(q, k, spec)) <
            1e-9);
}

TEST_CASE("fibonacci limit curve") {
  MeasureSpec spec = fib_defaults();
  CHECK(std::fabs(beta_fibonacci(1.0, spec)) < 1e-14);
  CHECK(beta_fibonacci(0.0, spec) > beta_fibonacci(2.0, spec));
  for (double q : {-2.0, 0.0, 0.5, 2.0})
    CHECK(std::fabs(beta_k_fibonacci(q, 10000, spec) - beta_fibonacci(q, spec)) < 1e-3);
}

TEST_CASE("bisection solves the counting case and brackets the two-regime band") {
  MeasureSpec nr;
  nr.family = Family::NonRegularMoran;
  nr.schedule = Schedule::doubling();
  nr.validate();

  // q=0: beta = log #D_k / (-log diameter)
  long long k = 7;
  double count_log = 0.0, ldiam = 0.0;
  for (long long j = 1; j <= k; ++j) {
    count_log += std::log(static_cast<double>(nr.level_params(j).weights.size()));
    ldiam += std::log(nr.level_params(j).ratio);
  }
  CHECK(beta_k_bisection(nr, 0.0, k) == doctest::Approx(count_log / -ldiam).epsilon(1e-10));

  CHECK(beta_k_bisection(nr, 1.0, 5) == 0.0);

  auto [lo, hi] = beta_bounds_alternating(2.0, nr);
  double mid = beta_k_bisection(nr, 2.0, 11);  // depth just before the 4th flip
  CHECK(mid >= lo - 0.15);
  CHECK(mid <= hi + 0.15);
}

TEST_CASE("two-regime band: zero at one, strict gap elsewhere, arithmetic oracle") {
  MeasureSpec nr;
  nr.family = Family::NonRegularMoran;
  nr.schedule = Schedule::doubling();
  nr.validate();

  auto [l1, u1] = beta_bounds_alternating(1.0, nr);
  CHECK(std::fabs(l1) < 1e-14);
  CHECK(std::fabs(u1) < 1e-14);
  for (double q : {-1.0, 0.0, 0.5, 2.0}) {
    auto [lo, hi] = beta_bounds_alternating(q, nr);
    CHECK(hi - lo > 1e-9);
  }

  MeasureSpec even = MeasureSpec::non_regular(0.4, 0.3, {0.5, 0.5},
                                              {1.0 / 3, 1.0 / 3, 1.0 / 3});
  auto [lo0, hi0] = beta_bounds_alternating(0.0, even);
  double la = std::log(0.4), lb = std::log(0.3);
  double m13 = -(std::log(2.0) / 3 + 2 * std::log(3.0) / 3) / (la / 3 + 2 * lb / 3);
  double m23 = -(2 * std::log(2.0) / 3 + std::log(3.0) / 3) / (2 * la / 3 + lb / 3);
  CHECK(lo0 == doctest::Approx(std::min(m13, m23)).epsilon(1e-14));
  CHECK(hi0 == doctest::Approx(std::max(m13, m23)).epsilon(1e-14));
}

TEST_CASE("dyadic switched curves") {
  MeasureSpec sb = sb_defaults();
  for (TauBranch br : {TauBranch::Lower, TauBranch::Upper}) {
    CHECK(std::fabs(tau_switched(1.0, br, sb)) < 1e-14);
    CHECK(tau_switched(0.0, br, sb) == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(tau_switched(2.0, TauBranch::Lower, sb) ==
        doctest::Approx(std::log2(0.68)).epsilon(1e-14));

  for (double q : {0.0, 1.0}) {
    auto [b, B] = b_B_switched(q, sb);
    CHECK(b == doctest::Approx(B).epsilon(1e-14));
  }
  auto [b_half, B_half] = b_B_switched(0.5, sb);
  CHECK(b_half == doctest::Approx(tau_switched(0.5, TauBranch::Lower, sb)));
  CHECK(B_half == doctest::Approx(tau_switched(0.5, TauBranch::Upper, sb)));
  auto [b2, B2] = b_B_switched(2.0, sb);
  CHECK(b2 == doctest::Approx(tau_switched(2.0, TauBranch::Upper, sb)));
  CHECK(B2 == doctest::Approx(tau_switched(2.0, TauBranch::Lower, sb)));
}

TEST_CASE("four-letter curves") {
  MeasureSpec uni = MeasureSpec::four_letter({0.25, 0.25, 0.25, 0.25},
                                             {0.25, 0.25, 0.25, 0.25});
  for (double q : {-2.0, 0.0, 0.7, 1.0, 3.0}) {
    auto [b, B] = b_B_four_letter(q, uni);
    CHECK(b == doctest::Approx(1.0 - q).epsilon(1e-12));
    CHECK(B == doctest::Approx(1.0 - q).epsilon(1e-12));
  }

  MeasureSpec fl;
  fl.family = Family::FourLetter;
  fl.validate();
  auto [b0, B0] = b_B_four_letter(0.0, fl);
  CHECK(b0 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(B0 == doctest::Approx(1.0).epsilon(1e-14));
  auto [b2, B2] = b_B_four_letter(2.0, fl);
  CHECK(b2 == doctest::Approx(-1.0).epsilon(1e-13));  // log4 of 4 * 0.0625
  CHECK(B2 == doctest::Approx(std::log(0.30) / std::log(4.0)).epsilon(1e-13));
}

TEST_CASE("block-switched binary curves") {
  MeasureSpec yn;
  yn.family = Family::YuanSwitching;
  yn.validate();
  auto [a1, a2] = yuan_betas(1.0, yn);
  CHECK(std::fabs(a1) < 1e-14);
  CHECK(std::fabs(a2) < 1e-14);
  auto [z1, z2] = yuan_betas(0.0, yn);
  CHECK(z1 == doctest::Approx(std::log(2.0) / std::log(yn.A)).epsilon(1e-14));
  CHECK(z2 == doctest::Approx(std::log(2.0) / std::log(yn.B)).epsilon(1e-14));

  // equal weights, different bases: the ordering of the two branches flips at q=1
  MeasureSpec eq = MeasureSpec::yuan(4.0, 3.0, 0.3, 0.3);
  auto [l_left, r_left] = yuan_betas(0.5, eq);
  auto [l_right, r_right] = yuan_betas(2.0, eq);
  CHECK((l_left < r_left) != (l_right < r_right));
}

TEST_CASE("entropy helpers") {
  CHECK(entropy_H(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(entropy_H(0.2) == doctest::Approx(0.7219280948873623).epsilon(1e-14));
  CHECK(entropy_H(1e-12) < 5e-11);
  CHECK_THROWS(entropy_H(0.0));
  CHECK_THROWS(entropy_H(1.0));

  CHECK(mixed_entropy_h(0.3, 0.3) == doctest::Approx(entropy_H(0.3)).epsilon(1e-14));
  CHECK(mixed_entropy_h(0.5, 0.2) ==
        doctest::Approx(-0.5 * std::log2(0.2 * 0.8)).epsilon(1e-14));
  CHECK(mixed_entropy_h(0.0, 0.2) == doctest::Approx(-std::log2(0.8)).epsilon(1e-14));
}

TEST_CASE("curve bundle shape: zero at one, decreasing, signs") {
  for (Family f : {Family::FibonacciMoran, Family::NonRegularMoran,
                   Family::SwitchedBernoulli, Family::FourLetter,
                   Family::YuanSwitching}) {
    MeasureSpec spec;
    spec.family = f;
    if (f == Family::NonRegularMoran) spec.schedule = Schedule::doubling();
    spec.validate();
    for (const NamedCurve& c : family_curves(spec)) {
      CHECK(std::fabs(c.eval(1.0)) < 1e-12);
      double prev = c.eval(-5.0);
      for (double q = -4.95; q <= 5.0 + 1e-9; q += 0.05) {
        double v = c.eval(q);
        CHECK(v < prev);
        if (q < 1.0 - 1e-9) CHECK(v >= -1e-12);
        if (q > 1.0 + 1e-9) CHECK(v <= 1e-12);
        prev = v;
      }
    }
  }
}
