#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "mfhs/common.hpp"
#include "mfhs/measures.hpp"

using namespace mfhs;

namespace {

MeasureSpec defaults(Family f) {
  MeasureSpec s;
  s.family = f;
  if (f == Family::NonRegularMoran) s.schedule = Schedule::doubling();
  s.validate();
  return s;
}

const Family kAllFamilies[] = {Family::FibonacciMoran, Family::NonRegularMoran,
                               Family::SwitchedBernoulli, Family::FourLetter,
                               Family::YuanSwitching};

}  // namespace

TEST_CASE("parameter constraints are enforced") {
  CHECK_THROWS(MeasureSpec::switched(0.4, 0.2));          // needs p < p_hat
  CHECK_THROWS(MeasureSpec::switched(0.2, 0.6));          // needs p_hat <= 1/2
  CHECK_THROWS(MeasureSpec::fibonacci(0.6, 0.3, {0.3, 0.7}, {0.2, 0.3, 0.5}));
  CHECK_THROWS(MeasureSpec::fibonacci(0.4, 0.4, {0.3, 0.7}, {0.2, 0.3, 0.5}));
  CHECK_THROWS(MeasureSpec::four_letter({0.1, 0.2, 0.3, 0.5}, {0.25, 0.25, 0.25, 0.25}));
  CHECK_THROWS(MeasureSpec::yuan(3.0, 4.0, 0.2, 0.4));    // needs A > B
  CHECK_NOTHROW(MeasureSpec::yuan(4.0, 3.0, 0.2, 0.4));
}

TEST_CASE("cylinder measures multiply per-level weights") {
  // depth 0: empty product
  for (Family f : kAllFamilies) CHECK(cylinder_measure(defaults(f), Word{}) == 0.0);

  // uniform four-letter measure: every depth-n word has measure 4^-n
  MeasureSpec uni = MeasureSpec::four_letter({0.25, 0.25, 0.25, 0.25},
                                             {0.25, 0.25, 0.25, 0.25});
  Word w;
  for (int n = 1; n <= 7; ++n) {
    w.indices.push_back(1 + (n % 4));
    CHECK(cylinder_measure(uni, w) == doctest::Approx(n * std::log(0.25)).epsilon(1e-14));
  }

  // switched family, level 1 sits in the first phase and carries weight p
  MeasureSpec sb = defaults(Family::SwitchedBernoulli);
  Word one{{1}};
  CHECK(cylinder_measure(sb, one) == doctest::Approx(std::log(sb.p)).epsilon(1e-15));
  CHECK(local_exponent(sb, one) ==
        doctest::Approx(std::log(0.2) / std::log(0.5)).epsilon(1e-12));

  Word bad{{3}};
  CHECK_THROWS(cylinder_measure(sb, bad));
}

TEST_CASE("level enumeration is complete and normalized") {
  for (Family f : kAllFamilies) {
    MeasureSpec spec = defaults(f);
    int n_max = (f == Family::FourLetter) ? 10 : 14;
    for (int n : {1, 5, n_max}) {
      std::vector<double> lm;
      for_each_cylinder(spec, n, [&](const WeightedCylinder& c) {
        lm.push_back(c.log_measure);
      });
      CHECK(std::fabs(log_sum_exp(lm)) < 1e-9);  // summation error grows with the million-term level
    }
  }

  // explicit counts: Fibonacci branching 2*3*2 at depth 3; dyadic 2^10
  CHECK(level(defaults(Family::FibonacciMoran), 3).size() == 12);
  CHECK(level(defaults(Family::SwitchedBernoulli), 10).size() == 1024);
  CHECK(level(defaults(Family::FourLetter), 0).size() == 1);
  CHECK(level(defaults(Family::FourLetter), 0)[0].log_measure == 0.0);

  CHECK_THROWS_AS(level(defaults(Family::FourLetter), 20), CapExceededError);
}

TEST_CASE("parent measure equals the sum over children") {
  for (Family f : kAllFamilies) {
    MeasureSpec spec = defaults(f);
    for (int depth = 1; depth <= 12; ++depth) {
      Word parent = sample_word(spec, depth, 7u + static_cast<unsigned>(depth));
      double lp = cylinder_measure(spec, parent);
      LevelParams next = spec.level_params(depth + 1);
      std::vector<double> kids;
      for (std::size_t j = 1; j <= next.weights.size(); ++j) {
        Word c = parent.child(static_cast<int>(j));
        kids.push_back(cylinder_measure(spec, c));
      }
      CHECK(std::fabs(log_sum_exp(kids) - lp) < 1e-12);
    }
  }
}

TEST_CASE("sampling is deterministic and matches the level weights") {
  MeasureSpec sb = defaults(Family::SwitchedBernoulli);
  Word w1 = sample_word(sb, 50, 42);
  Word w2 = sample_word(sb, 50, 42);
  CHECK(w1 == w2);
  Word w3 = sample_word(sb, 50, 43);
  CHECK(w1.indices != w3.indices);

  // level 1 carries weight p = 0.2 on branch 1
  int hits = 0;
  const int draws = 100000;
  for (int s = 0; s < draws; ++s)
    if (sample_word(sb, 1, static_cast<std::uint64_t>(s)).indices[0] == 1) ++hits;
  CHECK(std::fabs(hits / static_cast<double>(draws) - 0.2) < 0.005);

  // uniform four-branch level: all branches near 1/4
  MeasureSpec uni = MeasureSpec::four_letter({0.25, 0.25, 0.25, 0.25},
                                             {0.25, 0.25, 0.25, 0.25});
  std::map<int, int> counts;
  for (int s = 0; s < 20000; ++s)
    ++counts[sample_word(uni, 1, static_cast<std::uint64_t>(s)).indices[0]];
  for (auto& [branch, c] : counts)
    CHECK(std::fabs(c / 20000.0 - 0.25) < 0.02);
}

TEST_CASE("block-switched binary family reduces to the dyadic switched one") {
  // With equal block ratios 1/A = 1/B = 1/2 and block boundaries N_k = t_{k+1}-1,
  // the level weights coincide with the dyadic switched construction.
  MeasureSpec sb = defaults(Family::SwitchedBernoulli);

  MeasureSpec yn;
  yn.family = Family::YuanSwitching;
  yn.relax_constraints = true;
  yn.A = 2.0;
  yn.B = 2.0;
  yn.p = sb.p;          // even blocks
  yn.p_tilde = sb.p_hat;  // odd blocks
  std::vector<long long> blocks;
  for (int k = 2; k <= 8; ++k) blocks.push_back(Schedule::factorial().value(k) - 1);
  yn.schedule = Schedule::custom_list(blocks);
  yn.validate();

  for (long long j = 1; j <= 500; ++j) {
    LevelParams a = sb.level_params(j);
    LevelParams b = yn.level_params(j);
    CHECK(a.weights == b.weights);
    CHECK(a.ratio == b.ratio);
  }
}

TEST_CASE("regime assignment is deterministic and bit-identical") {
  for (Family f : kAllFamilies) {
    MeasureSpec spec = defaults(f);
    Word w = sample_word(spec, 30, 99);
    double m1 = cylinder_measure(spec, w);
    double m2 = cylinder_measure(spec, w);
    CHECK(m1 == m2);
  }
}

TEST_CASE("subsequence depths follow the family's flip structure") {
  MeasureSpec sb = defaults(Family::SwitchedBernoulli);
  CHECK(sb.subsequence_depths(719) == std::vector<long long>{1, 5, 23, 119, 719});

  MeasureSpec fib = defaults(Family::FibonacciMoran);
  CHECK(fib.subsequence_depths(5).size() == 5);  // every depth qualifies

  MeasureSpec yn = defaults(Family::YuanSwitching);
  auto blocks = yn.subsequence_depths(720);
  CHECK(blocks.front() == 1);
  CHECK(blocks.back() == 720);
}
