#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "sceval/stability.hpp"

using namespace sceval;

namespace {

MonthlySeries series(std::vector<std::optional<double>> v) {
  return MonthlySeries{std::move(v), "test"};
}

// O(n^2) oracle on the defined subsequence.
double tau_oracle(const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < v.size(); ++j)
    for (std::size_t k = j + 1; k < v.size(); ++k)
      s += (v[k] > v[j]) - (v[k] < v[j]);
  double pairs = static_cast<double>(v.size()) * (v.size() - 1) / 2.0;
  return s / pairs;
}

}  // namespace

TEST_CASE("f1_volatility fixtures") {
  CHECK(f1_volatility(series({0.8, 0.6})) == doctest::Approx(0.1));
  CHECK(f1_volatility(series({0.7, 0.7, 0.7})) == doctest::Approx(0.0));
  // Undefined months are skipped, not zero-filled.
  CHECK(f1_volatility(series({0.8, std::nullopt, 0.6})) == doctest::Approx(0.1));
  CHECK(f1_volatility(series({0.5})) == doctest::Approx(0.0));
  CHECK_THROWS_WITH_AS(f1_volatility(series({std::nullopt, std::nullopt})),
                       doctest::Contains("AllUndefined"), InputError);
}

TEST_CASE("mann_kendall_tau fixtures") {
  CHECK(mann_kendall_tau(series({1.0, 2.0, 3.0, 4.0})) == doctest::Approx(1.0));
  CHECK(mann_kendall_tau(series({4.0, 3.0, 2.0, 1.0})) == doctest::Approx(-1.0));
  CHECK(mann_kendall_tau(series({1.0, 3.0, 2.0})) == doctest::Approx(1.0 / 3.0));
  // Ties contribute zero to S under tau-a.
  CHECK(mann_kendall_tau(series({2.0, 2.0, 2.0})) == doctest::Approx(0.0));
  // Undefined months are skipped pairwise.
  CHECK(mann_kendall_tau(series({1.0, std::nullopt, 2.0, 3.0})) ==
        doctest::Approx(1.0));
  CHECK_THROWS_WITH_AS(mann_kendall_tau(series({1.0})),
                       doctest::Contains("TooFewPoints"), InputError);
  CHECK_THROWS_AS(mann_kendall_tau(series({1.0, std::nullopt})), InputError);
}

TEST_CASE("tau-b corrects the denominator for ties") {
  // S = 2 (both comparisons with the pair of ties count once each): values
  // {1,1,2}: pairs (1,1)=0, (1,2)=+1, (1,2)=+1 -> S=2; tau-a = 2/3.
  auto s = series({1.0, 1.0, 2.0});
  CHECK(mann_kendall_tau(s, false) == doctest::Approx(2.0 / 3.0));
  // tau-b: denominator sqrt((3 - 1) * 3) = sqrt(6); 2/sqrt(6) ~ 0.8165.
  CHECK(mann_kendall_tau(s, true) == doctest::Approx(2.0 / std::sqrt(6.0)));
  // No ties: both variants agree.
  auto t = series({1.0, 3.0, 2.0});
  CHECK(mann_kendall_tau(t, true) == doctest::Approx(mann_kendall_tau(t, false)));
}

TEST_CASE("mann_kendall_tau matches the pairwise oracle") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + rng() % 30;
    std::vector<double> v;
    std::vector<std::optional<double>> padded;
    for (std::size_t i = 0; i < n; ++i) {
      double x = static_cast<double>(rng() % 12);
      v.push_back(x);
      if (rng() % 5 == 0) padded.push_back(std::nullopt);
      padded.push_back(x);
    }
    CHECK(mann_kendall_tau(series(std::move(padded))) ==
          doctest::Approx(tau_oracle(v)).epsilon(1e-12));
  }
}

TEST_CASE("tau is invariant under strictly increasing transforms") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::optional<double>> a, b, rev;
    for (int i = 0; i < 15; ++i) {
      double x = static_cast<double>(rng() % 100) / 10.0;
      a.push_back(x);
      b.push_back(std::exp(x));
    }
    rev = a;
    std::reverse(rev.begin(), rev.end());
    double ta = mann_kendall_tau(series(std::move(a)));
    CHECK(ta == doctest::Approx(mann_kendall_tau(series(std::move(b)))));
    // Reversal negates the trend.
    CHECK(mann_kendall_tau(series(std::move(rev))) == doctest::Approx(-ta));
  }
}

TEST_CASE("aggregate_pillars averages per dataset") {
  auto p = aggregate_pillars({{60.0, 2.0, 0.1, 0.0},
                              {90.0, 4.0, 0.2, 0.3},
                              {90.0, 6.0, 0.3, 0.6}},
                             "m1");
  CHECK(p.f1_mean == doctest::Approx(80.0));
  CHECK(p.f1_volatility == doctest::Approx(4.0));
  CHECK(p.aurc == doctest::Approx(0.2));
  CHECK(p.tau == doctest::Approx(0.3));
  CHECK(p.method_id == "m1");
  CHECK_THROWS_AS(aggregate_pillars({}, "m"), InputError);
}

TEST_CASE("pareto_front fixture") {
  PillarVector a{90.0, 3.0, 0.5, 0.3, "A"};
  PillarVector b{85.0, 4.0, 0.6, 0.1, "B"};   // dominated by A on every pillar
  PillarVector c{92.0, 10.0, 0.4, -0.2, "C"}; // trades volatility and tau
  auto front = pareto_front({a, b, c});
  REQUIRE(front.size() == 3);
  CHECK(front[0] == std::pair<std::string, bool>{"A", true});
  CHECK(front[1] == std::pair<std::string, bool>{"B", false});
  CHECK(front[2] == std::pair<std::string, bool>{"C", true});
}

TEST_CASE("duplicate pillar vectors are mutually non-dominated") {
  PillarVector a{90.0, 3.0, 0.5, 0.3, "A"};
  PillarVector a2 = a;
  a2.method_id = "A2";
  auto front = pareto_front({a, a2});
  CHECK(front[0].second);
  CHECK(front[1].second);
}

TEST_CASE("adding a dominated point never changes existing front membership") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<PillarVector> entries;
    for (int i = 0; i < 6; ++i) {
      entries.push_back({static_cast<double>(rng() % 100),
                         static_cast<double>(rng() % 10),
                         static_cast<double>(rng() % 100) / 100.0,
                         static_cast<double>(rng() % 21) / 10.0 - 1.0,
                         "m" + std::to_string(i)});
    }
    auto before = pareto_front(entries);
    // Worse than entries[0] on all four pillars.
    PillarVector worse = entries[0];
    worse.method_id = "worse";
    worse.f1_mean -= 1.0;
    worse.f1_volatility += 1.0;
    worse.aurc += 0.1;
    worse.tau -= 0.1;
    entries.push_back(worse);
    auto after = pareto_front(entries);
    REQUIRE(after.size() == before.size() + 1);
    for (std::size_t i = 0; i < before.size(); ++i)
      CHECK(after[i] == before[i]);
    CHECK(!after.back().second);
  }
}
