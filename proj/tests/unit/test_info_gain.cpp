#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "common/oracles.hpp"
#include "common/test_util.hpp"
#include "igrf/errors.hpp"
#include "igrf/info_gain.hpp"

using namespace igrf;

TEST_CASE("entropy basics") {
  CHECK(entropy_bits(std::vector<std::size_t>{5, 5}) == 1.0);
  CHECK(entropy_bits(std::vector<std::size_t>{8}) == 0.0);
  CHECK(entropy_bits(std::vector<std::size_t>{2, 2, 4}) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(entropy_bits(std::vector<std::size_t>{0, 3, 0}) == 0.0);  // 0 log 0 = 0
  CHECK_THROWS_AS(entropy_bits(std::vector<std::size_t>{0, 0}), DataError);
}

TEST_CASE("entropy grouping identity against the direct oracle") {
  // H(full) = H(classes i,j merged) + p_ij * H(binary mix of i and j)
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + uniform_index(rng, 4);
    std::vector<std::size_t> counts(k);
    std::size_t total = 0;
    for (auto& c : counts) {
      c = uniform_index(rng, 20);
      total += c;
    }
    if (total == 0) continue;
    const std::size_t i = 0, j = 1;
    if (counts[i] + counts[j] == 0) continue;

    std::vector<std::size_t> merged{counts[i] + counts[j]};
    for (std::size_t c = 2; c < k; ++c) merged.push_back(counts[c]);
    const double p_mix = static_cast<double>(counts[i] + counts[j]) / static_cast<double>(total);
    const double mix_entropy = oracle::entropy_direct({counts[i], counts[j]});

    const double lhs = entropy_bits(counts);
    const double rhs = oracle::entropy_direct(merged) + p_mix * mix_entropy;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    CHECK(oracle::entropy_direct(merged) <= lhs + 1e-12);
  }
}

TEST_CASE("conditional entropy") {
  SUBCASE("single bin equals the marginal entropy") {
    const std::vector<std::vector<std::size_t>> joint{{2, 2, 4}};
    CHECK(conditional_entropy_bits(joint) ==
          doctest::Approx(entropy_bits(std::vector<std::size_t>{2, 2, 4})).epsilon(1e-12));
  }
  SUBCASE("pure bins have zero conditional entropy") {
    const std::vector<std::vector<std::size_t>> joint{{4, 0}, {0, 7}};
    CHECK(conditional_entropy_bits(joint) == 0.0);
  }
  SUBCASE("hand-evaluated 0.5") {
    const std::vector<std::vector<std::size_t>> joint{{4, 0}, {2, 2}};
    CHECK(conditional_entropy_bits(joint) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("empty bins contribute nothing") {
    const std::vector<std::vector<std::size_t>> joint{{4, 0}, {0, 0}, {2, 2}};
    CHECK(conditional_entropy_bits(joint) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("information gain identities") {
  const Discretizer d;
  SUBCASE("feature identical to balanced binary labels has IG = H(Y) = 1") {
    const std::vector<double> x{0, 1, 0, 1, 0, 1, 0, 1};
    const std::vector<std::int32_t> y{0, 1, 0, 1, 0, 1, 0, 1};
    CHECK(information_gain(x, y, 2, d) == 1.0);
  }
  SUBCASE("constant feature has IG = 0 exactly") {
    const std::vector<double> x(10, 3.25);
    const std::vector<std::int32_t> y{0, 1, 0, 1, 1, 0, 1, 0, 1, 0};
    CHECK(information_gain(x, y, 2, d) == 0.0);
  }
  SUBCASE("hand-computed mixed case: 0.8113 - 0.5 = 0.3113") {
    // X in {a,b} equiprobable; Y pure under a, uniform binary under b.
    // Marginal Y counts: (6, 2) -> H = 0.8113; H(Y|X) = 0.5*0 + 0.5*1.
    const std::vector<double> x{0, 0, 0, 0, 1, 1, 1, 1};
    const std::vector<std::int32_t> y{0, 0, 0, 0, 0, 0, 1, 1};
    CHECK(information_gain(x, y, 2, d) == doctest::Approx(0.3113).epsilon(2e-4));
  }
  SUBCASE("length mismatch is an error") {
    CHECK_THROWS_AS(information_gain(std::vector<double>{1, 2}, std::vector<std::int32_t>{0}, 2, d),
                    DataError);
  }
}

TEST_CASE("IG bounded by label entropy on random fixtures") {
  Rng rng(2022);
  const Discretizer d;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 5 + uniform_index(rng, 60);
    const std::size_t k = 2 + uniform_index(rng, 4);
    std::vector<double> x(n);
    std::vector<std::int32_t> y(n);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = test::gaussian(rng);
      y[i] = static_cast<std::int32_t>(uniform_index(rng, k));
      ++counts[static_cast<std::size_t>(y[i])];
    }
    if (std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) == 0) {
      continue;
    }
    const double ig = information_gain(x, y, k, d);
    const double h = entropy_bits(counts);
    CHECK(ig >= -1e-12);
    CHECK(ig <= h + 1e-12);
  }
}

TEST_CASE("equal-frequency IG is invariant under strictly monotone transforms") {
  Rng rng(7);
  const Discretizer d;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 30 + uniform_index(rng, 40);
    std::vector<double> x(n);
    std::vector<std::int32_t> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = test::gaussian(rng);
      y[i] = static_cast<std::int32_t>(uniform_index(rng, 3));
    }
    std::vector<double> warped(n);
    for (std::size_t i = 0; i < n; ++i) warped[i] = std::exp(x[i]) + 3.0 * x[i];
    CHECK(information_gain(x, y, 3, d) ==
          doctest::Approx(information_gain(warped, y, 3, d)).epsilon(1e-12));
  }
}

TEST_CASE("IG is invariant under row permutation") {
  Rng rng(11);
  const Discretizer d;
  std::vector<double> x(50);
  std::vector<std::int32_t> y(50);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = test::gaussian(rng);
    y[i] = static_cast<std::int32_t>(uniform_index(rng, 2));
  }
  const double before = information_gain(x, y, 2, d);
  std::vector<std::size_t> perm(x.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  shuffle(perm, rng);
  std::vector<double> xp(x.size());
  std::vector<std::int32_t> yp(y.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    xp[i] = x[perm[i]];
    yp[i] = y[perm[i]];
  }
  CHECK(information_gain(xp, yp, 2, d) == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("rank_ig orders copy-of-label above noisy copy above noise") {
  Rng rng(17);
  const std::size_t n = 400;
  std::vector<double> exact(n), noisy(n), noise(n);
  std::vector<std::int32_t> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = static_cast<std::int32_t>(uniform_index(rng, 2));
    exact[i] = static_cast<double>(y[i]);
    noisy[i] = static_cast<double>(y[i]) + 0.4 * test::gaussian(rng);
    noise[i] = test::gaussian(rng);
  }
  const Table t = test::make_numeric_table({noise, exact, noisy}, y, {"A", "B"});
  const auto scores = rank_ig(t, Discretizer{});

  REQUIRE(scores.size() == 3);
  CHECK(scores[0].name == "f1");  // exact copy
  CHECK(scores[1].name == "f2");  // noisy copy
  CHECK(scores[2].name == "f0");  // pure noise
  CHECK(scores[0].normalized == 1.0);
  CHECK(scores[2].normalized == 0.0);

  // brute-force recomputation of each raw score
  for (const auto& s : scores) {
    const auto& values = t.numeric[t.numeric_slot(s.feature)];
    const auto edges = Discretizer{}.edges(values);
    std::vector<std::size_t> groups(n);
    for (std::size_t i = 0; i < n; ++i) groups[i] = bin_index(edges, values[i]);
    CHECK(s.raw_ig == doctest::Approx(oracle::info_gain_direct(groups, y, 2)).epsilon(1e-12));
  }
}

TEST_CASE("rank_ig degenerate normalization keeps all features at 1") {
  SUBCASE("single feature") {
    const Table t =
        test::make_numeric_table({{1, 2, 3, 4}}, {0, 1, 0, 1}, {"A", "B"});
    const auto scores = rank_ig(t, Discretizer{});
    REQUIRE(scores.size() == 1);
    CHECK(scores[0].normalized == 1.0);
  }
  SUBCASE("identical features") {
    const Table t = test::make_numeric_table({{1, 2, 3, 4}, {1, 2, 3, 4}}, {0, 1, 0, 1},
                                             {"A", "B"});
    const auto scores = rank_ig(t, Discretizer{});
    CHECK(scores[0].normalized == 1.0);
    CHECK(scores[1].normalized == 1.0);
    // ties keep original column order
    CHECK(scores[0].name == "f0");
    CHECK(scores[1].name == "f1");
  }
}

TEST_CASE("discretizer edge handling") {
  const Discretizer d{4};
  SUBCASE("duplicate quantile edges collapse") {
    const std::vector<double> values{1, 1, 1, 1, 1, 1, 9, 9};
    const auto edges = d.edges(values);
    for (std::size_t i = 1; i < edges.size(); ++i) CHECK(edges[i] > edges[i - 1]);
  }
  SUBCASE("every value maps to exactly one bin in range") {
    const std::vector<double> values{3, 1, 4, 1, 5, 9, 2, 6};
    const auto edges = d.edges(values);
    for (double v : values) {
      const std::size_t bin = bin_index(edges, v);
      CHECK(bin <= edges.size());
    }
  }
}
