#include <catch2/catch_amalgamated.hpp>

#include "genbeta/partition.hpp"

using namespace genbeta;

TEST_CASE("enumerate_partitions basic shapes") {
  auto p0 = enumerate_partitions(0, 3);
  REQUIRE(p0.size() == 1);
  REQUIRE(p0[0].empty());

  auto p3 = enumerate_partitions(3, 2);
  REQUIRE(p3.size() == 2);
  CHECK(p3[0] == Partition{3});
  CHECK(p3[1] == Partition{2, 1});

  // brute-force oracle: all partitions of 4 (max_len 4) -> p(4) = 5
  auto p4 = enumerate_partitions(4, 4);
  REQUIRE(p4.size() == 5);
}

TEST_CASE("partition counts match the DP oracle up to weight 10") {
  for (int k = 0; k <= 10; ++k) {
    auto parts = enumerate_partitions(k, std::max(k, 1));
    CHECK(static_cast<long long>(parts.size()) == partition_count(k));
  }
}

TEST_CASE("enumeration is reverse lexicographic and respects max_len") {
  auto parts = enumerate_partitions(4, 4);
  REQUIRE(parts[0] == Partition{4});
  REQUIRE(parts[1] == Partition{3, 1});
  REQUIRE(parts[2] == Partition{2, 2});
  REQUIRE(parts[3] == Partition{2, 1, 1});
  REQUIRE(parts[4] == Partition{1, 1, 1, 1});

  for (const auto& p : enumerate_partitions(6, 2)) CHECK(p.length() <= 2);
}

TEST_CASE("dominance order") {
  CHECK(dominated_by(Partition{1, 1, 1}, Partition{3}));
  CHECK(dominated_by(Partition{2, 1}, Partition{3}));
  CHECK_FALSE(dominated_by(Partition{3}, Partition{2, 1}));
  CHECK(dominated_by(Partition{2, 2}, Partition{3, 1}));
}

TEST_CASE("generalized Pochhammer") {
  CHECK(gen_pochhammer(2.5, Partition{1}) == Catch::Approx(2.5));
  CHECK(gen_pochhammer(3.0, Partition{2}) == Catch::Approx(12.0));
  CHECK(gen_pochhammer(3.0, Partition{1, 1}) == Catch::Approx(7.5));
  CHECK(gen_pochhammer(1.7, Partition{}) == 1.0);

  // single-row partitions reduce to the ordinary rising factorial
  for (int k = 1; k <= 6; ++k) {
    double a = 1.3;
    CHECK(gen_pochhammer(a, Partition{std::vector<int>{k}}) ==
          Catch::Approx(rising_factorial(a, k)).epsilon(1e-13));
  }
}

TEST_CASE("multivariate log-gamma") {
  CHECK(lgamma_m(1, 1.0) == Catch::Approx(0.0).margin(1e-15));
  CHECK(lgamma_m(2, 2.0) ==
        Catch::Approx(std::log(std::sqrt(M_PI) * std::tgamma(2.0) * std::tgamma(1.5))));
  CHECK(lgamma_m(1, 0.5) == Catch::Approx(std::lgamma(0.5)));

  // scalar reduction over a grid
  for (double a = 0.25; a <= 8.0; a += 0.25)
    CHECK(lgamma_m(1, a) == Catch::Approx(std::lgamma(a)).epsilon(1e-12));

  CHECK_THROWS_AS(lgamma_m(3, 1.0), std::domain_error);
}

TEST_CASE("multivariate beta constants") {
  CHECK(lbeta_m(1, 1.0, 1.0) == Catch::Approx(0.0).margin(1e-15));
  CHECK(std::exp(lbeta_star_m(1, 1.0, 1.0, 1.0)) == Catch::Approx(0.5));
  // defining ratios hold exactly (to rounding)
  CHECK(lbeta_m(2, 2.0, 2.0) ==
        Catch::Approx(2.0 * lgamma_m(2, 2.0) - lgamma_m(2, 4.0)).epsilon(1e-14));
  CHECK(lbeta_star_m(2, 1.5, 2.0, 2.5) ==
        Catch::Approx(lgamma_m(2, 1.5) + lgamma_m(2, 2.0) + lgamma_m(2, 2.5) -
                      lgamma_m(2, 6.0)).epsilon(1e-14));
}
