#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "genbeta/table_io.hpp"

using namespace genbeta;

TEST_CASE("zonal table JSON round trip") {
  ZonalTable t = build_zonal_table(6);
  ordered_json j = zonal_to_json(t);
  ZonalTable back = zonal_from_json(j);
  CHECK(back.max_degree == t.max_degree);
  std::vector<double> eig{0.7, 1.4, 2.2};
  for (int k = 1; k <= 6; ++k)
    for (const Partition& kappa : enumerate_partitions(k, k))
      CHECK(zonal_eval(back, kappa, eig) ==
            Catch::Approx(zonal_eval(t, kappa, eig)).epsilon(1e-15));

  // serialization is byte-stable
  CHECK(zonal_to_json(back).dump() == j.dump());

  ordered_json corrupted = j;
  corrupted["version"] = "genbeta-zonal-v0";
  CHECK_THROWS_AS(zonal_from_json(corrupted), std::runtime_error);
}

TEST_CASE("invariant table JSON round trip") {
  ZonalTable zt = build_zonal_table(4);
  InvariantTable t = calibrate_invariants(4, 3, &zt);
  ordered_json j = invariant_to_json(t);
  InvariantTable back = invariant_from_json(j);
  REQUIRE(back.entries.size() == t.entries.size());

  std::mt19937_64 gen(7);
  std::normal_distribution<double> n;
  for (const auto& [key, e] : t.entries) {
    const InvariantEntry& e2 = back.entries.at(key);
    REQUIRE(e2.blocks.size() == e.blocks.size());
    int m = e.m_cal;
    std::vector<Matrix> args;
    for (std::size_t c = 0; c < key.parts.size(); ++c) {
      Matrix G(m, m);
      for (int i = 0; i < m; ++i)
        for (int jj = 0; jj < m; ++jj) G(i, jj) = n(gen);
      args.push_back(G);
    }
    for (std::size_t b = 0; b < e.blocks.size(); ++b) {
      CHECK(theta_weighted_eval(e2, e2.blocks[b], args) ==
            Catch::Approx(theta_weighted_eval(e, e.blocks[b], args)).margin(1e-14));
      CHECK(e2.blocks[b].theta_sq == Catch::Approx(e.blocks[b].theta_sq).margin(1e-15));
    }
  }

  CHECK(invariant_to_json(back).dump() == j.dump());

  ordered_json corrupted = j;
  corrupted["version"] = "something-else";
  CHECK_THROWS_AS(invariant_from_json(corrupted), std::runtime_error);
}

TEST_CASE("calibration is idempotent") {
  ZonalTable zt = build_zonal_table(4);
  std::string a = invariant_to_json(calibrate_invariants(4, 3, &zt)).dump();
  std::string b = invariant_to_json(calibrate_invariants(4, 3, &zt)).dump();
  CHECK(a == b);
}
