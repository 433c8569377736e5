#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "htdt/distribution.hpp"
#include "htdt/protocol.hpp"

#include <cmath>
#include <random>

using namespace htdt;

TEST_CASE("transmissivity") {
  CHECK(transmissivity(0.0, 1e-3) == 1.0);
  CHECK(transmissivity(1500.0, 1e-3) ==
        doctest::Approx(0.7079457844).epsilon(1e-9));
  // half distance takes the square root
  CHECK(transmissivity(750.0, 1e-3) ==
        doctest::Approx(std::sqrt(transmissivity(1500.0, 1e-3)))
            .epsilon(1e-12));
  CHECK(transmissivity(123.0, 0.0) == 1.0);
  CHECK_THROWS_AS(transmissivity(-1.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(transmissivity(1.0, -1e-3), std::invalid_argument);
}

TEST_CASE("geometry") {
  SUBCASE("distance from transmissivity and back") {
    const GeometryConfig g = GeometryConfig::from_x_ab(0.7, 0.0, 1e-3);
    CHECK(g.distance_ab == doctest::Approx(1549.0194).epsilon(1e-6));
    CHECK(g.x_ab() == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(g.x_c() == doctest::Approx(std::sqrt(0.7)).epsilon(1e-12));
  }

  SUBCASE("offset lengthens Charlie's links") {
    const GeometryConfig near = GeometryConfig::from_x_ab(0.7, 0.0, 1e-3);
    const GeometryConfig far = GeometryConfig::from_x_ab(0.7, 900.0, 1e-3);
    CHECK(far.charlie_distance() > near.charlie_distance());
    CHECK(far.x_c() < near.x_c());
    CHECK(far.x_ab() == near.x_ab());
  }

  SUBCASE("triangle inequality holds for every offset") {
    for (double h : {0.0, 100.0, 1000.0, 25000.0}) {
      const GeometryConfig g = GeometryConfig::from_x_ab(0.42, h, 1e-3);
      CHECK(g.x_ab() >= g.x_c() * g.x_c() - 1e-12);
    }
  }

  SUBCASE("symmetric factory accepts only equidistant Charlie") {
    const GeometryConfig g =
        GeometryConfig::with_charlie_distances(1000.0, 1000.0, 1600.0, 1e-3);
    CHECK(g.charlie_offset == doctest::Approx(600.0).epsilon(1e-9));
    CHECK_THROWS_AS(
        GeometryConfig::with_charlie_distances(1000.0, 1200.0, 1600.0, 1e-3),
        std::invalid_argument);
    CHECK_THROWS_AS(
        GeometryConfig::with_charlie_distances(700.0, 700.0, 1600.0, 1e-3),
        std::invalid_argument);
  }

  SUBCASE("validation") {
    CHECK_THROWS_AS(GeometryConfig::from_x_ab(0.7, 0.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(GeometryConfig::from_x_ab(1.2, 0.0, 1e-3),
                    std::invalid_argument);
    GeometryConfig bad{.distance_ab = -1.0,
                       .charlie_offset = 0.0,
                       .loss_rate_db_per_m = 1e-3};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }
}

TEST_CASE("distribute_resource") {
  SUBCASE("lossless links deliver the pure source") {
    const ResourceTriplet t = distribute_resource({.r_c = 1.05}, 1.0);
    CHECK(t.a == doctest::Approx(std::cosh(2.1)).epsilon(1e-12));
    CHECK(t.b == doctest::Approx(std::cosh(2.1)).epsilon(1e-12));
    CHECK(t.c == doctest::Approx(std::sinh(2.1)).epsilon(1e-12));
  }

  SUBCASE("vacuum source stays vacuum") {
    for (double x_c : {0.1, 0.5, 0.99}) {
      const ResourceTriplet t = distribute_resource({.r_c = 0.0}, x_c);
      CHECK(t.a == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(t.b == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(std::abs(t.c) <= 1e-14);
    }
  }

  SUBCASE("anchor configuration values") {
    const ResourceTriplet t = distribute_resource({.r_c = 1.05}, 0.8367);
    CHECK(t.a == doctest::Approx(3.6308468297).epsilon(1e-9));
    CHECK(t.b == doctest::Approx(3.6308468297).epsilon(1e-9));
    CHECK(t.c == doctest::Approx(3.3650875362).epsilon(1e-9));
  }

  SUBCASE("matrix path equals the closed form (property)") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> rd(0.0, 2.5);
    std::uniform_real_distribution<double> xd(0.02, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      const double r_c = rd(rng);
      const double x_c = xd(rng);
      const ResourceTriplet t = distribute_resource({.r_c = r_c}, x_c);
      const double ch = std::cosh(2.0 * r_c);
      const double sh = std::sinh(2.0 * r_c);
      CHECK(std::abs(t.a - (x_c * ch + 1.0 - x_c)) <= 1e-10 * ch);
      CHECK(std::abs(t.b - (x_c * ch + 1.0 - x_c)) <= 1e-10 * ch);
      CHECK(std::abs(t.c - x_c * sh) <= 1e-10 * ch);
      CHECK(t.is_physical());
    }
  }

  SUBCASE("domain") {
    CHECK_THROWS_AS(distribute_resource({.r_c = -0.1}, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(distribute_resource({.r_c = 1.0}, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(distribute_resource({.r_c = 1.0}, 1.1),
                    std::invalid_argument);
  }
}

TEST_CASE("distributed_log_negativity") {
  SUBCASE("lossless limit") {
    CHECK(distributed_log_negativity({.r_c = 1.05}, 1.0) ==
          doctest::Approx(2.1).epsilon(1e-12));
  }

  SUBCASE("anchor value") {
    CHECK(distributed_log_negativity({.r_c = 1.05}, 0.8367) ==
          doctest::Approx(1.3251642915).epsilon(1e-9));
  }

  SUBCASE("saturates at -ln(1 - x_C) for strong sources") {
    for (double x_c : {0.3, 0.7, 0.95}) {
      CHECK(std::abs(distributed_log_negativity({.r_c = 25.0}, x_c) -
                     (-std::log(1.0 - x_c))) <= 1e-6);
    }
  }

  SUBCASE("agrees with the state-level computation (property)") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> rd(0.0, 2.5);
    std::uniform_real_distribution<double> xd(0.02, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      const double r_c = rd(rng);
      const double x_c = xd(rng);
      const double closed = distributed_log_negativity({.r_c = r_c}, x_c);
      const double matrix = log_negativity(
          resource_to_state(distribute_resource({.r_c = r_c}, x_c)));
      CHECK(std::abs(closed - matrix) <= 1e-9);
    }
  }

  SUBCASE("monotone in both arguments (property)") {
    double prev = 0.0;
    for (double x_c = 0.05; x_c <= 1.0; x_c += 0.05) {
      const double cur = distributed_log_negativity({.r_c = 0.9}, x_c);
      CHECK(cur >= prev - 1e-12);
      prev = cur;
    }
    prev = 0.0;
    for (double r_c = 0.0; r_c <= 2.0; r_c += 0.1) {
      const double cur = distributed_log_negativity({.r_c = r_c}, 0.77);
      CHECK(cur >= prev - 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("htdt_condition_distributed") {
  SUBCASE("anchor configuration is finite-d optimal") {
    // x_C = sqrt(x_AB) is Charlie at the midpoint; the condition value is
    // -ln(1 - 2*0.7/(sqrt(0.7)*1.7)) = 4.15 >> 2 r_C = 2.1.
    CHECK(htdt_condition_distributed({.r_c = 1.05}, std::sqrt(0.7), 0.7));
    CHECK_FALSE(
        htdt_condition_distributed({.r_c = 2.2}, std::sqrt(0.7), 0.7));
  }

  SUBCASE("position-independent sufficient bound") {
    const double x_ab = 0.7;
    const double bound =
        -std::log(1.0 - 2.0 * std::sqrt(x_ab) / (1.0 + x_ab));
    const double r_c = (bound - 1e-6) / 2.0;
    for (double x_c : {0.85, 0.9, 1.0}) {
      if (x_ab < x_c * x_c) continue;
      CHECK(htdt_condition_distributed({.r_c = r_c}, x_c, x_ab));
    }
    CHECK(htdt_condition_distributed({.r_c = r_c}, std::sqrt(x_ab), x_ab));
  }

  SUBCASE("vacuum source beats teleportation on any non-breaking channel") {
    CHECK(htdt_condition_distributed({.r_c = 0.0}, 0.8, 0.7));
    CHECK(htdt_condition_distributed({.r_c = 0.0}, 0.3, 0.2));
  }

  SUBCASE("vacuous regime: log argument <= 0 holds for every source") {
    // 2 x_AB / (x_C (1 + x_AB)) >= 1 makes the condition r_C-independent.
    CHECK(htdt_condition_distributed({.r_c = 50.0}, 0.9, 0.9));
  }

  SUBCASE("geometric constraint is enforced") {
    CHECK_THROWS_AS(htdt_condition_distributed({.r_c = 1.0}, 0.9, 0.5),
                    std::invalid_argument);
  }

  SUBCASE("equivalent to the gain-noise optimality condition (property)") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> rd(0.0, 2.5);
    std::uniform_real_distribution<double> xd(0.02, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
      const double r_c = rd(rng);
      const double x_c = xd(rng);
      const double floor = x_c * x_c;
      const double x_ab = floor + (1.0 - floor) * xd(rng);
      if (!(x_ab > 0.0) || x_ab > 1.0) continue;
      const double two_r = distributed_log_negativity({.r_c = r_c}, x_c);
      const bool via_theorem = htdt_beats_teleportation(
          two_r / 2.0, {.x = x_ab, .y = 1.0 - x_ab});
      CHECK(htdt_condition_distributed({.r_c = r_c}, x_c, x_ab) ==
            via_theorem);
    }
  }
}

TEST_CASE("sweep_fig5") {
  const GeometryConfig base = GeometryConfig::from_x_ab(0.7, 0.0, 1e-3);
  const std::vector<double> hs = {0.0, 500.0, 1000.0, 1500.0, 2000.0};
  const std::vector<double> rs = {0.35, 1.05};
  const std::vector<SweepPoint> rows = sweep_fig5(base, hs, rs);
  REQUIRE(rows.size() == hs.size() * rs.size());

  SUBCASE("rows are ordered by (h_C, r_C)") {
    for (size_t i = 1; i < rows.size(); ++i) {
      const bool ordered =
          rows[i - 1].h_c < rows[i].h_c ||
          (rows[i - 1].h_c == rows[i].h_c && rows[i - 1].r_c < rows[i].r_c);
      CHECK(ordered);
    }
  }

  SUBCASE("midpoint anchor row") {
    const SweepPoint& anchor = rows[1];  // h = 0, r_C = 1.05
    CHECK(anchor.h_c == 0.0);
    CHECK(anchor.r_c == 1.05);
    CHECK(anchor.x_c == doctest::Approx(std::sqrt(0.7)).epsilon(1e-12));
    CHECK(std::abs(anchor.d_opt - 3.1) <= 0.1);
  }

  SUBCASE("analog never loses to teleportation; baseline is flat") {
    // No F_an >= F_ef here: with a mixed distributed resource the
    // entanglement-free protocol can win (it uses a different, pure
    // resource), unlike the noiseless-distribution setting.
    for (const SweepPoint& p : rows) {
      CHECK(p.f_an >= p.f_qt);
      CHECK(p.f_ef == rows.front().f_ef);
    }
  }

  SUBCASE("fidelity degrades as Charlie moves away") {
    for (const double r_c : rs) {
      double prev = 2.0;
      for (const SweepPoint& p : rows) {
        if (p.r_c != r_c) continue;
        CHECK(p.f_an <= prev + 1e-12);
        prev = p.f_an;
      }
    }
  }

  SUBCASE("distant Charlie approaches the entanglement-free case") {
    const GeometryConfig far = GeometryConfig::from_x_ab(0.7, 0.0, 1e-3);
    const std::vector<double> far_h = {60000.0};
    const std::vector<SweepPoint> far_rows = sweep_fig5(far, far_h, rs);
    for (const SweepPoint& p : far_rows) {
      CHECK(std::abs(p.f_an - p.f_ef) <= 1e-4);
    }
  }
}
