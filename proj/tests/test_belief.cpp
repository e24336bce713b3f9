#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "evigrid/belief.hpp"
#include "evigrid/rng.hpp"
#include "oracles.hpp"

using evigrid::BeliefMass;
using evigrid::CombineResult;
using evigrid::combine_dempster;
using evigrid::combine_smets;
using evigrid::conflict_k;
using evigrid::weight_of_conflict;

namespace {

BeliefMass make(double o, double e, double u, double c = 0.0) {
  BeliefMass m;
  m.occupied = o;
  m.empty = e;
  m.unknown = u;
  m.conflict = c;
  return m;
}

bool bitwise_equal(const BeliefMass& a, const BeliefMass& b) {
  return a.occupied == b.occupied && a.empty == b.empty &&
         a.unknown == b.unknown && a.conflict == b.conflict;
}

}  // namespace

TEST_CASE("conflict factor on hand-picked pairs") {
  CHECK(conflict_k(make(1, 0, 0), make(0, 1, 0)) == 1.0);
  CHECK(conflict_k(make(0.5, 0, 0.5), make(0, 0.4, 0.6)) ==
        doctest::Approx(0.2).epsilon(1e-14));
  CHECK(conflict_k(BeliefMass::vacuous(), BeliefMass::vacuous()) == 0.0);
  CHECK(conflict_k(make(0.3, 0.3, 0.4), BeliefMass::vacuous()) == 0.0);
}

TEST_CASE("weight of conflict values, cap, and domain") {
  CHECK(weight_of_conflict(0.0) == 0.0);
  CHECK(std::abs(weight_of_conflict(0.2) - 0.22314355131420976) < 1e-15);
  // At the cap the value is ln(1/eps) with eps = 1e-9.
  CHECK(std::abs(weight_of_conflict(1.0) - (-std::log(1e-9))) < 1e-6);
  CHECK(evigrid::conflict_saturates(1.0));
  CHECK(!evigrid::conflict_saturates(0.999999));
  CHECK_THROWS_AS((void)weight_of_conflict(-0.1), std::domain_error);
  CHECK_THROWS_AS((void)weight_of_conflict(1.1), std::domain_error);
  CHECK_THROWS_AS((void)weight_of_conflict(std::nan("")), std::domain_error);
}

TEST_CASE("normalized combination: worked pair") {
  const auto res = combine_dempster(make(0.5, 0, 0.5), make(0, 0.4, 0.6));
  CHECK(std::abs(res.mass.occupied - 0.375) < 1e-12);
  CHECK(std::abs(res.mass.empty - 0.25) < 1e-12);
  CHECK(std::abs(res.mass.unknown - 0.375) < 1e-12);
  CHECK(res.mass.conflict == 0.0);
  CHECK(std::abs(res.conflict.k - 0.2) < 1e-15);
  CHECK(std::abs(res.conflict.con - 0.22314355131420976) < 1e-12);
  CHECK(!res.conflict.saturated);
}

TEST_CASE("normalized combination: vacuous is the exact identity") {
  const BeliefMass a = make(0.37, 0.21, 0.42);
  const auto res = combine_dempster(a, BeliefMass::vacuous());
  CHECK(bitwise_equal(res.mass, a));
  CHECK(res.conflict.k == 0.0);
  CHECK(res.conflict.con == 0.0);
}

TEST_CASE("normalized combination: agreement sharpens belief") {
  const BeliefMass a = make(0.9, 0, 0.1);
  const auto res = combine_dempster(a, a);
  CHECK(std::abs(res.mass.occupied - 0.99) < 1e-12);
  CHECK(res.mass.empty == 0.0);
  CHECK(std::abs(res.mass.unknown - 0.01) < 1e-12);
  CHECK(res.conflict.k == 0.0);
}

TEST_CASE("normalized combination rejects conflict-bearing inputs") {
  CHECK_THROWS_AS(
      (void)combine_dempster(make(0.4, 0.3, 0.2, 0.1), BeliefMass::vacuous()),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)combine_dempster(make(0.5, 0.6, 0.2), BeliefMass::vacuous()),
      std::invalid_argument);
}

TEST_CASE("normalized combination saturates on total contradiction") {
  bool threw = false;
  try {
    (void)combine_dempster(make(1, 0, 0), make(0, 1, 0));
  } catch (const evigrid::SaturationError& err) {
    threw = true;
    CHECK(err.observation.saturated);
    CHECK(err.observation.k == 1.0);
    CHECK(std::abs(err.observation.con - (-std::log(1e-9))) < 1e-6);
  }
  CHECK(threw);
}

TEST_CASE("unnormalized combination: worked pair keeps conflict mass") {
  const auto res = combine_smets(make(0.5, 0, 0.5), make(0, 0.4, 0.6));
  CHECK(std::abs(res.mass.occupied - 0.3) < 1e-12);
  CHECK(std::abs(res.mass.empty - 0.2) < 1e-12);
  CHECK(std::abs(res.mass.unknown - 0.3) < 1e-12);
  CHECK(std::abs(res.mass.conflict - 0.2) < 1e-12);
  CHECK(std::abs(res.conflict.smets_empty_delta - 0.2) < 1e-12);
}

TEST_CASE("unnormalized combination: empty set absorbs") {
  const auto res = combine_smets(make(0, 0, 0, 1), make(0.3, 0.3, 0.4));
  CHECK(res.mass.occupied == 0.0);
  CHECK(res.mass.empty == 0.0);
  CHECK(res.mass.unknown == 0.0);
  CHECK(res.mass.conflict == 1.0);
}

TEST_CASE("unnormalized combination: vacuous is the exact identity") {
  const BeliefMass a = make(0.25, 0.35, 0.3, 0.1);
  const auto res = combine_smets(a, BeliefMass::vacuous());
  CHECK(bitwise_equal(res.mass, a));
  CHECK(res.conflict.smets_empty_delta == 0.0);
}

TEST_CASE("both rules match the power-set enumeration oracle") {
  evigrid::Rng rng(0x9d1f2c3bu);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const BeliefMass a = oracle::random_mass(rng);
    const BeliefMass b = oracle::random_mass(rng);
    const auto dem = combine_dempster(a, b);
    const auto dem_ref =
        oracle::combine_conjunctive(oracle::to_vec(a), oracle::to_vec(b),
                                    /*normalize=*/true);
    const BeliefMass dm = oracle::to_mass(dem_ref.mass);
    worst = std::max({worst, std::abs(dem.mass.occupied - dm.occupied),
                      std::abs(dem.mass.empty - dm.empty),
                      std::abs(dem.mass.unknown - dm.unknown),
                      std::abs(dem.conflict.k - dem_ref.k)});

    const BeliefMass c = oracle::random_mass(rng, /*allow_conflict=*/true);
    const BeliefMass d = oracle::random_mass(rng, /*allow_conflict=*/true);
    const auto sm = combine_smets(c, d);
    const auto sm_ref = oracle::combine_conjunctive(
        oracle::to_vec(c), oracle::to_vec(d), /*normalize=*/false);
    const BeliefMass smm = oracle::to_mass(sm_ref.mass);
    worst = std::max({worst, std::abs(sm.mass.occupied - smm.occupied),
                      std::abs(sm.mass.empty - smm.empty),
                      std::abs(sm.mass.unknown - smm.unknown),
                      std::abs(sm.mass.conflict - smm.conflict)});
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("combination is bitwise commutative") {
  evigrid::Rng rng(0x51c6e7a2u);
  for (int i = 0; i < 1000; ++i) {
    const BeliefMass a = oracle::random_mass(rng);
    const BeliefMass b = oracle::random_mass(rng);
    const auto ab = combine_dempster(a, b);
    const auto ba = combine_dempster(b, a);
    REQUIRE(bitwise_equal(ab.mass, ba.mass));
    REQUIRE(ab.conflict.k == ba.conflict.k);

    const BeliefMass c = oracle::random_mass(rng, true);
    const BeliefMass d = oracle::random_mass(rng, true);
    const auto cd = combine_smets(c, d);
    const auto dc = combine_smets(d, c);
    REQUIRE(bitwise_equal(cd.mass, dc.mass));
  }
}

TEST_CASE("normalized combination is associative within 1e-9") {
  evigrid::Rng rng(0x7b0a913cu);
  for (int i = 0; i < 1000; ++i) {
    const BeliefMass a = oracle::random_mass(rng);
    const BeliefMass b = oracle::random_mass(rng);
    const BeliefMass c = oracle::random_mass(rng);
    const auto left = combine_dempster(combine_dempster(a, b).mass, c).mass;
    const auto right = combine_dempster(a, combine_dempster(b, c).mass).mass;
    REQUIRE(std::abs(left.occupied - right.occupied) < 1e-9);
    REQUIRE(std::abs(left.empty - right.empty) < 1e-9);
    REQUIRE(std::abs(left.unknown - right.unknown) < 1e-9);
  }
}

TEST_CASE("weight of conflict is additive over sequential combination") {
  evigrid::Rng rng(0x2f8e11d7u);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const BeliefMass a = oracle::random_mass(rng);
    const BeliefMass b = oracle::random_mass(rng);
    const BeliefMass c = oracle::random_mass(rng);
    const auto ab = combine_dempster(a, b);
    const auto ab_c = combine_dempster(ab.mass, c);
    const double joint_k = oracle::joint_conflict_k3(
        oracle::to_vec(a), oracle::to_vec(b), oracle::to_vec(c));
    const double sequential = ab.conflict.con + ab_c.conflict.con;
    const double joint = weight_of_conflict(joint_k);
    worst = std::max(worst, std::abs(sequential - joint));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("combination outputs stay valid mass assignments") {
  evigrid::Rng rng(0xc4d5e6f7u);
  for (int i = 0; i < 500; ++i) {
    const BeliefMass a = oracle::random_mass(rng);
    const BeliefMass b = oracle::random_mass(rng);
    const auto dem = combine_dempster(a, b);
    REQUIRE(dem.mass.is_valid());
    REQUIRE(dem.mass.conflict == 0.0);
    const auto sm = combine_smets(a, b);
    REQUIRE(sm.mass.is_valid());
    REQUIRE(std::abs(sm.conflict.con -
                     weight_of_conflict(sm.conflict.k)) < 1e-9);
  }
}
