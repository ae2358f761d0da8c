#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "generators.hpp"
#include "landscape/geodesic_rate.hpp"

#include <cmath>
#include <stdexcept>

using namespace landscape;

namespace {

JOptions quick() {
  JOptions o;
  o.tol = 1e-6;
  return o;
}

}  // namespace

TEST_CASE("profile construction") {
  CHECK_THROWS_AS(ProfileFunction({0.0, 1.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ProfileFunction({0.0, 0.5}, {0.0}), std::invalid_argument);
  const ProfileFunction f = ProfileFunction::from_breakpoints({{0, 0}, {0.3, 0.6}, {1, 0}}, 10);
  CHECK(f.value_at(0.3) == doctest::Approx(0.6));
  CHECK(f.value_at(0.65) == doctest::Approx(0.3));
  for (std::size_t k = 0; k < f.cell_count(); ++k) {
    CHECK(f.times()[k + 1] - f.times()[k] <= 0.1 + 1e-12);
  }
  CHECK(f.scaled(2.0).value_at(0.3) == doctest::Approx(1.2));
}

TEST_CASE("two-piece closed form") {
  CHECK(jrate_two_piece(0.5) == doctest::Approx(32.0 / 3.0));
  CHECK(jrate_two_piece(0.25) == doctest::Approx(1408.0 / 81.0));
  CHECK(jrate_two_piece(0.25) == doctest::Approx(jrate_two_piece(0.75)));
}

TEST_CASE("solver on closed-form profiles") {
  const JSolution half = jrate_solve(tent_profile(0.5, 100), quick());
  CHECK(half.converged);
  CHECK(half.objective == doctest::Approx(32.0 / 3.0).epsilon(0.01));
  CHECK(half.max_violation <= 1e-9);
  CHECK(half.dual_value <= half.objective + 1e-9);

  const JSolution zero = jrate_solve(ProfileFunction({0.0, 0.5, 1.0}, {0.0, 0.0}), quick());
  CHECK(zero.objective == 0.0);
  CHECK(zero.constraints == 0);

  const JSolution trap = jrate_solve(trapezoid_profile(0.25, 1.0, 100), quick());
  CHECK(trap.objective == doctest::Approx(4.0 / 3.0 * std::pow(8.0, 1.5)).epsilon(0.02));
}

TEST_CASE("norm bounds") {
  const JBounds b = jrate_bounds(tent_profile(0.5, 10));
  CHECK(b.lower == doctest::Approx(32.0 / 3.0));
  CHECK(b.upper == doctest::Approx(32.0 / 3.0));
  const JBounds q = jrate_bounds(tent_profile(0.25, 10));
  CHECK(q.lower < q.upper);
}

TEST_CASE("l3l2 blocks") {
  for (std::size_t j : {1, 2, 7, 50}) {
    CAPTURE(j);
    const double len = 1.0 / static_cast<double>(j) - 1.0 / static_cast<double>(j + 1);
    CHECK(l3l2_block_rate(j) == doctest::Approx(4.0 / 3.0 * static_cast<double>(j) * len));
    CHECK(l3l2_block_energy(j) == doctest::Approx(std::cbrt(static_cast<double>(j * j)) * len));
  }
  const ProfileFunction f = l3l2_profile(3, 2);
  CHECK(f.value_at(0.25) == doctest::Approx(0.0));
  CHECK(f.value_at(0.75) == doctest::Approx(0.25));
}

TEST_CASE("affine pieces") {
  // One block of the divergent family maps to a tent with apex 1/2.
  const ProfileFunction f = l3l2_profile(4, 8);
  const ProfileFunction piece = affine_piece(f, 0.25, 1.0 / 3.0, 40);
  const double len = 1.0 / 12.0;
  CHECK(piece.value_at(0.5) == doctest::Approx(std::cbrt(3.0) * len / 2 * std::pow(len, -2.0 / 3.0)));
  CHECK(piece.value_at(0.0) == 0.0);
  CHECK(piece.value_at(1.0) == doctest::Approx(0.0));
}

TEST_CASE("superadditivity over disjoint pieces") {
  const auto r = jrate_superadditivity_check(tent_profile(0.5, 200),
                                             {{0.0, 0.25}, {0.25, 0.5}, {0.5, 1.0}}, 100);
  CHECK(r.ok);
  CHECK(r.pieces.size() == 3);
  CHECK(r.piece_sum <= r.total * 1.01);
}

TEST_CASE("iota") {
  const IotaValue v = iota_eval(1e-3);
  CHECK(v.radicand > 0);
  CHECK(v.iota * 1e-6 == doctest::Approx(8.0 / 27.0).epsilon(0.01 * 27.0 / 8.0));
  CHECK_THROWS_AS(iota_eval(0.0), std::invalid_argument);
  CHECK_THROWS_AS(iota_eval(0.7), std::invalid_argument);
}

TEST_CASE("property: the rate lies between the norm bounds") {
  gen::for_all(12, 60, [](gen::Source& s) {
    const ProfileFunction f = gen::profile(s, 48);
    const JSolution sol = jrate_solve(f, quick());
    const JBounds b = jrate_bounds(f);
    CHECK(sol.converged);
    CHECK(b.lower <= sol.objective + 1e-9);
    CHECK(sol.objective <= b.upper + 1e-6);
    CHECK(sol.max_violation <= 1e-9);
  });
}

TEST_CASE("property: cubic scaling") {
  gen::for_all(6, 61, [](gen::Source& s) {
    const ProfileFunction f = gen::profile(s, 32);
    const double a = s.real(0.3, 3.0);
    const ScalingReport r = jrate_scaling_check(f, a, quick());
    CHECK(r.relative_error <= 1e-4);
  });
}

TEST_CASE("property: perturbed starts reach the same optimum") {
  gen::for_all(4, 62, [](gen::Source& s) {
    const ProfileFunction f = gen::profile(s, 32);
    JOptions perturbed = quick();
    perturbed.perturb_start = true;
    perturbed.seed = s.integer(0, 1000);
    CHECK(jrate_solve(f, perturbed).objective ==
          doctest::Approx(jrate_solve(f, quick()).objective).epsilon(1e-4));
  });
}
