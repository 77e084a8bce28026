#include <doctest.h>

#include <cmath>

#include "phgen/catalog.hpp"
#include "phgen/errors.hpp"
#include "phgen/verifier.hpp"

using namespace phgen;

TEST_CASE("closed-form spot values") {
  CHECK(get_example("1A").closed_W(1.0) == doctest::Approx(0.7357588823428847).epsilon(1e-14));
  CHECK(get_example("1A").closed_g(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(get_example("1A").closed_V_tilde_minus_beta(1.0) == doctest::Approx(-2.0 - std::exp(-2.0)).epsilon(1e-15));
  // -12 cosh 1 (not -18.5179466)
  CHECK(get_example("2iv").closed_W(1.0) == doctest::Approx(-18.516967617782925).epsilon(1e-14));
  for (double x : {-4.0, -1.0, 0.0, 0.5, 3.0}) CHECK(get_example("2i").closed_W(x) == 0.0);
  // sech 1, and 2(2 - 3) e^{-1} for 1B
  CHECK(get_example("2iii").closed_g(1.0) == doctest::Approx(0.648054273663885).epsilon(1e-14));
  CHECK(get_example("1B").closed_W(1.0) == doctest::Approx(-0.735758882342884643).epsilon(1e-14));
}

TEST_CASE("every id resolves and unknown ids are rejected") {
  CHECK(example_ids().size() == 8);
  CHECK(all_ids().size() == 10);
  for (const auto& id : all_ids()) {
    const CatalogEntry e = get_entry(id);
    CHECK(e.id == id);
    CHECK_NOTHROW(construct(e.spec));
  }
  CHECK_THROWS_AS(get_example("3A"), SpecError);
  CHECK_THROWS_AS(get_entry("nope"), SpecError);
}

TEST_CASE("crosscheck of the worked examples") {
  for (const char* id : {"1A", "2ii", "1D"}) {
    CAPTURE(id);
    const CrosscheckResult r = crosscheck(get_example(id));
    for (const char* field : {"g", "W", "V_tilde_minus_beta", "psi_modulus"}) {
      CAPTURE(field);
      REQUIRE(r.find(field) != nullptr);
      CHECK(r.find(field)->max_deviation <= 1e-9);
    }
    CHECK(r.pass());
  }
}

TEST_CASE("the printed 2iii W misses a factor r") {
  const CrosscheckResult r = crosscheck(get_example("2iii"));
  CHECK(r.find("W")->max_deviation > 1.0);
  CHECK_FALSE(r.pass());
  REQUIRE(r.find("W_amended") != nullptr);
  CHECK(r.find("W_amended")->max_deviation <= 1e-9);
  CHECK(r.find("g")->max_deviation <= 1e-9);
  CHECK(r.find("V_tilde_minus_beta")->max_deviation <= 1e-9);
  CHECK(r.find("psi_modulus")->max_deviation <= 1e-9);
}

TEST_CASE("phase is reported, never asserted") {
  const CrosscheckResult r = crosscheck(get_example("2i"));
  const FieldDeviation* phase = r.find("phase");
  REQUIRE(phase != nullptr);
  CHECK_FALSE(phase->asserted);
  CHECK(phase->pass());
  CHECK(r.pass());
}

TEST_CASE("normalization audit") {
  for (const char* id : {"1A", "1B", "1C", "1D", "2iii", "2iv"}) {
    CAPTURE(id);
    const CrosscheckResult r = crosscheck(get_example(id));
    REQUIRE(r.normalization.has_value());
    CHECK(std::abs(*r.normalization - 1.0) <= 2e-3);
  }
  const auto n2i = crosscheck(get_example("2i")).normalization;
  const auto n2ii = crosscheck(get_example("2ii")).normalization;
  CHECK(*n2i == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-8));
  CHECK(*n2ii == doctest::Approx(2.067112988492).epsilon(1e-8));
}

TEST_CASE("reduction entries") {
  const auto entries = reduction_entries();
  REQUIRE(entries.size() == 2);
  const ConstructedModel half = construct(entries[0].spec);
  for (double x : {-2.0, 0.3, 1.0}) {
    CHECK(half.g(x) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(half.W(x)) <= 1e-15);
    CHECK(half.mu(x) == doctest::Approx(1.0).epsilon(1e-15));
  }
  const ConstructedModel unit = construct(entries[1].spec);
  CHECK(unit.mu(0.7) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  for (const auto& e : entries) {
    CHECK_FALSE(e.has_closed_forms);
    CHECK(check_consistency_ode(construct(e.spec)) <= 1e-10);
    CHECK(crosscheck(e).fields.empty());
  }
  const auto shaped = reduction_entries(RadialFunction::monomial(1, 1));
  CHECK(check_consistency_ode(construct(shaped[1].spec)) <= 1e-10);
}
