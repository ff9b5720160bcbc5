#include <doctest.h>

#include <cmath>
#include <random>

#include "casimir/constants.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/multilayer.hpp"

using namespace casimir;
using constants::c;
using constants::hbar;
using constants::pi;

namespace {

const auto kDrude = DielectricModel::drude(constants::ev_to_rad_per_s(9.03), constants::ev_to_rad_per_s(0.0345));

FiveLayerConfig gold_cavity(double delta, double T = 300.0) {
  FiveLayerConfig f;
  f.cavity_c = 3e-6;
  f.slab_b = 500e-9;
  f.offset_delta = delta;
  f.wall_model = kDrude;
  f.slab_model = kDrude;
  f.temperature_T = T;
  return f;
}

}  // namespace

TEST_CASE("ideal reference pressure") {
  const double h = 2.5e-6, delta = 1e-6;
  const double expected = -(pi * pi * hbar * c / 240.0) * (1.0 / std::pow(2.25e-6, 4) - 1.0 / std::pow(0.25e-6, 4));
  CHECK(ideal_reference(h, delta) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(ideal_reference(h, delta) == doctest::Approx(0.33278).epsilon(1e-4));
  CHECK(ideal_reference(h, 0.0) == 0.0);
  CHECK(ideal_reference(h, 0.3e-6) > 0.0);
  CHECK(ideal_reference(h, -0.3e-6) == -ideal_reference(h, 0.3e-6));
  CHECK_THROWS_AS(ideal_reference(h, 1.25e-6), DomainError);
  CHECK_THROWS_AS(ideal_reference(h, -2e-6), DomainError);
}

TEST_CASE("geometry validation") {
  auto f = gold_cavity(0.0);
  f.slab_b = 4e-6;
  CHECK_THROWS_AS(five_layer_pressure(f), DomainError);
  f = gold_cavity(1.25e-6);
  CHECK_THROWS_AS(five_layer_pressure(f), DomainError);
  f = gold_cavity(0.5e-6);
  CHECK(f.vacuum_h() == doctest::Approx(2.5e-6));
  CHECK(f.near_gap() == doctest::Approx(0.75e-6));
}

TEST_CASE("integrand symmetry and limits") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> log_zeta(12.0, 16.5), log_k(5.0, 7.5), offset(-1.1e-6, 1.1e-6);
  for (int i = 0; i < 200; ++i) {
    const double zeta = std::pow(10.0, log_zeta(rng)), k = std::pow(10.0, log_k(rng)), d = offset(rng);
    for (auto q : {Polarization::TE, Polarization::TM}) {
      CHECK(five_layer_integrand(gold_cavity(d), zeta, k, q) == -five_layer_integrand(gold_cavity(-d), zeta, k, q));
      CHECK(five_layer_integrand(gold_cavity(0.0), zeta, k, q) == 0.0);
    }
  }
  // The slab factor (1 - e^{-2 kappa2 b}) makes the integrand vanish linearly in b.
  auto thin = gold_cavity(0.4e-6);
  thin.slab_b = 1e-19;
  const double i19 = five_layer_integrand(thin, 1e14, 1e6, Polarization::TM);
  thin.slab_b = 1e-20;
  const double i20 = five_layer_integrand(thin, 1e14, 1e6, Polarization::TM);
  CHECK(i20 / i19 == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(std::abs(i20) < 1e-6 * std::abs(five_layer_integrand(gold_cavity(0.4e-6), 1e14, 1e6, Polarization::TM)));
  CHECK(five_layer_integrand(gold_cavity(0.4e-6), 0.0, 1e6, Polarization::TE) == 0.0);
  CHECK_THROWS_AS(five_layer_integrand(gold_cavity(0.4e-6), 0.0, 0.0, Polarization::TM), DomainError);
}

TEST_CASE("pressure is odd in the offset") {
  CHECK(five_layer_pressure(gold_cavity(0.0)).total == 0.0);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> cavity(2e-6, 6e-6), fraction(0.05, 0.6), where(0.02, 0.9), temp(0.0, 400.0);
  for (int i = 0; i < 20; ++i) {
    FiveLayerConfig f;
    f.cavity_c = cavity(rng);
    f.slab_b = fraction(rng) * f.cavity_c;
    f.offset_delta = where(rng) * 0.5 * f.vacuum_h();
    f.wall_model = i % 3 == 0 ? DielectricModel::ideal() : kDrude;
    f.slab_model = i % 4 == 0 ? DielectricModel::plasma(constants::ev_to_rad_per_s(9.03)) : kDrude;
    f.temperature_T = i % 5 == 0 ? 0.0 : temp(rng);
    const double plus = five_layer_pressure(f).total;
    f.offset_delta = -f.offset_delta;
    const double minus = five_layer_pressure(f).total;
    CHECK(plus > 0.0);
    CHECK(std::abs(plus + minus) <= 1e-12 * std::abs(plus));
  }
}

TEST_CASE("ideal stack splits into two independent gaps") {
  FiveLayerConfig f;
  f.cavity_c = 12.5e-6;
  f.slab_b = 10e-6;
  f.offset_delta = 0.6e-6;
  const auto r = five_layer_pressure(f);
  CHECK(r.total == doctest::Approx(ideal_reference(f.vacuum_h(), f.offset_delta)).epsilon(1e-3));

  f.temperature_T = 300.0;
  const double near = f.near_gap(), far = f.vacuum_h() - near;
  auto two_plate = [](double a) {
    return pressure(PlateConfig::symmetric(DielectricModel::ideal(), a, 300.0, ZeroModePolicy::ForceIdealBoth)).total;
  };
  CHECK(five_layer_pressure(f).total == doctest::Approx(two_plate(far) - two_plate(near)).epsilon(1e-4));
}

TEST_CASE("cavity sweep is monotone and weaker than the ideal reference") {
  const double last = 0.5 * 2.5e-6 - 50e-9;
  double previous = 0.0;
  for (int i = 1; i <= 8; ++i) {
    const double delta = last * i / 8.0;
    const auto f = gold_cavity(delta);
    const double p = five_layer_pressure(f).total;
    const double ratio = p / ideal_reference(f.vacuum_h(), delta);
    CHECK(p > previous);
    CHECK(ratio > 0.0);
    CHECK(ratio <= 1.0);
    previous = p;
  }
}

TEST_CASE("near-wall limit follows the two-plate pressure") {
  for (double T : {0.0, 300.0}) {
    auto f = gold_cavity(1.05e-6, T);
    const double near = f.near_gap(), far = f.vacuum_h() - near;
    REQUIRE(far >= 5.0 * near);
    const double single = pressure(PlateConfig::symmetric(kDrude, near, T)).total;
    CHECK(five_layer_pressure(f).total == doctest::Approx(-single).epsilon(0.05));
  }
}

TEST_CASE("finite-temperature result carries its mode breakdown") {
  const auto r = five_layer_pressure(gold_cavity(0.5e-6));
  REQUIRE(!r.per_mode.empty());
  double sum = 0.0;
  for (const auto& m : r.per_mode) sum += m.contribution;
  CHECK(sum == doctest::Approx(r.total).epsilon(1e-12));
  CHECK(r.est_error < 1e-4 * std::abs(r.total));
}
