#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "eitsim/atoms.hpp"
#include "eitsim/constants.hpp"
#include "eitsim/errors.hpp"
#include "eitsim/lineshape.hpp"

using namespace eitsim;
using lineshape::Complex;
namespace c = eitsim::constants;

namespace {

constexpr double kTwoPi = c::kTwoPi;
const double kKs = kTwoPi / 780.241e-9;
const double kKc = kTwoPi / 776.0e-9;

lineshape::ThermalEnsemble warm_rb85() {
  return lineshape::make_ensemble(
      358.15, atoms::isotope(atoms::IsotopeId::Rb85).atomic_mass);
}

// Direct Maxwell-Boltzmann velocity average on a uniform grid, the
// independent oracle for both quadrature routes.
Complex trapezoid_average(const lineshape::Detunings& det, double rabi_c,
                          const lineshape::DecoherenceRates& rates,
                          const lineshape::ThermalEnsemble& ens, double k_s,
                          double k_c, bool counter, int n, double span_sigmas) {
  const double u = ens.most_probable_speed;
  const double vmax = span_sigmas * u;
  Complex sum{0.0, 0.0};
  double wsum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double v = -vmax + 2.0 * vmax * i / n;
    const double w = std::exp(-(v / u) * (v / u)) * ((i == 0 || i == n) ? 0.5 : 1.0);
    sum += w * lineshape::chi_velocity(det, rabi_c, rates, v, k_s, k_c, counter);
    wsum += w;
  }
  return sum / wsum;
}

}  // namespace

TEST_CASE("chi_ladder bare resonance is exactly i") {
  const lineshape::DecoherenceRates rates{kTwoPi * 103.0e6, kTwoPi * 100.3e6};
  const Complex chi = lineshape::chi_ladder({0.0, 0.0}, 0.0, rates);
  CHECK(chi.real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(chi.imag() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("chi_ladder resonant depth with control on") {
  const lineshape::DecoherenceRates rates{kTwoPi * 103.0e6, kTwoPi * 100.3e6};
  const double rabi = kTwoPi * 214.0e6;
  const Complex chi = lineshape::chi_ladder({0.0, 0.0}, rabi, rates);
  const double expected = rates.gamma21 * rates.gamma31 /
                          (rates.gamma21 * rates.gamma31 + rabi * rabi / 4.0);
  CHECK(chi.imag() == doctest::Approx(expected).epsilon(1e-12));
  CHECK(chi.real() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("chi_ladder vanishes far from resonance") {
  const lineshape::DecoherenceRates rates{kTwoPi * 3.0e6, kTwoPi * 0.3e6};
  const Complex chi =
      lineshape::chi_ladder({kTwoPi * 1.0e12, 0.0}, kTwoPi * 214.0e6, rates);
  CHECK(std::abs(chi) < 1e-4);
}

TEST_CASE("chi_ladder mirror symmetry at zero control detuning") {
  const lineshape::DecoherenceRates rates{kTwoPi * 5.0e6, kTwoPi * 1.0e6};
  const double rabi = kTwoPi * 80.0e6;
  for (double f : {10.0e6, 75.0e6, 400.0e6}) {
    const Complex a = lineshape::chi_ladder({kTwoPi * f, 0.0}, rabi, rates);
    const Complex b = lineshape::chi_ladder({-kTwoPi * f, 0.0}, rabi, rates);
    CHECK(b.real() == doctest::Approx(-a.real()).epsilon(1e-12));
    CHECK(b.imag() == doctest::Approx(a.imag()).epsilon(1e-12));
  }
}

TEST_CASE("chi_ladder dark resonance sits at the two-photon condition") {
  // With a detuned control, absorption is minimized where the two-photon
  // detuning vanishes, i.e. at delta_s = delta_c.
  const lineshape::DecoherenceRates rates{kTwoPi * 103.0e6, kTwoPi * 0.4e6};
  const double rabi = kTwoPi * 214.0e6;
  const double dc = kTwoPi * 700.0e6;
  const double at_condition =
      lineshape::chi_ladder({dc, dc}, rabi, rates).imag();
  for (double off : {-30.0e6, -10.0e6, 10.0e6, 30.0e6}) {
    CHECK(lineshape::chi_ladder({dc + kTwoPi * off, dc}, rabi, rates).imag() >
          at_condition);
  }
}

TEST_CASE("chi_ladder passivity over randomized parameters") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> detuning(-5.0e9, 5.0e9);
  std::uniform_real_distribution<double> logd(4.0, 9.0);
  for (int i = 0; i < 2000; ++i) {
    const lineshape::DecoherenceRates rates{kTwoPi * std::pow(10.0, logd(rng)),
                                            kTwoPi * std::pow(10.0, logd(rng))};
    const double rabi = kTwoPi * std::pow(10.0, logd(rng));
    const Complex chi = lineshape::chi_ladder(
        {kTwoPi * detuning(rng), kTwoPi * detuning(rng)}, rabi, rates);
    CHECK(chi.imag() >= 0.0);
  }
}

TEST_CASE("chi_ladder input validation") {
  const lineshape::DecoherenceRates good{kTwoPi * 3.0e6, kTwoPi * 0.3e6};
  CHECK_THROWS_AS(lineshape::chi_ladder({0.0, 0.0}, -1.0, good), InvalidArgument);
  CHECK_THROWS_AS(lineshape::chi_ladder({0.0, 0.0}, 0.0, {0.0, 1.0}),
                  InvalidArgument);
  CHECK_THROWS_AS(lineshape::chi_ladder({0.0, 0.0}, 0.0, {1.0, -1.0}),
                  InvalidArgument);
}

TEST_CASE("chi_velocity reduces to chi_ladder at rest") {
  const lineshape::DecoherenceRates rates{kTwoPi * 103.0e6, kTwoPi * 100.3e6};
  const lineshape::Detunings det{kTwoPi * 120.0e6, kTwoPi * 700.0e6};
  const double rabi = kTwoPi * 214.0e6;
  for (bool counter : {true, false}) {
    CHECK(lineshape::chi_velocity(det, rabi, rates, 0.0, kKs, kKc, counter) ==
          lineshape::chi_ladder(det, rabi, rates));
  }
}

TEST_CASE("chi_velocity shifts both detunings consistently") {
  const lineshape::DecoherenceRates rates{kTwoPi * 103.0e6, kTwoPi * 100.3e6};
  const lineshape::Detunings det{kTwoPi * 120.0e6, kTwoPi * 700.0e6};
  const double rabi = kTwoPi * 214.0e6;
  const double v = 170.0;

  // Counter-propagating with equal wavenumbers: the two-photon detuning is
  // velocity independent.
  const Complex counter_equal_k =
      lineshape::chi_velocity(det, rabi, rates, v, kKs, kKs, true);
  const Complex shifted_both = lineshape::chi_ladder(
      {det.delta_s - kKs * v, det.delta_c - kKs * v}, rabi, rates);
  CHECK(std::abs(counter_equal_k - shifted_both) < 1e-12);

  // Co-propagating: the control shift adds instead.
  const Complex co = lineshape::chi_velocity(det, rabi, rates, v, kKs, kKc, false);
  const Complex co_expected = lineshape::chi_ladder(
      {det.delta_s - kKs * v, det.delta_c + kKc * v}, rabi, rates);
  CHECK(std::abs(co - co_expected) < 1e-12);
}

TEST_CASE("thermal ensemble speed") {
  const lineshape::ThermalEnsemble ens = warm_rb85();
  const double m = atoms::isotope(atoms::IsotopeId::Rb85).atomic_mass;
  CHECK(ens.most_probable_speed ==
        doctest::Approx(std::sqrt(2.0 * c::kBoltzmann * 358.15 / m)).epsilon(1e-12));
  CHECK(ens.most_probable_speed == doctest::Approx(264.8).epsilon(1e-3));
  CHECK_THROWS_AS(lineshape::make_ensemble(-5.0, m), InvalidArgument);
  CHECK_THROWS_AS(lineshape::make_ensemble(300.0, 0.0), InvalidArgument);
}

TEST_CASE("doppler fwhm value and scaling") {
  const lineshape::ThermalEnsemble ens = warm_rb85();
  const double fwhm = lineshape::doppler_fwhm(ens, 780.241e-9);
  CHECK(fwhm == doctest::Approx(565.2e6).epsilon(2e-3));
  CHECK(std::abs(fwhm - 570.0e6) / 570.0e6 < 0.02);

  // FWHM scales as sqrt(T) and as 1/lambda.
  const double m = atoms::isotope(atoms::IsotopeId::Rb85).atomic_mass;
  const lineshape::ThermalEnsemble hot = lineshape::make_ensemble(4.0 * 358.15, m);
  CHECK(lineshape::doppler_fwhm(hot, 780.241e-9) ==
        doctest::Approx(2.0 * fwhm).epsilon(1e-12));
  CHECK(lineshape::doppler_fwhm(ens, 2.0 * 780.241e-9) ==
        doctest::Approx(0.5 * fwhm).epsilon(1e-12));
}

TEST_CASE("transit rate anchor and transit time") {
  const lineshape::GeometryParams geometry = lineshape::default_geometry();
  const lineshape::ThermalEnsemble ens = warm_rb85();
  const double rate = lineshape::transit_rate(ens, geometry);
  CHECK(rate / kTwoPi == doctest::Approx(100.0e6).epsilon(1e-12));
  const double transit_time = geometry.mode_diameter / ens.most_probable_speed;
  CHECK(transit_time > 1.0e-9);
  CHECK(transit_time < 10.0e-9);
  // Doubling the diameter halves the rate.
  lineshape::GeometryParams wide = geometry;
  wide.mode_diameter *= 2.0;
  CHECK(lineshape::transit_rate(ens, wide) == doctest::Approx(rate / 2.0));
}

TEST_CASE("gauss hermite rule properties") {
  const lineshape::GaussHermiteRule& rule = lineshape::gauss_hermite(64);
  REQUIRE(rule.nodes.size() == 64);
  double wsum = 0.0, linear = 0.0, quadratic = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    wsum += rule.weights[i];
    linear += rule.weights[i] * rule.nodes[i];
    quadratic += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    CHECK(rule.nodes[i] ==
          doctest::Approx(-rule.nodes[rule.nodes.size() - 1 - i]).epsilon(1e-12));
  }
  const double sqrt_pi = std::sqrt(c::kPi);
  CHECK(wsum == doctest::Approx(sqrt_pi).epsilon(1e-12));
  CHECK(linear == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(quadratic == doctest::Approx(sqrt_pi / 2.0).epsilon(1e-12));
  // High-degree moment: integral of x^10 exp(-x^2) = 945 sqrt(pi)/32.
  double tenth = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    tenth += rule.weights[i] * std::pow(rule.nodes[i], 10);
  }
  CHECK(tenth == doctest::Approx(945.0 * sqrt_pi / 32.0).epsilon(1e-10));
}

TEST_CASE("doppler average collapses to chi_ladder in the cold limit") {
  const lineshape::DecoherenceRates rates{kTwoPi * 103.0e6, kTwoPi * 100.3e6};
  const double rabi = kTwoPi * 214.0e6;
  const lineshape::ThermalEnsemble cold = lineshape::make_ensemble(
      1.0e-6, atoms::isotope(atoms::IsotopeId::Rb85).atomic_mass);
  for (double f : {-500.0e6, 0.0, 137.0e6, 700.0e6}) {
    const lineshape::Detunings det{kTwoPi * f, kTwoPi * 700.0e6};
    const Complex avg = lineshape::chi_doppler_averaged(det, rabi, rates, cold,
                                                        kKs, kKc, true, 64);
    const Complex bare = lineshape::chi_ladder(det, rabi, rates);
    CHECK(std::abs(avg - bare) < 1e-6);
  }
}

TEST_CASE("gauss hermite average matches dense trapezoid when resolvable") {
  const lineshape::DecoherenceRates rates{kTwoPi * 300.0e6, kTwoPi * 100.0e6};
  const double rabi = kTwoPi * 214.0e6;
  const lineshape::ThermalEnsemble ens = warm_rb85();
  REQUIRE(lineshape::gauss_hermite_resolves(rates, ens, kKs, 64));
  for (double f : {0.0, 220.0e6, -480.0e6}) {
    const lineshape::Detunings det{kTwoPi * f, kTwoPi * 700.0e6};
    const Complex gh =
        lineshape::chi_doppler_averaged(det, rabi, rates, ens, kKs, kKc, true, 64);
    const Complex tz =
        trapezoid_average(det, rabi, rates, ens, kKs, kKc, true, 200000, 6.0);
    CHECK(std::abs(gh - tz) / std::abs(tz) < 1e-6);
  }
}

TEST_CASE("faddeeva route matches dense trapezoid for narrow linewidths") {
  // Free-space rates: the Lorentzian core is far too narrow for any
  // practical quadrature order.
  const lineshape::DecoherenceRates rates{kTwoPi * 3.03e6, kTwoPi * 0.33e6};
  const double rabi = kTwoPi * 214.0e6;
  const lineshape::ThermalEnsemble ens = warm_rb85();
  CHECK_FALSE(lineshape::gauss_hermite_resolves(rates, ens, kKs, 64));
  for (double f : {0.0, 150.0e6, -300.0e6}) {
    const lineshape::Detunings det{kTwoPi * f, 0.0};
    const Complex fd =
        lineshape::chi_doppler_faddeeva(det, rabi, rates, ens, kKs, kKc, true);
    const Complex tz =
        trapezoid_average(det, rabi, rates, ens, kKs, kKc, true, 400000, 6.0);
    CHECK(std::abs(fd - tz) / std::abs(tz) < 1e-4);
  }
}

TEST_CASE("faddeeva route is exact for broad linewidths too") {
  const lineshape::DecoherenceRates rates{kTwoPi * 103.0e6, kTwoPi * 100.3e6};
  const double rabi = kTwoPi * 214.0e6;
  const lineshape::ThermalEnsemble ens = warm_rb85();
  for (double f : {-700.0e6, -90.0e6, 0.0, 333.0e6, 700.0e6}) {
    const lineshape::Detunings det{kTwoPi * f, kTwoPi * 700.0e6};
    const Complex fd =
        lineshape::chi_doppler_faddeeva(det, rabi, rates, ens, kKs, kKc, true);
    const Complex tz =
        trapezoid_average(det, rabi, rates, ens, kKs, kKc, true, 400000, 7.0);
    CHECK(std::abs(fd - tz) / std::abs(tz) < 1e-6);
    // The quadrature route agrees to within its own resolution limit.
    const Complex gh =
        lineshape::chi_doppler_averaged(det, rabi, rates, ens, kKs, kKc, true, 96);
    CHECK(std::abs(fd - gh) / std::abs(gh) < 1e-2);
  }
}

TEST_CASE("no-control doppler wing follows the gaussian profile") {
  // With a broad Doppler profile and narrow natural width, Im chi tracks a
  // Gaussian of the one-photon Doppler width away from the core.
  const lineshape::DecoherenceRates rates{kTwoPi * 3.03e6, kTwoPi * 0.33e6};
  const lineshape::ThermalEnsemble ens = warm_rb85();
  const Complex peak =
      lineshape::chi_doppler_faddeeva({0.0, 0.0}, 0.0, rates, ens, kKs, kKc, true);
  const double sigma_hz = ens.most_probable_speed / 780.241e-9 / std::sqrt(2.0);
  for (double f : {200.0e6, 350.0e6}) {
    const Complex wing = lineshape::chi_doppler_faddeeva(
        {kTwoPi * f, 0.0}, 0.0, rates, ens, kKs, kKc, true);
    const double expected = std::exp(-f * f / (2.0 * sigma_hz * sigma_hz));
    CHECK(wing.imag() / peak.imag() == doctest::Approx(expected).epsilon(0.03));
  }
}

TEST_CASE("doppler averaged passivity and symmetry") {
  const lineshape::ThermalEnsemble ens = warm_rb85();
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> detuning(-3.0e9, 3.0e9);
  std::uniform_real_distribution<double> logd(6.0, 8.7);
  for (int i = 0; i < 300; ++i) {
    const lineshape::DecoherenceRates rates{kTwoPi * std::pow(10.0, logd(rng)),
                                            kTwoPi * std::pow(10.0, logd(rng))};
    const double rabi = kTwoPi * std::pow(10.0, logd(rng));
    const lineshape::Detunings det{kTwoPi * detuning(rng), kTwoPi * detuning(rng)};
    const Complex gh =
        lineshape::chi_doppler_averaged(det, rabi, rates, ens, kKs, kKc, true, 64);
    CHECK(gh.imag() >= 0.0);
    const Complex fd =
        lineshape::chi_doppler_faddeeva(det, rabi, rates, ens, kKs, kKc, true);
    CHECK(fd.imag() >= -1e-14);
  }

  // Mirror symmetry of the average at zero control detuning.
  const lineshape::DecoherenceRates rates{kTwoPi * 103.0e6, kTwoPi * 100.3e6};
  const Complex a = lineshape::chi_doppler_averaged(
      {kTwoPi * 260.0e6, 0.0}, kTwoPi * 214.0e6, rates, ens, kKs, kKc, true, 64);
  const Complex b = lineshape::chi_doppler_averaged(
      {-kTwoPi * 260.0e6, 0.0}, kTwoPi * 214.0e6, rates, ens, kKs, kKc, true, 64);
  CHECK(b.real() == doctest::Approx(-a.real()).epsilon(1e-9));
  CHECK(b.imag() == doctest::Approx(a.imag()).epsilon(1e-9));
}

TEST_CASE("quadrature order bounds") {
  const lineshape::DecoherenceRates rates{kTwoPi * 103.0e6, kTwoPi * 100.3e6};
  const lineshape::ThermalEnsemble ens = warm_rb85();
  CHECK_THROWS_AS(lineshape::chi_doppler_averaged({0.0, 0.0}, 0.0, rates, ens,
                                                  kKs, kKc, true, 4),
                  InvalidArgument);
}

TEST_CASE("faddeeva reference values") {
  CHECK(std::abs(lineshape::faddeeva({0.0, 0.0}) - Complex{1.0, 0.0}) < 1e-12);
  // w(i) = e * erfc(1)
  CHECK(lineshape::faddeeva({0.0, 1.0}).real() ==
        doctest::Approx(std::exp(1.0) * std::erfc(1.0)).epsilon(1e-10));
  CHECK(lineshape::faddeeva({0.0, 1.0}).imag() == doctest::Approx(0.0).epsilon(1e-12));
  // Re w(x) = exp(-x^2) on the real axis; Dawson integral fixes Im w(1).
  const Complex w1 = lineshape::faddeeva({1.0, 0.0});
  CHECK(w1.real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
  CHECK(w1.imag() == doctest::Approx(2.0 * 0.5380795069127684 / std::sqrt(c::kPi))
                         .epsilon(1e-10));
  // Reflection identity ties the lower half-plane to the upper one.
  const Complex z{0.7, -1.3};
  const Complex lhs = lineshape::faddeeva(z);
  const Complex rhs = 2.0 * std::exp(-z * z) - lineshape::faddeeva(-z);
  CHECK(std::abs(lhs - rhs) < 1e-10);
  // Asymptotic decay along the imaginary axis: w(iy) ~ 1/(sqrt(pi) y).
  const Complex far = lineshape::faddeeva({0.0, 100.0});
  CHECK(far.real() == doctest::Approx(1.0 / (std::sqrt(c::kPi) * 100.0)).epsilon(1e-4));
}
