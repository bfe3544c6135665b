#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "eitsim/atoms.hpp"
#include "eitsim/constants.hpp"
#include "eitsim/errors.hpp"
#include "eitsim/fit.hpp"

using namespace eitsim;
namespace c = eitsim::constants;

namespace {

spectra::Scenario fit_scenario() {
  spectra::Scenario s = spectra::default_scenario();
  s.grid = spectra::linear_grid(-1.0e9, 1.0e9, 41);
  return s;
}

std::vector<calibrate::Observation> synthetic_observations(
    const spectra::Scenario& truth, double noise_sigma, unsigned seed) {
  const std::vector<double> t = spectra::transmission_at(truth, truth.grid);
  std::mt19937 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_sigma);
  std::vector<calibrate::Observation> obs;
  for (std::size_t i = 0; i < truth.grid.size(); ++i) {
    calibrate::Observation o;
    o.delta_s = truth.grid[i];
    o.transmission = t[i] + (noise_sigma > 0.0 ? noise(rng) : 0.0);
    obs.push_back(o);
  }
  return obs;
}

}  // namespace

TEST_CASE("power map anchor and square-root scaling") {
  const calibrate::PowerMap map = calibrate::default_power_map();
  CHECK(map.anchor_power == doctest::Approx(7.0e-6));
  CHECK(map.anchor_rabi == doctest::Approx(c::kTwoPi * 214.0e6));
  CHECK(calibrate::rabi_from_power(7.0e-6, map) ==
        doctest::Approx(c::kTwoPi * 214.0e6).epsilon(1e-12));
  CHECK(calibrate::rabi_from_power(4.0 * 7.0e-6, map) ==
        doctest::Approx(2.0 * c::kTwoPi * 214.0e6).epsilon(1e-12));
  CHECK(calibrate::rabi_from_power(0.0, map) == 0.0);

  std::mt19937 rng(9);
  std::uniform_real_distribution<double> power(1.0e-9, 1.0e-4);
  for (int i = 0; i < 100; ++i) {
    const double p = power(rng);
    CHECK(calibrate::rabi_from_power(4.0 * p, map) ==
          doctest::Approx(2.0 * calibrate::rabi_from_power(p, map)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(calibrate::rabi_from_power(-1.0e-6, map), InvalidArgument);
  CHECK_THROWS_AS(calibrate::rabi_from_power(1.0e-6, calibrate::PowerMap{}),
                  InvalidArgument);
}

TEST_CASE("transit constant calibration round-trips") {
  const auto ens = lineshape::make_ensemble(
      358.15, atoms::isotope(atoms::IsotopeId::Rb85).atomic_mass);
  lineshape::GeometryParams geometry = lineshape::default_geometry();
  for (double target : {c::kTwoPi * 10.0e6, c::kTwoPi * 100.0e6, c::kTwoPi * 1.0e9}) {
    geometry.transit_calibration =
        calibrate::calibrate_transit_constant(target, ens, geometry);
    CHECK(lineshape::transit_rate(ens, geometry) ==
          doctest::Approx(target).epsilon(1e-12));
  }
  CHECK_THROWS_AS(calibrate::calibrate_transit_constant(-1.0, ens, geometry),
                  InvalidArgument);
}

TEST_CASE("apply_parameters maps every parameter onto the scenario") {
  const spectra::Scenario base = fit_scenario();
  std::map<calibrate::FitParameter, double> values;
  values[calibrate::FitParameter::Rabi] = c::kTwoPi * 150.0e6;
  values[calibrate::FitParameter::OpticalDepth] = 4.2;
  values[calibrate::FitParameter::TransitRate] = c::kTwoPi * 77.0e6;
  values[calibrate::FitParameter::DeltaC] = 350.0e6;
  values[calibrate::FitParameter::NormalizationScale] = 1.3;
  const spectra::Scenario s = calibrate::apply_parameters(base, values);
  CHECK(s.control_rabi.has_value());
  CHECK(*s.control_rabi == doctest::Approx(c::kTwoPi * 150.0e6));
  CHECK(!s.control_power);
  CHECK(s.optical_depth == doctest::Approx(4.2));
  CHECK(s.delta_c == doctest::Approx(350.0e6));
  CHECK(s.normalization_scale == doctest::Approx(1.3));
  const auto ens = lineshape::make_ensemble(
      s.temperature, atoms::isotope(atoms::IsotopeId::Rb85).atomic_mass);
  CHECK(lineshape::transit_rate(ens, s.geometry) ==
        doctest::Approx(c::kTwoPi * 77.0e6).epsilon(1e-12));
}

TEST_CASE("noiseless fit recovers rabi and optical depth within 1 percent") {
  spectra::Scenario truth = fit_scenario();
  truth.control_rabi = c::kTwoPi * 214.0e6;
  truth.optical_depth = 3.0;

  calibrate::FitProblem problem;
  problem.observations = synthetic_observations(truth, 0.0, 0);
  problem.scenario = fit_scenario();
  problem.free_parameters[calibrate::FitParameter::Rabi] = {c::kTwoPi * 40.0e6,
                                                            c::kTwoPi * 800.0e6};
  problem.free_parameters[calibrate::FitParameter::OpticalDepth] = {0.5, 10.0};
  problem.initial_guess[calibrate::FitParameter::Rabi] = c::kTwoPi * 120.0e6;
  problem.initial_guess[calibrate::FitParameter::OpticalDepth] = 1.8;

  const calibrate::FitResult result = calibrate::fit_spectrum(problem);
  CHECK(result.converged);
  CHECK(result.values.at(calibrate::FitParameter::Rabi) ==
        doctest::Approx(c::kTwoPi * 214.0e6).epsilon(0.01));
  CHECK(result.values.at(calibrate::FitParameter::OpticalDepth) ==
        doctest::Approx(3.0).epsilon(0.01));
  CHECK(result.residual < 1e-10);
}

TEST_CASE("fit with one percent noise recovers within five percent") {
  spectra::Scenario truth = fit_scenario();
  truth.control_rabi = c::kTwoPi * 214.0e6;
  truth.optical_depth = 3.0;

  calibrate::FitProblem problem;
  problem.observations = synthetic_observations(truth, 0.01, 4242);
  problem.scenario = fit_scenario();
  problem.free_parameters[calibrate::FitParameter::Rabi] = {c::kTwoPi * 40.0e6,
                                                            c::kTwoPi * 800.0e6};
  problem.free_parameters[calibrate::FitParameter::OpticalDepth] = {0.5, 10.0};
  problem.initial_guess[calibrate::FitParameter::Rabi] = c::kTwoPi * 150.0e6;
  problem.initial_guess[calibrate::FitParameter::OpticalDepth] = 2.0;

  const calibrate::FitResult result = calibrate::fit_spectrum(problem);
  CHECK(result.converged);
  CHECK(result.values.at(calibrate::FitParameter::Rabi) ==
        doctest::Approx(c::kTwoPi * 214.0e6).epsilon(0.05));
  CHECK(result.values.at(calibrate::FitParameter::OpticalDepth) ==
        doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("fit respects the bound box") {
  spectra::Scenario truth = fit_scenario();
  truth.control_rabi = c::kTwoPi * 214.0e6;

  calibrate::FitProblem problem;
  problem.observations = synthetic_observations(truth, 0.0, 0);
  problem.scenario = fit_scenario();
  // The truth lies outside these bounds; the result must stay inside.
  problem.free_parameters[calibrate::FitParameter::Rabi] = {c::kTwoPi * 20.0e6,
                                                            c::kTwoPi * 150.0e6};
  const calibrate::FitResult result = calibrate::fit_spectrum(problem);
  const double rabi = result.values.at(calibrate::FitParameter::Rabi);
  CHECK(rabi >= c::kTwoPi * 20.0e6);
  CHECK(rabi <= c::kTwoPi * 150.0e6);
  CHECK(rabi == doctest::Approx(c::kTwoPi * 150.0e6).epsilon(1e-6));
}

TEST_CASE("iteration cap reports non-convergence through the flag") {
  spectra::Scenario truth = fit_scenario();
  truth.control_rabi = c::kTwoPi * 214.0e6;

  calibrate::FitProblem problem;
  problem.observations = synthetic_observations(truth, 0.0, 0);
  problem.scenario = fit_scenario();
  problem.free_parameters[calibrate::FitParameter::Rabi] = {c::kTwoPi * 40.0e6,
                                                            c::kTwoPi * 800.0e6};
  problem.initial_guess[calibrate::FitParameter::Rabi] = c::kTwoPi * 60.0e6;
  problem.max_iterations = 1;
  const calibrate::FitResult result = calibrate::fit_spectrum(problem);
  CHECK(result.iterations <= 1);
  CHECK_FALSE(result.converged);
}

TEST_CASE("fit input validation") {
  calibrate::FitProblem problem;
  problem.scenario = fit_scenario();
  CHECK_THROWS_AS(calibrate::fit_spectrum(problem), InvalidArgument);

  problem.observations = {{0.0, 0.5, 1.0}, {1.0e8, 0.6, 1.0}};
  CHECK_THROWS_AS(calibrate::fit_spectrum(problem), InvalidArgument);

  problem.free_parameters[calibrate::FitParameter::Rabi] = {1.0, 2.0};
  problem.free_parameters[calibrate::FitParameter::OpticalDepth] = {0.5, 10.0};
  // 2 observations for 2 free parameters is under-determined here.
  CHECK_THROWS_AS(calibrate::fit_spectrum(problem), InvalidArgument);

  problem.free_parameters.clear();
  problem.free_parameters[calibrate::FitParameter::Rabi] = {2.0, 2.0};
  CHECK_THROWS_AS(calibrate::fit_spectrum(problem), InvalidArgument);
}
