#pragma once

#include <map>
#include <vector>

#include "eitsim/spectra.hpp"

namespace eitsim::calibrate {

enum class FitParameter {
  Rabi,                // rad/s
  OpticalDepth,        // dimensionless
  TransitRate,         // rad/s
  DeltaC,              // Hz
  NormalizationScale,  // dimensionless
};

const char* fit_parameter_name(FitParameter p);

struct Observation {
  double delta_s = 0.0;       // Hz
  double transmission = 0.0;  // fraction
  double weight = 1.0;
};

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

struct FitProblem {
  std::vector<Observation> observations;
  std::map<FitParameter, Bounds> free_parameters;
  // Optional starting values; a parameter absent here starts from the
  // scenario's nominal value clamped into its bounds.
  std::map<FitParameter, double> initial_guess;
  spectra::Scenario scenario;  // fixed remainder of the model
  int max_iterations = 200;
};

struct FitResult {
  std::map<FitParameter, double> values;
  double residual = 0.0;  // weighted sum of squared residuals
  int iterations = 0;
  bool converged = false;
};

// Applies fitted parameter values onto a copy of the scenario.
spectra::Scenario apply_parameters(const spectra::Scenario& scenario,
                                   const std::map<FitParameter, double>& values);

// Bounded finite-difference damped least squares (Levenberg-Marquardt with
// projection onto the bound box). Deterministic. Non-convergence within the
// iteration cap is reported through the flag, not an exception.
FitResult fit_spectrum(const FitProblem& problem);

}  // namespace eitsim::calibrate
