#pragma once

#include <vector>

#include "eitsim/atoms.hpp"
#include "eitsim/spectra.hpp"

namespace eitsim::polarization {

using lineshape::Complex;

// Field amplitudes in the circular basis.
struct JonesVector {
  Complex a_plus{0.0, 0.0};
  Complex a_minus{0.0, 0.0};
};

// Linear polarization along x: equal sigma+/sigma- amplitudes.
JonesVector linear_x();

// Per-helicity normalized susceptibility of the signal across the grid.
struct BirefringentResponse {
  std::vector<double> grid;  // Hz
  std::vector<Complex> chi_plus;
  std::vector<Complex> chi_minus;
  // True when the two helicities see identical media, so the analyzer signal
  // vanishes (for example with the control off).
  bool degenerate = false;
};

// Weighted pathway sum per signal helicity on the scenario's grid. Each
// pathway contributes population_weight x signal_amplitude^2 times the
// velocity-averaged ladder response driven at Rabi x |control CG|. The line
// parameters (wavelengths, linewidths, center) come from the scenario line
// nearest zero offset. Both helicities share one normalization fixed by the
// no-control mean profile.
BirefringentResponse birefringent_response(const spectra::Scenario& scenario,
                                           const atoms::PathwaySet& pathways);

// Advances the field through the birefringent medium at one detuning:
// a_h -> a_h exp(i kl chi_h / 2).
JonesVector propagate(const JonesVector& in, Complex chi_plus, Complex chi_minus,
                      double kl);

struct AnalyzerResult {
  std::vector<double> grid;            // Hz
  std::vector<double> t_parallel;      // analyzer along the input axis
  std::vector<double> t_crossed;       // analyzer orthogonal to the input axis
  std::vector<double> rotation_angle;  // rad, (kl/4) Re(chi+ - chi-)
};

// Transmission through parallel and crossed analyzers for the given input
// polarization, with kl set by the scenario's optical depth.
AnalyzerResult analyzer_spectrum(const BirefringentResponse& response,
                                 const JonesVector& input, double kl);

// Response from the scenario and pathway set, kl = optical depth.
AnalyzerResult analyzer_spectrum(const spectra::Scenario& scenario,
                                 const atoms::PathwaySet& pathways,
                                 const JonesVector& input);

// Same with linear-x input.
AnalyzerResult analyzer_spectrum(const spectra::Scenario& scenario,
                                 const atoms::PathwaySet& pathways);

}  // namespace eitsim::polarization
