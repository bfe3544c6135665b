#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "eitsim/atoms.hpp"
#include "eitsim/calibrate.hpp"
#include "eitsim/lineshape.hpp"

namespace eitsim::spectra {

using lineshape::Complex;

enum class Regime { Cold, WarmFreeSpace, WarmNanofiber };

// A complete transmission-spectrum configuration. The control field is given
// either directly as a Rabi frequency or as a power routed through the
// scenario's PowerMap.
struct Scenario {
  Regime regime = Regime::WarmNanofiber;
  double temperature = 358.15;  // K
  double optical_depth = 3.0;   // at the tallest no-control dip
  std::optional<double> control_rabi;   // rad/s
  std::optional<double> control_power;  // W
  double delta_c = 0.0;                 // Hz
  std::vector<atoms::LadderLine> lines;
  std::vector<double> grid;  // Hz, strictly increasing
  lineshape::GeometryParams geometry = lineshape::default_geometry();
  std::optional<calibrate::PowerMap> power_map;
  int quadrature_order = 64;
  double normalization_scale = 1.0;
};

// Defaults matching the experiment: warm nanofiber, 85 C, OD 3, the four
// natural-rubidium lines, 2001 points over +-8 GHz, no control field.
Scenario default_scenario();

std::vector<double> linear_grid(double min_hz, double max_hz, int points);

struct Spectrum {
  std::vector<double> grid;  // Hz
  std::vector<Complex> chi;  // normalized susceptibility
  std::vector<double> transmission;
  double optical_depth = 0.0;
  Scenario scenario;  // echo of the generating configuration
};

struct WindowMetrics {
  double window_center = 0.0;        // Hz
  double window_transmission = 0.0;  // fraction at the window peak
  double window_depth = 0.0;         // T_with - T_without at the peak
  double window_fwhm = 0.0;          // Hz, relative to the dip floor
  double dip_transmission_without_control = 0.0;
};

enum class DipShape { SingleDip, SplitDip };

struct SplittingResult {
  DipShape shape = DipShape::SingleDip;
  double separation = 0.0;  // Hz between the two deepest minima when split
};

// Scales chi so its largest imaginary part is 1; returns the scale that was
// divided out. Idempotent.
double normalize_profile(std::vector<Complex>& chi);

// Resolves the scenario's control field to a Rabi frequency (rad/s).
// Throws ConfigError when a power is given without a PowerMap.
double resolve_control_rabi(const Scenario& scenario);

// Doppler/transit-averaged (or cold) susceptibility of one line at a signal
// detuning given in Hz relative to the global reference, before normalization.
Complex averaged_line_chi(const Scenario& scenario, const atoms::LadderLine& line,
                          double rabi_c, double delta_s_hz);

// Doppler/transit-averaged susceptibility of the full line set at arbitrary
// detunings (Hz), before normalization.
std::vector<Complex> raw_susceptibility(const Scenario& scenario, double rabi_c,
                                        const std::vector<double>& points);

// The scenario's normalization constant: peak no-control Im chi over the
// tallest absorption dip (scanned around every line center, so it does not
// depend on the requested grid).
double normalization_constant(const Scenario& scenario);

Spectrum compute_spectrum(const Scenario& scenario);

// Normalized susceptibility and transmission at arbitrary detuning points,
// sharing compute_spectrum's normalization. Used by the fitting layer.
std::vector<double> transmission_at(const Scenario& scenario,
                                    const std::vector<double>& points);

// Locates the transparency window inside the absorption dip at line_center.
// Throws NoWindowError when the with-control spectrum has no local
// transmission maximum inside the dip.
WindowMetrics window_metrics(const Spectrum& with_control,
                             const Spectrum& without_control, double line_center);

// Counts absorption maxima inside the dip around line_center.
// Throws NumericError when fewer than 20 grid points span the dip.
SplittingResult detect_splitting(const Spectrum& spectrum, double line_center);

std::vector<Spectrum> sweep(const std::vector<Scenario>& scenarios);

}  // namespace eitsim::spectra
