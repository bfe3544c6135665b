#pragma once

#include <complex>
#include <vector>

namespace eitsim::lineshape {

using Complex = std::complex<double>;

// Signal and control detunings, angular (rad/s). The sign convention matches
// the transmission spectra: a positive control detuning moves the two-photon
// resonance to positive signal detunings, so the two-photon detuning is
// delta_s - delta_c.
struct Detunings {
  double delta_s = 0.0;
  double delta_c = 0.0;
};

// Coherence decay rates of the ground-intermediate and ground-upper
// coherences, angular (rad/s).
struct DecoherenceRates {
  double gamma21 = 0.0;
  double gamma31 = 0.0;
};

struct ThermalEnsemble {
  double temperature = 0.0;        // K
  double atomic_mass = 0.0;        // kg
  double most_probable_speed = 0.0;  // m/s, sqrt(2 kB T / m)
};

ThermalEnsemble make_ensemble(double temperature, double atomic_mass);

struct GeometryParams {
  double mode_diameter = 1.0e-6;       // m
  double interaction_length = 8.0e-3;  // m
  double transit_calibration = 0.0;    // dimensionless C in Gt = C u / d
};

// The calibration constant that anchors the transit rate to 2pi x 100 MHz for
// 85Rb at 358.15 K crossing a 1 um mode.
double default_transit_calibration();

GeometryParams default_geometry();

// Steady-state weak-probe susceptibility of the three-level ladder, normalized
// so chi = i at bare resonance with the control off. Im chi >= 0 always.
Complex chi_ladder(const Detunings& det, double rabi_c,
                   const DecoherenceRates& rates);

// chi_ladder seen by an atom moving at velocity v along the fiber axis.
// Counter-propagating beams nearly cancel the two-photon Doppler shift,
// leaving a residual -(k_s - k_c) v.
Complex chi_velocity(const Detunings& det, double rabi_c,
                     const DecoherenceRates& rates, double v, double k_s,
                     double k_c, bool counter_propagating);

// FWHM of the one-photon Gaussian Doppler profile, Hz.
double doppler_fwhm(const ThermalEnsemble& ensemble, double wavelength);

// Transit-time decoherence rate Gt = C u / d, angular (rad/s).
double transit_rate(const ThermalEnsemble& ensemble, const GeometryParams& geometry);

// Gauss-Hermite nodes and weights for weight exp(-x^2) on (-inf, inf).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussHermiteRule& gauss_hermite(int order);

// Maxwell-Boltzmann velocity average of chi_velocity by Gauss-Hermite
// quadrature of the given order.
Complex chi_doppler_averaged(const Detunings& det, double rabi_c,
                             const DecoherenceRates& base_rates,
                             const ThermalEnsemble& ensemble, double k_s,
                             double k_c, bool counter_propagating,
                             int quadrature_order);

// The same velocity average evaluated in closed form through the Faddeeva
// function (the averaged kernel is rational in v with at most two poles).
// Exact for any linewidth; used where the Lorentzian core is too narrow for
// the quadrature nodes to resolve.
Complex chi_doppler_faddeeva(const Detunings& det, double rabi_c,
                             const DecoherenceRates& base_rates,
                             const ThermalEnsemble& ensemble, double k_s,
                             double k_c, bool counter_propagating);

// True when a Gauss-Hermite rule of the given order resolves the kernel's
// Lorentzian core for this linewidth/Doppler-width ratio.
bool gauss_hermite_resolves(const DecoherenceRates& rates,
                            const ThermalEnsemble& ensemble, double k_s,
                            int quadrature_order);

// Faddeeva function w(z) = exp(-z^2) erfc(-iz), full complex plane.
Complex faddeeva(Complex z);

}  // namespace eitsim::lineshape
