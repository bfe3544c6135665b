#include "eitsim/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "eitsim/constants.hpp"
#include "eitsim/errors.hpp"

namespace eitsim::polarization {

namespace c = eitsim::constants;

namespace {

const atoms::LadderLine& reference_line(const spectra::Scenario& s) {
  if (s.lines.empty()) throw InvalidArgument("scenario has an empty line list");
  const atoms::LadderLine* best = &s.lines.front();
  for (const atoms::LadderLine& line : s.lines) {
    if (std::abs(line.signal_center_offset) < std::abs(best->signal_center_offset)) {
      best = &line;
    }
  }
  return *best;
}

// Weighted pathway sums for one helicity at the given detunings.
std::vector<Complex> helicity_chi(const spectra::Scenario& s,
                                  const atoms::LadderLine& line,
                                  const atoms::PathwaySet& set,
                                  atoms::Polarization helicity, double rabi_c,
                                  const std::vector<double>& points) {
  std::vector<Complex> chi(points.size(), Complex{0.0, 0.0});
  for (const atoms::SublevelPathway& p : set.pathways) {
    if (p.signal_polarization != helicity) continue;
    const double strength = p.population_weight * p.signal_amplitude * p.signal_amplitude;
    if (!(strength > 0.0)) continue;
    const double rabi_eff = rabi_c * std::abs(p.control_amplitude);
    for (std::size_t i = 0; i < points.size(); ++i) {
      chi[i] += strength * spectra::averaged_line_chi(s, line, rabi_eff, points[i]);
    }
  }
  return chi;
}

}  // namespace

JonesVector linear_x() {
  const double a = 1.0 / std::sqrt(2.0);
  return JonesVector{Complex{a, 0.0}, Complex{a, 0.0}};
}

BirefringentResponse birefringent_response(const spectra::Scenario& scenario,
                                           const atoms::PathwaySet& pathways) {
  if (pathways.pathways.empty()) {
    throw InvalidArgument("pathway set is empty");
  }
  if (scenario.grid.size() < 2) throw InvalidArgument("grid needs at least 2 points");
  const atoms::LadderLine& line = reference_line(scenario);
  const double rabi = spectra::resolve_control_rabi(scenario);
  bool has_plus = false;
  bool has_minus = false;
  for (const atoms::SublevelPathway& p : pathways.pathways) {
    if (p.signal_polarization == atoms::Polarization::SigmaPlus) has_plus = true;
    else has_minus = true;
  }

  BirefringentResponse out;
  out.grid = scenario.grid;
  out.chi_plus = helicity_chi(scenario, line, pathways,
                              atoms::Polarization::SigmaPlus, rabi, scenario.grid);
  out.chi_minus = helicity_chi(scenario, line, pathways,
                               atoms::Polarization::SigmaMinus, rabi, scenario.grid);

  // One normalization for both helicities, fixed by the peak of the
  // no-control mean profile scanned around the line center.
  double half_span;
  if (scenario.regime == spectra::Regime::Cold) {
    half_span = 4.0 * line.gamma2 / c::kTwoPi;
  } else {
    const auto ens =
        lineshape::make_ensemble(scenario.temperature, line.iso.atomic_mass);
    half_span = lineshape::doppler_fwhm(ens, line.signal_wavelength);
  }
  const std::vector<double> scan =
      spectra::linear_grid(line.signal_center_offset - half_span,
                          line.signal_center_offset + half_span, 161);
  const std::vector<Complex> bare_plus = helicity_chi(
      scenario, line, pathways, atoms::Polarization::SigmaPlus, 0.0, scan);
  const std::vector<Complex> bare_minus = helicity_chi(
      scenario, line, pathways, atoms::Polarization::SigmaMinus, 0.0, scan);
  double peak = 0.0;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    peak = std::max(peak, 0.5 * (bare_plus[i] + bare_minus[i]).imag());
  }
  if (!(peak > 0.0)) {
    throw NumericError("no-control profile has no absorption peak");
  }
  const double norm = peak * scenario.normalization_scale;
  double max_abs = 0.0;
  double max_diff = 0.0;
  for (std::size_t i = 0; i < out.grid.size(); ++i) {
    out.chi_plus[i] /= norm;
    out.chi_minus[i] /= norm;
    max_abs = std::max({max_abs, std::abs(out.chi_plus[i]), std::abs(out.chi_minus[i])});
    max_diff = std::max(max_diff, std::abs(out.chi_plus[i] - out.chi_minus[i]));
  }
  out.degenerate = !has_plus || !has_minus ||
                   max_diff <= 1e-10 * std::max(max_abs, 1e-300);
  return out;
}

JonesVector propagate(const JonesVector& in, Complex chi_plus, Complex chi_minus,
                      double kl) {
  if (!(kl >= 0.0)) throw InvalidArgument("kl must be >= 0");
  const Complex half_i{0.0, 0.5 * kl};
  JonesVector out;
  out.a_plus = in.a_plus * std::exp(half_i * chi_plus);
  out.a_minus = in.a_minus * std::exp(half_i * chi_minus);
  return out;
}

AnalyzerResult analyzer_spectrum(const BirefringentResponse& response,
                                 const JonesVector& input, double kl) {
  const std::size_t n = response.grid.size();
  if (n == 0 || response.chi_plus.size() != n || response.chi_minus.size() != n) {
    throw InvalidArgument("response arrays must be non-empty and equal length");
  }
  const double norm2 = std::norm(input.a_plus) + std::norm(input.a_minus);
  if (!(norm2 > 0.0)) throw InvalidArgument("input polarization has zero amplitude");
  const double inv = 1.0 / std::sqrt(norm2);
  const JonesVector j_in{input.a_plus * inv, input.a_minus * inv};
  const JonesVector j_perp{std::conj(j_in.a_minus), -std::conj(j_in.a_plus)};

  AnalyzerResult out;
  out.grid = response.grid;
  out.t_parallel.resize(n);
  out.t_crossed.resize(n);
  out.rotation_angle.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const JonesVector j =
        propagate(j_in, response.chi_plus[i], response.chi_minus[i], kl);
    const Complex along = std::conj(j_in.a_plus) * j.a_plus +
                          std::conj(j_in.a_minus) * j.a_minus;
    const Complex across = std::conj(j_perp.a_plus) * j.a_plus +
                           std::conj(j_perp.a_minus) * j.a_minus;
    out.t_parallel[i] = std::norm(along);
    out.t_crossed[i] = std::norm(across);
    out.rotation_angle[i] =
        0.25 * kl * (response.chi_plus[i] - response.chi_minus[i]).real();
  }
  return out;
}

AnalyzerResult analyzer_spectrum(const spectra::Scenario& scenario,
                                 const atoms::PathwaySet& pathways,
                                 const JonesVector& input) {
  const BirefringentResponse response = birefringent_response(scenario, pathways);
  return analyzer_spectrum(response, input, scenario.optical_depth);
}

AnalyzerResult analyzer_spectrum(const spectra::Scenario& scenario,
                                 const atoms::PathwaySet& pathways) {
  return analyzer_spectrum(scenario, pathways, linear_x());
}

}  // namespace eitsim::polarization
