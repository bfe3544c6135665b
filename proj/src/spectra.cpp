#include "eitsim/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eitsim/constants.hpp"
#include "eitsim/errors.hpp"

namespace eitsim::spectra {

namespace c = eitsim::constants;
using lineshape::DecoherenceRates;
using lineshape::Detunings;
using lineshape::ThermalEnsemble;

namespace {

void validate(const Scenario& s) {
  if (s.lines.empty()) throw InvalidArgument("scenario has an empty line list");
  if (s.grid.size() < 2) throw InvalidArgument("grid needs at least 2 points");
  for (std::size_t i = 1; i < s.grid.size(); ++i) {
    if (!(s.grid[i] > s.grid[i - 1])) {
      throw InvalidArgument("grid must be strictly increasing");
    }
  }
  if (!(s.optical_depth >= 0.0)) throw InvalidArgument("optical depth must be >= 0");
  if (s.regime != Regime::Cold && !(s.temperature > 0.0)) {
    throw InvalidArgument("warm regimes require temperature > 0");
  }
  if (!(s.normalization_scale > 0.0)) {
    throw InvalidArgument("normalization scale must be positive");
  }
  if (s.control_rabi && s.control_power) {
    throw InvalidArgument("give the control field as power or Rabi, not both");
  }
}

DecoherenceRates rates_for(const Scenario& s, const atoms::LadderLine& line) {
  double transit = 0.0;
  if (s.regime == Regime::WarmNanofiber) {
    const ThermalEnsemble ens =
        lineshape::make_ensemble(s.temperature, line.iso.atomic_mass);
    transit = lineshape::transit_rate(ens, s.geometry);
  }
  DecoherenceRates r;
  r.gamma21 = line.gamma2 / 2.0 + transit;
  r.gamma31 = line.gamma3 / 2.0 + transit;
  return r;
}

std::size_t nearest_index(const std::vector<double>& grid, double x) {
  const auto it = std::lower_bound(grid.begin(), grid.end(), x);
  if (it == grid.begin()) return 0;
  if (it == grid.end()) return grid.size() - 1;
  const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  return (x - grid[hi - 1] <= grid[hi] - x) ? hi - 1 : hi;
}

double interpolate(const std::vector<double>& grid, const std::vector<double>& y,
                   double x) {
  if (x <= grid.front()) return y.front();
  if (x >= grid.back()) return y.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  const double t = (x - grid[hi - 1]) / (grid[hi] - grid[hi - 1]);
  return y[hi - 1] + t * (y[hi] - y[hi - 1]);
}

}  // namespace

Complex averaged_line_chi(const Scenario& s, const atoms::LadderLine& line,
                          double rabi_c, double delta_s_hz) {
  const Detunings det{c::kTwoPi * (delta_s_hz - line.signal_center_offset),
                      c::kTwoPi * s.delta_c};
  const DecoherenceRates rates = rates_for(s, line);
  if (s.regime == Regime::Cold) {
    return lineshape::chi_ladder(det, rabi_c, rates);
  }
  const ThermalEnsemble ens =
      lineshape::make_ensemble(s.temperature, line.iso.atomic_mass);
  const double k_s = c::kTwoPi / line.signal_wavelength;
  const double k_c = c::kTwoPi / line.control_wavelength;
  if (lineshape::gauss_hermite_resolves(rates, ens, k_s, s.quadrature_order)) {
    return lineshape::chi_doppler_averaged(det, rabi_c, rates, ens, k_s, k_c,
                                           /*counter_propagating=*/true,
                                           s.quadrature_order);
  }
  return lineshape::chi_doppler_faddeeva(det, rabi_c, rates, ens, k_s, k_c,
                                         /*counter_propagating=*/true);
}

Scenario default_scenario() {
  Scenario s;
  s.lines = atoms::default_line_set();
  s.grid = linear_grid(-8.0e9, 8.0e9, 2001);
  s.power_map = calibrate::default_power_map();
  return s;
}

std::vector<double> linear_grid(double min_hz, double max_hz, int points) {
  if (points < 2) throw InvalidArgument("grid needs at least 2 points");
  if (!(max_hz > min_hz)) throw InvalidArgument("grid max must exceed min");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    g[static_cast<std::size_t>(i)] =
        min_hz + (max_hz - min_hz) * i / (points - 1);
  }
  return g;
}

double normalize_profile(std::vector<Complex>& chi) {
  double peak = 0.0;
  for (const Complex& v : chi) peak = std::max(peak, v.imag());
  if (!(peak > 0.0)) throw InvalidArgument("profile has no absorption to normalize");
  if (std::abs(peak - 1.0) < 1e-15) return 1.0;
  for (Complex& v : chi) v /= peak;
  return peak;
}

double resolve_control_rabi(const Scenario& scenario) {
  if (scenario.control_rabi) {
    if (!(*scenario.control_rabi >= 0.0)) {
      throw InvalidArgument("control Rabi frequency must be >= 0");
    }
    return *scenario.control_rabi;
  }
  if (scenario.control_power) {
    if (!scenario.power_map) {
      throw ConfigError("control power given without a power map");
    }
    return calibrate::rabi_from_power(*scenario.control_power, *scenario.power_map);
  }
  return 0.0;
}

std::vector<Complex> raw_susceptibility(const Scenario& scenario, double rabi_c,
                                        const std::vector<double>& points) {
  std::vector<Complex> chi(points.size(), Complex{0.0, 0.0});
  for (const atoms::LadderLine& line : scenario.lines) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      chi[i] += line.relative_strength * averaged_line_chi(scenario, line, rabi_c, points[i]);
    }
  }
  return chi;
}

double normalization_constant(const Scenario& scenario) {
  // Scan +-1 Doppler width (or a few cold linewidths) around every line
  // center with the control off; the tallest dip fixes Im chi = 1.
  double peak = 0.0;
  for (const atoms::LadderLine& line : scenario.lines) {
    double half_span;
    if (scenario.regime == Regime::Cold) {
      half_span = 4.0 * rates_for(scenario, line).gamma21 / c::kTwoPi;
    } else {
      const ThermalEnsemble ens =
          lineshape::make_ensemble(scenario.temperature, line.iso.atomic_mass);
      half_span = lineshape::doppler_fwhm(ens, line.signal_wavelength);
    }
    const std::vector<double> scan =
        linear_grid(line.signal_center_offset - half_span,
                    line.signal_center_offset + half_span, 161);
    const std::vector<Complex> chi = raw_susceptibility(scenario, 0.0, scan);
    for (const Complex& v : chi) peak = std::max(peak, v.imag());
  }
  if (!(peak > 0.0)) throw NumericError("no-control profile has no absorption peak");
  return peak * scenario.normalization_scale;
}

Spectrum compute_spectrum(const Scenario& scenario) {
  validate(scenario);
  const double rabi = resolve_control_rabi(scenario);
  const double norm = normalization_constant(scenario);

  Spectrum out;
  out.grid = scenario.grid;
  out.chi = raw_susceptibility(scenario, rabi, scenario.grid);
  for (Complex& v : out.chi) v /= norm;
  out.transmission.resize(out.grid.size());
  for (std::size_t i = 0; i < out.grid.size(); ++i) {
    out.transmission[i] = std::exp(-scenario.optical_depth * out.chi[i].imag());
  }
  out.optical_depth = scenario.optical_depth;
  out.scenario = scenario;
  return out;
}

std::vector<double> transmission_at(const Scenario& scenario,
                                    const std::vector<double>& points) {
  if (points.empty()) throw InvalidArgument("no evaluation points");
  const double rabi = resolve_control_rabi(scenario);
  const double norm = normalization_constant(scenario);
  const std::vector<Complex> chi = raw_susceptibility(scenario, rabi, points);
  std::vector<double> t(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    t[i] = std::exp(-scenario.optical_depth * chi[i].imag() / norm);
  }
  return t;
}

WindowMetrics window_metrics(const Spectrum& with_control,
                             const Spectrum& without_control, double line_center) {
  if (with_control.grid != without_control.grid) {
    throw InvalidArgument("window_metrics requires spectra on the same grid");
  }
  const std::vector<double>& grid = with_control.grid;
  const std::vector<double>& tw = with_control.transmission;
  const std::vector<double>& tn = without_control.transmission;

  // Dip geometry from the no-control spectrum: walk downhill to the dip
  // bottom, then find the half-depth width.
  std::size_t dip = nearest_index(grid, line_center);
  while (dip + 1 < grid.size() && tn[dip + 1] < tn[dip]) ++dip;
  while (dip > 0 && tn[dip - 1] < tn[dip]) --dip;
  const double t_far = *std::max_element(tn.begin(), tn.end());
  const double half_depth = 0.5 * (tn[dip] + t_far);
  std::size_t lo = dip, hi = dip;
  while (lo > 0 && tn[lo] < half_depth) --lo;
  while (hi + 1 < grid.size() && tn[hi] < half_depth) ++hi;
  const double dip_width = grid[hi] - grid[lo];
  if (!(dip_width > 0.0)) throw NumericError("no absorption dip at line center");

  // Transparency peak: the highest interior local maximum of the with-control
  // transmission inside +-dip_width of the line center.
  const std::size_t ilo = nearest_index(grid, line_center - dip_width);
  const std::size_t ihi = nearest_index(grid, line_center + dip_width);
  std::size_t peak = 0;
  bool found = false;
  for (std::size_t i = std::max<std::size_t>(ilo, 1); i + 1 <= ihi; ++i) {
    if (i + 1 >= grid.size()) break;
    if (tw[i] > tw[i - 1] && tw[i] > tw[i + 1]) {
      if (!found || tw[i] > tw[peak]) peak = i;
      found = true;
    }
  }
  if (!found) throw NoWindowError("no transparency window inside the dip");

  WindowMetrics m;
  m.window_center = grid[peak];
  m.window_transmission = tw[peak];
  m.dip_transmission_without_control = interpolate(grid, tn, m.window_center);
  m.window_depth = m.window_transmission - m.dip_transmission_without_control;

  // FWHM at half the height between window peak and interpolated dip floor,
  // with linear interpolation of the crossings.
  const double level = 0.5 * (m.window_transmission + m.dip_transmission_without_control);
  double left = grid[peak], right = grid[peak];
  bool left_found = false, right_found = false;
  for (std::size_t i = peak; i > 0; --i) {
    if (tw[i - 1] < level) {
      const double t = (level - tw[i - 1]) / (tw[i] - tw[i - 1]);
      left = grid[i - 1] + t * (grid[i] - grid[i - 1]);
      left_found = true;
      break;
    }
  }
  for (std::size_t i = peak; i + 1 < grid.size(); ++i) {
    if (tw[i + 1] < level) {
      const double t = (level - tw[i]) / (tw[i + 1] - tw[i]);
      right = grid[i] + t * (grid[i + 1] - grid[i]);
      right_found = true;
      break;
    }
  }
  if (!left_found || !right_found) {
    throw NumericError("window does not close to its half level inside the grid");
  }
  m.window_fwhm = right - left;
  return m;
}

SplittingResult detect_splitting(const Spectrum& spectrum, double line_center) {
  const std::vector<double>& grid = spectrum.grid;
  const std::vector<double>& t = spectrum.transmission;
  const double t_far = *std::max_element(t.begin(), t.end());

  // Walk downhill from the requested center to the nearest absorption
  // maximum, then take its half-depth envelope.
  std::size_t imin = nearest_index(grid, line_center);
  while (imin + 1 < grid.size() && t[imin + 1] < t[imin]) ++imin;
  while (imin > 0 && t[imin - 1] < t[imin]) --imin;
  const double half = 0.5 * (t[imin] + t_far);
  std::size_t lo = imin, hi = imin;
  while (lo > 0 && t[lo] < half) --lo;
  while (hi + 1 < grid.size() && t[hi] < half) ++hi;
  if (hi - lo < 20) {
    throw NumericError("grid too coarse: fewer than 20 points across the dip");
  }
  const double width = grid[hi] - grid[lo];
  const double step = (grid.back() - grid.front()) / (grid.size() - 1);

  // A split dip puts the deepest point off center, so widen the search range
  // by that offset to cover the mirror component.
  const double range =
      1.5 * std::max(width, 2.0 * std::abs(grid[imin] - line_center));
  const std::size_t rlo = nearest_index(grid, line_center - range);
  const std::size_t rhi = nearest_index(grid, line_center + range);
  std::vector<std::size_t> minima;
  for (std::size_t i = std::max<std::size_t>(rlo, 1); i + 1 <= rhi && i + 1 < grid.size(); ++i) {
    if (t[i] < t[i - 1] && t[i] < t[i + 1] && t[i] < half) minima.push_back(i);
  }
  SplittingResult r;
  if (minima.size() < 2) return r;
  // Two deepest minima.
  std::sort(minima.begin(), minima.end(),
            [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });
  const double separation = std::abs(grid[minima[0]] - grid[minima[1]]);
  if (separation > 3.0 * step) {
    r.shape = DipShape::SplitDip;
    r.separation = separation;
  }
  return r;
}

std::vector<Spectrum> sweep(const std::vector<Scenario>& scenarios) {
  if (scenarios.empty()) throw InvalidArgument("sweep over an empty scenario list");
  std::vector<Spectrum> out;
  out.reserve(scenarios.size());
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    auto tag = [i](const std::exception& e) {
      std::ostringstream msg;
      msg << "scenario " << i << ": " << e.what();
      return msg.str();
    };
    try {
      out.push_back(compute_spectrum(scenarios[i]));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(tag(e));
    } catch (const ConfigError& e) {
      throw ConfigError(tag(e));
    } catch (const std::exception& e) {
      throw NumericError(tag(e));
    }
  }
  return out;
}

}  // namespace eitsim::spectra
