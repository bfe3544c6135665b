#include "eitsim/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

#include "eitsim/constants.hpp"
#include "eitsim/errors.hpp"
#include "eitsim/io.hpp"

namespace eitsim::runner {

namespace c = eitsim::constants;
using nlohmann::json;

std::string command_name(Command cmd) {
  switch (cmd) {
    case Command::Spectrum: return "spectrum";
    case Command::Rotate: return "rotate";
    case Command::Fit: return "fit";
    case Command::Sweep: return "sweep";
    case Command::AtomsDump: return "atoms-dump";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_quantity(const std::string& text, const char* dimension,
                      const std::map<std::string, double>& units) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw ConfigError(std::string("cannot parse ") + dimension + " value: '" +
                      text + "'");
  }
  const std::string unit = trim(text.substr(pos));
  if (unit.empty()) {
    throw ConfigError(std::string(dimension) + " value '" + text +
                      "' is missing a unit suffix");
  }
  const auto it = units.find(unit);
  if (it == units.end()) {
    std::ostringstream msg;
    msg << "unknown " << dimension << " unit '" << unit << "' in '" << text
        << "'; expected one of:";
    for (const auto& [name, scale] : units) msg << ' ' << name;
    throw ConfigError(msg.str());
  }
  return value * it->second;
}

json parse_json(const std::string& text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw ConfigError("configuration is not well-formed JSON");
  return doc;
}

void check_keys(const json& obj, const std::string& where,
                const std::vector<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

std::string require_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("field '" + key + "' must be a string");
  return v.get<std::string>();
}

std::string require_unit_string(const json& v, const std::string& key) {
  if (!v.is_string()) {
    throw ConfigError("field '" + key +
                      "' must be a string with a unit suffix, for example \"700 MHz\"");
  }
  return v.get<std::string>();
}

double require_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("field '" + key + "' must be a number");
  return v.get<double>();
}

calibrate::FitParameter parameter_from_name(const std::string& name) {
  if (name == "rabi") return calibrate::FitParameter::Rabi;
  if (name == "optical_depth") return calibrate::FitParameter::OpticalDepth;
  if (name == "transit_rate") return calibrate::FitParameter::TransitRate;
  if (name == "delta_c") return calibrate::FitParameter::DeltaC;
  if (name == "normalization_scale") {
    return calibrate::FitParameter::NormalizationScale;
  }
  throw ConfigError("unknown fit parameter '" + name +
                    "'; expected rabi, optical_depth, transit_rate, delta_c or "
                    "normalization_scale");
}

bool parameter_is_frequency(calibrate::FitParameter p) {
  return p == calibrate::FitParameter::Rabi ||
         p == calibrate::FitParameter::TransitRate ||
         p == calibrate::FitParameter::DeltaC;
}

// Rabi and transit rates are angular internally; delta_c stays in Hz.
double parameter_value(calibrate::FitParameter p, const json& v,
                       const std::string& key) {
  if (parameter_is_frequency(p)) {
    const double hz = parse_frequency(require_unit_string(v, key));
    return p == calibrate::FitParameter::DeltaC ? hz : c::kTwoPi * hz;
  }
  return require_number(v, key);
}

void parse_fit_block(const json& block, FitConfig* fit) {
  check_keys(block, "fit",
             {"observations_csv", "observations", "parameters", "initial",
              "max_iterations"});
  if (block.contains("observations_csv") && block.contains("observations")) {
    throw ConfigError("give fit observations as a CSV path or inline, not both");
  }
  if (block.contains("observations_csv")) {
    fit->observations_csv =
        require_string(block["observations_csv"], "observations_csv");
    if (!std::filesystem::exists(fit->observations_csv)) {
      throw ConfigError("observations file does not exist: " +
                        fit->observations_csv);
    }
  } else if (block.contains("observations")) {
    if (!block["observations"].is_array()) {
      throw ConfigError("fit observations must be an array");
    }
    for (const json& row : block["observations"]) {
      check_keys(row, "fit observation", {"delta_s", "transmission", "weight"});
      if (!row.contains("delta_s") || !row.contains("transmission")) {
        throw ConfigError("each observation needs delta_s and transmission");
      }
      calibrate::Observation o;
      o.delta_s = parse_frequency(require_unit_string(row["delta_s"], "delta_s"));
      o.transmission = require_number(row["transmission"], "transmission");
      if (row.contains("weight")) o.weight = require_number(row["weight"], "weight");
      fit->observations.push_back(o);
    }
  } else {
    throw ConfigError("fit needs observations_csv or inline observations");
  }
  if (!block.contains("parameters")) {
    throw ConfigError("fit needs a parameters block with bounds");
  }
  check_keys(block["parameters"], "fit.parameters",
             {"rabi", "optical_depth", "transit_rate", "delta_c",
              "normalization_scale"});
  for (const auto& [name, spec] : block["parameters"].items()) {
    const calibrate::FitParameter p = parameter_from_name(name);
    check_keys(spec, "fit parameter '" + name + "'",
               {"lower", "upper", "initial"});
    if (!spec.contains("lower") || !spec.contains("upper")) {
      throw ConfigError("fit parameter '" + name + "' needs lower and upper bounds");
    }
    calibrate::Bounds b;
    b.lower = parameter_value(p, spec["lower"], name + ".lower");
    b.upper = parameter_value(p, spec["upper"], name + ".upper");
    fit->parameters[p] = b;
    if (spec.contains("initial")) {
      fit->initial[p] = parameter_value(p, spec["initial"], name + ".initial");
    }
  }
  if (block.contains("max_iterations")) {
    const double n = require_number(block["max_iterations"], "max_iterations");
    if (n < 1 || n != std::floor(n)) {
      throw ConfigError("max_iterations must be a positive integer");
    }
    fit->max_iterations = static_cast<int>(n);
  }
}

void parse_rotate_block(const json& block, RotateConfig* rot) {
  check_keys(block, "rotate",
             {"f_ground", "f_intermediate", "f_upper", "control_polarization",
              "population"});
  const auto get_f = [&](const char* key, int* out) {
    if (!block.contains(key)) return;
    const double v = require_number(block[key], key);
    if (v < 0 || v != std::floor(v)) {
      throw ConfigError(std::string(key) + " must be a nonnegative integer");
    }
    *out = static_cast<int>(v);
  };
  get_f("f_ground", &rot->f_ground);
  get_f("f_intermediate", &rot->f_intermediate);
  get_f("f_upper", &rot->f_upper);
  if (block.contains("control_polarization")) {
    const std::string s =
        require_string(block["control_polarization"], "control_polarization");
    if (s == "sigma+") {
      rot->control_polarization = atoms::Polarization::SigmaPlus;
    } else if (s == "sigma-") {
      rot->control_polarization = atoms::Polarization::SigmaMinus;
    } else {
      throw ConfigError("control_polarization must be 'sigma+' or 'sigma-'");
    }
  }
  if (block.contains("population")) {
    rot->population = require_string(block["population"], "population");
    if (rot->population != "mf0" && rot->population != "thermal") {
      throw ConfigError("population must be 'mf0' or 'thermal'");
    }
  }
}

json scenario_echo(const spectra::Scenario& s) {
  json echo;
  switch (s.regime) {
    case spectra::Regime::Cold: echo["regime"] = "cold"; break;
    case spectra::Regime::WarmFreeSpace: echo["regime"] = "free-space"; break;
    case spectra::Regime::WarmNanofiber: echo["regime"] = "nanofiber"; break;
  }
  echo["temperature_k"] = s.temperature;
  echo["optical_depth"] = s.optical_depth;
  if (s.control_rabi) echo["control_rabi_rad_per_s"] = *s.control_rabi;
  if (s.control_power) echo["control_power_w"] = *s.control_power;
  echo["delta_c_hz"] = s.delta_c;
  echo["grid_min_hz"] = s.grid.front();
  echo["grid_max_hz"] = s.grid.back();
  echo["grid_points"] = s.grid.size();
  echo["mode_diameter_m"] = s.geometry.mode_diameter;
  echo["interaction_length_m"] = s.geometry.interaction_length;
  echo["quadrature_order"] = s.quadrature_order;
  echo["normalization_scale"] = s.normalization_scale;
  echo["lines"] = s.lines.size();
  return echo;
}

double reference_center(const spectra::Scenario& s) {
  double best = s.lines.front().signal_center_offset;
  for (const atoms::LadderLine& line : s.lines) {
    if (std::abs(line.signal_center_offset) < std::abs(best)) {
      best = line.signal_center_offset;
    }
  }
  return best;
}

json window_json(const spectra::Spectrum& with_control,
                 const spectra::Spectrum& without_control, double center) {
  try {
    const spectra::WindowMetrics m =
        spectra::window_metrics(with_control, without_control, center);
    json j;
    j["window_center_hz"] = m.window_center;
    j["window_transmission"] = m.window_transmission;
    j["window_depth"] = m.window_depth;
    j["window_fwhm_hz"] = m.window_fwhm;
    j["dip_transmission_without_control"] = m.dip_transmission_without_control;
    return j;
  } catch (const NumericError&) {
    return json(nullptr);
  }
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void write_spectrum_csv(const std::string& path, const spectra::Spectrum& sp) {
  std::vector<std::vector<double>> rows;
  rows.reserve(sp.grid.size());
  for (std::size_t i = 0; i < sp.grid.size(); ++i) {
    rows.push_back({sp.grid[i], sp.chi[i].real(), sp.chi[i].imag(),
                    sp.transmission[i]});
  }
  io::write_csv(path, {"delta_s_hz", "chi_re", "chi_im", "transmission"}, rows);
}

spectra::Scenario without_control(spectra::Scenario s) {
  s.control_rabi.reset();
  s.control_power.reset();
  return s;
}

void run_spectrum(const RunConfig& config, const std::string& out_dir,
                  RunReport* report) {
  const spectra::Spectrum with = spectra::compute_spectrum(config.scenario);
  const spectra::Spectrum bare =
      spectra::compute_spectrum(without_control(config.scenario));

  const std::string csv = join_path(out_dir, "spectrum.csv");
  write_spectrum_csv(csv, with);
  report->artifacts.push_back(csv);

  const double center = reference_center(config.scenario);
  report->metrics["scenario"] = scenario_echo(config.scenario);
  if (spectra::resolve_control_rabi(config.scenario) > 0.0) {
    report->metrics["window"] = window_json(with, bare, center);
    try {
      const spectra::SplittingResult split =
          spectra::detect_splitting(with, center);
      report->metrics["split_dip"] = split.shape == spectra::DipShape::SplitDip;
      report->metrics["split_separation_hz"] = split.separation;
    } catch (const NumericError&) {
      report->metrics["split_dip"] = json(nullptr);
      report->metrics["split_separation_hz"] = json(nullptr);
    }
  }

  if (config.plot) {
    const std::string svg = join_path(out_dir, "spectrum.svg");
    io::SvgSeries s_with{with.grid, with.transmission, "#1f77b4", "with control"};
    io::SvgSeries s_bare{bare.grid, bare.transmission, "#7f7f7f", "no control"};
    io::write_svg_plot(svg, "Signal transmission", "signal detuning (Hz)",
                       "transmission", {s_bare, s_with});
    report->artifacts.push_back(svg);
  }
}

void run_rotate(const RunConfig& config, const std::string& out_dir,
                RunReport* report) {
  const RotateConfig& rc = config.rotate;
  std::map<int, double> population;
  if (rc.population == "thermal") {
    const double w = 1.0 / (2 * rc.f_ground + 1);
    for (int mf = -rc.f_ground; mf <= rc.f_ground; ++mf) population[mf] = w;
  } else {
    population[0] = 1.0;
  }
  const atoms::PathwaySet set =
      atoms::pathway_set(rc.f_ground, rc.f_intermediate, rc.f_upper,
                         rc.control_polarization, population);
  const polarization::AnalyzerResult result =
      polarization::analyzer_spectrum(config.scenario, set);
  const polarization::BirefringentResponse response =
      polarization::birefringent_response(config.scenario, set);

  const std::string csv = join_path(out_dir, "rotation.csv");
  std::vector<std::vector<double>> rows;
  rows.reserve(result.grid.size());
  for (std::size_t i = 0; i < result.grid.size(); ++i) {
    rows.push_back({result.grid[i], result.t_parallel[i], result.t_crossed[i],
                    result.rotation_angle[i] * 180.0 / c::kPi});
  }
  io::write_csv(csv, {"delta_s_hz", "t_parallel", "t_crossed", "rotation_deg"},
                rows);
  report->artifacts.push_back(csv);

  std::size_t peak = 0;
  for (std::size_t i = 1; i < result.grid.size(); ++i) {
    if (result.t_crossed[i] > result.t_crossed[peak]) peak = i;
  }
  report->metrics["scenario"] = scenario_echo(config.scenario);
  report->metrics["pathways"] = set.pathways.size();
  report->metrics["degenerate_birefringence"] = response.degenerate;
  report->metrics["t_crossed_peak"] = result.t_crossed[peak];
  report->metrics["t_crossed_peak_hz"] = result.grid[peak];
  report->metrics["rotation_deg_at_peak"] =
      result.rotation_angle[peak] * 180.0 / c::kPi;

  if (config.plot) {
    const std::string svg = join_path(out_dir, "rotation.svg");
    io::SvgSeries crossed{result.grid, result.t_crossed, "#d62728", "t_crossed"};
    io::write_svg_plot(svg, "Crossed-analyzer transmission",
                       "signal detuning (Hz)", "t_crossed", {crossed});
    report->artifacts.push_back(svg);
  }
}

void run_fit(const RunConfig& config, const std::string& out_dir,
             RunReport* report) {
  calibrate::FitProblem problem;
  problem.observations = config.fit.observations_csv.empty()
                             ? config.fit.observations
                             : io::read_observations_csv(config.fit.observations_csv);
  problem.free_parameters = config.fit.parameters;
  problem.initial_guess = config.fit.initial;
  problem.scenario = config.scenario;
  problem.max_iterations = config.fit.max_iterations;
  const calibrate::FitResult result = calibrate::fit_spectrum(problem);

  json values;
  for (const auto& [p, v] : result.values) {
    json entry;
    entry["value"] = v;
    if (parameter_is_frequency(p)) {
      const double hz = p == calibrate::FitParameter::DeltaC ? v : v / c::kTwoPi;
      entry["frequency_mhz"] = hz / 1e6;
    }
    values[calibrate::fit_parameter_name(p)] = entry;
  }
  json fit_json;
  fit_json["values"] = values;
  fit_json["residual"] = result.residual;
  fit_json["iterations"] = result.iterations;
  fit_json["converged"] = result.converged;
  fit_json["observations"] = problem.observations.size();

  const std::string path = join_path(out_dir, "fit.json");
  io::write_text_file(path, fit_json.dump(2) + "\n");
  report->artifacts.push_back(path);
  report->metrics["scenario"] = scenario_echo(config.scenario);
  report->metrics["fit"] = fit_json;

  if (!result.converged) {
    throw NumericError("fit did not converge within the iteration cap");
  }
}

void run_sweep(const RunConfig& config, const std::string& out_dir,
               RunReport* report) {
  if (config.sweep_powers.empty()) {
    throw ConfigError("sweep needs a non-empty control_powers list");
  }
  std::vector<spectra::Scenario> scenarios;
  for (const double power : config.sweep_powers) {
    spectra::Scenario s = config.scenario;
    s.control_rabi.reset();
    s.control_power = power;
    scenarios.push_back(s);
  }
  const std::vector<spectra::Spectrum> results = spectra::sweep(scenarios);
  const spectra::Spectrum bare =
      spectra::compute_spectrum(without_control(config.scenario));
  const double center = reference_center(config.scenario);

  json items = json::array();
  std::vector<io::SvgSeries> series;
  const std::vector<std::string> palette = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                            "#d62728", "#9467bd", "#8c564b"};
  for (std::size_t i = 0; i < results.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "sweep_%03zu.csv", i);
    const std::string csv = join_path(out_dir, name);
    write_spectrum_csv(csv, results[i]);
    report->artifacts.push_back(csv);

    json item;
    item["control_power_w"] = config.sweep_powers[i];
    item["csv"] = csv;
    item["window"] = window_json(results[i], bare, center);
    items.push_back(item);

    std::ostringstream label;
    label << config.sweep_powers[i] * 1e6 << " uW";
    series.push_back({results[i].grid, results[i].transmission,
                      palette[i % palette.size()], label.str()});
  }
  report->metrics["scenario"] = scenario_echo(config.scenario);
  report->metrics["sweep"] = items;

  if (config.plot) {
    const std::string svg = join_path(out_dir, "sweep.svg");
    io::write_svg_plot(svg, "Control-power sweep", "signal detuning (Hz)",
                       "transmission", series);
    report->artifacts.push_back(svg);
  }
}

void run_atoms_dump(const RunConfig& config, const std::string& out_dir,
                    RunReport* report) {
  json doc;
  doc["constants"]["boltzmann_j_per_k"] = c::kBoltzmann;
  doc["constants"]["speed_of_light_m_per_s"] = c::kSpeedOfLight;
  doc["constants"]["atomic_mass_unit_kg"] = c::kAtomicMassUnit;
  for (const atoms::IsotopeId id : {atoms::IsotopeId::Rb85, atoms::IsotopeId::Rb87}) {
    const atoms::Isotope& iso = atoms::isotope(id);
    json j;
    j["atomic_mass_kg"] = iso.atomic_mass;
    j["natural_abundance"] = iso.natural_abundance;
    j["ground_hyperfine_splitting_hz"] = iso.ground_hyperfine_splitting;
    doc["isotopes"][iso.name] = j;
  }
  json lines = json::array();
  for (const atoms::LadderLine& line : config.scenario.lines) {
    json j;
    j["isotope"] = line.iso.name;
    j["f_ground"] = line.f_ground;
    j["f_intermediate"] = line.f_intermediate;
    j["f_upper"] = line.f_upper;
    j["signal_center_offset_hz"] = line.signal_center_offset;
    j["signal_wavelength_m"] = line.signal_wavelength;
    j["control_wavelength_m"] = line.control_wavelength;
    j["gamma2_rad_per_s"] = line.gamma2;
    j["gamma3_rad_per_s"] = line.gamma3;
    j["relative_strength"] = line.relative_strength;
    lines.push_back(j);
  }
  doc["lines"] = lines;

  const std::string path = join_path(out_dir, "atoms.json");
  io::write_text_file(path, doc.dump(2) + "\n");
  report->artifacts.push_back(path);
  report->metrics["lines"] = config.scenario.lines.size();
}

}  // namespace

double parse_frequency(const std::string& text) {
  return parse_quantity(text, "frequency",
                        {{"Hz", 1.0},
                         {"kHz", 1e3},
                         {"MHz", 1e6},
                         {"GHz", 1e9},
                         {"THz", 1e12}});
}

double parse_power(const std::string& text) {
  return parse_quantity(text, "power",
                        {{"W", 1.0},
                         {"mW", 1e-3},
                         {"uW", 1e-6},
                         {"nW", 1e-9},
                         {"pW", 1e-12}});
}

double parse_temperature(const std::string& text) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse temperature value: '" + text + "'");
  }
  const std::string unit = trim(text.substr(pos));
  double kelvin;
  if (unit == "K") {
    kelvin = value;
  } else if (unit == "C") {
    kelvin = value + 273.15;
  } else if (unit.empty()) {
    throw ConfigError("temperature value '" + text + "' is missing a unit suffix");
  } else {
    throw ConfigError("unknown temperature unit '" + unit + "'; expected K or C");
  }
  if (!(kelvin > 0.0)) {
    throw ConfigError("temperature must be above absolute zero: '" + text + "'");
  }
  return kelvin;
}

double parse_length(const std::string& text) {
  return parse_quantity(
      text, "length",
      {{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}});
}

RunConfig parse_config(const std::string& json_text) {
  const json doc = parse_json(json_text);
  check_keys(doc, "configuration",
             {"command", "regime", "temperature", "optical_depth",
              "control_power", "control_rabi", "delta_c", "grid",
              "quadrature_order", "mode_diameter", "interaction_length",
              "normalization_scale", "power_map", "plot", "sweep", "rotate",
              "fit"});
  if (!doc.contains("command")) throw ConfigError("configuration needs a command");

  RunConfig config;
  const std::string cmd = require_string(doc["command"], "command");
  if (cmd == "spectrum") config.command = Command::Spectrum;
  else if (cmd == "rotate") config.command = Command::Rotate;
  else if (cmd == "fit") config.command = Command::Fit;
  else if (cmd == "sweep") config.command = Command::Sweep;
  else if (cmd == "atoms-dump") config.command = Command::AtomsDump;
  else {
    throw ConfigError("unknown command '" + cmd +
                      "'; expected spectrum, rotate, fit, sweep or atoms-dump");
  }

  spectra::Scenario& s = config.scenario;
  if (doc.contains("regime")) {
    const std::string regime = require_string(doc["regime"], "regime");
    if (regime == "cold") s.regime = spectra::Regime::Cold;
    else if (regime == "free-space") s.regime = spectra::Regime::WarmFreeSpace;
    else if (regime == "nanofiber") s.regime = spectra::Regime::WarmNanofiber;
    else {
      throw ConfigError("unknown regime '" + regime +
                        "'; expected cold, free-space or nanofiber");
    }
  }
  if (doc.contains("temperature")) {
    s.temperature =
        parse_temperature(require_unit_string(doc["temperature"], "temperature"));
  }
  if (doc.contains("optical_depth")) {
    s.optical_depth = require_number(doc["optical_depth"], "optical_depth");
    if (!(s.optical_depth >= 0.0)) {
      throw ConfigError("optical_depth must be >= 0");
    }
  }
  if (doc.contains("control_power") && doc.contains("control_rabi")) {
    throw ConfigError("give the control field as control_power or control_rabi, "
                      "not both");
  }
  if (doc.contains("control_power")) {
    s.control_power =
        parse_power(require_unit_string(doc["control_power"], "control_power"));
  }
  if (doc.contains("control_rabi")) {
    s.control_rabi = c::kTwoPi * parse_frequency(require_unit_string(
                                     doc["control_rabi"], "control_rabi"));
  }
  if (doc.contains("delta_c")) {
    s.delta_c = parse_frequency(require_unit_string(doc["delta_c"], "delta_c"));
  }
  if (doc.contains("grid")) {
    check_keys(doc["grid"], "grid", {"min", "max", "points"});
    double gmin = -8e9, gmax = 8e9;
    int points = 2001;
    if (doc["grid"].contains("min")) {
      gmin = parse_frequency(require_unit_string(doc["grid"]["min"], "grid.min"));
    }
    if (doc["grid"].contains("max")) {
      gmax = parse_frequency(require_unit_string(doc["grid"]["max"], "grid.max"));
    }
    if (doc["grid"].contains("points")) {
      const double n = require_number(doc["grid"]["points"], "grid.points");
      if (n < 2 || n != std::floor(n)) {
        throw ConfigError("grid.points must be an integer >= 2");
      }
      points = static_cast<int>(n);
    }
    if (!(gmax > gmin)) throw ConfigError("grid.max must exceed grid.min");
    s.grid = spectra::linear_grid(gmin, gmax, points);
  }
  if (doc.contains("quadrature_order")) {
    const double n = require_number(doc["quadrature_order"], "quadrature_order");
    if (n < 8 || n != std::floor(n)) {
      throw ConfigError("quadrature_order must be an integer >= 8");
    }
    s.quadrature_order = static_cast<int>(n);
  }
  if (doc.contains("mode_diameter")) {
    s.geometry.mode_diameter =
        parse_length(require_unit_string(doc["mode_diameter"], "mode_diameter"));
    if (!(s.geometry.mode_diameter > 0.0)) {
      throw ConfigError("mode_diameter must be positive");
    }
  }
  if (doc.contains("interaction_length")) {
    s.geometry.interaction_length = parse_length(
        require_unit_string(doc["interaction_length"], "interaction_length"));
    if (!(s.geometry.interaction_length > 0.0)) {
      throw ConfigError("interaction_length must be positive");
    }
  }
  if (doc.contains("normalization_scale")) {
    s.normalization_scale =
        require_number(doc["normalization_scale"], "normalization_scale");
    if (!(s.normalization_scale > 0.0)) {
      throw ConfigError("normalization_scale must be positive");
    }
  }
  if (doc.contains("power_map")) {
    check_keys(doc["power_map"], "power_map", {"anchor_power", "anchor_rabi"});
    if (!doc["power_map"].contains("anchor_power") ||
        !doc["power_map"].contains("anchor_rabi")) {
      throw ConfigError("power_map needs anchor_power and anchor_rabi");
    }
    calibrate::PowerMap map;
    map.anchor_power = parse_power(
        require_unit_string(doc["power_map"]["anchor_power"], "anchor_power"));
    map.anchor_rabi = c::kTwoPi * parse_frequency(require_unit_string(
                                      doc["power_map"]["anchor_rabi"],
                                      "anchor_rabi"));
    if (!(map.anchor_power > 0.0) || !(map.anchor_rabi > 0.0)) {
      throw ConfigError("power_map anchors must be positive");
    }
    s.power_map = map;
  }
  if (doc.contains("plot")) {
    if (!doc["plot"].is_boolean()) throw ConfigError("plot must be a boolean");
    config.plot = doc["plot"].get<bool>();
  }

  if (doc.contains("sweep")) {
    check_keys(doc["sweep"], "sweep", {"control_powers"});
    if (!doc["sweep"].contains("control_powers") ||
        !doc["sweep"]["control_powers"].is_array()) {
      throw ConfigError("sweep needs a control_powers array");
    }
    for (const json& p : doc["sweep"]["control_powers"]) {
      config.sweep_powers.push_back(
          parse_power(require_unit_string(p, "control_powers entry")));
    }
  }
  if (config.command == Command::Sweep && config.sweep_powers.empty()) {
    throw ConfigError("sweep command needs a sweep.control_powers list");
  }
  if (doc.contains("rotate")) parse_rotate_block(doc["rotate"], &config.rotate);
  if (doc.contains("fit")) parse_fit_block(doc["fit"], &config.fit);
  if (config.command == Command::Fit && config.fit.parameters.empty()) {
    throw ConfigError("fit command needs a fit block");
  }
  return config;
}

json RunReport::to_json() const {
  json j;
  j["command"] = command;
  j["wall_time_seconds"] = wall_time_seconds;
  j["artifacts"] = artifacts;
  j["metrics"] = metrics;
  return j;
}

RunReport run(const RunConfig& config, const std::string& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);

  RunReport report;
  report.command = command_name(config.command);
  switch (config.command) {
    case Command::Spectrum: run_spectrum(config, out_dir, &report); break;
    case Command::Rotate: run_rotate(config, out_dir, &report); break;
    case Command::Fit: run_fit(config, out_dir, &report); break;
    case Command::Sweep: run_sweep(config, out_dir, &report); break;
    case Command::AtomsDump: run_atoms_dump(config, out_dir, &report); break;
  }
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  const std::string report_path = join_path(out_dir, "report.json");
  report.artifacts.push_back(report_path);
  io::write_text_file(report_path, report.to_json().dump(2) + "\n");
  return report;
}

}  // namespace eitsim::runner
