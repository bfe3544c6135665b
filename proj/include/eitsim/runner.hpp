#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eitsim/atoms.hpp"
#include "eitsim/fit.hpp"
#include "eitsim/polarization.hpp"
#include "eitsim/spectra.hpp"

namespace eitsim::runner {

enum class Command { Spectrum, Rotate, Fit, Sweep, AtomsDump };

std::string command_name(Command c);

// Pathway configuration for the rotation command.
struct RotateConfig {
  int f_ground = 2;
  int f_intermediate = 3;
  int f_upper = 4;
  atoms::Polarization control_polarization = atoms::Polarization::SigmaPlus;
  // "mf0": all population in mF = 0. "thermal": uniform across the 2F+1
  // ground sublevels.
  std::string population = "mf0";
};

struct FitConfig {
  std::string observations_csv;  // path, read at run time
  std::vector<calibrate::Observation> observations;  // inline alternative
  std::map<calibrate::FitParameter, calibrate::Bounds> parameters;
  std::map<calibrate::FitParameter, double> initial;
  int max_iterations = 200;
};

struct RunConfig {
  Command command = Command::Spectrum;
  spectra::Scenario scenario = spectra::default_scenario();
  bool plot = false;
  std::vector<double> sweep_powers;  // W, one spectrum per entry
  RotateConfig rotate;
  FitConfig fit;
};

// Parses and validates a JSON configuration document. Dimensional fields are
// strings with unit suffixes ("7 uW", "700 MHz", "85 C", "1 um") converted to
// SI exactly once here. Unknown keys and missing unit suffixes are hard
// errors (ConfigError).
RunConfig parse_config(const std::string& json_text);

// Unit-suffix quantity parsers, exposed for reuse and testing. Frequencies
// return Hz, powers W, temperatures K, lengths m.
double parse_frequency(const std::string& text);
double parse_power(const std::string& text);
double parse_temperature(const std::string& text);
double parse_length(const std::string& text);

struct RunReport {
  std::string command;
  double wall_time_seconds = 0.0;
  std::vector<std::string> artifacts;  // paths written, all exist on success
  nlohmann::json metrics;

  nlohmann::json to_json() const;
};

// Executes the configured command, writing CSV/JSON (and optional SVG)
// artifacts under out_dir. Deterministic: identical configs produce
// byte-identical CSV outputs, with or without plotting.
RunReport run(const RunConfig& config, const std::string& out_dir);

}  // namespace eitsim::runner
