#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "eitsim/capi.h"

namespace {

int fail(eitsim_status status) {
  std::cerr << "error: " << eitsim_last_error() << "\n";
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ladder-EIT spectrum, polarization-rotation and calibration "
               "simulator for warm rubidium"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  bool plot = false;
  int quadrature_order = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file")
        ->required();
    sub->add_option("--out", out_dir, "output directory (default: .)");
    sub->add_flag("--plot", plot, "also write SVG line plots");
    sub->add_option("--quadrature-order", quadrature_order,
                    "override the Gauss-Hermite order (>= 8)");
  };
  CLI::App* cmd_spectrum =
      app.add_subcommand("spectrum", "transmission spectrum for one scenario");
  CLI::App* cmd_rotate =
      app.add_subcommand("rotate", "crossed/parallel analyzer spectra");
  CLI::App* cmd_fit =
      app.add_subcommand("fit", "least-squares parameter calibration");
  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "spectra over a list of control powers");
  CLI::App* cmd_atoms_dump =
      app.add_subcommand("atoms-dump", "atomic constants as JSON");
  for (CLI::App* sub :
       {cmd_spectrum, cmd_rotate, cmd_fit, cmd_sweep, cmd_atoms_dump}) {
    add_common(sub);
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  std::ifstream file(config_path, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot read config file: " << config_path << "\n";
    return static_cast<int>(EITSIM_ERR_IO);
  }
  std::ostringstream text;
  text << file.rdbuf();

  eitsim_config* config = nullptr;
  eitsim_status status = eitsim_config_parse(text.str().c_str(), &config);
  if (status != EITSIM_OK) return fail(status);

  // The CLI verb wins over the config's command field.
  status = eitsim_config_set_command(config, command.c_str());
  if (status != EITSIM_OK) {
    eitsim_config_free(config);
    return fail(status);
  }
  if (plot) {
    status = eitsim_config_set_plot(config, 1);
    if (status != EITSIM_OK) {
      eitsim_config_free(config);
      return fail(status);
    }
  }
  if (quadrature_order != 0) {
    status = eitsim_config_set_quadrature_order(config, quadrature_order);
    if (status != EITSIM_OK) {
      eitsim_config_free(config);
      return fail(status);
    }
  }

  eitsim_report* report = nullptr;
  status = eitsim_run(config, out_dir.c_str(), &report);
  if (status != EITSIM_OK) {
    eitsim_config_free(config);
    return fail(status);
  }
  std::cout << eitsim_report_json(report);
  eitsim_report_free(report);
  eitsim_config_free(config);
  return 0;
}
