#include "eitsim/capi.h"

#include <string>

#include "eitsim/errors.hpp"
#include "eitsim/runner.hpp"

struct eitsim_config {
  eitsim::runner::RunConfig config;
};

struct eitsim_report {
  std::string json;
};

namespace {

thread_local std::string g_last_error;

eitsim_status set_error(eitsim_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
eitsim_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return EITSIM_OK;
  } catch (const eitsim::ConfigError& e) {
    return set_error(EITSIM_ERR_CONFIG, e.what());
  } catch (const eitsim::InvalidArgument& e) {
    return set_error(EITSIM_ERR_CONFIG, e.what());
  } catch (const eitsim::IoError& e) {
    return set_error(EITSIM_ERR_IO, e.what());
  } catch (const eitsim::NumericError& e) {
    return set_error(EITSIM_ERR_NUMERIC, e.what());
  } catch (const std::exception& e) {
    return set_error(EITSIM_ERR_NUMERIC, e.what());
  }
}

}  // namespace

extern "C" {

const char* eitsim_version(void) { return "1.0.0"; }

const char* eitsim_last_error(void) { return g_last_error.c_str(); }

eitsim_status eitsim_config_parse(const char* json_text,
                                  eitsim_config** out_config) {
  if (json_text == nullptr || out_config == nullptr) {
    return set_error(EITSIM_ERR_CONFIG, "null argument");
  }
  *out_config = nullptr;
  return guarded([&] {
    auto* handle = new eitsim_config{eitsim::runner::parse_config(json_text)};
    *out_config = handle;
  });
}

eitsim_status eitsim_config_set_command(eitsim_config* config,
                                        const char* command) {
  if (config == nullptr || command == nullptr) {
    return set_error(EITSIM_ERR_CONFIG, "null argument");
  }
  const std::string name = command;
  using eitsim::runner::Command;
  Command cmd;
  if (name == "spectrum") cmd = Command::Spectrum;
  else if (name == "rotate") cmd = Command::Rotate;
  else if (name == "fit") cmd = Command::Fit;
  else if (name == "sweep") cmd = Command::Sweep;
  else if (name == "atoms-dump") cmd = Command::AtomsDump;
  else return set_error(EITSIM_ERR_CONFIG, "unknown command '" + name + "'");
  config->config.command = cmd;
  g_last_error.clear();
  return EITSIM_OK;
}

eitsim_status eitsim_config_set_quadrature_order(eitsim_config* config,
                                                 int order) {
  if (config == nullptr) return set_error(EITSIM_ERR_CONFIG, "null config");
  if (order < 8) {
    return set_error(EITSIM_ERR_CONFIG, "quadrature order must be >= 8");
  }
  config->config.scenario.quadrature_order = order;
  g_last_error.clear();
  return EITSIM_OK;
}

eitsim_status eitsim_config_set_plot(eitsim_config* config, int enabled) {
  if (config == nullptr) return set_error(EITSIM_ERR_CONFIG, "null config");
  config->config.plot = enabled != 0;
  g_last_error.clear();
  return EITSIM_OK;
}

eitsim_status eitsim_run(const eitsim_config* config, const char* out_dir,
                         eitsim_report** out_report) {
  if (config == nullptr || out_dir == nullptr || out_report == nullptr) {
    return set_error(EITSIM_ERR_CONFIG, "null argument");
  }
  *out_report = nullptr;
  return guarded([&] {
    const eitsim::runner::RunReport report =
        eitsim::runner::run(config->config, out_dir);
    *out_report = new eitsim_report{report.to_json().dump(2) + "\n"};
  });
}

const char* eitsim_report_json(const eitsim_report* report) {
  return report == nullptr ? "" : report->json.c_str();
}

void eitsim_config_free(eitsim_config* config) { delete config; }

void eitsim_report_free(eitsim_report* report) { delete report; }

}  // extern "C"
