#ifndef EITSIM_CAPI_H
#define EITSIM_CAPI_H

#ifdef __cplusplus
extern "C" {
#endif

/* Stable C interface to the simulation runner. All objects are opaque
 * handles; every call returns a status code and the last error message is
 * kept per thread. */

typedef struct eitsim_config eitsim_config;
typedef struct eitsim_report eitsim_report;

typedef enum eitsim_status {
  EITSIM_OK = 0,
  EITSIM_ERR_CONFIG = 2,
  EITSIM_ERR_NUMERIC = 3,
  EITSIM_ERR_IO = 4,
} eitsim_status;

const char* eitsim_version(void);

/* Message from the most recent failing call on this thread, or "" if none. */
const char* eitsim_last_error(void);

/* Parses a JSON configuration document into a config handle. On success
 * *out_config owns the handle and must be released with eitsim_config_free. */
eitsim_status eitsim_config_parse(const char* json_text,
                                  eitsim_config** out_config);

/* Overrides the command (spectrum, rotate, fit, sweep or atoms-dump). */
eitsim_status eitsim_config_set_command(eitsim_config* config,
                                        const char* command);

/* Overrides the Gauss-Hermite quadrature order (>= 8). */
eitsim_status eitsim_config_set_quadrature_order(eitsim_config* config,
                                                 int order);

/* Enables or disables SVG plot emission (0 = off, nonzero = on). */
eitsim_status eitsim_config_set_plot(eitsim_config* config, int enabled);

/* Runs the configured command, writing artifacts under out_dir. On success
 * *out_report owns the handle and must be released with eitsim_report_free. */
eitsim_status eitsim_run(const eitsim_config* config, const char* out_dir,
                         eitsim_report** out_report);

/* Serialized run report; the string stays valid until the report is freed. */
const char* eitsim_report_json(const eitsim_report* report);

void eitsim_config_free(eitsim_config* config);
void eitsim_report_free(eitsim_report* report);

#ifdef __cplusplus
}
#endif

#endif /* EITSIM_CAPI_H */
