#pragma once

#include "eitsim/lineshape.hpp"

namespace eitsim::calibrate {

// Square-root control-power to Rabi-frequency map, anchored by a single
// measured (power, rabi) pair: Omega(P) = anchor_rabi * sqrt(P / anchor_power).
struct PowerMap {
  double anchor_power = 0.0;  // W
  double anchor_rabi = 0.0;   // rad/s
};

// 7 uW of control power corresponds to a 2pi x 214 MHz Rabi frequency in the
// nanofiber mode.
PowerMap default_power_map();

double rabi_from_power(double power, const PowerMap& map);

// The calibration constant C such that transit_rate reproduces target_rate at
// the given ensemble and mode diameter.
double calibrate_transit_constant(double target_rate,
                                  const lineshape::ThermalEnsemble& ensemble,
                                  const lineshape::GeometryParams& geometry);

}  // namespace eitsim::calibrate
