#include "eitsim/calibrate.hpp"

#include <cmath>

#include "eitsim/constants.hpp"
#include "eitsim/errors.hpp"

namespace eitsim::calibrate {

namespace c = eitsim::constants;

PowerMap default_power_map() {
  PowerMap map;
  map.anchor_power = 7.0e-6;
  map.anchor_rabi = c::kTwoPi * 214.0e6;
  return map;
}

double rabi_from_power(double power, const PowerMap& map) {
  if (!(power >= 0.0)) throw InvalidArgument("control power must be >= 0");
  if (!(map.anchor_power > 0.0) || !(map.anchor_rabi > 0.0)) {
    throw InvalidArgument("power map anchors must be positive");
  }
  return map.anchor_rabi * std::sqrt(power / map.anchor_power);
}

double calibrate_transit_constant(double target_rate,
                                  const lineshape::ThermalEnsemble& ensemble,
                                  const lineshape::GeometryParams& geometry) {
  if (!(target_rate > 0.0)) throw InvalidArgument("target rate must be positive");
  if (!(geometry.mode_diameter > 0.0)) {
    throw InvalidArgument("mode diameter must be positive");
  }
  if (!(ensemble.most_probable_speed > 0.0)) {
    throw InvalidArgument("ensemble must have a positive thermal speed");
  }
  return target_rate * geometry.mode_diameter / ensemble.most_probable_speed;
}

}  // namespace eitsim::calibrate
