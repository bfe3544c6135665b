#pragma once

namespace eitsim::constants {

// CODATA 2018
inline constexpr double kBoltzmann = 1.380649e-23;        // J/K
inline constexpr double kSpeedOfLight = 2.99792458e8;     // m/s
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg
inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Rubidium data from the Steck alkali data sheets (revision 2.x).
namespace rb {

inline constexpr double kMassRb85 = 84.911789738 * kAtomicMassUnit;  // kg
inline constexpr double kMassRb87 = 86.909180527 * kAtomicMassUnit;  // kg
inline constexpr double kAbundanceRb85 = 0.7217;
inline constexpr double kAbundanceRb87 = 0.2783;

// 5S1/2 ground-state hyperfine splittings.
inline constexpr double kGroundSplittingRb85 = 3.0357324390e9;    // Hz
inline constexpr double kGroundSplittingRb87 = 6.834682610904e9;  // Hz

// Ground hyperfine level positions relative to the 5S1/2 centroid.
inline constexpr double kShiftRb85F2 = -1.7708439228e9;  // Hz
inline constexpr double kShiftRb85F3 = +1.2648885163e9;  // Hz
inline constexpr double kShiftRb87F1 = -4.271676632e9;   // Hz
inline constexpr double kShiftRb87F2 = +2.563005979e9;   // Hz

// D2 centroid isotope shift, nu(87) - nu(85).
inline constexpr double kIsotopeShiftD2 = 78.0955e6;  // Hz

// Natural linewidth of 5P3/2 (D2 excited state), angular rate.
inline constexpr double kGamma5P32 = kTwoPi * 6.0666e6;  // rad/s

// Natural linewidth of 5D5/2, from the ~238.5 ns lifetime.
inline constexpr double kGamma5D52 = kTwoPi * 0.6673e6;  // rad/s

// Reference optical frequencies of the two ladder steps
// (85Rb 5S1/2 F=2 -> 5P3/2 and 5P3/2 -> 5D5/2).
inline constexpr double kSignalReferenceFrequency = 384.232e12;   // Hz
inline constexpr double kControlReferenceFrequency = 386.340e12;  // Hz

}  // namespace rb

}  // namespace eitsim::constants
