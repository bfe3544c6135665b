#pragma once

#include <map>
#include <string>
#include <vector>

namespace eitsim::atoms {

enum class IsotopeId { Rb85, Rb87 };

struct Isotope {
  IsotopeId id;
  std::string name;
  double atomic_mass;                // kg
  double natural_abundance;          // fraction
  double ground_hyperfine_splitting; // Hz
};

const Isotope& isotope(IsotopeId id);

// One collapsed two-photon ladder: a ground hyperfine level coupled through
// the 5P3/2 manifold to the 5D5/2 manifold.
struct LadderLine {
  Isotope iso;
  int f_ground = 0;
  std::vector<int> f_intermediate;
  std::vector<int> f_upper;
  double signal_center_offset = 0.0;  // Hz, relative to the reference line
  double signal_wavelength = 0.0;     // m
  double control_wavelength = 0.0;    // m
  double gamma2 = 0.0;                // rad/s, 5P3/2 natural linewidth
  double gamma3 = 0.0;                // rad/s, 5D5/2 natural linewidth
  double relative_strength = 0.0;     // abundance x ground degeneracy fraction
};

// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M>.
// Returns 0 when M != m1+m2 or the triangle rule fails.
// Throws InvalidArgument on malformed quantum numbers.
double cg_coefficient(double j1, double m1, double j2, double m2, double J,
                      double M);

// The four Doppler dips of natural rubidium on the D2 line, one line per
// (isotope, ground-F) pair, anchored so that 85Rb F=2 sits at zero offset.
// Relative strengths are normalized to sum to 1.
std::vector<LadderLine> default_line_set();

enum class Polarization { SigmaPlus, SigmaMinus };

inline int helicity(Polarization p) { return p == Polarization::SigmaPlus ? 1 : -1; }

struct SublevelPathway {
  int mf_ground = 0;
  int mf_intermediate = 0;
  int mf_upper = 0;
  Polarization signal_polarization = Polarization::SigmaPlus;
  Polarization control_polarization = Polarization::SigmaPlus;
  double signal_amplitude = 0.0;   // CG of the ground->intermediate step
  double control_amplitude = 0.0;  // CG of the intermediate->upper step
  double amplitude = 0.0;          // product of the two
  double population_weight = 0.0;
};

struct PathwaySet {
  int f_ground = 0;
  int f_intermediate = 0;
  int f_upper = 0;
  Polarization control_polarization = Polarization::SigmaPlus;
  std::vector<SublevelPathway> pathways;
};

// Enumerates the sigma+/sigma- signal pathways for the given control
// polarization and initial ground-state population. Zero-amplitude or
// zero-weight pathways are omitted.
PathwaySet pathway_set(int f_ground, int f_intermediate, int f_upper,
                       Polarization control_pol,
                       const std::map<int, double>& initial_population);

// Swaps sigma+ and sigma- on every pathway (control and signal alike).
PathwaySet mirror_pathways(const PathwaySet& set);

}  // namespace eitsim::atoms
