#include "eitsim/atoms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

#include "eitsim/constants.hpp"
#include "eitsim/errors.hpp"

namespace eitsim::atoms {

namespace c = eitsim::constants;

const Isotope& isotope(IsotopeId id) {
  static const Isotope rb85{IsotopeId::Rb85, "Rb85", c::rb::kMassRb85,
                            c::rb::kAbundanceRb85, c::rb::kGroundSplittingRb85};
  static const Isotope rb87{IsotopeId::Rb87, "Rb87", c::rb::kMassRb87,
                            c::rb::kAbundanceRb87, c::rb::kGroundSplittingRb87};
  return id == IsotopeId::Rb85 ? rb85 : rb87;
}

namespace {

// Doubled representation: two_j = 2j, exact for half-integers.
int doubled(double x, const char* what) {
  const double two = 2.0 * x;
  const double r = std::round(two);
  if (std::abs(two - r) > 1e-9) {
    throw InvalidArgument(std::string(what) + " must be integer or half-integer");
  }
  return static_cast<int>(r);
}

long double factorial(int n) {
  static const auto table = [] {
    std::array<long double, 200> t{};
    t[0] = 1.0L;
    for (int i = 1; i < 200; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  if (n < 0 || n >= 200) throw InvalidArgument("factorial argument out of range");
  return table[static_cast<std::size_t>(n)];
}

bool triangle_ok(int ta, int tb, int tc) {
  return tc >= std::abs(ta - tb) && tc <= ta + tb && (ta + tb + tc) % 2 == 0;
}

// Racah closed form in the doubled representation. All (two_*) arguments are
// even sums where a factorial is taken.
double cg_racah(int tj1, int tm1, int tj2, int tm2, int tJ, int tM) {
  if (tM != tm1 + tm2) return 0.0;
  if (!triangle_ok(tj1, tj2, tJ)) return 0.0;

  auto f = [](int twice) { return factorial(twice / 2); };

  const long double delta =
      f(tj1 + tj2 - tJ) * f(tj1 - tj2 + tJ) * f(-tj1 + tj2 + tJ) /
      f(tj1 + tj2 + tJ + 2);
  const long double pref =
      (tJ + 1) * delta * f(tJ + tM) * f(tJ - tM) * f(tj1 - tm1) * f(tj1 + tm1) *
      f(tj2 - tm2) * f(tj2 + tm2);

  const int kmin = std::max({0, tj2 - tm1 - tJ, tj1 + tm2 - tJ}) / 2;
  const int kmax = std::min({tj1 + tj2 - tJ, tj1 - tm1, tj2 + tm2}) / 2;
  long double sum = 0.0L;
  for (int k = kmin; k <= kmax; ++k) {
    const long double den = factorial(k) * f(tj1 + tj2 - tJ - 2 * k) *
                            f(tj1 - tm1 - 2 * k) * f(tj2 + tm2 - 2 * k) *
                            f(tJ - tj2 + tm1 + 2 * k) * f(tJ - tj1 - tm2 + 2 * k);
    sum += (k % 2 == 0 ? 1.0L : -1.0L) / den;
  }
  return static_cast<double>(std::sqrt(pref) * sum);
}

}  // namespace

double cg_coefficient(double j1, double m1, double j2, double m2, double J,
                      double M) {
  const int tj1 = doubled(j1, "j1"), tm1 = doubled(m1, "m1");
  const int tj2 = doubled(j2, "j2"), tm2 = doubled(m2, "m2");
  const int tJ = doubled(J, "J"), tM = doubled(M, "M");
  if (tj1 < 0 || tj2 < 0 || tJ < 0) throw InvalidArgument("negative angular momentum");
  if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tM) > tJ) {
    throw InvalidArgument("|m| exceeds j");
  }
  if ((tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tJ + tM) % 2 != 0) {
    throw InvalidArgument("m not compatible with j (integer vs half-integer)");
  }
  return cg_racah(tj1, tm1, tj2, tm2, tJ, tM);
}

std::vector<LadderLine> default_line_set() {
  const Isotope& rb85 = isotope(IsotopeId::Rb85);
  const Isotope& rb87 = isotope(IsotopeId::Rb87);

  // Offsets of each ground-F transition relative to the 85Rb F=2 line, with
  // the excited manifolds collapsed to their centroids:
  //   offset = isotope_shift + shift85(F=2) - shift(F)
  const double off85f2 = 0.0;
  const double off85f3 = c::rb::kShiftRb85F2 - c::rb::kShiftRb85F3;
  const double base87 = c::rb::kIsotopeShiftD2 + c::rb::kShiftRb85F2;
  const double off87f1 = base87 - c::rb::kShiftRb87F1;
  const double off87f2 = base87 - c::rb::kShiftRb87F2;

  struct Entry {
    const Isotope* iso;
    int f;
    double offset;
  };
  const Entry entries[] = {
      {&rb85, 2, off85f2},
      {&rb85, 3, off85f3},
      {&rb87, 1, off87f1},
      {&rb87, 2, off87f2},
  };

  std::vector<LadderLine> lines;
  double total = 0.0;
  for (const Entry& e : entries) {
    LadderLine line;
    line.iso = *e.iso;
    line.f_ground = e.f;
    line.f_intermediate = {e.f - 1, e.f, e.f + 1};
    line.f_upper = {e.f - 2, e.f - 1, e.f, e.f + 1, e.f + 2};
    std::erase_if(line.f_intermediate, [](int f) { return f < 0; });
    std::erase_if(line.f_upper, [](int f) { return f < 0; });
    line.signal_center_offset = e.offset;
    line.signal_wavelength =
        c::kSpeedOfLight / (c::rb::kSignalReferenceFrequency + e.offset);
    line.control_wavelength = c::kSpeedOfLight / c::rb::kControlReferenceFrequency;
    line.gamma2 = c::rb::kGamma5P32;
    line.gamma3 = c::rb::kGamma5D52;
    // Thermal equipartition over ground sublevels: weight by abundance times
    // the fraction of the isotope's ground population sitting in this F.
    const double iso_degeneracy =
        e.iso->id == IsotopeId::Rb85 ? (5.0 + 7.0) : (3.0 + 5.0);
    line.relative_strength =
        e.iso->natural_abundance * (2.0 * e.f + 1.0) / iso_degeneracy;
    total += line.relative_strength;
    lines.push_back(std::move(line));
  }
  for (LadderLine& line : lines) line.relative_strength /= total;
  return lines;
}

PathwaySet pathway_set(int f_ground, int f_intermediate, int f_upper,
                       Polarization control_pol,
                       const std::map<int, double>& initial_population) {
  if (std::abs(f_intermediate - f_ground) > 1 || std::abs(f_upper - f_intermediate) > 1) {
    throw InvalidArgument("dipole selection rule requires |dF| <= 1");
  }
  for (const auto& [mf, w] : initial_population) {
    if (std::abs(mf) > f_ground) {
      throw InvalidArgument("population map references |mF| > F_ground");
    }
    if (w < 0.0) throw InvalidArgument("population weights must be nonnegative");
  }

  PathwaySet set;
  set.f_ground = f_ground;
  set.f_intermediate = f_intermediate;
  set.f_upper = f_upper;
  set.control_polarization = control_pol;

  const int qc = helicity(control_pol);
  for (const auto& [mf, weight] : initial_population) {
    if (weight == 0.0) continue;
    for (Polarization sig : {Polarization::SigmaPlus, Polarization::SigmaMinus}) {
      const int qs = helicity(sig);
      const int mi = mf + qs;
      const int mu = mi + qc;
      if (std::abs(mi) > f_intermediate || std::abs(mu) > f_upper) continue;
      SublevelPathway p;
      p.mf_ground = mf;
      p.mf_intermediate = mi;
      p.mf_upper = mu;
      p.signal_polarization = sig;
      p.control_polarization = control_pol;
      p.signal_amplitude = cg_coefficient(f_ground, mf, 1, qs, f_intermediate, mi);
      p.control_amplitude = cg_coefficient(f_intermediate, mi, 1, qc, f_upper, mu);
      p.amplitude = p.signal_amplitude * p.control_amplitude;
      p.population_weight = weight;
      if (p.amplitude != 0.0) set.pathways.push_back(p);
    }
  }
  return set;
}

PathwaySet mirror_pathways(const PathwaySet& set) {
  auto flip = [](Polarization p) {
    return p == Polarization::SigmaPlus ? Polarization::SigmaMinus
                                        : Polarization::SigmaPlus;
  };
  PathwaySet out = set;
  out.control_polarization = flip(set.control_polarization);
  for (SublevelPathway& p : out.pathways) {
    p.mf_intermediate = -p.mf_intermediate;
    p.mf_upper = -p.mf_upper;
    p.mf_ground = -p.mf_ground;
    p.signal_polarization = flip(p.signal_polarization);
    p.control_polarization = flip(p.control_polarization);
    // CG symmetry under m -> -m: phase (-1)^(j1+j2-J) on each step, which
    // squares away in every observable; amplitudes are recomputed to keep
    // the stored values exact.
    p.signal_amplitude = cg_coefficient(out.f_ground, p.mf_ground, 1,
                                        helicity(p.signal_polarization),
                                        out.f_intermediate, p.mf_intermediate);
    p.control_amplitude = cg_coefficient(out.f_intermediate, p.mf_intermediate, 1,
                                         helicity(p.control_polarization),
                                         out.f_upper, p.mf_upper);
    p.amplitude = p.signal_amplitude * p.control_amplitude;
  }
  return out;
}

}  // namespace eitsim::atoms
