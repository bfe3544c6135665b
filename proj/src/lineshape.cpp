#include "eitsim/lineshape.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <map>
#include <mutex>

#include "eitsim/constants.hpp"
#include "eitsim/errors.hpp"

namespace eitsim::lineshape {

namespace c = eitsim::constants;

namespace {

void check_rates(const DecoherenceRates& rates) {
  if (!(rates.gamma21 > 0.0) || !(rates.gamma31 > 0.0)) {
    throw InvalidArgument("decoherence rates must be positive");
  }
}

void check_rabi(double rabi_c) {
  if (!(rabi_c >= 0.0) || !std::isfinite(rabi_c)) {
    throw InvalidArgument("control Rabi frequency must be finite and nonnegative");
  }
}

constexpr Complex kI{0.0, 1.0};

}  // namespace

ThermalEnsemble make_ensemble(double temperature, double atomic_mass) {
  if (!(temperature >= 0.0)) throw InvalidArgument("temperature must be >= 0");
  if (!(atomic_mass > 0.0)) throw InvalidArgument("atomic mass must be positive");
  ThermalEnsemble e;
  e.temperature = temperature;
  e.atomic_mass = atomic_mass;
  e.most_probable_speed = std::sqrt(2.0 * c::kBoltzmann * temperature / atomic_mass);
  return e;
}

double default_transit_calibration() {
  // Anchored so that Gt/2pi = 100 MHz for 85Rb at 358.15 K and d = 1 um.
  static const double value = [] {
    const ThermalEnsemble ref = make_ensemble(358.15, c::rb::kMassRb85);
    const double target = c::kTwoPi * 100.0e6;
    return target * 1.0e-6 / ref.most_probable_speed;
  }();
  return value;
}

GeometryParams default_geometry() {
  GeometryParams g;
  g.mode_diameter = 1.0e-6;
  g.interaction_length = 8.0e-3;
  g.transit_calibration = default_transit_calibration();
  return g;
}

Complex chi_ladder(const Detunings& det, double rabi_c,
                   const DecoherenceRates& rates) {
  check_rates(rates);
  check_rabi(rabi_c);
  if (!std::isfinite(det.delta_s) || !std::isfinite(det.delta_c)) {
    throw InvalidArgument("detunings must be finite");
  }
  const Complex two_photon = rates.gamma31 - kI * (det.delta_s - det.delta_c);
  const Complex denom =
      rates.gamma21 - kI * det.delta_s + (rabi_c * rabi_c / 4.0) / two_photon;
  return kI * rates.gamma21 / denom;
}

Complex chi_velocity(const Detunings& det, double rabi_c,
                     const DecoherenceRates& rates, double v, double k_s,
                     double k_c, bool counter_propagating) {
  if (!(k_s > 0.0) || !(k_c > 0.0)) {
    throw InvalidArgument("wavevectors must be positive");
  }
  Detunings shifted;
  shifted.delta_s = det.delta_s - k_s * v;
  shifted.delta_c = counter_propagating ? det.delta_c - k_c * v
                                        : det.delta_c + k_c * v;
  return chi_ladder(shifted, rabi_c, rates);
}

double doppler_fwhm(const ThermalEnsemble& ensemble, double wavelength) {
  if (!(ensemble.temperature > 0.0)) {
    throw InvalidArgument("doppler_fwhm requires temperature > 0");
  }
  if (!(wavelength > 0.0)) throw InvalidArgument("wavelength must be positive");
  return 2.0 * std::sqrt(std::log(2.0)) * ensemble.most_probable_speed / wavelength;
}

double transit_rate(const ThermalEnsemble& ensemble, const GeometryParams& geometry) {
  if (!(geometry.mode_diameter > 0.0)) {
    throw InvalidArgument("mode diameter must be positive");
  }
  if (!(geometry.transit_calibration > 0.0)) {
    throw InvalidArgument("transit calibration must be positive");
  }
  return geometry.transit_calibration * ensemble.most_probable_speed /
         geometry.mode_diameter;
}

const GaussHermiteRule& gauss_hermite(int order) {
  if (order < 1) throw InvalidArgument("quadrature order must be >= 1");
  static std::mutex mutex;
  static std::map<int, GaussHermiteRule> cache;
  std::scoped_lock lock(mutex);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  // Golub-Welsch on the Jacobi matrix of the Hermite recurrence.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = std::sqrt(k / 2.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  GaussHermiteRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double sqrt_pi = std::sqrt(c::kPi);
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = sqrt_pi * v0 * v0;
  }
  // Symmetrize node pairs so even integrands average exactly evenly.
  for (int i = 0; i < order / 2; ++i) {
    const int j = order - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return cache.emplace(order, std::move(rule)).first->second;
}

Complex chi_doppler_averaged(const Detunings& det, double rabi_c,
                             const DecoherenceRates& base_rates,
                             const ThermalEnsemble& ensemble, double k_s,
                             double k_c, bool counter_propagating,
                             int quadrature_order) {
  if (quadrature_order < 8) {
    throw InvalidArgument("quadrature order must be >= 8");
  }
  const GaussHermiteRule& rule = gauss_hermite(quadrature_order);
  const double u = ensemble.most_probable_speed;
  Complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * chi_velocity(det, rabi_c, base_rates, u * rule.nodes[i],
                                          k_s, k_c, counter_propagating);
  }
  return sum / std::sqrt(c::kPi);
}

namespace {

// Weideman's rational approximation of w(z) for Im z >= 0 (N = 48).
Complex faddeeva_upper(Complex z) {
  constexpr int N = 48;
  static const auto coeffs = [] {
    constexpr int M = 2 * N;
    constexpr int M2 = 2 * M;
    const double L = std::sqrt(N / std::sqrt(2.0));
    // Sample f(theta) = exp(-t^2) (L^2 + t^2), t = L tan(theta/2).
    std::array<double, M2> f{};
    f[0] = 0.0;
    for (int k = -M + 1; k <= M - 1; ++k) {
      const double theta = k * c::kPi / M;
      const double t = L * std::tan(theta / 2.0);
      f[static_cast<std::size_t>(k + M)] = std::exp(-t * t) * (L * L + t * t);
    }
    // a = real(fft(fftshift(f))) / M2, direct O(M^2) evaluation at init.
    std::array<double, N> a{};
    for (int j = 1; j <= N; ++j) {
      double acc = 0.0;
      for (int m = 0; m < M2; ++m) {
        const int shifted = (m + M) % M2;
        acc += f[static_cast<std::size_t>(shifted)] *
               std::cos(2.0 * c::kPi * j * m / M2);
      }
      a[static_cast<std::size_t>(N - j)] = acc / M2;  // highest power first
    }
    return a;
  }();
  const double L = std::sqrt(N / std::sqrt(2.0));
  const Complex iz = Complex(0.0, 1.0) * z;
  const Complex Z = (L + iz) / (L - iz);
  Complex p{0.0, 0.0};
  for (double a_k : coeffs) p = p * Z + a_k;
  const Complex d = L - iz;
  return 2.0 * p / (d * d) + (1.0 / std::sqrt(c::kPi)) / d;
}

}  // namespace

Complex faddeeva(Complex z) {
  if (z.imag() >= 0.0) return faddeeva_upper(z);
  // w(z) = 2 exp(-z^2) - w(-z)
  return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

Complex chi_doppler_faddeeva(const Detunings& det, double rabi_c,
                             const DecoherenceRates& base_rates,
                             const ThermalEnsemble& ensemble, double k_s,
                             double k_c, bool counter_propagating) {
  check_rates(base_rates);
  check_rabi(rabi_c);
  if (!(k_s > 0.0) || !(k_c > 0.0)) {
    throw InvalidArgument("wavevectors must be positive");
  }
  const double u = ensemble.most_probable_speed;
  if (!(u > 0.0)) {
    return chi_ladder(det, rabi_c, base_rates);
  }
  const Complex A = base_rates.gamma21 - kI * det.delta_s;
  const Complex B = base_rates.gamma31 - kI * (det.delta_s - det.delta_c);
  const double dk = counter_propagating ? (k_s - k_c) : (k_s + k_c);

  // chi(v) = i g21 (B + i dk v) / (a v^2 + b v + c)
  const double g21 = base_rates.gamma21;
  const Complex a = Complex(-k_s * dk, 0.0);
  const Complex b = kI * (A * dk + B * k_s);
  const Complex cc = A * B + rabi_c * rabi_c / 4.0;

  // Plasma dispersion of a simple pole: (1/(u sqrt(pi))) Int exp(-(v/u)^2)/(v - vj) dv.
  auto pole_average = [&](Complex vj) -> Complex {
    const Complex zeta = vj / u;
    const Complex isqrtpi = kI * std::sqrt(c::kPi);
    if (zeta.imag() >= 0.0) return isqrtpi * faddeeva(zeta) / u;
    return -isqrtpi * faddeeva(-zeta) / u;
  };

  const double scale = std::abs(b) * u + std::abs(cc);
  if (std::abs(a) * u * u < 1e-14 * scale) {
    // Equal wavevectors (or negligible residual): single pole.
    const Complex v1 = -cc / b;
    const Complex r1 = kI * g21 * (B + kI * dk * v1) / b;
    return r1 * pole_average(v1);
  }

  Complex disc = std::sqrt(b * b - 4.0 * a * cc);
  if (std::real(std::conj(b) * disc) < 0.0) disc = -disc;
  const Complex q = -0.5 * (b + disc);
  const Complex v1 = q / a;
  const Complex v2 = cc / q;
  const Complex r1 = kI * g21 * (B + kI * dk * v1) / (a * (v1 - v2));
  const Complex r2 = kI * g21 * (B + kI * dk * v2) / (a * (v2 - v1));
  return r1 * pole_average(v1) + r2 * pole_average(v2);
}

bool gauss_hermite_resolves(const DecoherenceRates& rates,
                            const ThermalEnsemble& ensemble, double k_s,
                            int quadrature_order) {
  const double u = ensemble.most_probable_speed;
  if (!(u > 0.0)) return true;
  // Narrowest velocity-space feature is bounded below by the one-photon
  // coherence width; the rule converges once that pole sits a couple of node
  // spacings off the real axis.
  const double pole_distance = rates.gamma21 / (k_s * u);
  return pole_distance >= 2.1 / std::sqrt(2.0 * quadrature_order);
}

}  // namespace eitsim::lineshape
