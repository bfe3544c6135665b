#include "eitsim/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "eitsim/errors.hpp"

namespace eitsim::calibrate {

const char* fit_parameter_name(FitParameter p) {
  switch (p) {
    case FitParameter::Rabi: return "rabi";
    case FitParameter::OpticalDepth: return "optical_depth";
    case FitParameter::TransitRate: return "transit_rate";
    case FitParameter::DeltaC: return "delta_c";
    case FitParameter::NormalizationScale: return "normalization_scale";
  }
  return "?";
}

namespace {

const atoms::LadderLine& reference_line(const spectra::Scenario& s) {
  if (s.lines.empty()) throw InvalidArgument("scenario has an empty line list");
  const atoms::LadderLine* best = &s.lines.front();
  for (const atoms::LadderLine& line : s.lines) {
    if (std::abs(line.signal_center_offset) < std::abs(best->signal_center_offset)) {
      best = &line;
    }
  }
  return *best;
}

double nominal_value(const spectra::Scenario& s, FitParameter p) {
  switch (p) {
    case FitParameter::Rabi:
      return spectra::resolve_control_rabi(s);
    case FitParameter::OpticalDepth:
      return s.optical_depth;
    case FitParameter::TransitRate: {
      const auto& line = reference_line(s);
      const auto ens = lineshape::make_ensemble(s.temperature, line.iso.atomic_mass);
      return lineshape::transit_rate(ens, s.geometry);
    }
    case FitParameter::DeltaC:
      return s.delta_c;
    case FitParameter::NormalizationScale:
      return s.normalization_scale;
  }
  return 0.0;
}

}  // namespace

spectra::Scenario apply_parameters(const spectra::Scenario& scenario,
                                   const std::map<FitParameter, double>& values) {
  spectra::Scenario s = scenario;
  for (const auto& [p, v] : values) {
    switch (p) {
      case FitParameter::Rabi:
        s.control_power.reset();
        s.control_rabi = v;
        break;
      case FitParameter::OpticalDepth:
        s.optical_depth = v;
        break;
      case FitParameter::TransitRate: {
        const auto& line = reference_line(s);
        const auto ens = lineshape::make_ensemble(s.temperature, line.iso.atomic_mass);
        s.geometry.transit_calibration =
            calibrate_transit_constant(v, ens, s.geometry);
        break;
      }
      case FitParameter::DeltaC:
        s.delta_c = v;
        break;
      case FitParameter::NormalizationScale:
        s.normalization_scale = v;
        break;
    }
  }
  return s;
}

FitResult fit_spectrum(const FitProblem& problem) {
  const std::size_t n_obs = problem.observations.size();
  const std::size_t n_par = problem.free_parameters.size();
  if (n_obs == 0) throw InvalidArgument("empty observation list");
  if (n_par == 0) throw InvalidArgument("no free parameters");
  if (n_obs < 2 * n_par) {
    throw InvalidArgument("under-determined fit: need at least 2 observations per parameter");
  }
  for (const auto& [p, b] : problem.free_parameters) {
    if (!std::isfinite(b.lower) || !std::isfinite(b.upper) || !(b.lower < b.upper)) {
      throw InvalidArgument(std::string("invalid bounds for ") + fit_parameter_name(p));
    }
  }

  std::vector<FitParameter> params;
  std::vector<Bounds> bounds;
  for (const auto& [p, b] : problem.free_parameters) {
    params.push_back(p);
    bounds.push_back(b);
  }

  // Deduplicated evaluation grid shared by every model call.
  std::vector<double> points(n_obs);
  for (std::size_t i = 0; i < n_obs; ++i) points[i] = problem.observations[i].delta_s;
  std::vector<double> unique_points = points;
  std::sort(unique_points.begin(), unique_points.end());
  unique_points.erase(std::unique(unique_points.begin(), unique_points.end()),
                      unique_points.end());
  std::vector<std::size_t> slot(n_obs);
  for (std::size_t i = 0; i < n_obs; ++i) {
    slot[i] = static_cast<std::size_t>(
        std::lower_bound(unique_points.begin(), unique_points.end(), points[i]) -
        unique_points.begin());
  }

  auto clamp = [&](Eigen::VectorXd x) {
    for (std::size_t j = 0; j < n_par; ++j) {
      x(static_cast<Eigen::Index>(j)) =
          std::clamp(x(static_cast<Eigen::Index>(j)), bounds[j].lower, bounds[j].upper);
    }
    return x;
  };

  auto residuals = [&](const Eigen::VectorXd& x) {
    std::map<FitParameter, double> values;
    for (std::size_t j = 0; j < n_par; ++j) {
      values[params[j]] = x(static_cast<Eigen::Index>(j));
    }
    const spectra::Scenario s = apply_parameters(problem.scenario, values);
    const std::vector<double> model = spectra::transmission_at(s, unique_points);
    Eigen::VectorXd r(static_cast<Eigen::Index>(n_obs));
    for (std::size_t i = 0; i < n_obs; ++i) {
      const Observation& o = problem.observations[i];
      r(static_cast<Eigen::Index>(i)) =
          std::sqrt(std::max(o.weight, 0.0)) * (model[slot[i]] - o.transmission);
    }
    return r;
  };

  Eigen::VectorXd x(static_cast<Eigen::Index>(n_par));
  Eigen::VectorXd scale(static_cast<Eigen::Index>(n_par));
  for (std::size_t j = 0; j < n_par; ++j) {
    const auto it = problem.initial_guess.find(params[j]);
    const double x0 = it != problem.initial_guess.end()
                          ? it->second
                          : nominal_value(problem.scenario, params[j]);
    x(static_cast<Eigen::Index>(j)) = x0;
    scale(static_cast<Eigen::Index>(j)) =
        std::max({std::abs(x0), 1e-3 * (bounds[j].upper - bounds[j].lower), 1e-12});
  }
  x = clamp(x);

  Eigen::VectorXd r = residuals(x);
  double rss = r.squaredNorm();
  const double initial_rss = rss;

  FitResult result;
  double lambda = 1e-3;
  int iter = 0;
  for (; iter < problem.max_iterations; ++iter) {
    // Forward-difference Jacobian in scaled parameters.
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(n_obs),
                        static_cast<Eigen::Index>(n_par));
    for (std::size_t j = 0; j < n_par; ++j) {
      const Eigen::Index jj = static_cast<Eigen::Index>(j);
      double h = 1e-6 * scale(jj);
      Eigen::VectorXd xp = x;
      xp(jj) += h;
      if (xp(jj) > bounds[j].upper) {
        xp(jj) = x(jj) - h;
        h = -h;
      }
      jac.col(jj) = (residuals(xp) - r) / h;
    }

    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;

    bool accepted = false;
    double step_norm = 0.0;
    for (int attempt = 0; attempt < 25; ++attempt) {
      Eigen::MatrixXd damped = jtj;
      for (std::size_t j = 0; j < n_par; ++j) {
        const Eigen::Index jj = static_cast<Eigen::Index>(j);
        damped(jj, jj) += lambda * std::max(jtj(jj, jj), 1.0 / (scale(jj) * scale(jj)));
      }
      const Eigen::VectorXd delta = damped.ldlt().solve(-jtr);
      const Eigen::VectorXd x_try = clamp(x + delta);
      const Eigen::VectorXd r_try = residuals(x_try);
      const double rss_try = r_try.squaredNorm();
      if (rss_try < rss) {
        step_norm = 0.0;
        for (std::size_t j = 0; j < n_par; ++j) {
          const Eigen::Index jj = static_cast<Eigen::Index>(j);
          step_norm = std::max(step_norm, std::abs(x_try(jj) - x(jj)) / scale(jj));
        }
        const double improvement = (rss - rss_try) / std::max(rss, 1e-300);
        x = x_try;
        r = r_try;
        rss = rss_try;
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        if (improvement < 1e-10 || step_norm < 1e-8) {
          result.converged = true;
        }
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
    if (!accepted) {
      // Stuck: no damping level improves the residual.
      result.converged = rss <= initial_rss;
      break;
    }
    if (result.converged) break;
  }

  result.iterations =
      iter < problem.max_iterations ? iter + 1 : problem.max_iterations;
  result.residual = rss;
  for (std::size_t j = 0; j < n_par; ++j) {
    result.values[params[j]] = x(static_cast<Eigen::Index>(j));
  }
  return result;
}

}  // namespace eitsim::calibrate
