#include "wgqed/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wgqed/selfenergy.hpp"

namespace wgqed {
namespace {

template <typename Defect>
PoleResult newton(Defect&& defect, Complex z, double mass, Sector s, const SolverOptions& opt) {
  std::vector<Complex> history{z};
  const double h = opt.jacobian_step * mass;
  Complex f = defect(z);
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    const double scale = std::max(mass, std::abs(z));
    if (std::abs(f) <= 1e-15 * scale) break;
    const Complex jac = (defect(z + h) - defect(z - h)) / (2.0 * h);
    Complex step = -f / jac;
    Complex next = z + step;
    Complex fnext = defect(next);
    for (int halving = 0; halving < 30 && std::abs(fnext) > std::abs(f); ++halving) {
      step *= 0.5;
      next = z + step;
      fnext = defect(next);
    }
    z = next;
    f = fnext;
    history.push_back(z);
    if (std::abs(step) <= 1e-14 * scale) {
      ++it;
      break;
    }
  }
  const double scale = std::max(mass, std::abs(z));
  if (!(std::abs(f) <= opt.acceptance * scale)) {
    std::ostringstream msg;
    msg << "find_pole: no convergence after " << it << " iterations (defect " << std::abs(f)
        << " at z = " << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag())
        << "i)";
    throw ConvergenceError(msg.str(), std::move(history));
  }
  PoleResult r;
  r.z = z;
  r.sector = s;
  r.iterations = it;
  r.defect = std::abs(f);
  return r;
}

// Converged poles may sit this far above the axis (relative to max(M, |z|)).
constexpr double kUpperTolerance = 1e-10;

Complex clamp_seed(Complex seed, double mass) {
  const double floor = mass * (1.0 + 1e-4);
  if (seed.real() < floor) seed.real(floor);
  return seed;
}

}  // namespace

const char* to_string(SweepParameter p) { return p == SweepParameter::omega0 ? "omega0" : "distance"; }

Complex pole_equation_defect(const ModelParams& params, Sector s, Complex z,
                             const quad::Options& opt) {
  const double l2 = params.lambda * params.lambda;
  if (l2 == 0.0) return z - params.omega0;
  Complex sig;
  if (z.imag() <= 0.0)
    sig = sigma(params, s, z, Sheet::second, Approach::below, opt).total();
  else
    sig = sigma_second_sheet(params, s, z, opt);
  return z - params.omega0 - l2 * sig;
}

Complex pole_equation_defect(const DispersionRelation& disp, const ModelParams& params, Sector s,
                             Complex z, const quad::Options& opt) {
  params.validate();
  const double l2 = params.lambda * params.lambda;
  if (l2 == 0.0) return z - params.omega0;
  return z - params.omega0 - l2 * sigma_contour(disp, params.distance, s, z, opt);
}

PoleResult find_pole(const ModelParams& params, Sector s, std::optional<Complex> guess,
                     const SolverOptions& opt) {
  params.validate();
  if (params.lambda == 0.0) {
    PoleResult r;
    r.z = Complex(params.omega0, 0.0);
    r.sector = s;
    return r;
  }
  std::vector<Complex> seeds;
  if (guess) {
    if (guess->imag() > 0.0)
      throw DomainError("find_pole: initial guess lies above the real axis (not on sheet II)");
    seeds.push_back(*guess);
  } else {
    try {
      seeds.push_back(perturbative_pole(params, s).z);
    } catch (const std::exception&) {
    }
    for (double depth : {1e-3, 1e-2, 5e-2}) seeds.emplace_back(params.omega0, -depth * params.mass);
  }
  const double l2 = params.lambda * params.lambda;
  auto defect = [&](Complex z) {
    return z - params.omega0 - l2 * sigma_second_sheet(params, s, z, opt.quadrature);
  };
  std::string last_error;
  std::vector<Complex> history;
  for (const Complex& seed : seeds) {
    try {
      PoleResult r = newton(defect, clamp_seed(seed, params.mass), params.mass, s, opt);
      if (r.z.imag() > kUpperTolerance * std::max(params.mass, std::abs(r.z))) {
        last_error = "find_pole: iteration converged above the real axis, off sheet II";
        history = {r.z};
        continue;
      }
      if (r.z.imag() <= 0.0)
        r.defect = std::abs(pole_equation_defect(params, s, r.z, opt.quadrature));
      return r;
    } catch (const ConvergenceError& e) {
      last_error = e.what();
      history = e.history();
    }
  }
  throw ConvergenceError(last_error, std::move(history));
}

PoleResult find_pole(const DispersionRelation& disp, const ModelParams& params, Sector s,
                     Complex guess, const SolverOptions& opt) {
  params.validate();
  if (params.lambda == 0.0) {
    PoleResult r;
    r.z = Complex(params.omega0, 0.0);
    r.sector = s;
    return r;
  }
  if (guess.imag() > 0.0)
    throw DomainError("find_pole: initial guess lies above the real axis (not on sheet II)");
  const double scale = disp.threshold();
  const Complex seed = clamp_seed(guess, scale);
  auto defect = [&](Complex z) { return pole_equation_defect(disp, params, s, z, opt.quadrature); };
  PoleResult r = newton(defect, seed, scale, s, opt);
  if (r.z.imag() > kUpperTolerance * std::max(scale, std::abs(r.z)))
    throw ConvergenceError("find_pole: iteration converged above the real axis, off sheet II", {r.z});
  return r;
}

PoleTrajectory trace_trajectory(const ModelParams& params, Sector s, SweepParameter parameter,
                                std::span<const double> grid, const SolverOptions& opt) {
  if (grid.size() < 2) throw DomainError("trace_trajectory: the sweep needs at least 2 points");
  const bool increasing = grid[1] > grid[0];
  for (std::size_t i = 1; i < grid.size(); ++i)
    if ((grid[i] > grid[i - 1]) != increasing || grid[i] == grid[i - 1])
      throw DomainError("trace_trajectory: the sweep grid must be strictly monotone");

  PoleTrajectory traj;
  traj.parameter = parameter;
  traj.sector = s;
  traj.grid.assign(grid.begin(), grid.end());
  std::optional<Complex> seed;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const ModelParams p = parameter == SweepParameter::omega0 ? params.with_omega0(grid[i])
                                                               : params.with_distance(grid[i]);
    try {
      PoleResult r;
      try {
        r = find_pole(p, s, seed, opt);
      } catch (const ConvergenceError&) {
        if (!seed) throw;
        r = find_pole(p, s, std::nullopt, opt);
      }
      traj.steps.push_back(traj.poles.empty() ? 0.0 : std::abs(r.z - traj.poles.back().z));
      seed = r.z;
      // A converged pole sitting marginally above the axis re-seeds on it.
      if (seed->imag() > 0.0) seed->imag(0.0);
      traj.poles.push_back(r);
    } catch (const std::exception& e) {
      traj.failure_index = i;
      traj.failure_message = e.what();
      break;
    }
  }
  return traj;
}

PoleResult perturbative_pole(const ModelParams& params, Sector s) {
  params.validate();
  const double m = params.mass;
  const double l2 = params.lambda * params.lambda;
  const double d = params.distance;
  const double sg = sign(s);
  PoleResult r;
  r.sector = s;
  if (l2 == 0.0) {
    r.z = Complex(params.omega0, 0.0);
    return r;
  }
  const double kfloor = 1e-6 * m;
  auto wavenumber = [&](double e) {
    const double k2 = e * e - m * m;
    if (!(k2 > kfloor * kfloor))
      throw DomainError("perturbative_pole: pole too close to the branch point z = M");
    return std::sqrt(k2);
  };
  auto rhs = [&](double e) {
    const double k = wavenumber(e);
    return params.omega0 + 2.0 * l2 / k * std::log((e + k) / m) + sg * 2.0 * kPi * l2 * std::sin(k * d) / k;
  };
  double e = params.omega0;
  double theta = 1.0;
  double prev_change = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < 500; ++it) {
    const double next = (1.0 - theta) * e + theta * rhs(e);
    const double change = std::abs(next - e);
    e = next;
    if (change <= 1e-15 * std::max(m, std::abs(e))) break;
    if (change > prev_change) theta *= 0.5;
    prev_change = change;
  }
  if (it == 500) throw ConvergenceError("perturbative_pole: fixed point not reached", {Complex(e, 0.0)});
  const double k = wavenumber(e);
  const double gamma = 4.0 * kPi * l2 * (1.0 + sg * std::cos(k * d)) / k;
  r.z = Complex(e, -0.5 * gamma);
  r.iterations = it;
  r.defect = std::abs(pole_equation_defect(params, s, r.z));
  return r;
}

double rate_ratio(double k_bar, int n, double d_actual) {
  if (!(k_bar > 0.0)) throw DomainError("rate_ratio: resonant wavenumber must be positive");
  if (n < 1) throw DomainError("rate_ratio: resonance index must be positive");
  const double dn = n * kPi / k_bar;
  return 0.25 * k_bar * k_bar * (d_actual - dn) * (d_actual - dn);
}

double rate_ratio(const ModelParams& params, int n, double d_actual) {
  const auto k = resonant_wavenumber(params);
  if (!k) throw DomainError("rate_ratio: no resonant wavenumber below threshold");
  return rate_ratio(*k, n, d_actual);
}

}  // namespace wgqed
