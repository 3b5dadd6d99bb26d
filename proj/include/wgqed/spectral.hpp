// Complex poles of the resolvent on the second Riemann sheet: the pole
// equation z = omega0 + lambda^2 Sigma_s^II(z), a Newton solver, pole
// trajectories under parameter sweeps and the perturbative rate formulas.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wgqed/dispersion.hpp"
#include "wgqed/quadrature.hpp"
#include "wgqed/types.hpp"

namespace wgqed {

/// A pole z_p = E_p - i gamma_p / 2.
struct PoleResult {
  Complex z;
  Sector sector = Sector::plus;
  int iterations = 0;
  /// |z - omega0 - lambda^2 Sigma_s^II(z)| at the returned point.
  double defect = 0.0;
  std::optional<double> residue;

  [[nodiscard]] double energy() const { return z.real(); }
  [[nodiscard]] double gamma() const { return -2.0 * z.imag() + 0.0; }
};

struct SolverOptions {
  /// Central-difference step for the Jacobian, in units of M.
  double jacobian_step = 1e-7;
  int max_iterations = 100;
  /// Acceptance: defect <= acceptance * max(M, |z|).
  double acceptance = 1e-10;
  quad::Options quadrature{};
};

/// z - omega0 - lambda^2 Sigma_s^II(z) for the massive dispersion. Im z <= 0
/// uses the sheet-II composition Sigma - 4 pi i kappa; a small Im z > 0 uses the
/// analytic continuation of the same branch.
Complex pole_equation_defect(const ModelParams& params, Sector s, Complex z,
                             const quad::Options& opt = {});

/// Same for a generic dispersion via the contour-deformed self-energy.
Complex pole_equation_defect(const DispersionRelation& disp, const ModelParams& params, Sector s,
                             Complex z, const quad::Options& opt = {});

/// Newton iteration with a numerically differenced Jacobian and step halving.
/// Without a guess the perturbative pole seeds the iteration, followed by
/// seeds omega0 - i {1e-3, 1e-2, 5e-2} M if it fails. Seeds are clamped to
/// Re z >= M (1 + 1e-4); a guess with Im z > 0 is rejected, and so is a root
/// above the axis by more than 1e-10 max(M, |z|). Throws ConvergenceError
/// after max_iterations.
PoleResult find_pole(const ModelParams& params, Sector s, std::optional<Complex> guess = {},
                     const SolverOptions& opt = {});

PoleResult find_pole(const DispersionRelation& disp, const ModelParams& params, Sector s,
                     Complex guess, const SolverOptions& opt = {});

enum class SweepParameter { omega0, distance };
const char* to_string(SweepParameter p);

struct PoleTrajectory {
  SweepParameter parameter = SweepParameter::omega0;
  Sector sector = Sector::plus;
  std::vector<double> grid;
  /// One converged pole per grid point, up to the failure index.
  std::vector<PoleResult> poles;
  /// |z_i - z_{i-1}| between consecutive converged poles (first entry 0).
  std::vector<double> steps;
  std::optional<std::size_t> failure_index;
  std::string failure_message;

  [[nodiscard]] bool complete() const { return !failure_index.has_value(); }
};

/// Continuation along a monotone grid (>= 2 points): the first point is seeded
/// perturbatively, every later one by the previous pole, falling back to the
/// default seeds when that fails. A convergence loss returns the partial
/// trajectory with failure_index set.
PoleTrajectory trace_trajectory(const ModelParams& params, Sector s, SweepParameter parameter,
                                std::span<const double> grid, const SolverOptions& opt = {});

/// Decoupled real/imaginary pole equations:
///   E = omega0 + (2 lambda^2/k) Log((E + k)/M) + s 2 pi lambda^2 sin(k d)/k,
///   gamma = 4 pi lambda^2 (1 + s cos(k d)) / k,   k = sqrt(E^2 - M^2),
/// solved by damped fixed-point iteration. defect holds the full pole-equation
/// defect at the result. Throws DomainError near threshold (k -> 0) and
/// ConvergenceError if the iteration stalls.
PoleResult perturbative_pole(const ModelParams& params, Sector s);

/// gamma_s / gamma_u = k^2 (d - d_n)^2 / 4 with d_n = n pi / k and k the
/// leading-order resonant wavenumber. Throws DomainError below threshold.
double rate_ratio(const ModelParams& params, int n, double d_actual);

/// Same figure of merit for an explicitly given resonant wavenumber.
double rate_ratio(double k_bar, int n, double d_actual);

}  // namespace wgqed
