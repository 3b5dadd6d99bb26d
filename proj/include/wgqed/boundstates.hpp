// Bound states of the emitter pair: resonant states in the continuum at
// d_n = n pi / k_bar, their population, field profile and the asymptotic
// atomic state, plus the off-resonant (below threshold) doublet.
#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wgqed/dispersion.hpp"
#include "wgqed/quadrature.hpp"
#include "wgqed/types.hpp"

namespace wgqed {

struct ResonantBoundState {
  int n = 1;
  Sector sector = Sector::plus;
  double omega0 = 0.0;
  double lambda = 0.0;
  double mass = 1.0;
  /// sqrt((omega0 + 2 lambda^2/M)^2 - M^2).
  double k_bar_leading = 0.0;
  /// Self-consistent wavenumber, k_bar = k0(E).
  double k_bar = 0.0;
  double d_n = 0.0;
  double energy = 0.0;
  /// Closed form (1 + n pi 2 pi lambda^2 M / k_bar^3)^-1.
  double p_n = 1.0;
  /// 1 / (1 + lambda^2 int dk (1 + s cos(k d_n)) / (omega (E - omega)^2)).
  double p_n_quadrature = 1.0;
  /// |E - omega0 - lambda^2 Sigma_s(E + i0; d_n)| at the returned energy.
  double residual = 0.0;
  int iterations = 0;

  [[nodiscard]] double concurrence() const { return 0.5 * p_n * p_n; }
  [[nodiscard]] double concurrence_quadrature() const {
    return 0.5 * p_n_quadrature * p_n_quadrature;
  }
};

/// Resonant state for the massive dispersion; params.distance is ignored.
/// Throws DomainError when omega0 <= M - 2 lambda^2 / M (no real k_bar).
ResonantBoundState solve_resonant_state(const ModelParams& params, int n,
                                        const quad::Options& opt = {});

/// Same for a generic dispersion. p_n is the quadrature value (there is no
/// closed form); mass holds the dispersion threshold.
ResonantBoundState solve_resonant_state(const DispersionRelation& disp, const ModelParams& params,
                                        int n, const quad::Options& opt = {});

struct EnergyDensityProfile {
  std::vector<double> x;
  std::vector<double> density;
  /// Amplitude of the sin^2(k_bar x) modulation, 2 lambda^2 E^2 p_n / k_bar^2.
  double prefactor = 0.0;
  double k_bar = 0.0;
  double d_n = 0.0;
};

/// prefactor * sin^2(k_bar x) on [0, d_n], zero outside.
EnergyDensityProfile energy_density(const ResonantBoundState& state, std::span<const double> x);

/// Uniform grid over [-margin, d_n + margin]; margin < 0 selects 0.2 d_n.
EnergyDensityProfile energy_density(const ResonantBoundState& state, int points,
                                    double margin = -1.0);

/// Two-qubit density matrix in the basis |g_A g_B>, |g_A e_B>, |e_A g_B>, |e_A e_B>.
using DensityMatrix = Eigen::Matrix4cd;

struct AsymptoticAtomicState {
  DensityMatrix rho;
  double bell_weight = 0.0;
  double ground_weight = 1.0;
  Sector sector = Sector::plus;
  double concurrence = 0.0;
};

/// rho(inf) = (p^2/2) |Psi^s><Psi^s| + (1 - p^2/2) |gg><gg| after relaxation
/// from |e_A g_B; vac>.
AsymptoticAtomicState asymptotic_state(const ResonantBoundState& state);

/// Checks that params.distance is the n-th resonant distance within
/// rel_tolerance; otherwise throws DomainError pointing at the oracle. The
/// default admits the leading-order d_n, where gamma_s / gamma_u ~ 1e-6.
AsymptoticAtomicState asymptotic_state(const ModelParams& params, int n,
                                       double rel_tolerance = 1e-3);

struct OffResonantState {
  double alpha = 0.0;
  double beta = 0.0;
  /// Evanescent decay constant sqrt(M^2 - omega0^2).
  double q = 0.0;
  /// Ground state, c_A = c_B.
  double e_plus = 0.0;
  /// c_A = -c_B.
  double e_minus = 0.0;
  /// 2 pi / |beta|.
  double period = 0.0;
  bool nonperturbative = false;
};

/// alpha = -(lambda^2/q)(pi + 2 atan(omega0/q)), beta = -(lambda^2/q) 2 pi e^{-q d},
/// E+- = omega0 + alpha +- beta. Throws DomainError for omega0 >= M.
OffResonantState off_resonant_states(const ModelParams& params);

struct ThresholdReport {
  /// Excitation energy at which the singlet bound state sits at E = M.
  double singlet_omega0 = 0.0;
  /// The triplet's single-excitation population is suppressed near threshold.
  bool triplet_suppressed = true;
  std::string triplet_note;
};

ThresholdReport threshold_states(const ModelParams& params);

}  // namespace wgqed
