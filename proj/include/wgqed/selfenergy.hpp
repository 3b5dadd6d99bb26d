// Symmetric/antisymmetric self-energies Sigma_s(z) of the emitter pair, their
// cut + pole decomposition, the spectral densities and the continuation onto
// the second Riemann sheet.
//
//   Sigma_s(z) = int dk (1 + s e^{ikd}) / (omega(k) (z - omega(k)))
//              = 2 int_M^inf dE kappa_s(E) / (z - E)
//
// so the jump across the cut [M, inf) is Sigma_s(E - i0) - Sigma_s(E + i0)
// = 4 pi i kappa_s(E) and the second-sheet branch is
// Sigma_s^II(z) = Sigma_s(z) - 4 pi i kappa_s(z).
#pragma once

#include "wgqed/dispersion.hpp"
#include "wgqed/quadrature.hpp"
#include "wgqed/types.hpp"

namespace wgqed {

/// kappa_s(E) = (1 + s cos(sqrt(E^2-M^2) d)) / sqrt(E^2-M^2) for E > M, else 0.
/// Diverges at E = M unless the numerator vanishes there (s = -1); the
/// endpoint is integrable and left to the caller.
double spectral_density(const ModelParams& params, Sector s, double energy);

/// Analytic continuation of kappa_s into the lower half plane, evaluated with
/// the second-sheet wavenumber (Im k <= 0).
Complex spectral_density(const ModelParams& params, Sector s, Complex z);

/// Spectral density for a generic dispersion:
/// (1 + s cos(k0 d)) / (E omega'(k0)), zero below threshold.
double spectral_density(const DispersionRelation& disp, double distance, Sector s, double energy);

/// Residue contribution. Im z > 0 (or real z tagged `above`):
/// -2 pi i (1 + s e^{i k0 d}) / k0; Im z < 0 (or `below`):
/// +2 pi i (1 + s e^{-i k0 d}) / k0. Zero for Re z <= 0, where omega(k) = z
/// has no root on the principal branch.
Complex sigma_pole(const ModelParams& params, Sector s, Complex z,
                   Approach side = Approach::from_sign);

/// Cut contribution 2z int_M^inf dchi (1 + s e^{-chi d}) /
/// (sqrt(chi^2-M^2)(z^2+chi^2-M^2)), evaluated numerically after chi = M cosh u,
/// keeping the exponentially small e^{-chi d} term.
Complex sigma_cut(const ModelParams& params, Sector s, Complex z, const quad::Options& opt = {});

/// 2 Log((z + sqrt(z^2-M^2))/M) / sqrt(z^2-M^2): the cut term without its
/// O(e^{-Md}) piece. Equals 2/M at z = M.
Complex sigma_cut_closed_form(double mass, Complex z);

/// The dropped piece alone: 2z int_M^inf dchi e^{-chi d} / (sqrt(chi^2-M^2)(z^2+chi^2-M^2)).
/// sigma_cut = (numerical base) + s * sigma_cut_correction.
Complex sigma_cut_correction(const ModelParams& params, Complex z, const quad::Options& opt = {});

struct SelfEnergyValue {
  Complex z;
  Sector sector = Sector::plus;
  Sheet sheet = Sheet::first;
  Complex cut_part;
  Complex pole_part;
  /// -4 pi i kappa_s(z) on sheet II, zero on sheet I.
  Complex continuation;

  [[nodiscard]] Complex total() const { return cut_part + pole_part + continuation; }
};

/// Sigma_s(z) on the requested sheet. Real z on the cut needs a side tag on
/// sheet I. Sheet II is defined for Im z <= 0 (continuation from above
/// through the cut) and throws DomainError otherwise.
SelfEnergyValue sigma(const ModelParams& params, Sector s, Complex z, Sheet sheet,
                      Approach side = Approach::from_sign, const quad::Options& opt = {});

/// The second-sheet function as one analytic expression near the cut,
/// Sigma_cut(z) - 2 pi i (1 + s e^{ikd}) / k, valid on both sides of the real
/// axis for Re z > 0 (above (M, inf) it coincides with sheet I). Root finders
/// use it so iterates that overshoot the axis stay on a smooth function.
Complex sigma_second_sheet(const ModelParams& params, Sector s, Complex z,
                           const quad::Options& opt = {});

/// Sigma_s for an arbitrary dispersion by contour deformation in the k plane.
/// Im z > 0 gives sheet I; Im z <= 0 gives the continuation from above
/// (sheet II, and Sigma(E + i0) on the real axis). Requires Re k0(z) > 0.
Complex sigma_contour(const DispersionRelation& disp, double distance, Sector s, Complex z,
                      const quad::Options& opt = {});

}  // namespace wgqed
