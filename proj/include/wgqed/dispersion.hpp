// Photon dispersion relations omega(k) and their inversion.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wgqed/types.hpp"

namespace wgqed {

/// A one-dimensional dispersion relation supplied as a bundle: the complex
/// continuation of omega(k), its derivative, the inverse k0(z) (the root of
/// omega(k) = z with nonnegative real part) and the threshold omega_min.
///
/// omega must be even, increasing in |k| and analytic with no zeros inside the
/// strip |Im k| < analytic_halfwidth, and in the half-planes |Re k| > |k0| of
/// the upper half plane (the contour-deformed self-energy relies on both).
class DispersionRelation {
 public:
  using Map = std::function<Complex(Complex)>;

  DispersionRelation(std::string name, Map omega, Map derivative, Map inverse, double threshold,
                     double analytic_halfwidth, std::vector<Complex> branch_points);

  [[nodiscard]] double omega(double k) const { return omega_(Complex(k, 0.0)).real(); }
  [[nodiscard]] Complex omega(Complex k) const { return omega_(k); }
  [[nodiscard]] double derivative(double k) const { return derivative_(Complex(k, 0.0)).real(); }
  [[nodiscard]] Complex derivative(Complex k) const { return derivative_(k); }
  /// Principal inverse, Re k0 >= 0. No branch-point check; see invert_energy.
  [[nodiscard]] Complex inverse(Complex z) const { return inverse_(z); }

  [[nodiscard]] double threshold() const { return threshold_; }
  [[nodiscard]] double analytic_halfwidth() const { return analytic_halfwidth_; }
  [[nodiscard]] const std::vector<Complex>& branch_points() const { return branch_points_; }
  [[nodiscard]] const std::string& name() const { return name_; }

 private:
  std::string name_;
  Map omega_, derivative_, inverse_;
  double threshold_;
  double analytic_halfwidth_;
  std::vector<Complex> branch_points_;
};

/// omega(k) = sqrt(k^2 + M^2), principal square root everywhere.
DispersionRelation massive_dispersion(double mass);

/// omega(k) = M + k^2 / (2 m): a nonrelativistic band with threshold M and
/// curvature mass m. Used as the alternative to the massive relation.
DispersionRelation parabolic_dispersion(double threshold, double curvature_mass);

/// k0(z) for the dispersion, Re k0 >= 0. Throws SingularInputError at a branch
/// point.
Complex invert_energy(const DispersionRelation& disp, Complex z);

/// sqrt(z^2 - M^2) with the principal determination; on the real segment
/// |z| < M the side tag selects the limit from above or below.
Complex massive_wavenumber(double mass, Complex z, Approach side = Approach::from_sign);

/// Leading-order resonant wavenumber sqrt((omega0 + 2 lambda^2/M)^2 - M^2),
/// absent below threshold.
std::optional<double> resonant_wavenumber(const ModelParams& params);

/// d_n = n pi / k for the leading-order resonant wavenumber.
std::optional<double> resonant_distance(const ModelParams& params, int n);

/// Rectangular waveguide of transverse sides Ly, Lz whose TE10 cutoff sets
/// the mass M = pi / Ly.
///
/// The model text orders the sides as Ly < Lz while the waveguide derivation
/// assumes Ly > Lz; both attach the cutoff to Ly, and so does this type. No
/// ordering between Ly and Lz is enforced.
class RectangularWaveguide {
 public:
  RectangularWaveguide(double ly, double lz);

  [[nodiscard]] double ly() const { return ly_; }
  [[nodiscard]] double lz() const { return lz_; }
  [[nodiscard]] double mass() const;
  [[nodiscard]] DispersionRelation dispersion() const { return massive_dispersion(mass()); }

 private:
  double ly_, lz_;
};

}  // namespace wgqed
