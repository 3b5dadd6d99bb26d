#include "wgqed/dispersion.hpp"

#include <cmath>
#include <utility>

namespace wgqed {

void ModelParams::validate() const {
  if (!(mass > 0.0)) throw DomainError("mass must be positive");
  if (!(lambda >= 0.0)) throw DomainError("coupling lambda must be nonnegative");
  if (!(distance >= 0.0)) throw DomainError("distance must be nonnegative");
  if (!std::isfinite(omega0)) throw DomainError("omega0 must be finite");
}

bool ModelParams::nonperturbative() const {
  return lambda / std::pow(mass, 1.5) > kPerturbativeCoupling;
}

DispersionRelation::DispersionRelation(std::string name, Map omega, Map derivative, Map inverse,
                                       double threshold, double analytic_halfwidth,
                                       std::vector<Complex> branch_points)
    : name_(std::move(name)),
      omega_(std::move(omega)),
      derivative_(std::move(derivative)),
      inverse_(std::move(inverse)),
      threshold_(threshold),
      analytic_halfwidth_(analytic_halfwidth),
      branch_points_(std::move(branch_points)) {}

DispersionRelation massive_dispersion(double mass) {
  if (!(mass > 0.0)) throw DomainError("massive_dispersion: mass must be positive");
  const double m2 = mass * mass;
  return DispersionRelation(
      "massive", [m2](Complex k) { return std::sqrt(k * k + m2); },
      [m2](Complex k) { return k / std::sqrt(k * k + m2); },
      [mass](Complex z) { return massive_wavenumber(mass, z); }, mass, mass,
      {Complex(mass, 0.0), Complex(-mass, 0.0)});
}

DispersionRelation parabolic_dispersion(double threshold, double curvature_mass) {
  if (!(threshold > 0.0) || !(curvature_mass > 0.0))
    throw DomainError("parabolic_dispersion: threshold and curvature mass must be positive");
  const double m = curvature_mass;
  return DispersionRelation(
      "parabolic", [threshold, m](Complex k) { return threshold + k * k / (2.0 * m); },
      [m](Complex k) { return k / m; },
      [threshold, m](Complex z) { return std::sqrt(2.0 * m * (z - threshold)); }, threshold,
      std::sqrt(2.0 * m * threshold), {Complex(threshold, 0.0)});
}

Complex invert_energy(const DispersionRelation& disp, Complex z) {
  for (const Complex& b : disp.branch_points())
    if (z == b) throw SingularInputError("invert_energy: z is a branch point of k0(z)");
  return disp.inverse(z);
}

Complex massive_wavenumber(double mass, Complex z, Approach side) {
  const Complex w = z * z - mass * mass;
  if (w.imag() == 0.0 && w.real() < 0.0) {
    // z real with |z| < M: pick the limit of the principal root.
    const double q = std::sqrt(-w.real());
    double s = 1.0;
    if (side == Approach::below) s = -1.0;
    if (z.real() < 0.0) s = -s;
    if (z.imag() != 0.0) s = 1.0;  // purely imaginary z: w is already exact
    return {0.0, s * q};
  }
  return std::sqrt(w);
}

std::optional<double> resonant_wavenumber(const ModelParams& params) {
  params.validate();
  const double e = params.omega0 + 2.0 * params.lambda * params.lambda / params.mass;
  if (!(e > params.mass)) return std::nullopt;
  return std::sqrt(e * e - params.mass * params.mass);
}

std::optional<double> resonant_distance(const ModelParams& params, int n) {
  if (n < 1) throw DomainError("resonance index must be positive");
  const auto k = resonant_wavenumber(params);
  if (!k) return std::nullopt;
  return n * kPi / *k;
}

RectangularWaveguide::RectangularWaveguide(double ly, double lz) : ly_(ly), lz_(lz) {
  if (!(ly > 0.0)) throw DomainError("RectangularWaveguide: Ly must be positive");
  if (!(lz > 0.0)) throw DomainError("RectangularWaveguide: Lz must be positive");
}

double RectangularWaveguide::mass() const { return kPi / ly_; }

}  // namespace wgqed
