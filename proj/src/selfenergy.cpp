#include "wgqed/selfenergy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace wgqed {
namespace {

quad::Options tight(const quad::Options& opt) {
  quad::Options o = opt;
  o.rel_tol = std::min(o.rel_tol, 1e-12);
  return o;
}

template <typename R>
Complex checked(const R& r, const char* what) {
  if (!r.converged) {
    std::ostringstream msg;
    msg << what << ": quadrature did not converge (error estimate " << r.error << " after "
        << r.evaluations << " evaluations)";
    throw NumericalFailure(msg.str(), r.error, r.evaluations);
  }
  return r.value;
}

// Wavenumber on the branch continued from E > M into the lower half plane;
// across (0, M) and above (M, inf) it continues analytically.
Complex second_sheet_wavenumber(double mass, Complex z) {
  if (z.imag() <= 0.0) return massive_wavenumber(mass, z, Approach::below);
  const Complex k = std::sqrt(z * z - mass * mass);
  return z.real() >= mass ? k : -k;
}

bool on_cut(double mass, Complex z) { return z.imag() == 0.0 && z.real() >= mass; }

// Integral over u in [0, U] of 2z w(u) / (z^2 + M^2 sinh^2 u) with chi = M cosh u.
template <typename Weight>
Complex cut_integral(double mass, Complex z, Weight weight, double abs_floor,
                     const quad::Options& opt, const char* what) {
  if (z == Complex(0.0, 0.0)) return {};
  const double m2 = mass * mass;
  const Complex z2 = z * z;
  const double upper = std::asinh(std::abs(z) / mass) + 22.0;
  auto integrand = [&](double u) {
    const double sh = std::sinh(u);
    return 2.0 * z * weight(u) / (z2 + m2 * sh * sh);
  };
  std::vector<double> breaks;
  // Near-singular point where z^2 + M^2 sinh^2 u ~ 0 (z close to the imaginary axis).
  const double ustar = std::abs(std::asinh(kI * z / mass).real());
  if (ustar > 0.0 && ustar < upper) breaks.push_back(ustar);
  quad::Options o = tight(opt);
  o.abs_tol = abs_floor;
  Complex value = checked(quad::integrate(integrand, 0.0, upper, o, breaks), what);
  // 1/sinh^2 tail beyond U.
  value += 2.0 * z * weight(upper) / m2 * (1.0 / std::tanh(upper) - 1.0);
  return value;
}

void require_regular(double mass, Complex z) {
  if (z == Complex(mass, 0.0) || z == Complex(-mass, 0.0))
    throw SingularInputError("self-energy evaluated at a branch point z = +-M");
}

}  // namespace

double spectral_density(const ModelParams& params, Sector s, double energy) {
  params.validate();
  if (!(energy > params.mass)) {
    if (energy == params.mass && !(s == Sector::minus && params.distance == 0.0))
      return std::numeric_limits<double>::infinity();
    return 0.0;
  }
  const double k = std::sqrt(energy * energy - params.mass * params.mass);
  return (1.0 + sign(s) * std::cos(k * params.distance)) / k;
}

Complex spectral_density(const ModelParams& params, Sector s, Complex z) {
  params.validate();
  require_regular(params.mass, z);
  const Complex k = second_sheet_wavenumber(params.mass, z);
  return (1.0 + sign(s) * std::cos(k * params.distance)) / k;
}

double spectral_density(const DispersionRelation& disp, double distance, Sector s, double energy) {
  if (!(energy > disp.threshold())) return 0.0;
  const double k = disp.inverse(Complex(energy, 0.0)).real();
  return (1.0 + sign(s) * std::cos(k * distance)) / (energy * disp.derivative(k));
}

Complex sigma_pole(const ModelParams& params, Sector s, Complex z, Approach side) {
  params.validate();
  require_regular(params.mass, z);
  if (z.real() <= 0.0) return {};
  bool upper = z.imag() > 0.0;
  if (z.imag() == 0.0) {
    if (side == Approach::from_sign) {
      if (on_cut(params.mass, z))
        throw SingularInputError("real energy on the cut needs an explicit +-i0 side tag");
      upper = true;  // below threshold both limits coincide
    } else {
      upper = side == Approach::above;
    }
  }
  const Complex k =
      massive_wavenumber(params.mass, z, upper ? Approach::above : Approach::below);
  const double sg = sign(s);
  const double d = params.distance;
  if (upper) return -2.0 * kPi * kI * (1.0 + sg * std::exp(kI * k * d)) / k;
  return 2.0 * kPi * kI * (1.0 + sg * std::exp(-kI * k * d)) / k;
}

Complex sigma_cut_closed_form(double mass, Complex z) {
  if (!(mass > 0.0)) throw DomainError("mass must be positive");
  if (z == Complex(-mass, 0.0)) throw SingularInputError("closed form singular at z = -M");
  const Complex eps = (z - mass) / mass;
  if (std::abs(eps) < 1e-6) return 2.0 / mass * (1.0 - eps / 3.0);
  const Complex k = massive_wavenumber(mass, z);
  return 2.0 * std::log((z + k) / mass) / k;
}

Complex sigma_cut_correction(const ModelParams& params, Complex z, const quad::Options& opt) {
  params.validate();
  require_regular(params.mass, z);
  const double md = params.mass * params.distance;
  auto weight = [md](double u) { return std::exp(-md * std::cosh(u)); };
  return cut_integral(params.mass, z, weight, 1e-300, opt, "sigma_cut_correction");
}

Complex sigma_cut(const ModelParams& params, Sector s, Complex z, const quad::Options& opt) {
  params.validate();
  require_regular(params.mass, z);
  auto one = [](double) { return 1.0; };
  const Complex base = cut_integral(params.mass, z, one, 1e-16, opt, "sigma_cut");
  return base + sign(s) * sigma_cut_correction(params, z, opt);
}

SelfEnergyValue sigma(const ModelParams& params, Sector s, Complex z, Sheet sheet, Approach side,
                      const quad::Options& opt) {
  params.validate();
  require_regular(params.mass, z);
  SelfEnergyValue v;
  v.z = z;
  v.sector = s;
  v.sheet = sheet;
  if (sheet == Sheet::second) {
    if (z.imag() > 0.0 || (z.imag() == 0.0 && side == Approach::above))
      throw DomainError("second-sheet self-energy is defined for Im z <= 0");
    side = Approach::below;
  }
  v.cut_part = sigma_cut(params, s, z, opt);
  v.pole_part = sigma_pole(params, s, z, side);
  if (sheet == Sheet::second) v.continuation = -4.0 * kPi * kI * spectral_density(params, s, z);
  return v;
}

Complex sigma_second_sheet(const ModelParams& params, Sector s, Complex z,
                           const quad::Options& opt) {
  params.validate();
  require_regular(params.mass, z);
  if (!(z.real() > 0.0)) throw DomainError("second-sheet continuation requires Re z > 0");
  const Complex k = second_sheet_wavenumber(params.mass, z);
  return sigma_cut(params, s, z, opt) -
         2.0 * kPi * kI * (1.0 + sign(s) * std::exp(kI * k * params.distance)) / k;
}

Complex sigma_contour(const DispersionRelation& disp, double distance, Sector s, Complex z,
                      const quad::Options& opt) {
  if (!(distance >= 0.0)) throw DomainError("distance must be nonnegative");
  for (const Complex& b : disp.branch_points())
    if (z == b) throw SingularInputError("sigma_contour: z is a branch point");
  const Complex k0 = disp.inverse(z);
  const double a = k0.real();
  const double b = k0.imag();
  if (!(a > 0.0)) throw DomainError("sigma_contour requires Re k0(z) > 0 (z above threshold)");

  // Contour k(t) = t - i c tanh(t / w): below +k0, above -k0.
  const double w = 0.25 * a;
  double c = std::max(4.0 * std::abs(b), 0.2 * a);
  c = std::min(c, 0.5 * disp.analytic_halfwidth());
  if (b < 0.0 && c * std::tanh(a / w) <= 1.5 * std::abs(b))
    throw DomainError("sigma_contour: pole too far below the real axis for the contour strip");

  auto path = [=](double t) { return Complex(t, -c * std::tanh(t / w)); };
  auto dpath = [=](double t) {
    const double sech = 1.0 / std::cosh(t / w);
    return Complex(1.0, -c * sech * sech / w);
  };
  auto f = [&](Complex k) {
    const Complex om = disp.omega(k);
    return 1.0 / (om * (z - om));
  };

  quad::Options o = tight(opt);
  o.abs_tol = 1e-16;
  const double tmax = 2.0 * a + 5.0 * c + 2.0 * disp.threshold() + 2.0;
  const std::vector<double> breaks{-a, 0.0, a};

  auto plain = [&](double t) { return f(path(t)) * dpath(t); };
  Complex smooth = checked(quad::integrate(plain, -tmax, tmax, o, breaks), "sigma_contour");
  smooth += checked(quad::integrate_to_infinity(plain, tmax, tmax, o), "sigma_contour");
  smooth += checked(quad::integrate_to_infinity([&](double t) { return plain(-t); }, tmax, tmax, o),
                    "sigma_contour");
  if (distance == 0.0) return smooth * (1.0 + sign(s));

  const double d = distance;
  auto wavy = [&](double t) {
    const Complex k = path(t);
    return f(k) * std::exp(kI * k * d) * dpath(t);
  };
  Complex osc = checked(quad::integrate(wavy, -tmax, tmax, o, breaks), "sigma_contour");
  // Tails rotated onto vertical rays k = k(+-T) + i y, where e^{ikd} decays.
  const Complex right = path(tmax);
  const Complex left = path(-tmax);
  const double scale = 1.0 / d;
  auto ray = [&](Complex start) {
    return [&, start](double y) {
      const Complex k = start + Complex(0.0, y);
      return f(k) * std::exp(kI * k * d) * kI;
    };
  };
  osc += checked(quad::integrate_to_infinity(ray(right), 0.0, scale, o), "sigma_contour");
  osc -= checked(quad::integrate_to_infinity(ray(left), 0.0, scale, o), "sigma_contour");
  return smooth + sign(s) * osc;
}

}  // namespace wgqed
