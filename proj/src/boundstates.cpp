#include "wgqed/boundstates.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "wgqed/entanglement.hpp"
#include "wgqed/selfenergy.hpp"

namespace wgqed {
namespace {

constexpr int kMaxIterations = 200;

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// int dk (1 + s cos(k d_n)) / (omega (E - omega)^2) over the real line. At
// resonance 1 + s cos(k d_n) = 2 sin^2((k - k_bar) d_n / 2), which cancels the
// double zero of (E - omega)^2 at k_bar; ratio(k) = (k - k_bar) / (E - omega(k)).
template <typename Omega, typename Ratio>
double normalization_integral(Omega omega, Ratio ratio, double k_bar, double d, double scale,
                              const quad::Options& opt) {
  auto h = [&](double k) {
    const double r = ratio(k);
    const double sc = sinc(0.5 * (k - k_bar) * d);
    return 0.5 * d * d * sc * sc * r * r / omega(k);
  };
  const double upper = k_bar + 200.0 * scale;
  std::vector<double> breaks;
  const double period = 2.0 * kPi / d;
  for (double k = k_bar - std::floor(k_bar / period) * period; k < upper; k += period)
    breaks.push_back(k);
  quad::Options o = opt;
  o.max_intervals = std::max(o.max_intervals, 4 * static_cast<int>(breaks.size()) + 100);
  auto body = quad::integrate(h, 0.0, upper, o, breaks);
  // Beyond the cutoff sin^2 is replaced by its mean.
  auto mean = [&](double k) {
    const double r = ratio(k);
    return r * r / ((k - k_bar) * (k - k_bar) * omega(k));
  };
  auto tail = quad::integrate_to_infinity(mean, upper, upper, o);
  if (!body.converged || !tail.converged)
    throw NumericalFailure("normalization integral did not converge", body.error + tail.error,
                           body.evaluations + tail.evaluations);
  return 2.0 * (body.value + tail.value);
}

void check_index(int n) {
  if (n < 1) throw DomainError("resonance index n must be a positive integer");
}

}  // namespace

ResonantBoundState solve_resonant_state(const ModelParams& params, int n,
                                        const quad::Options& opt) {
  params.validate();
  check_index(n);
  const double m = params.mass;
  const double l2 = params.lambda * params.lambda;
  const auto k_lead = resonant_wavenumber(params);
  if (!k_lead) {
    std::ostringstream msg;
    msg << "no resonant wavenumber: omega0 = " << params.omega0 << " <= M - 2 lambda^2/M = "
        << m - 2.0 * l2 / m << "; use off_resonant_states below threshold";
    throw DomainError(msg.str());
  }
  ResonantBoundState st;
  st.n = n;
  st.sector = resonant_sector(n);
  st.omega0 = params.omega0;
  st.lambda = params.lambda;
  st.mass = m;
  st.k_bar_leading = *k_lead;

  // E = omega0 + lambda^2 Sigma_cut(E; d = n pi / k(E)): the pole part
  // vanishes identically on resonance.
  auto wavenumber = [&](double e) {
    if (!(e > m))
      throw DomainError("resonant state energy falls below threshold; use off_resonant_states");
    return std::sqrt(e * e - m * m);
  };
  auto rhs = [&](double e) {
    const double d = n * kPi / wavenumber(e);
    return params.omega0 + l2 * sigma_cut(params.with_distance(d), st.sector, Complex(e, 0.0), opt).real();
  };
  double e = params.omega0 + 2.0 * l2 / m;
  int it = 0;
  if (l2 > 0.0) {
    for (; it < kMaxIterations; ++it) {
      const double next = rhs(e);
      const double change = std::abs(next - e);
      e = next;
      if (change <= 1e-15 * std::max(m, e)) break;
    }
    if (it == kMaxIterations)
      throw ConvergenceError("solve_resonant_state: fixed point not reached", {Complex(e, 0.0)});
  }
  st.iterations = it;
  st.energy = e;
  st.k_bar = wavenumber(e);
  st.d_n = n * kPi / st.k_bar;
  const ModelParams at = params.with_distance(st.d_n);
  if (l2 > 0.0) {
    const Complex sig = sigma(at, st.sector, Complex(e, 0.0), Sheet::first, Approach::above, opt).total();
    st.residual = std::abs(Complex(e - params.omega0, 0.0) - l2 * sig);
  }

  const double kb = st.k_bar;
  st.p_n = 1.0 / (1.0 + n * kPi * 2.0 * kPi * l2 * m / (kb * kb * kb));
  if (l2 > 0.0) {
    auto omega = [m](double k) { return std::sqrt(k * k + m * m); };
    auto ratio = [&](double k) { return -(e + omega(k)) / (k + kb); };
    st.p_n_quadrature = 1.0 / (1.0 + l2 * normalization_integral(omega, ratio, kb, st.d_n, m, opt));
  }
  return st;
}

ResonantBoundState solve_resonant_state(const DispersionRelation& disp, const ModelParams& params,
                                        int n, const quad::Options& opt) {
  params.validate();
  check_index(n);
  const double thr = disp.threshold();
  const double l2 = params.lambda * params.lambda;
  ResonantBoundState st;
  st.n = n;
  st.sector = resonant_sector(n);
  st.omega0 = params.omega0;
  st.lambda = params.lambda;
  st.mass = thr;

  auto wavenumber = [&](double e) {
    if (!(e > thr))
      throw DomainError("resonant state energy falls below threshold; use off_resonant_states");
    return disp.inverse(Complex(e, 0.0)).real();
  };
  auto rhs = [&](double e) {
    const double d = n * kPi / wavenumber(e);
    return params.omega0 + l2 * sigma_contour(disp, d, st.sector, Complex(e, 0.0), opt).real();
  };
  double e = params.omega0;
  st.k_bar_leading = wavenumber(e);
  int it = 0;
  if (l2 > 0.0) {
    for (; it < kMaxIterations; ++it) {
      const double next = rhs(e);
      const double change = std::abs(next - e);
      e = next;
      if (change <= 1e-15 * std::max(thr, e)) break;
    }
    if (it == kMaxIterations)
      throw ConvergenceError("solve_resonant_state: fixed point not reached", {Complex(e, 0.0)});
  }
  st.iterations = it;
  st.energy = e;
  st.k_bar = wavenumber(e);
  st.d_n = n * kPi / st.k_bar;
  if (l2 > 0.0) {
    const Complex sig = sigma_contour(disp, st.d_n, st.sector, Complex(e, 0.0), opt);
    st.residual = std::abs(Complex(e - params.omega0, 0.0) - l2 * sig);
    const double kb = st.k_bar;
    const double slope = disp.derivative(kb);
    auto omega = [&](double k) { return disp.omega(k); };
    auto ratio = [&](double k) {
      if (std::abs(k - kb) < 1e-7 * kb) return -1.0 / slope;
      return (k - kb) / (e - disp.omega(k));
    };
    st.p_n_quadrature = 1.0 / (1.0 + l2 * normalization_integral(omega, ratio, kb, st.d_n, thr, opt));
  }
  st.p_n = st.p_n_quadrature;
  return st;
}

EnergyDensityProfile energy_density(const ResonantBoundState& state, std::span<const double> x) {
  EnergyDensityProfile prof;
  prof.k_bar = state.k_bar;
  prof.d_n = state.d_n;
  prof.prefactor = 2.0 * state.lambda * state.lambda * state.energy * state.energy * state.p_n /
                   (state.k_bar * state.k_bar);
  prof.x.assign(x.begin(), x.end());
  prof.density.reserve(x.size());
  for (double xi : x) {
    if (xi < 0.0 || xi > state.d_n) {
      prof.density.push_back(0.0);
      continue;
    }
    const double sn = std::sin(state.k_bar * xi);
    prof.density.push_back(prof.prefactor * sn * sn);
  }
  return prof;
}

EnergyDensityProfile energy_density(const ResonantBoundState& state, int points, double margin) {
  if (points < 2) throw DomainError("energy_density: need at least 2 grid points");
  if (margin < 0.0) margin = 0.2 * state.d_n;
  std::vector<double> x(points);
  const double a = -margin;
  const double b = state.d_n + margin;
  for (int i = 0; i < points; ++i) x[i] = a + (b - a) * i / (points - 1);
  return energy_density(state, x);
}

AsymptoticAtomicState asymptotic_state(const ResonantBoundState& state) {
  AsymptoticAtomicState out;
  out.sector = state.sector;
  out.bell_weight = 0.5 * state.p_n * state.p_n;
  out.ground_weight = 1.0 - out.bell_weight;
  Eigen::Vector4cd bell = Eigen::Vector4cd::Zero();
  bell(2) = 1.0 / std::sqrt(2.0);
  bell(1) = sign(state.sector) / std::sqrt(2.0);
  out.rho = out.bell_weight * bell * bell.adjoint();
  out.rho(0, 0) += out.ground_weight;
  out.concurrence = concurrence(out.rho);
  return out;
}

AsymptoticAtomicState asymptotic_state(const ModelParams& params, int n, double rel_tolerance) {
  const ResonantBoundState st = solve_resonant_state(params, n);
  if (std::abs(params.distance - st.d_n) > rel_tolerance * st.d_n) {
    std::ostringstream msg;
    msg << "distance " << params.distance << " is off resonance (d_" << n << " = " << st.d_n
        << "); the asymptotic state needs the oracle dynamics (oracle::evolve)";
    throw DomainError(msg.str());
  }
  return asymptotic_state(st);
}

OffResonantState off_resonant_states(const ModelParams& params) {
  params.validate();
  const double m = params.mass;
  if (!(params.omega0 < m))
    throw DomainError("off_resonant_states requires omega0 < M; use solve_resonant_state above threshold");
  OffResonantState st;
  const double l2 = params.lambda * params.lambda;
  st.q = std::sqrt(m * m - params.omega0 * params.omega0);
  st.alpha = -(l2 / st.q) * (kPi + 2.0 * std::atan(params.omega0 / st.q));
  st.beta = -(l2 / st.q) * 2.0 * kPi * std::exp(-st.q * params.distance);
  st.e_plus = params.omega0 + st.alpha + st.beta;
  st.e_minus = params.omega0 + st.alpha - st.beta;
  st.period = st.beta != 0.0 ? 2.0 * kPi / std::abs(st.beta) : std::numeric_limits<double>::infinity();
  st.nonperturbative = std::abs(st.alpha) + std::abs(st.beta) > 0.1 * (m - params.omega0) ||
                       params.nonperturbative() || !(st.e_minus < m);
  return st;
}

ThresholdReport threshold_states(const ModelParams& params) {
  params.validate();
  const double l2 = params.lambda * params.lambda;
  ThresholdReport r;
  r.singlet_omega0 = params.mass - 2.0 * l2 / params.mass + 2.0 * kPi * l2 * params.distance;
  r.triplet_suppressed = true;
  r.triplet_note =
      "triplet survives above threshold but its single-excitation population is suppressed; "
      "negligible in the relaxation expansion";
  return r;
}

}  // namespace wgqed
