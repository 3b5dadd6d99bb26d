#include "wgqed/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wgqed/entanglement.hpp"

namespace wgqed::oracle {
namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

DiscretizedModel build(const ModelParams& params, const BuildOptions& opt) {
  params.validate();
  const int n = opt.modes;
  if (n < 3 || n % 2 == 0) {
    std::ostringstream msg;
    msg << "oracle: mode count N = " << n << " must be odd and >= 3";
    throw DomainError(msg.str());
  }
  const double m = params.mass;
  const double length = opt.box_length.value_or(kPi * n / (8.0 * m));
  if (!(length > 0.0)) throw DomainError("oracle: box length L must be positive");
  const double k_max = kPi * n / length;
  if (k_max < 8.0 * m * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "oracle: k_max = pi N / L = " << k_max << " violates k_max >= 8 M = " << 8.0 * m;
    throw DomainError(msg.str());
  }
  const double min_length = 40.0 * std::max(params.distance, 1.0 / m);
  if (length < min_length) {
    std::ostringstream msg;
    msg << "oracle: box length L = " << length << " violates L >= 40 max(d, 1/M) = " << min_length;
    throw DomainError(msg.str());
  }

  DiscretizedModel model;
  model.params_ = params;
  model.box_length_ = length;
  model.dk_ = 2.0 * kPi / length;
  const int half = (n - 1) / 2;
  model.k_.resize(n);
  model.omega_.resize(n);
  model.g_.resize(n);
  for (int j = -half; j <= half; ++j) {
    const double k = model.dk_ * j;
    const double w = std::sqrt(k * k + m * m);
    model.k_[j + half] = k;
    model.omega_[j + half] = w;
    model.g_[j + half] = params.lambda * std::sqrt(model.dk_ / w);
  }

  const double d = params.distance;
  Eigen::MatrixXd even = Eigen::MatrixXd::Zero(half + 2, half + 2);
  Eigen::MatrixXd odd = Eigen::MatrixXd::Zero(half + 1, half + 1);
  even(0, 0) = params.omega0;
  odd(0, 0) = params.omega0;
  even(1, 1) = model.omega_[half];
  even(0, 1) = even(1, 0) = std::sqrt(2.0) * model.g_[half];
  for (int j = 1; j <= half; ++j) {
    const double k = model.k_[j + half];
    const double g = model.g_[j + half];
    const double w = model.omega_[j + half];
    even(1 + j, 1 + j) = w;
    even(0, 1 + j) = even(1 + j, 0) = 2.0 * g * std::cos(0.5 * k * d);
    odd(j, j) = w;
    odd(0, j) = odd(j, 0) = -2.0 * g * std::sin(0.5 * k * d);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_even(even);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_odd(odd);
  if (es_even.info() != Eigen::Success || es_odd.info() != Eigen::Success)
    throw NumericalFailure("oracle: diagonalization failed", 0.0, 0);
  model.even_ = {es_even.eigenvalues(), es_even.eigenvectors()};
  model.odd_ = {es_odd.eigenvalues(), es_odd.eigenvectors()};

  // Merge the two ascending spectra.
  int ie = 0, io = 0;
  const int ne = static_cast<int>(model.even_.values.size());
  const int no = static_cast<int>(model.odd_.values.size());
  model.order_.reserve(ne + no);
  while (ie < ne || io < no) {
    if (io == no || (ie < ne && model.even_.values(ie) <= model.odd_.values(io)))
      model.order_.emplace_back(true, ie++);
    else
      model.order_.emplace_back(false, io++);
  }
  return model;
}

void DiscretizedModel::to_blocks(const SingleExcitationState& psi, Eigen::VectorXcd& even,
                                 Eigen::VectorXcd& odd) const {
  const int n = modes();
  if (psi.phi.size() != n) throw DomainError("oracle: state has the wrong number of modes");
  const int half = (n - 1) / 2;
  const double d = params_.distance;
  even.resize(half + 2);
  odd.resize(half + 1);
  even(0) = kInvSqrt2 * (psi.c_a + psi.c_b);
  odd(0) = kInvSqrt2 * (psi.c_a - psi.c_b);
  even(1) = psi.phi(half);
  for (int j = 1; j <= half; ++j) {
    const Complex plus = std::exp(kI * (0.5 * k_[half + j] * d)) * psi.phi(half + j);
    const Complex minus = std::exp(kI * (0.5 * k_[half - j] * d)) * psi.phi(half - j);
    even(1 + j) = kInvSqrt2 * (plus + minus);
    odd(j) = kI * kInvSqrt2 * (plus - minus);
  }
}

SingleExcitationState DiscretizedModel::from_blocks(const Eigen::VectorXcd& even,
                                                    const Eigen::VectorXcd& odd) const {
  const int n = modes();
  const int half = (n - 1) / 2;
  const double d = params_.distance;
  SingleExcitationState psi;
  psi.c_a = kInvSqrt2 * (even(0) + odd(0));
  psi.c_b = kInvSqrt2 * (even(0) - odd(0));
  psi.phi.resize(n);
  psi.phi(half) = even(1);
  for (int j = 1; j <= half; ++j) {
    const Complex plus = kInvSqrt2 * (even(1 + j) - kI * odd(j));
    const Complex minus = kInvSqrt2 * (even(1 + j) + kI * odd(j));
    psi.phi(half + j) = std::exp(-kI * (0.5 * k_[half + j] * d)) * plus;
    psi.phi(half - j) = std::exp(-kI * (0.5 * k_[half - j] * d)) * minus;
  }
  return psi;
}

Eigen::MatrixXcd DiscretizedModel::hamiltonian() const {
  const int n = modes();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n + 2, n + 2);
  h(0, 0) = params_.omega0;
  h(1, 1) = params_.omega0;
  for (int i = 0; i < n; ++i) {
    const Complex phase = std::exp(kI * (k_[i] * params_.distance));
    h(2 + i, 2 + i) = omega_[i];
    h(0, 2 + i) = g_[i];
    h(2 + i, 0) = g_[i];
    h(1, 2 + i) = g_[i] * phase;
    h(2 + i, 1) = g_[i] * std::conj(phase);
  }
  return h;
}

SingleExcitationState DiscretizedModel::apply(const SingleExcitationState& psi) const {
  const int n = modes();
  if (psi.phi.size() != n) throw DomainError("oracle: state has the wrong number of modes");
  SingleExcitationState out;
  out.c_a = params_.omega0 * psi.c_a;
  out.c_b = params_.omega0 * psi.c_b;
  out.phi.resize(n);
  for (int i = 0; i < n; ++i) {
    const Complex phase = std::exp(kI * (k_[i] * params_.distance));
    out.c_a += g_[i] * psi.phi(i);
    out.c_b += g_[i] * phase * psi.phi(i);
    out.phi(i) = omega_[i] * psi.phi(i) + g_[i] * (psi.c_a + std::conj(phase) * psi.c_b);
  }
  return out;
}

Eigen::VectorXd DiscretizedModel::eigenvalues() const {
  Eigen::VectorXd v(eigenvalue_count());
  for (int i = 0; i < eigenvalue_count(); ++i) {
    const auto [is_even, c] = order_[i];
    v(i) = is_even ? even_.values(c) : odd_.values(c);
  }
  return v;
}

int DiscretizedModel::eigenvalue_count() const { return static_cast<int>(order_.size()); }

std::pair<bool, int> DiscretizedModel::locate(int index) const {
  if (index < 0 || index >= eigenvalue_count()) throw DomainError("oracle: eigenvalue index out of range");
  return order_[index];
}

std::pair<double, SingleExcitationState> DiscretizedModel::eigenpair(int index) const {
  const auto [is_even, c] = locate(index);
  Eigen::VectorXcd even = Eigen::VectorXcd::Zero(even_.values.size());
  Eigen::VectorXcd odd = Eigen::VectorXcd::Zero(odd_.values.size());
  if (is_even)
    even = even_.vectors.col(c).cast<Complex>();
  else
    odd = odd_.vectors.col(c).cast<Complex>();
  return {is_even ? even_.values(c) : odd_.values(c), from_blocks(even, odd)};
}

double DiscretizedModel::atomic_weight(int index) const {
  const auto [is_even, c] = locate(index);
  const double a = is_even ? even_.vectors(0, c) : odd_.vectors(0, c);
  return a * a;
}

Sector DiscretizedModel::parity(int index) const {
  return locate(index).first ? Sector::plus : Sector::minus;
}

double DiscretizedModel::recurrence_time(const SingleExcitationState& psi) const {
  const SingleExcitationState hpsi = apply(psi);
  const double norm2 = psi.norm() * psi.norm();
  const Complex e = (std::conj(psi.c_a) * hpsi.c_a + std::conj(psi.c_b) * hpsi.c_b +
                     psi.phi.dot(hpsi.phi)) / norm2;
  const double m = params_.mass;
  if (e.real() <= m) return box_length_;
  const double k = std::sqrt(e.real() * e.real() - m * m);
  return box_length_ * e.real() / k;
}

SingleExcitationState DiscretizedModel::localized(Complex c_a, Complex c_b) const {
  SingleExcitationState psi;
  psi.c_a = c_a;
  psi.c_b = c_b;
  psi.phi = Eigen::VectorXcd::Zero(modes());
  return psi;
}

DiscretizedModel::Expansion DiscretizedModel::expand(const SingleExcitationState& psi) const {
  Eigen::VectorXcd even, odd;
  to_blocks(psi, even, odd);
  return {even_.vectors.transpose() * even, odd_.vectors.transpose() * odd};
}

std::pair<Complex, Complex> DiscretizedModel::atomic_amplitudes(const Expansion& a, double t) const {
  Complex plus{}, minus{};
  for (Eigen::Index i = 0; i < a.even.size(); ++i)
    plus += even_.vectors(0, i) * std::exp(-kI * (even_.values(i) * t)) * a.even(i);
  for (Eigen::Index i = 0; i < a.odd.size(); ++i)
    minus += odd_.vectors(0, i) * std::exp(-kI * (odd_.values(i) * t)) * a.odd(i);
  return {kInvSqrt2 * (plus + minus), kInvSqrt2 * (plus - minus)};
}

SingleExcitationState DiscretizedModel::state_at(const Expansion& a, double t) const {
  Eigen::VectorXcd pe = a.even;
  Eigen::VectorXcd po = a.odd;
  for (Eigen::Index i = 0; i < pe.size(); ++i) pe(i) *= std::exp(-kI * (even_.values(i) * t));
  for (Eigen::Index i = 0; i < po.size(); ++i) po(i) *= std::exp(-kI * (odd_.values(i) * t));
  const Eigen::VectorXcd even = even_.vectors * pe;
  const Eigen::VectorXcd odd = odd_.vectors * po;
  return from_blocks(even, odd);
}

BoundStateReport eigen_bound_states(const DiscretizedModel& model) {
  BoundStateReport rep;
  rep.eigenvalues = model.eigenvalues();
  const double m = model.params().mass;
  int best = -1;
  double best_weight = -1.0;
  for (int i = 0; i < model.eigenvalue_count(); ++i) {
    const double e = rep.eigenvalues(i);
    if (e < m) {
      auto [val, state] = model.eigenpair(i);
      rep.below_threshold.push_back({val, model.atomic_weight(i), model.parity(i), std::move(state)});
    } else if (model.atomic_weight(i) > best_weight) {
      best_weight = model.atomic_weight(i);
      best = i;
    }
  }
  if (best >= 0) {
    auto [val, state] = model.eigenpair(best);
    rep.continuum_candidate =
        OracleEigenstate{val, model.atomic_weight(best), model.parity(best), std::move(state)};
  }
  return rep;
}

Evolution evolve(const DiscretizedModel& model, const SingleExcitationState& initial,
                 std::span<const double> times, bool with_field) {
  const double norm = initial.norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "oracle: initial state is not normalized (norm " << norm << ")";
    throw DomainError(msg.str());
  }
  Evolution out;
  out.recurrence_time = model.recurrence_time(initial);
  const auto a = model.expand(initial);
  const double expansion_norm = std::sqrt(a.even.squaredNorm() + a.odd.squaredNorm());
  double t_max = 0.0;
  out.samples.reserve(times.size());
  for (double t : times) {
    t_max = std::max(t_max, std::abs(t));
    EvolutionSample s;
    s.t = t;
    if (with_field) {
      SingleExcitationState psi = model.state_at(a, t);
      s.c_a = psi.c_a;
      s.c_b = psi.c_b;
      s.norm = psi.norm();
      s.phi = std::move(psi.phi);
    } else {
      std::tie(s.c_a, s.c_b) = model.atomic_amplitudes(a, t);
      s.norm = expansion_norm;
    }
    s.population_a = std::norm(s.c_a);
    s.population_b = std::norm(s.c_b);
    s.atomic_population = s.population_a + s.population_b;
    s.concurrence = concurrence(single_excitation_atomic_state(s.c_a, s.c_b));
    out.samples.push_back(std::move(s));
  }
  if (t_max > out.recurrence_time) {
    std::ostringstream msg;
    msg << "time grid reaches t = " << t_max << " beyond the box recurrence time "
        << out.recurrence_time << "; finite-size echoes may be present";
    out.warnings.push_back(msg.str());
  }
  return out;
}

FieldProfile field_profile(const DiscretizedModel& model, const SingleExcitationState& state,
                           std::span<const double> x, std::optional<double> energy) {
  const int n = model.modes();
  if (state.phi.size() != n) throw DomainError("oracle: state has the wrong number of modes");
  FieldProfile prof;
  prof.x.assign(x.begin(), x.end());
  if (energy) {
    prof.energy = *energy;
  } else {
    const SingleExcitationState h = model.apply(state);
    const double norm2 = state.norm() * state.norm();
    prof.energy = norm2 > 0.0 ? (std::conj(state.c_a) * h.c_a + std::conj(state.c_b) * h.c_b +
                                 state.phi.dot(h.phi)).real() / norm2
                              : 0.0;
  }
  const auto& k = model.wavenumbers();
  const auto& w = model.frequencies();
  const double m = model.params().mass;
  const double sdk = std::sqrt(model.dk());
  const double inv4pi = 1.0 / (4.0 * kPi);
  prof.pole_form.reserve(x.size());
  prof.full.reserve(x.size());
  for (double xi : x) {
    Complex plain{}, momentum{}, gradient{}, massterm{};
    for (int i = 0; i < n; ++i) {
      if (state.phi(i) == Complex{}) continue;
      const Complex f = state.phi(i) * std::exp(kI * (k[i] * xi));
      plain += f;
      momentum += std::sqrt(w[i] * inv4pi) * f;
      gradient += k[i] / std::sqrt(4.0 * kPi * w[i]) * f;
      massterm += m / std::sqrt(4.0 * kPi * w[i]) * f;
    }
    const Complex tilde = sdk / (2.0 * kPi) * plain;
    prof.pole_form.push_back(prof.energy * std::norm(tilde));
    const double dk = model.dk();
    prof.full.push_back(dk * (std::norm(momentum) + std::norm(gradient) + std::norm(massterm)) /
                        (2.0 * kPi));
  }
  return prof;
}

}  // namespace wgqed::oracle
